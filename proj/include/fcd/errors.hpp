#pragma once

#include <stdexcept>
#include <string>

namespace fcd {

// Base class for every error thrown by this library.  Catching fcd::Error
// separates our diagnostics from genuine logic bugs (std::logic_error etc.).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A polygon that cannot be traversed: fewer than three vertices, a repeated
// consecutive vertex, or zero perimeter.
struct DegeneratePolygon : Error {
  using Error::Error;
};

// Pixel coordinates fell outside the image rectangle during normalization.
struct OutOfBounds : Error {
  using Error::Error;
};

// Too few contour samples for the requested highest frequency.
struct InsufficientSamples : Error {
  using Error::Error;
};

// An operation received points in the wrong coordinate frame
// (pixel vs. unit square).
struct FrameMismatch : Error {
  using Error::Error;
};

// A value sits on or outside the open range of an invertible squashing map.
struct OutOfRange : Error {
  using Error::Error;
};

// Two containers that must agree in length do not.
struct LengthMismatch : Error {
  using Error::Error;
};

// A matrix or vector has a shape incompatible with the operation.
struct DimensionMismatch : Error {
  using Error::Error;
};

// Both shapes passed to an overlap measure are degenerate (zero extent).
struct BothDegenerate : Error {
  using Error::Error;
};

// Both polygons passed to an overlap measure enclose zero area.
struct ZeroArea : Error {
  using Error::Error;
};

// A confidence score is not strictly inside (0, 1).
struct ScoreOutOfRange : Error {
  using Error::Error;
};

// The assignment problem admits no complete finite-cost solution.
struct Infeasible : Error {
  using Error::Error;
};

// A regression term was requested over an empty set of matched pairs.
struct EmptyMatchSet : Error {
  using Error::Error;
};

// Fewer candidates available than the number requested.
struct NotEnoughProposals : Error {
  using Error::Error;
};

// Attention weights of some head do not sum to one within tolerance.
struct WeightsNotNormalized : Error {
  using Error::Error;
};

// Malformed external input (bad JSON, missing key, wrong type).  The message
// carries the 1-based line number of the offending record.
struct InputError : Error {
  using Error::Error;
  InputError(int line, const std::string& detail)
      : Error("line " + std::to_string(line) + ": " + detail) {}
};

}  // namespace fcd
