#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcd/contour.hpp"
#include "fcd/descriptor.hpp"
#include "fcd/errors.hpp"
#include "fcd/eval.hpp"
#include "fcd/matching.hpp"

namespace fcd {

// One line of a contour corpus:
//   {"image": {"w": 800, "h": 600}, "polygons": [[[x, y], ...], ...]}
// plus two optional parallel arrays, "scores" (one real per polygon) and
// "ignore" (one bool per polygon, marks don't-care regions).
struct ContourRecord {
  ImageSize image;
  std::vector<PointMatrix> polygons;
  std::vector<double> scores;  // empty when absent
  std::vector<bool> ignore;    // empty when absent
};

// One line of a descriptor corpus:
//   {"k": 5, "coeffs": [ ... 4k+2 numbers ... ]}
// optionally extended with the source "image" (so the record can be decoded
// back to pixels) and a confidence "score".
struct DescriptorRecord {
  FourierDescriptor fd;
  std::optional<ImageSize> image;
  std::optional<double> score;
};

// Parsers throw InputError carrying the given 1-based line number on any
// malformed content; unknown keys are ignored.
ContourRecord parse_contour_record(const std::string& line, int line_number);
DescriptorRecord parse_descriptor_record(const std::string& line,
                                         int line_number);

// Shortest text keeping full double precision (printf %.17g).
std::string format_double(double value);

// Writers emit one line (no trailing newline) with a fixed key order, so
// output corpora are byte-stable across runs.
std::string to_json(const ContourRecord& record);
std::string to_json(const DescriptorRecord& record);
std::string to_json(const MatchResult& result);

}  // namespace fcd
