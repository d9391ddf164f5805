#pragma once

#include <Eigen/Dense>

#include "fcd/errors.hpp"

namespace fcd {

// Rows are points, column 0 is x, column 1 is y.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2>;

// Coordinate frame a set of points lives in.  Pixel coordinates span
// [0, W] x [0, H]; normalized coordinates span the unit square.
enum class Frame { kPixel, kNormalized };

struct ImageSize {
  int width = 0;
  int height = 0;
};

// Closed polygon given by its vertex cycle; the edge from the last vertex
// back to the first is implicit.
struct Polygon {
  PointMatrix vertices;
};

// Fixed-cardinality sampling of a closed contour, tagged with its frame.
struct ContourPoints {
  PointMatrix points;
  Frame frame = Frame::kPixel;
};

// Shoelace sum; positive for the canonical traversal direction
// (clockwise on a screen whose y axis points down).
double signed_area(const PointMatrix& vertices);

// Total length of the closed vertex cycle.
double perimeter(const PointMatrix& vertices);

// Throws DegeneratePolygon unless the polygon has >= 3 vertices, no two
// cyclically consecutive vertices coincide, and positive perimeter.
void validate(const Polygon& polygon);

// Same vertex cycle rewritten so that traversal starts at the vertex with
// the smallest (y, x) and proceeds in the canonical direction.
Polygon canonicalized(const Polygon& polygon);

// n points spaced at equal arc length along the polygon boundary, starting
// exactly at the canonical start vertex and walking in canonical direction.
// Throws DegeneratePolygon for invalid polygons and Error for n < 1.
ContourPoints resample_equidistant(const Polygon& polygon, int n);

// Maps pixel coordinates into the unit square by dividing through the image
// size.  Throws FrameMismatch unless the input is in the pixel frame, Error
// for a non-positive image size, and OutOfBounds if any point lies outside
// [0, W] x [0, H] by more than 1e-9.
ContourPoints normalize(const ContourPoints& contour, const ImageSize& size);

// Inverse of normalize: scales unit-square coordinates back to pixels.
// Throws FrameMismatch unless the input is in the normalized frame and
// Error for a non-positive image size.
ContourPoints denormalize(const ContourPoints& contour, const ImageSize& size);

}  // namespace fcd
