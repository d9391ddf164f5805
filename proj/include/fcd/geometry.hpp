#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fcd/contour.hpp"
#include "fcd/descriptor.hpp"
#include "fcd/errors.hpp"

namespace fcd {

// Axis-aligned box in normalized coordinates, stored as center and size.
struct NormalizedBox {
  double x = 0.0;  // center
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

// Tight axis-aligned box around the n decoded boundary points of a
// descriptor: the center is the coordinate mean of the points, the size is
// their max-min extent per axis.
NormalizedBox fd_to_bbox(const FourierDescriptor& fd, int n = 400);

// Generalized IoU of two axis-aligned boxes: IoU minus the fraction of the
// smallest enclosing box not covered by the union.  Lies in (-1, 1].
// Throws BothDegenerate when both boxes have zero area, and Error for
// negative sizes or non-finite fields.
double giou(const NormalizedBox& a, const NormalizedBox& b);

// Area enclosed by a closed (possibly self-intersecting) contour under the
// even-odd rule.  Throws DegeneratePolygon for fewer than 3 points.
double polygon_area(const ContourPoints& contour);

// Even-odd intersection-over-union of two closed contours, exact up to
// floating-point rounding.  Self-intersecting inputs are fine.  Throws
// FrameMismatch when the contours live in different frames and ZeroArea
// when both enclose zero area.
double polygon_iou(const ContourPoints& a, const ContourPoints& b);

// Greedy non-maximum suppression: visit contours by descending score (ties
// by lower index) and drop any contour whose IoU with an already kept one
// exceeds the threshold.  Returns the kept indices in visit order.  Throws
// LengthMismatch when scores and contours disagree in length and Error for
// non-finite scores.
std::vector<int> nms(const std::vector<ContourPoints>& contours,
                     const std::vector<double>& scores, double iou_threshold);

}  // namespace fcd
