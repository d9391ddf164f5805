#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fcd/descriptor.hpp"
#include "fcd/errors.hpp"
#include "fcd/geometry.hpp"

namespace fcd {

// One resolution level of a feature map: C channel planes of equal
// height x width.
struct FeatureLevel {
  std::vector<Eigen::MatrixXd> channels;  // each H x W (row = y, col = x)
};

// Multi-scale feature stack; every level carries the same channel count.
struct FeaturePyramid {
  std::vector<FeatureLevel> levels;
};

// Sampling pattern and projections of one attention head.  Offsets and
// weights are indexed by level * points_per_level + point.
struct HeadSpec {
  Eigen::Matrix<double, Eigen::Dynamic, 2> offsets;  // (L*S) x 2, unit frame
  Eigen::VectorXd weights;                           // L*S, sums to 1
  Eigen::MatrixXd value_proj;                        // C' x C
  Eigen::MatrixXd output_proj;                       // C x C'
};

struct AttentionSpec {
  int levels = 0;            // L
  int points_per_level = 0;  // S
  std::vector<HeadSpec> heads;
};

// Where a query attends: the center and axis-aligned box of its descriptor
// (see fd_to_bbox); the center is the box center.
struct Reference {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  NormalizedBox box;
};

Reference reference_from_fd(const FourierDescriptor& fd, int n = 400);

// Scales each offset by the box size and shifts by its center:
//   (box.x + dx * box.w, box.y + dy * box.h)
// so the sampling pattern stretches with the shape it refines.
Eigen::Matrix<double, Eigen::Dynamic, 2> modulate_offsets(
    const NormalizedBox& box,
    const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>& offsets);

// Reads one C-vector from a feature level at a unit-square location with
// bilinear interpolation.  Sample cells are pixel-centered: location (u, v)
// maps to pixel coordinates (u*W - 0.5, v*H - 0.5), and everything outside
// the grid reads as zero.
Eigen::VectorXd bilinear_sample(const FeatureLevel& level,
                                const Eigen::Vector2d& loc);

// Multi-scale deformable attention for one query at a fixed reference
// point: for every head, the weighted sum over levels and sampling points
// of the value-projected feature reads, pushed through the head's output
// projection and summed over heads.  Throws WeightsNotNormalized when a
// head's weights do not sum to 1 within 1e-6, and DimensionMismatch for any
// shape inconsistency.
Eigen::VectorXd ms_deform_attn(const FeaturePyramid& pyramid,
                               const Eigen::Vector2d& reference_point,
                               const AttentionSpec& spec);

// Same, but sampling locations are the box-modulated offsets, so the
// pattern adapts to the query's current shape estimate.
Eigen::VectorXd ms_deform_attn(const FeaturePyramid& pyramid,
                               const NormalizedBox& reference_box,
                               const AttentionSpec& spec);

}  // namespace fcd
