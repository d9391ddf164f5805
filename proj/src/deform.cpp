#include "fcd/deform.hpp"

#include <cmath>
#include <string>

namespace fcd {

namespace {

// Channel count after verifying that every level is a consistent stack of
// equally sized planes and all levels agree on the channel count.
Eigen::Index check_pyramid(const FeaturePyramid& pyramid) {
  if (pyramid.levels.empty()) {
    throw DimensionMismatch("feature pyramid has no levels");
  }
  Eigen::Index channels = -1;
  for (size_t l = 0; l < pyramid.levels.size(); ++l) {
    const FeatureLevel& level = pyramid.levels[l];
    if (level.channels.empty()) {
      throw DimensionMismatch("level " + std::to_string(l) +
                              " has no channels");
    }
    const Eigen::Index h = level.channels[0].rows();
    const Eigen::Index w = level.channels[0].cols();
    if (h < 1 || w < 1) {
      throw DimensionMismatch("level " + std::to_string(l) +
                              " has an empty plane");
    }
    for (const Eigen::MatrixXd& plane : level.channels) {
      if (plane.rows() != h || plane.cols() != w) {
        throw DimensionMismatch("level " + std::to_string(l) +
                                " mixes plane sizes");
      }
    }
    const Eigen::Index c = static_cast<Eigen::Index>(level.channels.size());
    if (channels == -1) {
      channels = c;
    } else if (channels != c) {
      throw DimensionMismatch("levels disagree in channel count");
    }
  }
  return channels;
}

void check_spec(const AttentionSpec& spec, Eigen::Index levels,
                Eigen::Index channels) {
  if (spec.levels != levels) {
    throw DimensionMismatch("spec declares " + std::to_string(spec.levels) +
                            " levels but the pyramid has " +
                            std::to_string(levels));
  }
  if (spec.points_per_level < 1) {
    throw DimensionMismatch("points_per_level must be >= 1");
  }
  if (spec.heads.empty()) {
    throw DimensionMismatch("spec has no heads");
  }
  const Eigen::Index samples =
      static_cast<Eigen::Index>(spec.levels) * spec.points_per_level;
  for (size_t m = 0; m < spec.heads.size(); ++m) {
    const HeadSpec& head = spec.heads[m];
    const std::string tag = "head " + std::to_string(m);
    if (head.offsets.rows() != samples || head.weights.size() != samples) {
      throw DimensionMismatch(tag + " needs " + std::to_string(samples) +
                              " offsets and weights");
    }
    if (!head.offsets.allFinite() || !head.weights.allFinite()) {
      throw DimensionMismatch(tag + " has non-finite offsets or weights");
    }
    if (head.value_proj.cols() != channels ||
        head.output_proj.rows() != channels) {
      throw DimensionMismatch(tag +
                              " projections do not match the channel count");
    }
    if (head.value_proj.rows() != head.output_proj.cols()) {
      throw DimensionMismatch(tag +
                              " value and output projections disagree in "
                              "inner dimension");
    }
    if (std::abs(head.weights.sum() - 1.0) > 1e-6) {
      throw WeightsNotNormalized(tag + " weights sum to " +
                                 std::to_string(head.weights.sum()));
    }
  }
}

void check_box(const NormalizedBox& box) {
  if (!std::isfinite(box.x) || !std::isfinite(box.y) ||
      !std::isfinite(box.w) || !std::isfinite(box.h)) {
    throw Error("reference box has non-finite fields");
  }
}

// Weighted, value-projected feature reads of one head at the given
// locations (row l*S+s samples level l), pushed through its output
// projection.
Eigen::VectorXd head_contribution(
    const FeaturePyramid& pyramid, const AttentionSpec& spec,
    const HeadSpec& head,
    const Eigen::Matrix<double, Eigen::Dynamic, 2>& locs) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(head.value_proj.rows());
  for (Eigen::Index idx = 0; idx < locs.rows(); ++idx) {
    const size_t l = static_cast<size_t>(idx / spec.points_per_level);
    const Eigen::VectorXd value =
        bilinear_sample(pyramid.levels[l], locs.row(idx));
    acc += head.weights(idx) * (head.value_proj * value);
  }
  return head.output_proj * acc;
}

}  // namespace

Reference reference_from_fd(const FourierDescriptor& fd, int n) {
  Reference ref;
  ref.box = fd_to_bbox(fd, n);
  ref.center = Eigen::Vector2d(ref.box.x, ref.box.y);
  return ref;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> modulate_offsets(
    const NormalizedBox& box,
    const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>&
        offsets) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> out(offsets.rows(), 2);
  out.col(0) = (box.x + offsets.col(0).array() * box.w).matrix();
  out.col(1) = (box.y + offsets.col(1).array() * box.h).matrix();
  return out;
}

Eigen::VectorXd bilinear_sample(const FeatureLevel& level,
                                const Eigen::Vector2d& loc) {
  const Eigen::Index c = static_cast<Eigen::Index>(level.channels.size());
  if (c == 0) throw DimensionMismatch("feature level has no channels");
  const Eigen::Index h = level.channels[0].rows();
  const Eigen::Index w = level.channels[0].cols();

  // Unit coordinates to pixel-center coordinates.
  const double px = loc.x() * static_cast<double>(w) - 0.5;
  const double py = loc.y() * static_cast<double>(h) - 0.5;
  const double fx = px - std::floor(px);
  const double fy = py - std::floor(py);
  const Eigen::Index x0 = static_cast<Eigen::Index>(std::floor(px));
  const Eigen::Index y0 = static_cast<Eigen::Index>(std::floor(py));

  const auto read = [&](Eigen::Index ch, Eigen::Index y,
                        Eigen::Index x) -> double {
    if (x < 0 || x >= w || y < 0 || y >= h) return 0.0;  // zero padding
    return level.channels[static_cast<size_t>(ch)](y, x);
  };

  Eigen::VectorXd out(c);
  for (Eigen::Index ch = 0; ch < c; ++ch) {
    out(ch) = (1.0 - fx) * (1.0 - fy) * read(ch, y0, x0) +
              fx * (1.0 - fy) * read(ch, y0, x0 + 1) +
              (1.0 - fx) * fy * read(ch, y0 + 1, x0) +
              fx * fy * read(ch, y0 + 1, x0 + 1);
  }
  return out;
}

Eigen::VectorXd ms_deform_attn(const FeaturePyramid& pyramid,
                               const Eigen::Vector2d& reference_point,
                               const AttentionSpec& spec) {
  const Eigen::Index channels = check_pyramid(pyramid);
  check_spec(spec, static_cast<Eigen::Index>(pyramid.levels.size()),
             channels);
  if (!reference_point.allFinite()) {
    throw Error("reference point has non-finite coordinates");
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(channels);
  for (const HeadSpec& head : spec.heads) {
    Eigen::Matrix<double, Eigen::Dynamic, 2> locs = head.offsets;
    locs.col(0).array() += reference_point.x();
    locs.col(1).array() += reference_point.y();
    out += head_contribution(pyramid, spec, head, locs);
  }
  return out;
}

Eigen::VectorXd ms_deform_attn(const FeaturePyramid& pyramid,
                               const NormalizedBox& reference_box,
                               const AttentionSpec& spec) {
  const Eigen::Index channels = check_pyramid(pyramid);
  check_spec(spec, static_cast<Eigen::Index>(pyramid.levels.size()),
             channels);

  check_box(reference_box);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(channels);
  for (const HeadSpec& head : spec.heads) {
    out += head_contribution(pyramid, spec, head,
                             modulate_offsets(reference_box, head.offsets));
  }
  return out;
}

}  // namespace fcd
