#include <doctest.h>

#include <cmath>
#include <vector>

#include "fcd/deform.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fcd;

namespace {

FeaturePyramid random_pyramid(tgen::Rng& rng, int levels, int channels) {
  std::uniform_int_distribution<int> size_dist(2, 7);
  std::uniform_real_distribution<double> value_dist(-1.0, 1.0);
  FeaturePyramid pyramid;
  for (int l = 0; l < levels; ++l) {
    FeatureLevel level;
    const int h = size_dist(rng);
    const int w = size_dist(rng);
    for (int c = 0; c < channels; ++c) {
      level.channels.push_back(Eigen::MatrixXd::NullaryExpr(
          h, w, [&]() { return value_dist(rng); }));
    }
    pyramid.levels.push_back(std::move(level));
  }
  return pyramid;
}

AttentionSpec random_spec(tgen::Rng& rng, int levels, int points, int heads,
                          int channels, int inner) {
  std::uniform_real_distribution<double> offset_dist(-0.5, 0.5);
  std::uniform_real_distribution<double> weight_dist(0.1, 1.0);
  std::uniform_real_distribution<double> proj_dist(-1.0, 1.0);

  AttentionSpec spec;
  spec.levels = levels;
  spec.points_per_level = points;
  for (int m = 0; m < heads; ++m) {
    HeadSpec head;
    const int samples = levels * points;
    head.offsets = Eigen::Matrix<double, Eigen::Dynamic, 2>::NullaryExpr(
        samples, 2, [&]() { return offset_dist(rng); });
    head.weights = Eigen::VectorXd::NullaryExpr(
        samples, [&]() { return weight_dist(rng); });
    head.weights /= head.weights.sum();
    head.value_proj = Eigen::MatrixXd::NullaryExpr(
        inner, channels, [&]() { return proj_dist(rng); });
    head.output_proj = Eigen::MatrixXd::NullaryExpr(
        channels, inner, [&]() { return proj_dist(rng); });
    spec.heads.push_back(std::move(head));
  }
  return spec;
}

// Single-channel level with distinct entries plane(y, x) = 10 y + x.
FeatureLevel ramp_level(int h, int w) {
  FeatureLevel level;
  Eigen::MatrixXd plane(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) plane(y, x) = 10.0 * y + x;
  }
  level.channels.push_back(plane);
  return level;
}

// Unit-square location of the center of pixel (x, y) in an h x w plane.
Eigen::Vector2d pixel_center(int x, int y, int h, int w) {
  return {(x + 0.5) / w, (y + 0.5) / h};
}

}  // namespace

TEST_CASE("bilinear_sample at a pixel center reads that pixel exactly") {
  const FeatureLevel level = ramp_level(3, 4);
  const Eigen::VectorXd got =
      bilinear_sample(level, pixel_center(2, 1, 3, 4));
  CHECK(got.size() == 1);
  CHECK(got(0) == level.channels[0](1, 2));
}

TEST_CASE("bilinear_sample midway between two centers averages them") {
  const FeatureLevel level = ramp_level(3, 4);
  // Row 1 exactly, halfway between columns 1 and 2.
  const Eigen::Vector2d loc{0.5, 0.5};
  const Eigen::VectorXd got = bilinear_sample(level, loc);
  const double expected =
      0.5 * (level.channels[0](1, 1) + level.channels[0](1, 2));
  CHECK(got(0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("bilinear_sample outside the grid reads zero") {
  const FeatureLevel level = ramp_level(3, 4);
  CHECK(bilinear_sample(level, {-0.5, 0.5})(0) == 0.0);
  CHECK(bilinear_sample(level, {0.5, 2.0})(0) == 0.0);
}

TEST_CASE("bilinear_sample at the grid corner keeps a quarter weight") {
  FeatureLevel level = ramp_level(2, 2);
  level.channels[0](0, 0) = 8.0;
  // Location (0, 0) sits half a pixel outside in both axes, so only pixel
  // (0, 0) contributes, at weight 1/4.
  CHECK(bilinear_sample(level, {0.0, 0.0})(0) == 2.0);
}

TEST_CASE("modulate_offsets stretches by the box size") {
  const NormalizedBox box{0.5, 0.5, 0.2, 0.4};
  Eigen::Matrix<double, Eigen::Dynamic, 2> offsets(2, 2);
  offsets << 1.0, -0.5, 0.0, 0.0;
  const auto out = modulate_offsets(box, offsets);
  CHECK(out(0, 0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(out(0, 1) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(out(1, 0) == 0.5);
  CHECK(out(1, 1) == 0.5);
}

TEST_CASE("reference_from_fd centers on the descriptor box") {
  tgen::Rng rng(81);
  const FourierDescriptor fd = tgen::random_descriptor(rng, 5);
  const Reference ref = reference_from_fd(fd);
  const NormalizedBox box = fd_to_bbox(fd);
  CHECK(ref.center.x() == box.x);
  CHECK(ref.center.y() == box.y);
  CHECK(ref.box.w == box.w);
  CHECK(ref.box.h == box.h);
}

TEST_CASE("attention with identity projections reads the feature map") {
  FeaturePyramid pyramid;
  pyramid.levels.push_back(ramp_level(3, 4));

  AttentionSpec spec;
  spec.levels = 1;
  spec.points_per_level = 1;
  HeadSpec head;
  head.offsets = Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(1, 2);
  head.weights = Eigen::VectorXd::Ones(1);
  head.value_proj = Eigen::MatrixXd::Identity(1, 1);
  head.output_proj = Eigen::MatrixXd::Identity(1, 1);
  spec.heads.push_back(head);

  const Eigen::VectorXd got =
      ms_deform_attn(pyramid, pixel_center(2, 1, 3, 4), spec);
  CHECK(got(0) == pyramid.levels[0].channels[0](1, 2));
}

TEST_CASE("point attention matches the scalar-loop restatement") {
  tgen::Rng rng(82);
  std::uniform_int_distribution<int> small(1, 3);
  std::uniform_int_distribution<int> chan(1, 5);
  std::uniform_int_distribution<int> inner(1, 4);
  std::uniform_real_distribution<double> pos(0.2, 0.8);
  for (int trial = 0; trial < 30; ++trial) {
    const int levels = small(rng);
    const int channels = chan(rng);
    const FeaturePyramid pyramid = random_pyramid(rng, levels, channels);
    const AttentionSpec spec = random_spec(rng, levels, small(rng),
                                           small(rng), channels, inner(rng));
    const Eigen::Vector2d ref{pos(rng), pos(rng)};
    Eigen::Matrix<double, Eigen::Dynamic, 2> base(1, 2);
    base << ref.x(), ref.y();

    const Eigen::VectorXd got = ms_deform_attn(pyramid, ref, spec);
    const Eigen::VectorXd expected =
        oracle::attn_naive(pyramid, base, spec, false, NormalizedBox{});
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("box attention matches the scalar-loop restatement") {
  tgen::Rng rng(83);
  std::uniform_int_distribution<int> small(1, 3);
  std::uniform_int_distribution<int> chan(1, 5);
  std::uniform_int_distribution<int> inner(1, 4);
  std::uniform_real_distribution<double> pos(0.3, 0.7);
  std::uniform_real_distribution<double> len(0.05, 0.4);
  for (int trial = 0; trial < 30; ++trial) {
    const int levels = small(rng);
    const int channels = chan(rng);
    const FeaturePyramid pyramid = random_pyramid(rng, levels, channels);
    const AttentionSpec spec = random_spec(rng, levels, small(rng),
                                           small(rng), channels, inner(rng));
    const NormalizedBox box{pos(rng), pos(rng), len(rng), len(rng)};

    const Eigen::VectorXd got = ms_deform_attn(pyramid, box, spec);
    const Eigen::VectorXd expected = oracle::attn_naive(
        pyramid, Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(1, 2), spec,
        true, box);
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("weights must sum to one within the tolerance") {
  tgen::Rng rng(84);
  const FeaturePyramid pyramid = random_pyramid(rng, 1, 2);
  AttentionSpec spec = random_spec(rng, 1, 2, 1, 2, 2);
  const Eigen::Vector2d ref{0.5, 0.5};

  spec.heads[0].weights(0) += 2e-6;  // pushes the sum past the tolerance
  CHECK_THROWS_AS(ms_deform_attn(pyramid, ref, spec), WeightsNotNormalized);

  spec.heads[0].weights(0) -= 2e-6;
  spec.heads[0].weights(0) += 0.5e-6;  // still inside
  CHECK_NOTHROW(ms_deform_attn(pyramid, ref, spec));
}

TEST_CASE("shape validation") {
  tgen::Rng rng(85);
  const FeaturePyramid pyramid = random_pyramid(rng, 2, 3);
  const AttentionSpec good = random_spec(rng, 2, 2, 2, 3, 2);
  const Eigen::Vector2d ref{0.5, 0.5};
  CHECK_NOTHROW(ms_deform_attn(pyramid, ref, good));

  SUBCASE("level count mismatch") {
    AttentionSpec spec = good;
    spec.levels = 1;
    CHECK_THROWS_AS(ms_deform_attn(pyramid, ref, spec), DimensionMismatch);
  }
  SUBCASE("offset rows must be levels * points") {
    AttentionSpec spec = good;
    spec.heads[0].offsets.conservativeResize(3, 2);
    CHECK_THROWS_AS(ms_deform_attn(pyramid, ref, spec), DimensionMismatch);
  }
  SUBCASE("value projection must consume every channel") {
    AttentionSpec spec = good;
    spec.heads[1].value_proj = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(ms_deform_attn(pyramid, ref, spec), DimensionMismatch);
  }
  SUBCASE("output projection must produce every channel") {
    AttentionSpec spec = good;
    spec.heads[1].output_proj = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(ms_deform_attn(pyramid, ref, spec), DimensionMismatch);
  }
  SUBCASE("projections must agree on the inner dimension") {
    AttentionSpec spec = good;
    spec.heads[0].value_proj = Eigen::MatrixXd::Zero(4, 3);
    CHECK_THROWS_AS(ms_deform_attn(pyramid, ref, spec), DimensionMismatch);
  }
  SUBCASE("no heads") {
    AttentionSpec spec = good;
    spec.heads.clear();
    CHECK_THROWS_AS(ms_deform_attn(pyramid, ref, spec), DimensionMismatch);
  }
  SUBCASE("empty pyramid") {
    CHECK_THROWS_AS(ms_deform_attn(FeaturePyramid{}, ref, good),
                    DimensionMismatch);
  }
  SUBCASE("levels disagreeing in channel count") {
    FeaturePyramid bad = pyramid;
    bad.levels[1].channels.pop_back();
    CHECK_THROWS_AS(ms_deform_attn(bad, ref, good), DimensionMismatch);
  }
  SUBCASE("mixed plane sizes inside a level") {
    FeaturePyramid bad = pyramid;
    bad.levels[0].channels[1] = Eigen::MatrixXd::Zero(
        bad.levels[0].channels[0].rows() + 1,
        bad.levels[0].channels[0].cols());
    CHECK_THROWS_AS(ms_deform_attn(bad, ref, good), DimensionMismatch);
  }
}
