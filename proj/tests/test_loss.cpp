#include <doctest.h>

#include <cmath>
#include <vector>

#include "fcd/geometry.hpp"
#include "fcd/loss.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fcd;

namespace {

// Circle descriptor: center (cx, cy), radius r traced by the k = +1 pair.
FourierDescriptor circle_fd(double cx, double cy, double r) {
  FourierDescriptor fd = tgen::safe_descriptor_at(0.0, 0.0, 1);
  fd.coeffs(u_index(1, 0)) = cx;
  fd.coeffs(v_index(1, 0)) = cy;
  fd.coeffs(u_index(1, 1)) = r;
  return fd;
}

}  // namespace

TEST_CASE("l_sd on shifted and identical contours") {
  tgen::Rng rng(71);
  const FourierDescriptor fd = tgen::random_descriptor(rng, 5);
  CHECK(l_sd(fd, fd) == 0.0);

  // Shifting the dc x entry moves every decoded x by the same amount, so the
  // mean over all 2n coordinates is half the shift.
  FourierDescriptor shifted = fd;
  shifted.coeffs(u_index(5, 0)) += 0.06;
  CHECK(l_sd(fd, shifted) == doctest::Approx(0.03).epsilon(1e-12));

  FourierDescriptor other_k = tgen::random_descriptor(rng, 3);
  CHECK_THROWS_AS(l_sd(fd, other_k), DimensionMismatch);
}

TEST_CASE("l_fd averages the coefficient differences") {
  tgen::Rng rng(72);
  const FourierDescriptor fd = tgen::random_descriptor(rng, 5);
  CHECK(l_fd(fd, fd) == 0.0);

  FourierDescriptor moved = fd;
  moved.coeffs(u_index(5, 2)) = 0.36;
  const double diff = std::abs(0.36 - fd.coeffs(u_index(5, 2)));
  CHECK(l_fd(fd, moved) == doctest::Approx(diff / 22.0).epsilon(1e-15));
}

TEST_CASE("l_bbox of concentric circles is one minus the area ratio") {
  const FourierDescriptor small = circle_fd(0.5, 0.5, 0.1);
  const FourierDescriptor big = circle_fd(0.5, 0.5, 0.2);
  // Boxes are concentric squares with sides 0.2 and 0.4; containment makes
  // the generalized IoU equal the plain area ratio 1/4.
  CHECK(l_bbox(small, big) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(l_bbox(small, small) == 0.0);
}

TEST_CASE("regression_loss composes its three terms") {
  tgen::Rng rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const FourierDescriptor a = tgen::random_descriptor(rng, 5);
    const FourierDescriptor b = tgen::random_descriptor(rng, 5);
    const double expected =
        l_sd(a, b, 400) + 5.0 * l_fd(a, b) + 0.4 * l_bbox(a, b, 400);
    CHECK(regression_loss(a, b, 5.0, 0.4, 400) == expected);
  }
}

TEST_CASE("focal_loss hand values") {
  SUBCASE("positive at half confidence") {
    const double expected = 0.25 * 0.25 * std::log(2.0);
    CHECK(focal_loss({0.5}, {SampleLabel::kPositive}) ==
          doctest::Approx(expected).epsilon(1e-15));
  }
  SUBCASE("gamma zero, alpha one reduces to cross entropy") {
    const double got = focal_loss({0.9, 0.2},
                                  {SampleLabel::kPositive,
                                   SampleLabel::kNegative},
                                  1.0, 0.0);
    const double expected = (-std::log(0.9) - std::log(0.8)) / 2.0;
    CHECK(got == doctest::Approx(expected).epsilon(1e-15));
  }
  SUBCASE("confident correct predictions cost almost nothing") {
    CHECK(focal_loss({0.999999}, {SampleLabel::kPositive}) < 1e-9);
    CHECK(focal_loss({0.000001}, {SampleLabel::kNegative}) < 1e-9);
  }
  SUBCASE("negatives mirror positives at the complementary score") {
    CHECK(focal_loss({0.25}, {SampleLabel::kNegative}) ==
          focal_loss({0.75}, {SampleLabel::kPositive}));
  }
  SUBCASE("empty batch") {
    CHECK(focal_loss({}, {}) == 0.0);
  }
}

TEST_CASE("focal_loss validation") {
  CHECK_THROWS_AS(focal_loss({0.5}, {}), LengthMismatch);
  CHECK_THROWS_AS(focal_loss({0.0}, {SampleLabel::kPositive}),
                  ScoreOutOfRange);
  CHECK_THROWS_AS(focal_loss({1.0}, {SampleLabel::kNegative}),
                  ScoreOutOfRange);
}

namespace {

// Two-layer fixture: two proposals per layer, one target, row 0 matched.
struct Fixture {
  std::vector<LayerPrediction> layers;
  std::vector<FourierDescriptor> targets;

  explicit Fixture(tgen::Rng& rng) {
    targets.push_back(tgen::random_descriptor(rng, 5));
    for (int li = 0; li < 2; ++li) {
      LayerPrediction layer;
      layer.proposals.push_back({tgen::random_descriptor(rng, 5), 0.8});
      layer.proposals.push_back({tgen::random_descriptor(rng, 5), 0.3});
      layer.matches.positives = {{0, 0}};
      layer.matches.negatives = {1};
      layers.push_back(layer);
    }
  }
};

}  // namespace

TEST_CASE("total_loss composes focal and regression terms per layer") {
  tgen::Rng rng(74);
  const Fixture fx(rng);
  LossWeights weights;
  weights.layer_weights = {2.0};

  const TotalLoss got = total_loss(fx.layers, fx.targets, weights);
  REQUIRE(got.layers.size() == 2);

  double expected = 0.0;
  for (size_t li = 0; li < 2; ++li) {
    const LayerPrediction& layer = fx.layers[li];
    const double cls =
        focal_loss({layer.proposals[0].score, layer.proposals[1].score},
                   {SampleLabel::kPositive, SampleLabel::kNegative});
    const double reg = regression_loss(layer.proposals[0].fd, fx.targets[0],
                                       weights.alpha1, weights.alpha2, 400);
    const double weight = li == 0 ? 1.0 : 2.0;
    CHECK(got.layers[li].cls == cls);
    CHECK(got.layers[li].reg == reg);
    CHECK(got.layers[li].weight == weight);
    CHECK(got.layers[li].weighted == weight * (cls + weights.lambda * reg));
    expected += weight * (cls + weights.lambda * reg);
  }
  CHECK(got.total == expected);
}

TEST_CASE("total_loss of perfect predictions is almost zero") {
  tgen::Rng rng(75);
  const FourierDescriptor target = tgen::random_descriptor(rng, 5);
  LayerPrediction layer;
  layer.proposals.push_back({target, 0.999999});  // exact contour match
  layer.proposals.push_back({tgen::random_descriptor(rng, 5), 0.000001});
  layer.matches.positives = {{0, 0}};
  layer.matches.negatives = {1};

  LossWeights weights;  // single layer, no extra weights
  const TotalLoss got = total_loss({layer}, {target}, weights);
  CHECK(got.layers[0].reg == 0.0);
  CHECK(got.total < 1e-6);
}

TEST_CASE("total_loss is linear in a refinement layer weight") {
  tgen::Rng rng(76);
  const Fixture fx(rng);
  auto total_with = [&](double w) {
    LossWeights weights;
    weights.layer_weights = {w};
    return total_loss(fx.layers, fx.targets, weights).total;
  };
  const double t0 = total_with(0.0);
  const double t1 = total_with(1.0);
  const double t2 = total_with(2.0);
  CHECK(t2 - t1 == doctest::Approx(t1 - t0).epsilon(1e-12));
  // Weight zero silences the refinement layer entirely.
  LossWeights weights;
  weights.layer_weights = {0.0};
  const TotalLoss silenced = total_loss(fx.layers, fx.targets, weights);
  CHECK(silenced.layers[1].weighted == 0.0);
  CHECK(t0 == silenced.layers[0].weighted);
}

TEST_CASE("total_loss without positives") {
  tgen::Rng rng(77);
  LayerPrediction layer;
  layer.proposals.push_back({tgen::random_descriptor(rng, 5), 0.3});
  layer.matches.negatives = {0};
  const std::vector<FourierDescriptor> targets = {
      tgen::random_descriptor(rng, 5)};

  LossWeights weights;
  CHECK_THROWS_AS(total_loss({layer}, targets, weights), EmptyMatchSet);

  weights.lambda = 0.0;  // no regression term to average
  const TotalLoss got = total_loss({layer}, targets, weights);
  CHECK(got.layers[0].reg == 0.0);
}

TEST_CASE("total_loss validates weights and match partitions") {
  tgen::Rng rng(78);
  Fixture fx(rng);

  SUBCASE("one weight per refinement layer") {
    LossWeights weights;  // two layers need exactly one weight
    CHECK_THROWS_AS(total_loss(fx.layers, fx.targets, weights),
                    DimensionMismatch);
    weights.layer_weights = {1.0, 1.0};
    CHECK_THROWS_AS(total_loss(fx.layers, fx.targets, weights),
                    DimensionMismatch);
  }

  LossWeights weights;
  weights.layer_weights = {1.0};

  SUBCASE("row out of range") {
    fx.layers[0].matches.positives = {{5, 0}};
    CHECK_THROWS_AS(total_loss(fx.layers, fx.targets, weights), Error);
  }
  SUBCASE("target out of range") {
    fx.layers[0].matches.positives = {{0, 3}};
    CHECK_THROWS_AS(total_loss(fx.layers, fx.targets, weights), Error);
  }
  SUBCASE("row matched twice") {
    fx.layers[0].matches.positives = {{0, 0}, {0, 0}};
    fx.layers[0].matches.negatives = {1};
    CHECK_THROWS_AS(total_loss(fx.layers, fx.targets, weights), Error);
  }
  SUBCASE("row both positive and negative") {
    fx.layers[0].matches.negatives = {0, 1};
    CHECK_THROWS_AS(total_loss(fx.layers, fx.targets, weights), Error);
  }
  SUBCASE("uncovered row") {
    fx.layers[0].matches.negatives = {};
    CHECK_THROWS_AS(total_loss(fx.layers, fx.targets, weights), Error);
  }
  SUBCASE("no layers at all") {
    CHECK_THROWS_AS(total_loss({}, fx.targets, LossWeights{}),
                    DimensionMismatch);
  }
}
