#include "fcd/loss.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "fcd/geometry.hpp"

namespace fcd {

namespace {

void check_same_shape(const FourierDescriptor& pred,
                      const FourierDescriptor& target) {
  validate(pred);
  validate(target);
  if (pred.k_max != target.k_max) {
    throw DimensionMismatch("descriptors disagree in k_max: " +
                            std::to_string(pred.k_max) + " vs " +
                            std::to_string(target.k_max));
  }
}

}  // namespace

double l_sd(const FourierDescriptor& pred, const FourierDescriptor& target,
            int n) {
  check_same_shape(pred, target);
  const ContourPoints a = idft_decode(pred, n);
  const ContourPoints b = idft_decode(target, n);
  return (a.points - b.points).cwiseAbs().mean();
}

double l_fd(const FourierDescriptor& pred, const FourierDescriptor& target) {
  check_same_shape(pred, target);
  return (pred.coeffs - target.coeffs).cwiseAbs().mean();
}

double l_bbox(const FourierDescriptor& pred, const FourierDescriptor& target,
              int n) {
  check_same_shape(pred, target);
  return 1.0 - giou(fd_to_bbox(pred, n), fd_to_bbox(target, n));
}

double regression_loss(const FourierDescriptor& pred,
                       const FourierDescriptor& target, double alpha1,
                       double alpha2, int n) {
  return l_sd(pred, target, n) + alpha1 * l_fd(pred, target) +
         alpha2 * l_bbox(pred, target, n);
}

double focal_loss(const std::vector<double>& scores,
                  const std::vector<SampleLabel>& labels, double alpha,
                  double gamma) {
  if (scores.size() != labels.size()) {
    throw LengthMismatch("got " + std::to_string(scores.size()) +
                         " scores but " + std::to_string(labels.size()) +
                         " labels");
  }
  if (scores.empty()) return 0.0;

  double acc = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    if (!(s > 0.0 && s < 1.0)) {
      throw ScoreOutOfRange("score " + std::to_string(s) +
                            " not strictly inside (0, 1)");
    }
    const double pt = labels[i] == SampleLabel::kPositive ? s : 1.0 - s;
    acc += -alpha * std::pow(1.0 - pt, gamma) * std::log(pt);
  }
  return acc / static_cast<double>(scores.size());
}

TotalLoss total_loss(const std::vector<LayerPrediction>& layers,
                     const std::vector<FourierDescriptor>& targets,
                     const LossWeights& weights, int n) {
  if (layers.empty()) {
    throw DimensionMismatch("need at least the base layer");
  }
  if (weights.layer_weights.size() != layers.size() - 1) {
    throw DimensionMismatch(
        "need one weight per refinement layer: got " +
        std::to_string(weights.layer_weights.size()) + " weights for " +
        std::to_string(layers.size() - 1) + " refinement layers");
  }

  TotalLoss result;
  result.layers.reserve(layers.size());
  for (size_t li = 0; li < layers.size(); ++li) {
    const LayerPrediction& layer = layers[li];
    const int rows = static_cast<int>(layer.proposals.size());

    // The match result must be a consistent partition of the layer's rows.
    std::unordered_set<int> seen;
    for (const auto& [row, col] : layer.matches.positives) {
      if (row < 0 || row >= rows) {
        throw Error("matched row " + std::to_string(row) + " out of range");
      }
      if (col < 0 || col >= static_cast<int>(targets.size())) {
        throw Error("matched target " + std::to_string(col) +
                    " out of range");
      }
      if (!seen.insert(row).second) {
        throw Error("row " + std::to_string(row) + " matched twice");
      }
    }
    for (int row : layer.matches.negatives) {
      if (row < 0 || row >= rows) {
        throw Error("negative row " + std::to_string(row) + " out of range");
      }
      if (!seen.insert(row).second) {
        throw Error("row " + std::to_string(row) +
                    " is both positive and negative");
      }
    }
    if (static_cast<int>(seen.size()) != rows) {
      throw Error("match result does not cover every row of layer " +
                  std::to_string(li));
    }

    std::vector<double> scores(layer.proposals.size());
    std::vector<SampleLabel> labels(layer.proposals.size(),
                                    SampleLabel::kNegative);
    for (size_t i = 0; i < layer.proposals.size(); ++i) {
      scores[i] = layer.proposals[i].score;
    }
    for (const auto& [row, col] : layer.matches.positives) {
      labels[static_cast<size_t>(row)] = SampleLabel::kPositive;
    }

    LayerLoss ll;
    ll.cls = focal_loss(scores, labels);
    if (layer.matches.positives.empty()) {
      if (weights.lambda > 0.0) {
        throw EmptyMatchSet("layer " + std::to_string(li) +
                            " has no matched pair to regress on");
      }
      ll.reg = 0.0;
    } else {
      double acc = 0.0;
      for (const auto& [row, col] : layer.matches.positives) {
        acc += regression_loss(layer.proposals[static_cast<size_t>(row)].fd,
                               targets[static_cast<size_t>(col)],
                               weights.alpha1, weights.alpha2, n);
      }
      ll.reg = acc / static_cast<double>(layer.matches.positives.size());
    }
    ll.weight = li == 0 ? 1.0 : weights.layer_weights[li - 1];
    ll.weighted = ll.weight * (ll.cls + weights.lambda * ll.reg);
    result.total += ll.weighted;
    result.layers.push_back(ll);
  }
  return result;
}

}  // namespace fcd
