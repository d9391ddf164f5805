#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fcd/descriptor.hpp"
#include "fcd/errors.hpp"
#include "fcd/matching.hpp"

namespace fcd {

enum class SampleLabel { kPositive, kNegative };

// Mean L1 distance between the two contours decoded from the descriptors,
// taken over all 2n coordinates of n boundary points.  Throws
// DimensionMismatch when the descriptors disagree in k_max.
double l_sd(const FourierDescriptor& pred, const FourierDescriptor& target,
            int n = 400);

// Mean L1 distance between the raw coefficient vectors (4k+2 entries).
double l_fd(const FourierDescriptor& pred, const FourierDescriptor& target);

// One minus the generalized IoU of the two descriptor boxes; lies in [0, 2).
double l_bbox(const FourierDescriptor& pred, const FourierDescriptor& target,
              int n = 400);

// Combined regression distance l_sd + alpha1 * l_fd + alpha2 * l_bbox.
// Shared verbatim by the matching cost so that matching and training
// optimize the identical quantity.
double regression_loss(const FourierDescriptor& pred,
                       const FourierDescriptor& target, double alpha1,
                       double alpha2, int n = 400);

// Mean focal term -alpha * (1 - p_t)^gamma * log(p_t) over all samples,
// where p_t is the score for positives and one minus it for negatives.
// Scores must lie strictly inside (0, 1) (ScoreOutOfRange); scores and
// labels must agree in length (LengthMismatch).  An empty batch yields 0.
double focal_loss(const std::vector<double>& scores,
                  const std::vector<SampleLabel>& labels, double alpha = 0.25,
                  double gamma = 2.0);

struct LossWeights {
  double lambda = 0.25;  // regression weight inside each layer
  double alpha1 = 5.0;   // coefficient-distance weight
  double alpha2 = 0.4;   // box-distance weight
  // One multiplier per refinement layer (layers 1..D); the base layer 0 is
  // always weighted 1.
  std::vector<double> layer_weights;
};

// Predictions of one decoder layer together with its matching outcome.
struct LayerPrediction {
  std::vector<Proposal> proposals;
  MatchResult matches;
};

struct LayerLoss {
  double cls = 0.0;       // focal term over all proposals of the layer
  double reg = 0.0;       // mean regression loss over matched pairs
  double weight = 1.0;    // multiplier applied to this layer
  double weighted = 0.0;  // weight * (cls + lambda * reg)
};

struct TotalLoss {
  double total = 0.0;
  std::vector<LayerLoss> layers;
};

// Deep-supervision objective: layer 0 plus the weighted sum of every
// refinement layer, each contributing cls + lambda * reg.  Throws
// DimensionMismatch when layer_weights does not have one entry per
// refinement layer, Error for inconsistent match indices, and EmptyMatchSet
// when lambda > 0 but a layer has no matched pair to average over.
TotalLoss total_loss(const std::vector<LayerPrediction>& layers,
                     const std::vector<FourierDescriptor>& targets,
                     const LossWeights& weights, int n = 400);

}  // namespace fcd
