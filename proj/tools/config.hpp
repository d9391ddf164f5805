#pragma once

#include <cstdint>

#include "fcd/activation.hpp"

namespace fcd::cli {

// Tunables shared by every subcommand; defaults match the reference model.
struct Config {
  int k_max = 5;          // highest descriptor frequency
  int n_samples = 400;    // boundary samples for encode/decode
  double delta = fcd::kDefaultDelta;
  double lambda = 0.25;   // regression weight in the matching cost
  double alpha1 = 5.0;    // coefficient-distance weight
  double alpha2 = 0.4;    // box-distance weight
  int n_m = 3;            // matching rounds
  int n_q = 300;          // proposal budget
  double nms_iou = 0.5;
  double eval_iou = 0.5;
  std::uint64_t seed = 0;
  bool explain = false;
  int trials = 0;         // 0 = per-command default
  double grad_tol = 1e-5;
  double attn_tol = 1e-10;
};

}  // namespace fcd::cli
