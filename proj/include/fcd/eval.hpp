#pragma once

#include <vector>

#include "fcd/contour.hpp"

namespace fcd {

// One detection: a contour and its confidence.
struct ScoredContour {
  ContourPoints contour;
  double score = 0.0;
};

// Per-image tally of true positives, false positives and missed targets.
struct DetectionCounts {
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

// Greedy one-to-one matching by descending score (ties keep input order):
// a detection claims the unmatched target of highest IoU when that IoU
// exceeds the threshold, otherwise it is a false positive -- unless it
// overlaps an ignore region above the threshold, in which case it is
// dropped from the tally entirely.  Unclaimed targets count as false
// negatives.
DetectionCounts match_detections(
    const std::vector<ScoredContour>& detections,
    const std::vector<ContourPoints>& targets, double iou_threshold = 0.5,
    const std::vector<ContourPoints>& ignore_regions = {});

// Corpus-level metrics from per-image counts.
struct EvalReport {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;  // tp / (tp + fp), 0 when the denominator is 0
  double recall = 0.0;     // tp / (tp + fn), 0 when the denominator is 0
  double f_measure = 0.0;  // harmonic mean, 0 when precision + recall is 0
};

EvalReport aggregate(const std::vector<DetectionCounts>& per_image);

}  // namespace fcd
