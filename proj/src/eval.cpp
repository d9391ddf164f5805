#include "fcd/eval.hpp"

#include <algorithm>
#include <numeric>

#include "fcd/geometry.hpp"

namespace fcd {

namespace {

// IoU that treats every degenerate pairing as "no overlap" instead of
// throwing: evaluation must digest arbitrary data without giving up.
double safe_iou(const ContourPoints& a, const ContourPoints& b) {
  if (a.points.rows() < 3 || b.points.rows() < 3) return 0.0;
  try {
    return polygon_iou(a, b);
  } catch (const Error&) {
    return 0.0;
  }
}

}  // namespace

DetectionCounts match_detections(
    const std::vector<ScoredContour>& detections,
    const std::vector<ContourPoints>& targets, double iou_threshold,
    const std::vector<ContourPoints>& ignore_regions) {
  std::vector<int> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
    return detections[static_cast<size_t>(l)].score >
           detections[static_cast<size_t>(r)].score;
  });

  DetectionCounts counts;
  std::vector<char> claimed(targets.size(), 0);
  for (int det : order) {
    const ContourPoints& contour =
        detections[static_cast<size_t>(det)].contour;

    int best = -1;
    double best_iou = 0.0;
    for (size_t t = 0; t < targets.size(); ++t) {
      if (claimed[t]) continue;
      const double overlap = safe_iou(contour, targets[t]);
      if (overlap > best_iou) {
        best_iou = overlap;
        best = static_cast<int>(t);
      }
    }
    if (best >= 0 && best_iou > iou_threshold) {
      claimed[static_cast<size_t>(best)] = 1;
      ++counts.tp;
      continue;
    }

    // A would-be false positive inside an ignore region is not counted.
    bool ignored = false;
    for (const ContourPoints& region : ignore_regions) {
      if (safe_iou(contour, region) > iou_threshold) {
        ignored = true;
        break;
      }
    }
    if (!ignored) ++counts.fp;
  }

  counts.fn = static_cast<int>(targets.size()) -
              static_cast<int>(
                  std::count(claimed.begin(), claimed.end(), char(1)));
  return counts;
}

EvalReport aggregate(const std::vector<DetectionCounts>& per_image) {
  EvalReport report;
  for (const DetectionCounts& c : per_image) {
    report.tp += c.tp;
    report.fp += c.fp;
    report.fn += c.fn;
  }
  const long p_den = report.tp + report.fp;
  const long r_den = report.tp + report.fn;
  report.precision =
      p_den == 0 ? 0.0
                 : static_cast<double>(report.tp) / static_cast<double>(p_den);
  report.recall =
      r_den == 0 ? 0.0
                 : static_cast<double>(report.tp) / static_cast<double>(r_den);
  report.f_measure = report.precision + report.recall == 0.0
                         ? 0.0
                         : 2.0 * report.precision * report.recall /
                               (report.precision + report.recall);
  return report;
}

}  // namespace fcd
