#include "fcd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fcd {

namespace {

struct Segment {
  double x0, y0, x1, y1;
};

std::vector<Segment> to_segments(const PointMatrix& pts) {
  const Eigen::Index m = pts.rows();
  std::vector<Segment> segs;
  segs.reserve(static_cast<size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = (i + 1) % m;
    segs.push_back({pts(i, 0), pts(i, 1), pts(j, 0), pts(j, 1)});
  }
  return segs;
}

// If p and q cross (with a little slack at the ends), records the x of the
// crossing.  Parallel pairs are skipped: they cannot swap vertical order
// strictly inside a slab.
void crossing_x(const Segment& p, const Segment& q, std::vector<double>& xs) {
  const double d1x = p.x1 - p.x0, d1y = p.y1 - p.y0;
  const double d2x = q.x1 - q.x0, d2y = q.y1 - q.y0;
  const double denom = d1x * d2y - d1y * d2x;
  if (denom == 0.0) return;
  const double ex = q.x0 - p.x0, ey = q.y0 - p.y0;
  const double s = (ex * d2y - ey * d2x) / denom;
  const double t = (ex * d1y - ey * d1x) / denom;
  constexpr double kSlack = 1e-9;
  if (s < -kSlack || s > 1.0 + kSlack || t < -kSlack || t > 1.0 + kSlack) {
    return;
  }
  xs.push_back(p.x0 + s * d1x);
}

void collect_endpoint_xs(const std::vector<Segment>& segs,
                         std::vector<double>& xs) {
  for (const Segment& s : segs) {
    xs.push_back(s.x0);
    xs.push_back(s.x1);
  }
}

void collect_crossings_within(const std::vector<Segment>& segs,
                              std::vector<double>& xs) {
  for (size_t i = 0; i < segs.size(); ++i) {
    for (size_t j = i + 1; j < segs.size(); ++j) {
      crossing_x(segs[i], segs[j], xs);
    }
  }
}

void collect_crossings_between(const std::vector<Segment>& a,
                               const std::vector<Segment>& b,
                               std::vector<double>& xs) {
  for (const Segment& sa : a) {
    for (const Segment& sb : b) {
      crossing_x(sa, sb, xs);
    }
  }
}

// Sorted ys where the contour crosses the vertical line x = xm.  Inside a
// slab whose boundaries include every endpoint and crossing x, these ys are
// linear functions of xm and their order is constant, so the even-odd
// interior is exactly the union of [ys[0],ys[1]], [ys[2],ys[3]], ...
// Returns false when the crossing count is odd (xm grazed a vertex).
bool crossing_ys(const std::vector<Segment>& segs, double xm,
                 std::vector<double>& ys) {
  ys.clear();
  for (const Segment& s : segs) {
    const double lo = std::min(s.x0, s.x1);
    const double hi = std::max(s.x0, s.x1);
    if (!(lo < xm && xm < hi)) continue;
    const double t = (xm - s.x0) / (s.x1 - s.x0);
    ys.push_back(s.y0 + t * (s.y1 - s.y0));
  }
  if (ys.size() % 2 != 0) return false;
  std::sort(ys.begin(), ys.end());
  return true;
}

double intervals_length(const std::vector<double>& ys) {
  double acc = 0.0;
  for (size_t i = 0; i + 1 < ys.size(); i += 2) acc += ys[i + 1] - ys[i];
  return acc;
}

double intervals_overlap(const std::vector<double>& a,
                         const std::vector<double>& b) {
  double acc = 0.0;
  size_t i = 0, j = 0;
  while (i + 1 < a.size() && j + 1 < b.size()) {
    const double lo = std::max(a[i], b[j]);
    const double hi = std::min(a[i + 1], b[j + 1]);
    if (hi > lo) acc += hi - lo;
    if (a[i + 1] < b[j + 1]) {
      i += 2;
    } else {
      j += 2;
    }
  }
  return acc;
}

struct OverlapAreas {
  double a = 0.0;
  double b = 0.0;
  double inter = 0.0;
};

// Decomposes the plane into vertical slabs whose boundaries are all segment
// endpoints and pairwise crossings of both contours.  Within a slab the
// vertical order of all segments is fixed, so evaluating the even-odd
// structure at one interior x gives the exact mean width of each region;
// multiplying by the slab width integrates it exactly.
OverlapAreas slab_areas(const std::vector<Segment>& sa,
                        const std::vector<Segment>& sb) {
  std::vector<double> xs;
  collect_endpoint_xs(sa, xs);
  collect_endpoint_xs(sb, xs);
  collect_crossings_within(sa, xs);
  collect_crossings_within(sb, xs);
  collect_crossings_between(sa, sb, xs);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  OverlapAreas areas;
  std::vector<double> ya, yb;
  // Midpoint first; the other fractions only fire when a probe line grazes
  // a vertex exactly, which the boundary set makes all but impossible.
  constexpr double kFractions[] = {0.5, 0.618033988749895, 0.381966011250105};
  for (size_t s = 0; s + 1 < xs.size(); ++s) {
    const double width = xs[s + 1] - xs[s];
    if (!(width > 0.0)) continue;
    for (double f : kFractions) {
      const double xm = xs[s] + width * f;
      if (!(xs[s] < xm && xm < xs[s + 1])) continue;
      if (!crossing_ys(sa, xm, ya) || !crossing_ys(sb, xm, yb)) continue;
      areas.a += width * intervals_length(ya);
      areas.b += width * intervals_length(yb);
      areas.inter += width * intervals_overlap(ya, yb);
      break;
    }
  }
  return areas;
}

void check_contour_for_overlap(const ContourPoints& c, const char* which) {
  if (c.points.rows() < 3) {
    throw DegeneratePolygon(std::string(which) + " contour has " +
                            std::to_string(c.points.rows()) +
                            " points, need at least 3");
  }
  if (!c.points.allFinite()) {
    throw DegeneratePolygon(std::string(which) +
                            " contour has non-finite points");
  }
}

void check_box(const NormalizedBox& box, const char* which) {
  if (!std::isfinite(box.x) || !std::isfinite(box.y) ||
      !std::isfinite(box.w) || !std::isfinite(box.h)) {
    throw Error(std::string(which) + " box has non-finite fields");
  }
  if (box.w < 0.0 || box.h < 0.0) {
    throw Error(std::string(which) + " box has negative size");
  }
}

}  // namespace

NormalizedBox fd_to_bbox(const FourierDescriptor& fd, int n) {
  const ContourPoints decoded = idft_decode(fd, n);
  NormalizedBox box;
  box.x = decoded.points.col(0).mean();
  box.y = decoded.points.col(1).mean();
  box.w = decoded.points.col(0).maxCoeff() - decoded.points.col(0).minCoeff();
  box.h = decoded.points.col(1).maxCoeff() - decoded.points.col(1).minCoeff();
  return box;
}

double giou(const NormalizedBox& a, const NormalizedBox& b) {
  check_box(a, "first");
  check_box(b, "second");
  const double area_a = a.w * a.h;
  const double area_b = b.w * b.h;
  if (area_a == 0.0 && area_b == 0.0) {
    throw BothDegenerate("both boxes have zero area");
  }

  const double ax0 = a.x - 0.5 * a.w, ax1 = a.x + 0.5 * a.w;
  const double ay0 = a.y - 0.5 * a.h, ay1 = a.y + 0.5 * a.h;
  const double bx0 = b.x - 0.5 * b.w, bx1 = b.x + 0.5 * b.w;
  const double by0 = b.y - 0.5 * b.h, by1 = b.y + 0.5 * b.h;

  const double iw = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
  const double ih = std::max(0.0, std::min(ay1, by1) - std::max(ay0, by0));
  const double inter = iw * ih;
  const double uni = area_a + area_b - inter;

  const double cw = std::max(ax1, bx1) - std::min(ax0, bx0);
  const double ch = std::max(ay1, by1) - std::min(ay0, by0);
  const double enclosing = cw * ch;

  return inter / uni - (enclosing - uni) / enclosing;
}

double polygon_area(const ContourPoints& contour) {
  check_contour_for_overlap(contour, "the");
  const std::vector<Segment> segs = to_segments(contour.points);

  std::vector<double> xs;
  collect_endpoint_xs(segs, xs);
  collect_crossings_within(segs, xs);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double area = 0.0;
  std::vector<double> ys;
  constexpr double kFractions[] = {0.5, 0.618033988749895, 0.381966011250105};
  for (size_t s = 0; s + 1 < xs.size(); ++s) {
    const double width = xs[s + 1] - xs[s];
    if (!(width > 0.0)) continue;
    for (double f : kFractions) {
      const double xm = xs[s] + width * f;
      if (!(xs[s] < xm && xm < xs[s + 1])) continue;
      if (!crossing_ys(segs, xm, ys)) continue;
      area += width * intervals_length(ys);
      break;
    }
  }
  return area;
}

double polygon_iou(const ContourPoints& a, const ContourPoints& b) {
  if (a.frame != b.frame) {
    throw FrameMismatch("contours live in different coordinate frames");
  }
  check_contour_for_overlap(a, "first");
  check_contour_for_overlap(b, "second");

  const OverlapAreas areas =
      slab_areas(to_segments(a.points), to_segments(b.points));
  if (areas.a == 0.0 && areas.b == 0.0) {
    throw ZeroArea("both contours enclose zero area");
  }
  const double uni = areas.a + areas.b - areas.inter;
  return areas.inter / uni;
}

std::vector<int> nms(const std::vector<ContourPoints>& contours,
                     const std::vector<double>& scores,
                     double iou_threshold) {
  if (contours.size() != scores.size()) {
    throw LengthMismatch("got " + std::to_string(contours.size()) +
                         " contours but " + std::to_string(scores.size()) +
                         " scores");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error("scores must be finite");
  }

  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int l, int r) { return scores[l] > scores[r]; });

  std::vector<int> kept;
  for (int candidate : order) {
    bool suppressed = false;
    for (int keeper : kept) {
      double overlap = 0.0;
      try {
        overlap = polygon_iou(contours[candidate], contours[keeper]);
      } catch (const ZeroArea&) {
        overlap = 0.0;  // two empty contours cannot suppress each other
      }
      if (overlap > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(candidate);
  }
  return kept;
}

}  // namespace fcd
