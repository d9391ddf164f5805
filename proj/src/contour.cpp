#include "fcd/contour.hpp"

#include <algorithm>
#include <string>

namespace fcd {

double signed_area(const PointMatrix& vertices) {
  const Eigen::Index m = vertices.rows();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = (i + 1) % m;
    acc += vertices(i, 0) * vertices(j, 1) - vertices(j, 0) * vertices(i, 1);
  }
  return 0.5 * acc;
}

double perimeter(const PointMatrix& vertices) {
  const Eigen::Index m = vertices.rows();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = (i + 1) % m;
    acc += (vertices.row(j) - vertices.row(i)).norm();
  }
  return acc;
}

void validate(const Polygon& polygon) {
  const PointMatrix& v = polygon.vertices;
  const Eigen::Index m = v.rows();
  if (m < 3) {
    throw DegeneratePolygon("polygon has " + std::to_string(m) +
                            " vertices, need at least 3");
  }
  if (!v.allFinite()) {
    throw DegeneratePolygon("polygon has non-finite vertex coordinates");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = (i + 1) % m;
    if (v(i, 0) == v(j, 0) && v(i, 1) == v(j, 1)) {
      throw DegeneratePolygon("vertices " + std::to_string(i) + " and " +
                              std::to_string(j) + " coincide");
    }
  }
  if (!(perimeter(v) > 0.0)) {
    throw DegeneratePolygon("polygon has zero perimeter");
  }
}

Polygon canonicalized(const Polygon& polygon) {
  validate(polygon);
  const PointMatrix& v = polygon.vertices;
  const Eigen::Index m = v.rows();

  // Start vertex: smallest y, ties broken by smallest x, then lowest index.
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i < m; ++i) {
    if (v(i, 1) < v(start, 1) ||
        (v(i, 1) == v(start, 1) && v(i, 0) < v(start, 0))) {
      start = i;
    }
  }

  const bool forward = signed_area(v) > 0.0;
  Polygon out;
  out.vertices.resize(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    // Walking backwards keeps the start vertex in place and flips the
    // traversal direction of the remaining cycle.
    const Eigen::Index src =
        forward ? (start + i) % m : (start - i + m) % m;
    out.vertices.row(i) = v.row(src);
  }
  return out;
}

ContourPoints resample_equidistant(const Polygon& polygon, int n) {
  if (n < 1) {
    throw Error("sample count must be >= 1, got " + std::to_string(n));
  }
  const Polygon canon = canonicalized(polygon);
  const PointMatrix& v = canon.vertices;
  const Eigen::Index m = v.rows();

  // Cumulative arc length up to each vertex; cum[m] is the full perimeter.
  Eigen::VectorXd cum(m + 1);
  cum(0) = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = (i + 1) % m;
    cum(i + 1) = cum(i) + (v.row(j) - v.row(i)).norm();
  }
  const double total = cum(m);

  ContourPoints out;
  out.frame = Frame::kPixel;
  out.points.resize(n, 2);
  out.points.row(0) = v.row(0);  // exact, no interpolation residue
  Eigen::Index edge = 0;
  for (int s = 1; s < n; ++s) {
    const double target = total * static_cast<double>(s) / n;
    while (edge + 1 < m && cum(edge + 1) <= target) ++edge;
    const Eigen::Index next = (edge + 1) % m;
    const double len = cum(edge + 1) - cum(edge);
    const double t = std::min((target - cum(edge)) / len, 1.0);
    out.points.row(s) = (1.0 - t) * v.row(edge) + t * v.row(next);
  }
  return out;
}

namespace {

void check_size(const ImageSize& size) {
  if (size.width <= 0 || size.height <= 0) {
    throw Error("image size must be positive, got " +
                std::to_string(size.width) + "x" +
                std::to_string(size.height));
  }
}

}  // namespace

ContourPoints normalize(const ContourPoints& contour, const ImageSize& size) {
  if (contour.frame != Frame::kPixel) {
    throw FrameMismatch("normalize expects pixel-frame points");
  }
  check_size(size);
  const double w = static_cast<double>(size.width);
  const double h = static_cast<double>(size.height);
  constexpr double kTol = 1e-9;
  for (Eigen::Index i = 0; i < contour.points.rows(); ++i) {
    const double x = contour.points(i, 0);
    const double y = contour.points(i, 1);
    if (!(x >= -kTol && x <= w + kTol && y >= -kTol && y <= h + kTol)) {
      throw OutOfBounds("point " + std::to_string(i) + " = (" +
                        std::to_string(x) + ", " + std::to_string(y) +
                        ") lies outside the image rectangle");
    }
  }
  ContourPoints out;
  out.frame = Frame::kNormalized;
  out.points.resize(contour.points.rows(), 2);
  out.points.col(0) = contour.points.col(0) / w;
  out.points.col(1) = contour.points.col(1) / h;
  return out;
}

ContourPoints denormalize(const ContourPoints& contour,
                          const ImageSize& size) {
  if (contour.frame != Frame::kNormalized) {
    throw FrameMismatch("denormalize expects normalized-frame points");
  }
  check_size(size);
  ContourPoints out;
  out.frame = Frame::kPixel;
  out.points.resize(contour.points.rows(), 2);
  out.points.col(0) = contour.points.col(0) * static_cast<double>(size.width);
  out.points.col(1) = contour.points.col(1) * static_cast<double>(size.height);
  return out;
}

}  // namespace fcd
