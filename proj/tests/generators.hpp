#pragma once

// Deterministic random inputs shared by the unit tests and the acceptance
// checks.  Everything is seeded explicitly so failures replay exactly.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fcd/activation.hpp"
#include "fcd/contour.hpp"
#include "fcd/descriptor.hpp"

namespace tgen {

using Rng = std::mt19937_64;

// Star-shaped simple polygon strictly inside the unit square: random center,
// one vertex per angular bin so the boundary never self-intersects.
// radius_lo/radius_hi select the radii as fractions of the largest radius
// that stays inside the square.
inline fcd::Polygon star_polygon(Rng& rng, int min_vertices = 5,
                                 int max_vertices = 16,
                                 double radius_lo = 0.15,
                                 double radius_hi = 1.0) {
  std::uniform_int_distribution<int> nv_dist(min_vertices, max_vertices);
  std::uniform_real_distribution<double> center_dist(0.35, 0.65);
  std::uniform_real_distribution<double> jitter_dist(0.1, 0.9);
  std::uniform_real_distribution<double> radius_dist(radius_lo, radius_hi);

  const int nv = nv_dist(rng);
  const double cx = center_dist(rng);
  const double cy = center_dist(rng);
  const double margin = 0.02;
  const double max_radius =
      std::min(std::min(cx, 1.0 - cx), std::min(cy, 1.0 - cy)) - margin;

  fcd::Polygon poly;
  poly.vertices.resize(nv, 2);
  for (int i = 0; i < nv; ++i) {
    const double angle =
        2.0 * std::numbers::pi * (i + jitter_dist(rng)) / nv;
    const double r = radius_dist(rng) * max_radius;
    poly.vertices(i, 0) = cx + r * std::cos(angle);
    poly.vertices(i, 1) = cy + r * std::sin(angle);
  }
  return poly;
}

// Same shape family scaled into a W x H pixel image.
inline fcd::Polygon star_polygon_px(Rng& rng, double w, double h,
                                    int min_vertices = 5,
                                    int max_vertices = 16) {
  fcd::Polygon poly = star_polygon(rng, min_vertices, max_vertices);
  poly.vertices.col(0) *= w;
  poly.vertices.col(1) *= h;
  return poly;
}

// Descriptor with in-range coefficients: dc inside the unit square, the
// other entries well inside +-2/pi with amplitude decaying in |k|.
inline fcd::FourierDescriptor random_descriptor(Rng& rng, int k_max = 5) {
  std::uniform_real_distribution<double> dc_dist(0.25, 0.75);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  fcd::FourierDescriptor fd;
  fd.k_max = k_max;
  fd.coeffs.resize(fcd::descriptor_length(k_max));
  for (int k = -k_max; k <= k_max; ++k) {
    if (k == 0) {
      fd.coeffs(fcd::u_index(k_max, 0)) = dc_dist(rng);
      fd.coeffs(fcd::v_index(k_max, 0)) = dc_dist(rng);
    } else {
      const double amp = 0.12 / (1.0 + std::abs(k));
      fd.coeffs(fcd::u_index(k_max, k)) = amp * unit(rng);
      fd.coeffs(fcd::v_index(k_max, k)) = amp * unit(rng);
    }
  }
  return fd;
}

// Descriptor kept away from the activation boundaries so inverse maps and
// finite differences stay well conditioned: dc in [0.05, 0.95], non-dc with
// |delta * c| <= 0.9.
inline fcd::FourierDescriptor safe_descriptor(Rng& rng, int k_max,
                                              double delta = fcd::kDefaultDelta) {
  std::uniform_real_distribution<double> dc_dist(0.05, 0.95);
  std::uniform_real_distribution<double> scaled_dist(-0.9, 0.9);

  fcd::FourierDescriptor fd;
  fd.k_max = k_max;
  fd.coeffs.resize(fcd::descriptor_length(k_max));
  const Eigen::Index dc = fcd::u_index(k_max, 0);
  for (Eigen::Index i = 0; i < fd.coeffs.size(); ++i) {
    fd.coeffs(i) =
        (i == dc || i == dc + 1) ? dc_dist(rng) : scaled_dist(rng) / delta;
  }
  return fd;
}

// Deterministic descriptor: both dc entries set to dc_value, every other
// entry set to nondc_value.
inline fcd::FourierDescriptor safe_descriptor_at(double dc_value,
                                                 double nondc_value,
                                                 int k_max) {
  fcd::FourierDescriptor fd;
  fd.k_max = k_max;
  fd.coeffs =
      Eigen::VectorXd::Constant(fcd::descriptor_length(k_max), nondc_value);
  fd.coeffs(fcd::u_index(k_max, 0)) = dc_value;
  fd.coeffs(fcd::v_index(k_max, 0)) = dc_value;
  return fd;
}

inline Eigen::VectorXd random_offset(Rng& rng, Eigen::Index size,
                                     double amplitude = 1.0) {
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  Eigen::VectorXd out(size);
  for (Eigen::Index i = 0; i < size; ++i) out(i) = dist(rng);
  return out;
}

// Cost matrix with entries in [0, 10); with probability inf_fraction an
// entry is +inf.
inline Eigen::MatrixXd random_cost_matrix(Rng& rng, int rows, int cols,
                                          double inf_fraction = 0.0) {
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Eigen::MatrixXd cost(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      cost(r, c) = coin(rng) < inf_fraction
                       ? std::numeric_limits<double>::infinity()
                       : dist(rng);
    }
  }
  return cost;
}

}  // namespace tgen
