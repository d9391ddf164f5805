#include "fcd/descriptor.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fcd {

void validate(const FourierDescriptor& fd) {
  if (fd.k_max < 0) {
    throw DimensionMismatch("k_max must be >= 0, got " +
                            std::to_string(fd.k_max));
  }
  if (fd.coeffs.size() != descriptor_length(fd.k_max)) {
    throw DimensionMismatch(
        "descriptor with k_max " + std::to_string(fd.k_max) + " needs " +
        std::to_string(descriptor_length(fd.k_max)) + " coefficients, got " +
        std::to_string(fd.coeffs.size()));
  }
  if (!fd.coeffs.allFinite()) {
    throw DimensionMismatch("descriptor has non-finite coefficients");
  }
}

std::complex<double> coefficient(const FourierDescriptor& fd, int k) {
  return {fd.coeffs(u_index(fd.k_max, k)), fd.coeffs(v_index(fd.k_max, k))};
}

FourierDescriptor dft_encode(const ContourPoints& contour, int k_max) {
  if (k_max < 0) {
    throw Error("k_max must be >= 0, got " + std::to_string(k_max));
  }
  if (contour.frame != Frame::kNormalized) {
    throw FrameMismatch("dft_encode expects normalized-frame points");
  }
  const Eigen::Index n = contour.points.rows();
  if (n < 2 * static_cast<Eigen::Index>(k_max) + 1) {
    throw InsufficientSamples("need at least " +
                              std::to_string(2 * k_max + 1) +
                              " samples for k_max " + std::to_string(k_max) +
                              ", got " + std::to_string(n));
  }

  FourierDescriptor fd;
  fd.k_max = k_max;
  fd.coeffs.resize(descriptor_length(k_max));
  for (int k = -k_max; k <= k_max; ++k) {
    const double step = -2.0 * std::numbers::pi * k / static_cast<double>(n);
    std::complex<double> acc(0.0, 0.0);
    for (Eigen::Index s = 0; s < n; ++s) {
      const std::complex<double> z(contour.points(s, 0),
                                   contour.points(s, 1));
      acc += z * std::polar(1.0, step * static_cast<double>(s));
    }
    acc /= static_cast<double>(n);
    fd.coeffs(u_index(k_max, k)) = acc.real();
    fd.coeffs(v_index(k_max, k)) = acc.imag();
  }
  return fd;
}

ContourPoints idft_decode(const FourierDescriptor& fd, int n) {
  validate(fd);
  if (n < 1) {
    throw Error("sample count must be >= 1, got " + std::to_string(n));
  }

  ContourPoints out;
  out.frame = Frame::kNormalized;
  out.points.resize(n, 2);
  for (int s = 0; s < n; ++s) {
    const double base =
        2.0 * std::numbers::pi * static_cast<double>(s) / n;
    std::complex<double> acc(0.0, 0.0);
    for (int k = -fd.k_max; k <= fd.k_max; ++k) {
      acc += coefficient(fd, k) * std::polar(1.0, base * k);
    }
    out.points(s, 0) = acc.real();
    out.points(s, 1) = acc.imag();
  }
  return out;
}

BoundsReport check_bounds(const FourierDescriptor& fd, double tol) {
  validate(fd);
  const double nondc = 2.0 / std::numbers::pi;
  BoundsReport report;
  for (Eigen::Index i = 0; i < fd.coeffs.size(); ++i) {
    const bool dc = i == u_index(fd.k_max, 0) || i == v_index(fd.k_max, 0);
    const double lo = dc ? 0.0 : -nondc;
    const double hi = dc ? 1.0 : nondc;
    const double value = fd.coeffs(i);
    if (value < lo - tol || value > hi + tol) {
      report.ok = false;
      report.violations.push_back({i, value, lo, hi});
    }
  }
  return report;
}

}  // namespace fcd
