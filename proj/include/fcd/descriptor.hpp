#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "fcd/contour.hpp"
#include "fcd/errors.hpp"

namespace fcd {

// Truncated Fourier series of a closed contour in the unit square.  The real
// coefficient vector interleaves the frequencies from -k_max to +k_max:
//   [u_{-K}, v_{-K}, ..., u_{-1}, v_{-1}, u_0, v_0, u_1, v_1, ..., u_K, v_K]
// so its length is 4*k_max + 2 and the constant (dc) term sits at flat
// indices 2*k_max and 2*k_max + 1.
struct FourierDescriptor {
  Eigen::VectorXd coeffs;
  int k_max = 0;
};

// Flat length of the coefficient vector for a given highest frequency.
constexpr Eigen::Index descriptor_length(int k_max) {
  return 4 * static_cast<Eigen::Index>(k_max) + 2;
}

// Flat index of the u (respectively v) coefficient of frequency k,
// k in [-k_max, k_max].
constexpr Eigen::Index u_index(int k_max, int k) {
  return 2 * (static_cast<Eigen::Index>(k) + k_max);
}
constexpr Eigen::Index v_index(int k_max, int k) {
  return u_index(k_max, k) + 1;
}

// Throws DimensionMismatch unless coeffs.size() == 4*k_max + 2, k_max >= 0,
// and all entries are finite.
void validate(const FourierDescriptor& fd);

// Coefficient of frequency k as a complex number u + i*v.
std::complex<double> coefficient(const FourierDescriptor& fd, int k);

// Forward transform: mean of the contour samples weighted by the conjugate
// phase of each frequency.  Requires normalized-frame points (FrameMismatch)
// and at least 2*k_max + 1 samples (InsufficientSamples).
FourierDescriptor dft_encode(const ContourPoints& contour, int k_max);

// Inverse transform: n boundary points reconstructed by summing all 2K+1
// frequency terms at equally spaced parameters.  Output is in the
// normalized frame.  Throws Error for n < 1.
ContourPoints idft_decode(const FourierDescriptor& fd, int n);

// One out-of-bound coefficient entry: its flat index, its value and the
// closed interval it must lie in.
struct BoundsViolation {
  Eigen::Index index = 0;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct BoundsReport {
  bool ok = true;
  std::vector<BoundsViolation> violations;
};

// Checks the analytic ranges of descriptors of unit-square contours: the dc
// pair must lie in [0, 1], every other entry in [-2/pi, 2/pi], each widened
// by tol on both sides.
BoundsReport check_bounds(const FourierDescriptor& fd, double tol = 1e-12);

}  // namespace fcd
