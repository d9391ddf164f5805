#include "fcd/activation.hpp"

#include <cmath>
#include <string>

namespace fcd {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error("delta must be positive and finite, got " +
                std::to_string(delta));
  }
}

// Length 4k+2 for some k >= 0, i.e. congruent to 2 modulo 4.
int k_from_length(Eigen::Index size) {
  if (size < 2 || (size - 2) % 4 != 0) {
    throw DimensionMismatch("coefficient vector length must be 4k+2, got " +
                            std::to_string(size));
  }
  return static_cast<int>((size - 2) / 4);
}

void check_offset(const FourierDescriptor& fd,
                  const Eigen::Ref<const Eigen::VectorXd>& offset) {
  if (offset.size() != fd.coeffs.size()) {
    throw DimensionMismatch("offset length " + std::to_string(offset.size()) +
                            " does not match descriptor length " +
                            std::to_string(fd.coeffs.size()));
  }
  if (!offset.allFinite()) {
    throw DimensionMismatch("offset has non-finite entries");
  }
}

}  // namespace

FourierDescriptor activate(const Eigen::Ref<const Eigen::VectorXd>& raw,
                           double delta) {
  check_delta(delta);
  const int k_max = k_from_length(raw.size());
  if (!raw.allFinite()) {
    throw DimensionMismatch("raw vector has non-finite entries");
  }

  FourierDescriptor fd;
  fd.k_max = k_max;
  fd.coeffs = (raw.array().tanh() / delta).matrix();
  const Eigen::Index dc = u_index(k_max, 0);
  fd.coeffs(dc) = sigmoid(raw(dc));
  fd.coeffs(dc + 1) = sigmoid(raw(dc + 1));
  return fd;
}

Eigen::VectorXd activate_inverse(const FourierDescriptor& fd, double delta) {
  check_delta(delta);
  validate(fd);
  const Eigen::Index dc = u_index(fd.k_max, 0);

  Eigen::VectorXd raw(fd.coeffs.size());
  for (Eigen::Index i = 0; i < fd.coeffs.size(); ++i) {
    const double c = fd.coeffs(i);
    if (i == dc || i == dc + 1) {
      if (!(c > 0.0 && c < 1.0)) {
        throw OutOfRange("dc coefficient " + std::to_string(c) +
                         " not strictly inside (0, 1)");
      }
      raw(i) = std::log(c / (1.0 - c));
    } else {
      const double scaled = delta * c;
      if (!(scaled > -1.0 && scaled < 1.0)) {
        throw OutOfRange("coefficient " + std::to_string(c) +
                         " not strictly inside the open interval (-1/delta, "
                         "1/delta)");
      }
      raw(i) = std::atanh(scaled);
    }
  }
  return raw;
}

FourierDescriptor refine(const FourierDescriptor& fd,
                         const Eigen::Ref<const Eigen::VectorXd>& offset,
                         double delta) {
  check_delta(delta);
  validate(fd);
  check_offset(fd, offset);

  const Eigen::VectorXd z = activate_inverse(fd, delta);
  const Eigen::Index dc = u_index(fd.k_max, 0);
  Eigen::VectorXd shifted(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    shifted(i) = (i == dc || i == dc + 1) ? z(i) + offset(i)
                                          : z(i) * std::exp(offset(i));
  }
  return activate(shifted, delta);
}

Eigen::VectorXd refine_gradient(
    const FourierDescriptor& fd,
    const Eigen::Ref<const Eigen::VectorXd>& offset, double delta) {
  check_delta(delta);
  validate(fd);
  check_offset(fd, offset);

  const Eigen::VectorXd z = activate_inverse(fd, delta);
  const Eigen::Index dc = u_index(fd.k_max, 0);
  Eigen::VectorXd grad(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (i == dc || i == dc + 1) {
      const double s = sigmoid(z(i) + offset(i));
      grad(i) = s * (1.0 - s);
    } else {
      const double w = z(i) * std::exp(offset(i));
      const double th = std::tanh(w);
      grad(i) = (1.0 - th * th) * w / delta;
    }
  }
  return grad;
}

}  // namespace fcd
