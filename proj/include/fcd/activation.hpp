#pragma once

#include <numbers>

#include <Eigen/Dense>

#include "fcd/descriptor.hpp"
#include "fcd/errors.hpp"

namespace fcd {

// Width parameter of the squashing map for non-dc coefficients.  tanh(x) /
// kDefaultDelta spans (-2/pi, 2/pi), exactly the analytic range of those
// coefficients for unit-square contours.
inline constexpr double kDefaultDelta = std::numbers::pi / 2.0;

// Squashes a raw real vector of length 4*k_max + 2 into the valid
// coefficient ranges: logistic sigmoid for the two dc entries, tanh(x)/delta
// for everything else.  Throws DimensionMismatch for a length that is not
// 4k+2 or non-finite input, and Error for delta <= 0.
FourierDescriptor activate(const Eigen::Ref<const Eigen::VectorXd>& raw,
                           double delta = kDefaultDelta);

// Exact inverse of activate.  Every dc entry must lie strictly inside
// (0, 1) and every other entry strictly inside (-1/delta, 1/delta);
// boundary values throw OutOfRange.
Eigen::VectorXd activate_inverse(const FourierDescriptor& fd,
                                 double delta = kDefaultDelta);

// Applies a learned offset in pre-activation space and squashes back:
// additive for the dc entries, multiplicative by e^offset for the rest.
// The result always lies inside the activation ranges again.
FourierDescriptor refine(const FourierDescriptor& fd,
                         const Eigen::Ref<const Eigen::VectorXd>& offset,
                         double delta = kDefaultDelta);

// Componentwise derivative of refine with respect to its offset:
//   dc:      s * (1 - s)             with s = sigmoid(z + o)
//   non-dc:  sech^2(z e^o) * z e^o / delta
// where z is the pre-activation value of the coefficient.
Eigen::VectorXd refine_gradient(
    const FourierDescriptor& fd,
    const Eigen::Ref<const Eigen::VectorXd>& offset,
    double delta = kDefaultDelta);

}  // namespace fcd
