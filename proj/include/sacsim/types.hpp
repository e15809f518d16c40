#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace sac {

using Scalar = double;
using Matrix = Eigen::MatrixX<Scalar>;
using Vector = Eigen::VectorX<Scalar>;
using Complex = std::complex<Scalar>;
using ComplexVector = std::vector<Complex>;

// Margin for strict-inequality stability tests: "stable" means Re(lambda) < -kStabilityMargin,
// "positive" means Re(lambda) > +kStabilityMargin. Overridable per call.
inline constexpr Scalar kStabilityMargin = 1e-9;

} // namespace sac
