#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace fca {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Largest absolute entry; the "max" norm used throughout the checks.
inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// ||U^dagger U - I||_max
inline double unitarity_defect(const ComplexMatrix& u) {
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols()));
}

inline double hermiticity_defect(const ComplexMatrix& h) { return max_abs(h - h.adjoint()); }

}  // namespace fca
