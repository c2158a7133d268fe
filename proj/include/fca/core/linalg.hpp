#pragma once

#include "fca/core/types.hpp"

namespace fca {

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr Eigen::Index kMaxExpDimension = 64;

// exp(-i * scale * H) from the spectral decomposition of H.
// Throws std::invalid_argument if H is not square, larger than 64, or not Hermitian within 1e-12.
ComplexMatrix hermitian_exp(const ComplexMatrix& h, double scale);

}  // namespace fca
