#pragma once

#include <bit>
#include <cstddef>
#include <stdexcept>

#include "fca/core/exact.hpp"
#include "fca/core/types.hpp"

namespace fca {

inline constexpr std::size_t kMaxFockModes = 8;

// Operator on the 2^s occupation basis. Basis index bit j is n_j (mode 0 is the LSB).
template <class Matrix>
struct BasicFockOperator {
  std::size_t modes = 0;
  Matrix matrix;
};

using FockOperator = BasicFockOperator<ComplexMatrix>;
using ExactFockOperator = BasicFockOperator<ExactMatrix>;

// psi_j (or psi_j^dagger) with the Jordan-Wigner string (-1)^{n_0 + ... + n_{j-1}}.
template <class Matrix = ComplexMatrix>
BasicFockOperator<Matrix> field_operator(std::size_t mode, bool daggered, std::size_t s) {
  if (s == 0 || s > kMaxFockModes) throw std::invalid_argument("field_operator: need 1 <= s <= 8");
  if (mode >= s) throw std::out_of_range("field_operator: mode index out of range");
  const std::size_t dim = std::size_t{1} << s;
  const std::size_t bit = std::size_t{1} << mode;
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t state = 0; state < dim; ++state) {
    const bool occupied = (state & bit) != 0;
    if (occupied == daggered) continue;
    const bool odd = (std::popcount(state & (bit - 1)) & 1) != 0;
    m(state ^ bit, state) = typename Matrix::Scalar(odd ? -1 : 1);
  }
  return {s, std::move(m)};
}

template <class Matrix = ComplexMatrix>
BasicFockOperator<Matrix> number_operator(std::size_t mode, std::size_t s) {
  const auto c = field_operator<Matrix>(mode, true, s);
  const auto a = field_operator<Matrix>(mode, false, s);
  return {s, c.matrix * a.matrix};
}

// Column of the vacuum |0...0> (basis index 0).
inline ComplexVector vacuum(std::size_t s) {
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << s);
  v(0) = 1.0;
  return v;
}

}  // namespace fca
