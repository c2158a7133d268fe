#include "fca/core/linalg.hpp"

#include <stdexcept>

namespace fca {

ComplexMatrix hermitian_exp(const ComplexMatrix& h, double scale) {
  if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_exp: matrix not square");
  if (h.rows() > kMaxExpDimension) throw std::invalid_argument("hermitian_exp: dimension exceeds 64");
  if (hermiticity_defect(h) > kHermitianTolerance) throw std::invalid_argument("hermitian_exp: matrix not Hermitian");

  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  const RealVector& w = es.eigenvalues();
  ComplexVector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::exp(-kI * scale * w(i));
  const ComplexMatrix& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace fca
