#include "fca/core/exact.hpp"

#include <stdexcept>

namespace fca {

GaussianRational GaussianRational::fraction(long num, long den) {
  if (den == 0) throw std::invalid_argument("GaussianRational: zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return {q, 0};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw std::domain_error("GaussianRational: division by zero");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  const mpq_class n = o.norm2();
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

std::string GaussianRational::str() const {
  if (sgn(im_) == 0) return re_.get_str();
  if (sgn(re_) == 0) return im_.get_str() + "i";
  return re_.get_str() + (sgn(im_) > 0 ? "+" : "") + im_.get_str() + "i";
}

ExactMatrix ExactMatrix::Identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

ExactMatrix ExactMatrix::from_rows(const std::vector<std::vector<GaussianRational>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  ExactMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ExactMatrix::from_rows: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

ExactMatrix ExactMatrix::adjoint() const {
  ExactMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).conj();
  return out;
}

ExactMatrix ExactMatrix::conj() const {
  ExactMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k].conj();
  return out;
}

bool ExactMatrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

ComplexMatrix ExactMatrix::to_complex() const {
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).to_complex();
  return out;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("ExactMatrix product: shape mismatch");
  ExactMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const auto& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const auto& bkj = b(k, j);
        if (!bkj.is_zero()) out(i, j) += aik * bkj;
      }
    }
  return out;
}

ExactMatrix operator*(const GaussianRational& s, const ExactMatrix& m) {
  ExactMatrix out(m.rows_, m.cols_);
  if (s.is_zero()) return out;
  for (std::size_t k = 0; k < m.data_.size(); ++k)
    if (!m.data_[k].is_zero()) out.data_[k] = s * m.data_[k];
  return out;
}

ExactMatrix& ExactMatrix::operator+=(const ExactMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("ExactMatrix sum: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k)
    if (!o.data_[k].is_zero()) data_[k] += o.data_[k];
  return *this;
}

ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix out = a;
  out += b;
  return out;
}

ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix out = a;
  out += GaussianRational(-1) * b;
  return out;
}

ExactVector multiply(const ExactMatrix& m, const ExactVector& v) {
  if (v.size() != m.cols()) throw std::invalid_argument("multiply: shape mismatch");
  ExactVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero() && !v[j].is_zero()) out[i] += m(i, j) * v[j];
  return out;
}

namespace {

// In-place reduction to RREF; returns pivot column of each pivot row.
std::vector<std::size_t> row_reduce(ExactMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t sel = row;
    while (sel < a.rows() && a(sel, col).is_zero()) ++sel;
    if (sel == a.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(sel, j), a(row, j));
    const GaussianRational inv = GaussianRational(1) / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j)
      if (!a(row, j).is_zero()) a(row, j) *= inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col).is_zero()) continue;
      const GaussianRational f = a(r, col);
      for (std::size_t j = col; j < a.cols(); ++j)
        if (!a(row, j).is_zero()) a(r, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::vector<ExactVector> exact_nullspace(const ExactMatrix& m) {
  ExactMatrix a = m;
  const auto pivots = row_reduce(a);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<ExactVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    ExactVector v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t exact_rank(const ExactMatrix& m) {
  ExactMatrix a = m;
  return row_reduce(a).size();
}

}  // namespace fca
