#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "fca/core/types.hpp"

namespace fca {

// a + b i with a, b rational. gmpxx keeps both parts in lowest terms.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(int re) : re_(re) {}  // NOLINT: integer literals convert implicitly
  GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational i() { return {0, 1}; }
  static GaussianRational fraction(long num, long den);

  const mpq_class& real() const { return re_; }
  const mpq_class& imag() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  GaussianRational conj() const { return {re_, -im_}; }
  mpq_class norm2() const { return re_ * re_ + im_ * im_; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string str() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

using ExactScalar = GaussianRational;
using ExactVector = std::vector<GaussianRational>;

// Dense row-major matrix over the Gaussian rationals.
class ExactMatrix {
 public:
  using Scalar = GaussianRational;

  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ExactMatrix Zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ExactMatrix Identity(std::size_t n);
  static ExactMatrix from_rows(const std::vector<std::vector<GaussianRational>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ExactMatrix adjoint() const;
  ExactMatrix conj() const;
  bool is_zero() const;
  bool is_hermitian() const { return *this == adjoint(); }
  ComplexMatrix to_complex() const;

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator*(const GaussianRational& s, const ExactMatrix& m);
  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b);
  ExactMatrix& operator+=(const ExactMatrix& o);
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GaussianRational> data_;
};

inline ExactMatrix commutator(const ExactMatrix& a, const ExactMatrix& b) { return a * b - b * a; }
inline ExactMatrix anticommutator(const ExactMatrix& a, const ExactMatrix& b) { return a * b + b * a; }

ExactVector multiply(const ExactMatrix& m, const ExactVector& v);

// Basis of {v : M v = 0}, read off the reduced row echelon form.
std::vector<ExactVector> exact_nullspace(const ExactMatrix& m);
std::size_t exact_rank(const ExactMatrix& m);

}  // namespace fca
