#include <algorithm>

#include "doctest.h"
#include "fca/classify/classifier.hpp"
#include "fca/core/fock.hpp"

using namespace fca;
using namespace fca::classify;

namespace {

ExactMatrix total_number(std::size_t s) {
  ExactMatrix n = ExactMatrix::Zero(std::size_t{1} << s, std::size_t{1} << s);
  for (std::size_t j = 0; j < s; ++j) n += number_operator<ExactMatrix>(j, s).matrix;
  return n;
}

// Complex coefficients of x over the monomial basis, by an independent exact solve.
ExactVector monomial_coefficients(const std::vector<Monomial>& monomials, const ExactMatrix& x) {
  const std::size_t dim = x.rows();
  ExactMatrix system(dim * dim, monomials.size() + 1);
  for (std::size_t c = 0; c < monomials.size(); ++c) {
    const ExactMatrix m = monomial_matrix(monomials[c], kCellModes);
    for (std::size_t k = 0; k < dim * dim; ++k) system(k, c) = m(k / dim, k % dim);
  }
  for (std::size_t k = 0; k < dim * dim; ++k) system(k, monomials.size()) = -x(k / dim, k % dim);
  const auto null = exact_nullspace(system);
  REQUIRE(null.size() == 1);
  ExactVector v = null.front();
  const GaussianRational last = v.back();
  REQUIRE_FALSE(last.is_zero());
  for (auto& e : v) e /= last;
  v.pop_back();
  return v;
}

walk::IsotropyRep conjugated(const walk::IsotropyRep& rep, const ComplexMatrix& w) {
  walk::IsotropyRep out = rep;
  for (auto& e : out.elements) e.v = w * e.v * w.adjoint();
  return out;
}

}  // namespace

TEST_CASE("monomial enumeration on one cell") {
  CHECK(enumerate_monomials(4, {4}).size() == 36u);
  CHECK(enumerate_monomials(4, {6}).size() == 16u);
  CHECK(enumerate_monomials(4, {8}).size() == 1u);
  const auto gens = hermitian_generators(enumerate_monomials(4, {4, 6, 8}), 4);
  CHECK(gens.size() == 53u);
  for (const auto& g : gens) CHECK(g.matrix.is_hermitian());
  CHECK_THROWS_AS(enumerate_monomials(4, {3}), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_monomials(4, {10}), std::invalid_argument);
}

TEST_CASE("adjoint of a normal-ordered monomial swaps creator and annihilator sets") {
  for (const auto& m : enumerate_monomials(4, {2, 4, 6})) {
    const Monomial swapped{m.annihilators, m.creators};
    CHECK(monomial_matrix(m, 4).adjoint() == monomial_matrix(swapped, 4));
  }
}

TEST_CASE("second quantization is a number-preserving homomorphism") {
  const auto rep = walk::dirac_isotropy(walk::DiracRepVariant::Covariant);
  const ExactMatrix n = total_number(4);
  std::vector<ExactMatrix> v, g;
  for (const auto& e : rep.elements) {
    v.push_back(to_exact(e.v));
    g.push_back(second_quantize(v.back()));
  }
  for (std::size_t a = 0; a < v.size(); ++a) {
    CHECK(commutator(g[a], n).is_zero());
    CHECK(g[a].adjoint() * g[a] == ExactMatrix::Identity(16));
    for (std::size_t b = 0; b < v.size(); ++b) CHECK(second_quantize(v[a] * v[b]) == g[a] * g[b]);
    // Gamma psi_j^dagger Gamma^dagger = sum_b V_bj psi_b^dagger
    for (std::size_t j = 0; j < 4; ++j) {
      ExactMatrix rotated = ExactMatrix::Zero(16, 16);
      for (std::size_t b = 0; b < 4; ++b) rotated += v[a](b, j) * field_operator<ExactMatrix>(b, true, 4).matrix;
      CHECK(g[a] * field_operator<ExactMatrix>(j, true, 4).matrix * g[a].adjoint() == rotated);
    }
  }
  CHECK_THROWS_AS(second_quantize(GaussianRational(2) * ExactMatrix::Identity(2)), std::invalid_argument);
}

TEST_CASE("covariant dirac representation: 17 real parameters, 13 couplings, all families matched") {
  const auto rep = walk::dirac_isotropy(walk::DiracRepVariant::Covariant);
  const InvariantBasis basis = solve_invariants(rep);
  CHECK(basis.generators.size() == 53u);
  CHECK(basis.dimension == 17u);
  CHECK(basis.real_symmetric_dimension == 13u);
  CHECK(basis.imaginary_dimension == 4u);

  const ExactMatrix n = total_number(4);
  std::vector<ExactMatrix> gammas;
  for (const auto& e : rep.elements) gammas.push_back(second_quantize(to_exact(e.v)));
  for (const auto& x : basis.basis) {
    CHECK(x.is_hermitian());
    CHECK(commutator(x, n).is_zero());
    for (const auto& g : gammas) CHECK(commutator(x, g).is_zero());
  }

  const MatchReport report = match_to_reference(basis, rep);
  CHECK(report.family_count == 13u);
  CHECK(report.family_real_dimension == 17u);
  CHECK(report.coupling_count == 13u);
  CHECK(report.span_equal);
  CHECK(report.pass);
  CHECK(report.failures.empty());
}

TEST_CASE("hermiticity pairing: coefficient of m^dagger is the conjugate of that of m") {
  const auto basis = solve_invariants(walk::dirac_isotropy(walk::DiracRepVariant::Covariant));
  const auto monomials = enumerate_monomials(4, {4, 6, 8});
  for (const auto& x : basis.basis) {
    const ExactVector c = monomial_coefficients(monomials, x);
    for (std::size_t i = 0; i < monomials.size(); ++i) {
      const auto it = std::find_if(monomials.begin(), monomials.end(), [&](const Monomial& m) {
        return m.creators == monomials[i].annihilators && m.annihilators == monomials[i].creators;
      });
      REQUIRE(it != monomials.end());
      CHECK(c[static_cast<std::size_t>(it - monomials.begin())] == c[i].conj());
    }
  }
}

TEST_CASE("a quadratic term is not in the degree >= 4 span") {
  const auto basis = solve_invariants(walk::dirac_isotropy(walk::DiracRepVariant::Covariant));
  CHECK_FALSE(in_real_span(basis.basis, number_operator<ExactMatrix>(0, 4).matrix));
  CHECK_FALSE(in_real_span(basis.basis, total_number(4)));

  SolveOptions diag;
  diag.include_quadratic = true;
  const auto wide = solve_invariants(walk::dirac_isotropy(walk::DiracRepVariant::Covariant), diag);
  CHECK(wide.dimension > basis.dimension);
  CHECK(in_real_span(wide.basis, total_number(4)));
  for (const auto& x : basis.basis) CHECK(in_real_span(wide.basis, x));
}

TEST_CASE("negative control: dropping a basis element breaks the match") {
  const auto rep = walk::dirac_isotropy(walk::DiracRepVariant::Covariant);
  InvariantBasis basis = solve_invariants(rep);
  basis.basis.pop_back();
  basis.dimension = basis.basis.size();
  const MatchReport report = match_to_reference(basis, rep);
  CHECK_FALSE(report.pass);
  CHECK_FALSE(report.span_equal);
  CHECK_FALSE(report.failures.empty());
}

TEST_CASE("alternative representation variants give smaller commutants") {
  const auto sigma_y = walk::dirac_isotropy(walk::DiracRepVariant::MinusSigmaY);
  const auto corrected = walk::dirac_isotropy(walk::DiracRepVariant::MinusSigma);
  const auto bp = solve_invariants(sigma_y);
  const auto bc = solve_invariants(corrected);
  CHECK(bp.dimension == 9u);
  CHECK(bc.dimension == 11u);

  const MatchReport rc = match_to_reference(bc, corrected);
  CHECK_FALSE(rc.pass);
  std::vector<std::string> missing;
  for (const auto& v : rc.verdicts)
    if (!v.contained) missing.push_back(v.name);
  CHECK(missing == std::vector<std::string>{"lambda1", "lambda2", "xi1"});
}

TEST_CASE("commutant dimension is invariant under a change of one-body basis") {
  // A phase-permutation unitary keeps every entry exactly representable.
  ComplexMatrix w = ComplexMatrix::Zero(4, 4);
  w(1, 0) = 1.0;
  w(3, 1) = kI;
  w(0, 2) = -1.0;
  w(2, 3) = -kI;
  const auto rep = walk::dirac_isotropy(walk::DiracRepVariant::Covariant);
  CHECK(solve_invariants(conjugated(rep, w)).dimension == 17u);
  CHECK(solve_invariants(conjugated(walk::dirac_isotropy(walk::DiracRepVariant::MinusSigmaY), w)).dimension == 9u);
}

TEST_CASE("weyl representation on a two-mode cell") {
  // Only the degree-4 monomial n1 n2 exists and it commutes with every Gamma(V).
  const auto basis = solve_invariants(walk::weyl_isotropy());
  CHECK(basis.dimension == 1u);
  CHECK(basis.basis.front() ==
        GaussianRational(basis.coordinates.front().front(), 0) * monomial_matrix(Monomial{{0, 1}, {0, 1}}, 2));
}
