#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fca/core/exact.hpp"
#include "fca/walk/walk.hpp"

namespace fca::classify {

inline constexpr std::size_t kCellModes = 4;

// Normal-ordered psi^dagger_{c_1} ... psi^dagger_{c_q} psi_{a_1} ... psi_{a_q}, both lists ascending, 0-based modes.
struct Monomial {
  std::vector<std::size_t> creators;
  std::vector<std::size_t> annihilators;

  int degree() const { return static_cast<int>(creators.size() + annihilators.size()); }
  bool self_adjoint_pattern() const { return creators == annihilators; }
  std::string str() const;  // 1-based labels, e.g. "c1 c2 a3 a4"
};

// All number-preserving normal-ordered monomials of the requested (even) degrees on s modes.
std::vector<Monomial> enumerate_monomials(std::size_t s, const std::vector<int>& degrees);
ExactMatrix monomial_matrix(const Monomial& m, std::size_t s);

// Exact copy of a floating matrix; every double is a binary rational so this is lossless.
ExactMatrix to_exact(const ComplexMatrix& m);

// Gamma(V): Gamma|0> = |0>, Gamma psi^dagger_a Gamma^dagger = sum_b V_ba psi^dagger_b.
// Throws std::invalid_argument unless V^dagger V = I exactly.
ExactMatrix second_quantize(const ExactMatrix& v);

// Real generator of the Hermitian monomial span: m + m^dagger, or i (m - m^dagger).
struct HermitianGenerator {
  Monomial monomial;
  bool imaginary = false;
  ExactMatrix matrix;
  std::string label() const;
};

std::vector<HermitianGenerator> hermitian_generators(const std::vector<Monomial>& monomials, std::size_t s);

struct InvariantBasis {
  std::vector<HermitianGenerator> generators;
  std::vector<std::vector<mpq_class>> coordinates;  // real coefficients over generators, one row per basis element
  std::vector<ExactMatrix> basis;
  std::size_t dimension = 0;
  // Split by entrywise complex conjugation in the occupation basis.
  std::size_t real_symmetric_dimension = 0;
  std::size_t imaginary_dimension = 0;
};

struct SolveOptions {
  bool include_quadratic = false;  // diagnostic: also admit degree-2 monomials
};

InvariantBasis solve_invariants(const walk::IsotropyRep& rep, const SolveOptions& options = {});

// Dimension of the real span of a set of matrices.
std::size_t real_span_dimension(const std::vector<ExactMatrix>& ops);
bool in_real_span(const std::vector<ExactMatrix>& basis, const ExactMatrix& x);

// The thirteen coupling families of the reference classification. Complex couplings
// carry the partner i (A - A^dagger) alongside A + A^dagger.
struct Family {
  std::string name;
  ExactMatrix hermitian;
  std::optional<ExactMatrix> partner;
};

std::vector<Family> reference_families();

struct FamilyVerdict {
  std::string name;
  bool complex_coupling = false;
  bool contained = false;
  bool partner_contained = false;
  bool commutes = false;
};

struct MatchReport {
  std::size_t basis_dimension = 0;
  std::size_t family_count = 0;
  std::size_t family_real_dimension = 0;
  std::size_t coupling_count = 0;  // real-symmetric part of the commutant
  bool span_equal = false;
  std::vector<FamilyVerdict> verdicts;
  std::vector<std::string> failures;
  bool pass = false;
};

MatchReport match_to_reference(const InvariantBasis& basis, const walk::IsotropyRep& rep);

}  // namespace fca::classify
