#include "fca/classify/classifier.hpp"

#include <algorithm>
#include <stdexcept>

#include "fca/core/fock.hpp"

namespace fca::classify {

namespace {

std::vector<std::vector<std::size_t>> subsets(std::size_t s, std::size_t q) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << s); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != q) continue;
    std::vector<std::size_t> set;
    for (std::size_t j = 0; j < s; ++j)
      if (mask & (std::size_t{1} << j)) set.push_back(j);
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExactMatrix creator(std::size_t mode, std::size_t s) { return field_operator<ExactMatrix>(mode, true, s).matrix; }
ExactMatrix annihilator(std::size_t mode, std::size_t s) { return field_operator<ExactMatrix>(mode, false, s).matrix; }
ExactMatrix number(std::size_t mode, std::size_t s) { return number_operator<ExactMatrix>(mode, s).matrix; }

// Append the real and imaginary parts of every entry of m as rows in column `col`.
void flatten_into(const ExactMatrix& m, std::size_t col, ExactMatrix& rows, std::size_t row_offset) {
  std::size_t r = row_offset;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      rows(r++, col) = GaussianRational(m(i, j).real(), 0);
      rows(r++, col) = GaussianRational(m(i, j).imag(), 0);
    }
}

ExactMatrix real_coordinates(const std::vector<ExactMatrix>& ops) {
  if (ops.empty()) return {};
  const std::size_t n = ops.front().rows() * ops.front().cols();
  ExactMatrix a(2 * n, ops.size());
  for (std::size_t c = 0; c < ops.size(); ++c) flatten_into(ops[c], c, a, 0);
  return a;
}

ExactMatrix real_part(const ExactMatrix& m) { return GaussianRational::fraction(1, 2) * (m + m.conj()); }
ExactMatrix imag_part(const ExactMatrix& m) {
  return GaussianRational(0, mpq_class(-1, 2)) * (m - m.conj());
}

}  // namespace

std::string Monomial::str() const {
  std::string out;
  for (auto c : creators) out += (out.empty() ? "" : " ") + std::string("c") + std::to_string(c + 1);
  for (auto a : annihilators) out += (out.empty() ? "" : " ") + std::string("a") + std::to_string(a + 1);
  return out;
}

std::vector<Monomial> enumerate_monomials(std::size_t s, const std::vector<int>& degrees) {
  std::vector<Monomial> out;
  for (int d : degrees) {
    if (d <= 0 || d % 2 != 0 || static_cast<std::size_t>(d) > 2 * s)
      throw std::invalid_argument("enumerate_monomials: degree must be even and in 2..2s");
    const auto sets = subsets(s, static_cast<std::size_t>(d / 2));
    for (const auto& c : sets)
      for (const auto& a : sets) out.push_back({c, a});
  }
  return out;
}

ExactMatrix monomial_matrix(const Monomial& m, std::size_t s) {
  ExactMatrix out = ExactMatrix::Identity(std::size_t{1} << s);
  for (auto c : m.creators) out = out * creator(c, s);
  for (auto a : m.annihilators) out = out * annihilator(a, s);
  return out;
}

ExactMatrix to_exact(const ComplexMatrix& m) {
  ExactMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(i, j) = GaussianRational(mpq_class(m(i, j).real()), mpq_class(m(i, j).imag()));
  return out;
}

ExactMatrix second_quantize(const ExactMatrix& v) {
  const std::size_t s = v.rows();
  if (v.cols() != s || s == 0 || s > kMaxFockModes) throw std::invalid_argument("second_quantize: need square V, 1 <= s <= 8");
  if (!(v.adjoint() * v == ExactMatrix::Identity(s))) throw std::invalid_argument("second_quantize: V is not unitary");

  std::vector<ExactMatrix> rotated;  // sum_b V_bj psi^dagger_b
  for (std::size_t j = 0; j < s; ++j) {
    ExactMatrix c = ExactMatrix::Zero(std::size_t{1} << s, std::size_t{1} << s);
    for (std::size_t b = 0; b < s; ++b)
      if (!v(b, j).is_zero()) c += v(b, j) * creator(b, s);
    rotated.push_back(std::move(c));
  }

  const std::size_t dim = std::size_t{1} << s;
  ExactMatrix gamma(dim, dim);
  for (std::size_t state = 0; state < dim; ++state) {
    ExactVector col(dim);
    col[0] = 1;
    for (std::size_t j = s; j-- > 0;)
      if (state & (std::size_t{1} << j)) col = multiply(rotated[j], col);
    for (std::size_t r = 0; r < dim; ++r) gamma(r, state) = col[r];
  }
  return gamma;
}

std::string HermitianGenerator::label() const {
  if (monomial.self_adjoint_pattern()) return monomial.str();
  return imaginary ? "i(" + monomial.str() + " - h.c.)" : "(" + monomial.str() + " + h.c.)";
}

std::vector<HermitianGenerator> hermitian_generators(const std::vector<Monomial>& monomials, std::size_t s) {
  std::vector<HermitianGenerator> out;
  for (const auto& m : monomials) {
    const ExactMatrix mat = monomial_matrix(m, s);
    if (m.self_adjoint_pattern()) {
      out.push_back({m, false, mat});
      continue;
    }
    // Each unordered pair {m, m^dagger} contributes once.
    if (m.creators > m.annihilators) continue;
    const ExactMatrix dag = mat.adjoint();
    out.push_back({m, false, mat + dag});
    out.push_back({m, true, GaussianRational::i() * (mat - dag)});
  }
  return out;
}

InvariantBasis solve_invariants(const walk::IsotropyRep& rep, const SolveOptions& options) {
  if (rep.elements.empty()) throw std::invalid_argument("solve_invariants: empty representation");
  const std::size_t s = static_cast<std::size_t>(rep.elements.front().v.rows());
  std::vector<int> degrees;
  if (options.include_quadratic) degrees.push_back(2);
  for (int d = 4; d <= static_cast<int>(2 * s); d += 2) degrees.push_back(d);

  InvariantBasis result;
  result.generators = hermitian_generators(enumerate_monomials(s, degrees), s);

  std::vector<ExactMatrix> gammas;
  for (const auto& e : rep.elements) {
    const ExactMatrix v = to_exact(e.v);
    if (v == ExactMatrix::Identity(s)) continue;
    gammas.push_back(second_quantize(v));
  }

  const std::size_t dim = std::size_t{1} << s;
  const std::size_t block = 2 * dim * dim;
  ExactMatrix constraints(block * gammas.size(), result.generators.size());
  for (std::size_t l = 0; l < gammas.size(); ++l)
    for (std::size_t g = 0; g < result.generators.size(); ++g)
      flatten_into(commutator(result.generators[g].matrix, gammas[l]), g, constraints, l * block);

  // Drop identically zero rows before elimination.
  std::vector<std::size_t> live;
  for (std::size_t r = 0; r < constraints.rows(); ++r)
    for (std::size_t c = 0; c < constraints.cols(); ++c)
      if (!constraints(r, c).is_zero()) {
        live.push_back(r);
        break;
      }
  ExactMatrix compact(live.size(), constraints.cols());
  for (std::size_t r = 0; r < live.size(); ++r)
    for (std::size_t c = 0; c < constraints.cols(); ++c) compact(r, c) = constraints(live[r], c);

  for (const auto& x : exact_nullspace(compact)) {
    std::vector<mpq_class> coords;
    ExactMatrix op = ExactMatrix::Zero(dim, dim);
    for (std::size_t g = 0; g < x.size(); ++g) {
      coords.push_back(x[g].real());
      if (!x[g].is_zero()) op += x[g] * result.generators[g].matrix;
    }
    result.coordinates.push_back(std::move(coords));
    result.basis.push_back(std::move(op));
  }
  result.dimension = result.basis.size();

  // X Hermitian: Re X is real symmetric, i Im X is imaginary antisymmetric; both stay in the commutant
  // when the representation matrices are real up to an overall phase.
  std::vector<ExactMatrix> re, im;
  for (const auto& b : result.basis) {
    re.push_back(real_part(b));
    im.push_back(imag_part(b));
  }
  result.real_symmetric_dimension = real_span_dimension(re);
  result.imaginary_dimension = real_span_dimension(im);
  return result;
}

std::size_t real_span_dimension(const std::vector<ExactMatrix>& ops) {
  if (ops.empty()) return 0;
  return exact_rank(real_coordinates(ops));
}

bool in_real_span(const std::vector<ExactMatrix>& basis, const ExactMatrix& x) {
  std::vector<ExactMatrix> extended = basis;
  extended.push_back(x);
  return real_span_dimension(extended) == real_span_dimension(basis);
}

std::vector<Family> reference_families() {
  const std::size_t s = kCellModes;
  const auto c = [&](std::size_t j) { return creator(j - 1, s); };
  const auto a = [&](std::size_t j) { return annihilator(j - 1, s); };
  const auto n = [&](std::size_t j) { return number(j - 1, s); };

  auto complex_family = [](std::string name, const ExactMatrix& op) {
    const ExactMatrix dag = op.adjoint();
    return Family{std::move(name), op + dag, GaussianRational::i() * (op - dag)};
  };
  auto real_family = [](std::string name, const ExactMatrix& op) { return Family{std::move(name), op, std::nullopt}; };
  auto with_hc = [](const ExactMatrix& op) { return op + op.adjoint(); };

  std::vector<Family> f;
  f.push_back(complex_family("lambda1", n(3) * c(4) * a(2) + n(4) * c(3) * a(1)));
  f.push_back(complex_family("lambda2", n(1) * c(2) * a(4) + n(2) * c(1) * a(3)));
  f.push_back(complex_family("lambda3", c(1) * c(2) * a(3) * a(4)));
  f.push_back(real_family("lambda4", with_hc(c(2) * c(4) * a(1) * a(3))));
  f.push_back(real_family("lambda5", with_hc(c(2) * c(3) * a(1) * a(4))));
  f.push_back(real_family("lambda6", n(1) * n(3) + n(2) * n(4)));
  f.push_back(real_family("lambda7", n(1) * n(4) + n(2) * n(3)));
  f.push_back(real_family("lambda8", n(1) * n(2)));
  f.push_back(real_family("lambda9", n(3) * n(4)));
  f.push_back(complex_family("xi1", n(1) * n(3) * c(4) * a(2) + n(2) * n(4) * c(3) * a(1)));
  f.push_back(real_family("xi2", (n(1) + n(2)) * n(3) * n(4)));
  f.push_back(real_family("xi3", n(1) * n(2) * (n(3) + n(4))));
  f.push_back(real_family("chi", n(1) * n(2) * n(3) * n(4)));
  return f;
}

MatchReport match_to_reference(const InvariantBasis& basis, const walk::IsotropyRep& rep) {
  MatchReport report;
  report.basis_dimension = basis.dimension;
  report.coupling_count = basis.real_symmetric_dimension;

  std::vector<ExactMatrix> gammas;
  for (const auto& e : rep.elements) gammas.push_back(second_quantize(to_exact(e.v)));
  const auto commutes = [&](const ExactMatrix& x) {
    return std::all_of(gammas.begin(), gammas.end(), [&](const ExactMatrix& g) { return commutator(x, g).is_zero(); });
  };

  const auto families = reference_families();
  report.family_count = families.size();
  std::vector<ExactMatrix> family_ops;
  for (const auto& f : families) {
    FamilyVerdict v;
    v.name = f.name;
    v.complex_coupling = f.partner.has_value();
    v.contained = in_real_span(basis.basis, f.hermitian);
    v.partner_contained = !v.complex_coupling || in_real_span(basis.basis, *f.partner);
    v.commutes = commutes(f.hermitian) && (!v.complex_coupling || commutes(*f.partner));
    family_ops.push_back(f.hermitian);
    if (f.partner) family_ops.push_back(*f.partner);
    if (!v.contained) report.failures.push_back(f.name + " not in the solved span");
    if (!v.partner_contained) report.failures.push_back(f.name + " (imaginary partner) not in the solved span");
    if (!v.commutes) report.failures.push_back(f.name + " does not commute with the representation");
    report.verdicts.push_back(v);
  }
  report.family_real_dimension = real_span_dimension(family_ops);

  std::vector<ExactMatrix> joint = basis.basis;
  joint.insert(joint.end(), family_ops.begin(), family_ops.end());
  const std::size_t joint_dim = real_span_dimension(joint);
  report.span_equal = joint_dim == basis.dimension && joint_dim == report.family_real_dimension;
  if (!report.span_equal)
    report.failures.push_back("solved span (" + std::to_string(basis.dimension) + ") and family span (" +
                              std::to_string(report.family_real_dimension) + ") differ");
  report.pass = report.failures.empty();
  return report;
}

}  // namespace fca::classify
