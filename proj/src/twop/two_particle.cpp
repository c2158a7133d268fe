#include "fca/twop/two_particle.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

#include "fca/core/linalg.hpp"

namespace fca::twop {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

int partner(int internal) { return (internal + 3) % 6; }

// sin(a)/a and (cos(a) - 1)/a^2 without cancellation near 0.
double sinc(double a) { return std::abs(a) < 1e-4 ? 1.0 - a * a / 6.0 : std::sin(a) / a; }
double cosc(double a) { return std::abs(a) < 1e-4 ? -0.5 + a * a / 24.0 : (std::cos(a) - 1.0) / (a * a); }

bool near_multiple(double x, double period, double tol, long* multiple = nullptr) {
  const double n = std::round(x / period);
  if (multiple) *multiple = static_cast<long>(n);
  return std::abs(x - n * period) < tol;
}

SparseComplex sector_projector(const std::vector<AntisymmetricVector>& basis, Sector sector, int L) {
  std::vector<Eigen::Triplet<Complex>> entries;
  for (const auto& b : basis) {
    if (b.sector != sector) continue;
    const Eigen::Index u = state_index(b.internal, b.y, L);
    const Eigen::Index v = state_index(partner(b.internal), wrap(-b.y, L), L);
    entries.emplace_back(u, u, 0.5);
    entries.emplace_back(v, v, 0.5);
    entries.emplace_back(u, v, -0.5);
    entries.emplace_back(v, u, -0.5);
  }
  SparseComplex p(12 * L, 12 * L);
  p.setFromTriplets(entries.begin(), entries.end());
  return p;
}

AnalyticEigenstate impurity_state(const Params& params, Family family, Complex w1, Complex w2, Complex eigenvalue) {
  AnalyticEigenstate s{family, std::nullopt, eigenvalue, ComplexVector::Zero(params.dim()), base_coefficients(params)};
  const int L = params.L;
  s.vector(state_index(0, 0, L)) = w1;
  s.vector(state_index(3, 0, L)) = -w1;
  s.vector(state_index(1, 0, L)) = w2;
  s.vector(state_index(4, 0, L)) = -w2;
  s.vector.normalize();
  return s;
}

}  // namespace

Params Params::from_polar(double p, double lambda_abs, double lambda_phase, int L) {
  if (lambda_abs < 0.0) throw std::invalid_argument("Params: |lambda| must be nonnegative");
  Params params{p, std::polar(lambda_abs, lambda_phase), L};
  params.validate();
  return params;
}

void Params::validate() const {
  if (L < 8 || L % 2 != 0) throw std::invalid_argument("Params: L must be even and >= 8");
  if (!std::isfinite(p) || !std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw std::invalid_argument("Params: p and lambda must be finite");
}

int wrap(int y, int L) {
  const int n = 2 * L;
  int r = (y + L) % n;
  if (r < 0) r += n;
  return r - L;
}

Eigen::Index state_index(int internal, int y, int L) {
  return static_cast<Eigen::Index>(internal) * 2 * L + (wrap(y, L) + L);
}

ComplexMatrix build_free_block(const Params& params) {
  params.validate();
  const int L = params.L;
  const Complex plus = std::exp(2.0 * kI * params.p), minus = std::exp(-2.0 * kI * params.p);
  ComplexMatrix d = ComplexMatrix::Zero(params.dim(), params.dim());
  for (int y = -L; y < L; ++y) {
    d(state_index(0, y, L), state_index(0, y, L)) = plus;
    d(state_index(3, y, L), state_index(3, y, L)) = plus;
    d(state_index(1, y, L), state_index(1, y, L)) = minus;
    d(state_index(4, y, L), state_index(4, y, L)) = minus;
    d(state_index(2, y - 2, L), state_index(2, y, L)) = 1.0;
    d(state_index(5, y + 2, L), state_index(5, y, L)) = 1.0;
  }
  return d;
}

ComplexMatrix interaction_3x3(Complex lambda) {
  ComplexMatrix o = ComplexMatrix::Zero(3, 3);
  o(0, 2) = o(1, 2) = -std::conj(lambda);
  o(2, 0) = o(2, 1) = -lambda;
  // O'^3 = a^2 O' with a = sqrt2 |lambda|.
  const double a = kSqrt2 * std::abs(lambda);
  return ComplexMatrix::Identity(3, 3) - kI * sinc(a) * o + cosc(a) * o * o;
}

ComplexMatrix build_interaction_block(Complex lambda) {
  ComplexMatrix j = ComplexMatrix::Zero(6, 6);
  const ComplexMatrix j3 = interaction_3x3(lambda);
  j.topLeftCorner(3, 3) = j3;
  j.bottomRightCorner(3, 3) = j3;
  return j;
}

ComplexMatrix build_interaction(const Params& params) {
  params.validate();
  ComplexMatrix j = ComplexMatrix::Identity(params.dim(), params.dim());
  const ComplexMatrix block = build_interaction_block(params.lambda);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) j(state_index(a, 0, params.L), state_index(b, 0, params.L)) = block(a, b);
  return j;
}

ComplexMatrix build_antisymmetrizer(const Params& params) {
  params.validate();
  const int L = params.L;
  ComplexMatrix p = 0.5 * ComplexMatrix::Identity(params.dim(), params.dim());
  for (int i = 0; i < 6; ++i)
    for (int y = -L; y < L; ++y) p(state_index(partner(i), -y, L), state_index(i, y, L)) -= 0.5;
  return p;
}

const char* sector_name(Sector s) {
  switch (s) {
    case Sector::A:
      return "a";
    case Sector::B:
      return "b";
    case Sector::C:
      return "c";
    case Sector::D:
      return "d";
  }
  return "?";
}

std::vector<AntisymmetricVector> antisymmetric_basis(int L) {
  std::vector<AntisymmetricVector> basis;
  for (int i = 0; i < 3; ++i)
    for (int y = -L; y < L; ++y) {
      Sector s = Sector::D;
      if (i == 0 && y != 0) s = Sector::A;
      if (i == 1 && y != 0) s = Sector::B;
      if (i == 2 && (y % 2 != 0)) s = Sector::C;
      basis.push_back({i, y, s});
    }
  return basis;
}

ComplexVector basis_vector(const AntisymmetricVector& b, int L) {
  ComplexVector v = ComplexVector::Zero(12 * L);
  v(state_index(b.internal, b.y, L)) = kInvSqrt2;
  v(state_index(partner(b.internal), -b.y, L)) = -kInvSqrt2;
  return v;
}

BlockedEvolution::BlockedEvolution(const Params& params)
    : params_(params),
      phase_plus_(std::exp(2.0 * kI * params.p)),
      phase_minus_(std::exp(-2.0 * kI * params.p)),
      j3_(interaction_3x3(params.lambda)) {
  params_.validate();
}

ComplexVector BlockedEvolution::apply(const ComplexVector& v) const {
  const int L = params_.L;
  const int n = 2 * L;
  if (v.size() != dim()) throw std::invalid_argument("BlockedEvolution::apply: dimension mismatch");

  auto antisymmetrize = [&](const ComplexVector& in) {
    ComplexVector out(in.size());
    for (int i = 0; i < 6; ++i)
      for (int y = -L; y < L; ++y)
        out(state_index(i, y, L)) = 0.5 * (in(state_index(i, y, L)) - in(state_index(partner(i), -y, L)));
    return out;
  };

  const ComplexVector w = antisymmetrize(v);
  ComplexVector d(w.size());
  for (int y = -L; y < L; ++y) {
    d(0 * n + y + L) = phase_plus_ * w(0 * n + y + L);
    d(3 * n + y + L) = phase_plus_ * w(3 * n + y + L);
    d(1 * n + y + L) = phase_minus_ * w(1 * n + y + L);
    d(4 * n + y + L) = phase_minus_ * w(4 * n + y + L);
    d(state_index(2, y - 2, L)) = w(state_index(2, y, L));
    d(state_index(5, y + 2, L)) = w(state_index(5, y, L));
  }
  for (int half : {0, 3}) {
    Eigen::Vector3cd local;
    for (int a = 0; a < 3; ++a) local(a) = d(state_index(half + a, 0, L));
    local = j3_ * local;
    for (int a = 0; a < 3; ++a) d(state_index(half + a, 0, L)) = local(a);
  }
  return antisymmetrize(d);
}

ComplexMatrix BlockedEvolution::dense_matrix() const {
  ComplexMatrix m(dim(), dim());
  ComplexVector e = ComplexVector::Zero(dim());
  for (Eigen::Index c = 0; c < dim(); ++c) {
    e(c) = 1.0;
    m.col(c) = apply(e);
    e(c) = 0.0;
  }
  return m;
}

ComplexMatrix BlockedEvolution::restricted_matrix() const {
  const int L = params_.L;
  const auto basis = antisymmetric_basis(L);
  const auto n = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix r(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const ComplexVector image = apply(basis_vector(basis[c], L));
    for (Eigen::Index row = 0; row < n; ++row) {
      const auto& b = basis[row];
      r(row, c) = kInvSqrt2 * (image(state_index(b.internal, b.y, L)) - image(state_index(partner(b.internal), -b.y, L)));
    }
  }
  return r;
}

BlockedEvolution build_evolution(const Params& params) { return BlockedEvolution(params); }

SubspaceProjectors subspace_projectors(const Params& params) {
  params.validate();
  const auto basis = antisymmetric_basis(params.L);
  return {sector_projector(basis, Sector::A, params.L), sector_projector(basis, Sector::B, params.L),
          sector_projector(basis, Sector::C, params.L), sector_projector(basis, Sector::D, params.L)};
}

double decomposition_defect(const Params& params) {
  const ComplexMatrix a = build_evolution(params).dense_matrix();
  const auto pr = subspace_projectors(params);
  const ComplexMatrix ac = pr.c * a;
  const ComplexMatrix ad = pr.d * a;
  ComplexMatrix r = a;
  r -= std::exp(2.0 * kI * params.p) * ComplexMatrix(pr.a);
  r -= std::exp(-2.0 * kI * params.p) * ComplexMatrix(pr.b);
  r -= ac * pr.c;
  r -= ad * pr.d;
  return max_abs(r);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::PhiF:
      return "phi_f";
    case Family::PhiS:
      return "phi_s";
    case Family::PhiB0:
      return "phi_b0";
    case Family::PhiBMinus:
      return "phi_b_minus";
    case Family::PhiBPlus:
      return "phi_b_plus";
  }
  return "?";
}

Coefficients base_coefficients(const Params& params) {
  Coefficients c;
  const double a = params.coupling();
  c.gamma = std::cos(a);
  c.eps = std::cos(2.0 * params.p) * (c.gamma + 1.0);
  c.sigma = -kI * std::conj(params.lambda) * sinc(a);
  return c;
}

std::vector<double> free_momenta(int L) {
  std::vector<double> ks;
  for (int j = -L / 2; j < L / 2; ++j) ks.push_back(2.0 * kPi * j / L);
  return ks;
}

AnalyticEigenstate analytic_free_state(const Params& params, double k) {
  params.validate();
  const int L = params.L;
  if (!near_multiple(k, 2.0 * kPi / L, 1e-9)) throw std::invalid_argument("analytic_free_state: k is not on the 2 pi j / L grid");
  AnalyticEigenstate s{Family::PhiF, k, std::exp(-kI * k), ComplexVector::Zero(params.dim()), base_coefficients(params)};
  const double scale = kInvSqrt2 / std::sqrt(static_cast<double>(L));
  for (int y = -L + 1; y < L; y += 2) {
    // |k>_o on odd y, with the half-integer phase e^{-iky/2}
    s.vector(state_index(2, y, L)) += scale * std::exp(-0.5 * kI * k * static_cast<double>(y));
    s.vector(state_index(5, y, L)) -= scale * std::exp(0.5 * kI * k * static_cast<double>(y));
  }
  s.coefficients.norm = 1.0;
  return s;
}

Coefficients scattering_coefficients(const Params& params, double k) {
  const double a = params.coupling();
  if (near_multiple(a, 2.0 * kPi, 1e-9)) throw std::invalid_argument("scattering state undefined: sqrt2|lambda| is a multiple of 2 pi");
  Coefficients c = base_coefficients(params);
  const double c2p = std::cos(2.0 * params.p);
  const Complex em = std::exp(-kI * k), ep = std::exp(kI * k);
  c.c_k = c.gamma * (em - c2p) + (ep - c2p);
  const Complex f = kI * std::conj(params.lambda) * sinc(a);
  c.d_k = f * (em - std::exp(-2.0 * kI * params.p));
  c.d_prime_k = f * (em - std::exp(2.0 * kI * params.p));
  return c;
}

AnalyticEigenstate analytic_scattering_state(const Params& params, double k) {
  params.validate();
  const int L = params.L;
  Coefficients c = scattering_coefficients(params, k);
  if (std::abs(c.c_k) < 1e-12 && std::abs(c.d_k) < 1e-12 && std::abs(c.d_prime_k) < 1e-12)
    throw std::invalid_argument("analytic_scattering_state: the state vanishes at this k");

  AnalyticEigenstate s{Family::PhiS, k, std::exp(-kI * k), ComplexVector::Zero(params.dim()), c};
  for (int x = -L / 2 + 1; x <= L / 2; ++x) {
    const Complex amp = (x <= 0 ? c.c_k : std::conj(c.c_k)) * std::exp(-kI * k * static_cast<double>(x));
    s.vector(state_index(2, 2 * x, L)) += amp;
    s.vector(state_index(5, -2 * x, L)) -= amp;
  }
  s.vector(state_index(0, 0, L)) += c.d_k;
  s.vector(state_index(3, 0, L)) -= c.d_k;
  s.vector(state_index(1, 0, L)) += c.d_prime_k;
  s.vector(state_index(4, 0, L)) -= c.d_prime_k;
  s.coefficients.norm = s.vector.norm();
  s.vector /= s.coefficients.norm;
  return s;
}

std::vector<double> scattering_momenta(const Params& params) {
  params.validate();
  const int L = params.L;
  const auto h = [&](double k) {
    const Complex c = scattering_coefficients(params, k).c_k;
    return (std::exp(0.5 * kI * k * static_cast<double>(L)) * c).imag();
  };
  const int m = 64 * (L + 2);
  const double step = 2.0 * kPi / m;
  std::vector<double> ks(m), hs(m);
  for (int j = 0; j < m; ++j) {
    ks[j] = -kPi + (j + 0.5) * step;
    hs[j] = h(ks[j]);
  }

  std::vector<double> roots;
  for (int j = 0; j < m; ++j) {
    const int next = (j + 1) % m;
    const double lo = ks[j];
    const double hi = next == 0 ? ks[0] + 2.0 * kPi : ks[next];
    double root;
    if (hs[j] == 0.0) {
      root = lo;
    } else if ((hs[j] < 0.0) != (hs[next] < 0.0) && hs[next] != 0.0) {
      std::uintmax_t iters = 200;
      const auto bracket = boost::math::tools::toms748_solve(
          h, lo, hi, hs[j], hs[next], [](double x, double y) { return std::abs(x - y) < 1e-15; }, iters);
      root = 0.5 * (bracket.first + bracket.second);
    } else {
      continue;
    }
    if (root >= kPi) root -= 2.0 * kPi;
    const Coefficients c = scattering_coefficients(params, root);
    if (std::abs(c.c_k) < 1e-8) continue;  // the chain amplitude vanishes there
    roots.push_back(root);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

Criticality criticality(const Params& params, double tol) {
  Criticality c;
  long n = 0;
  if (near_multiple(2.0 * params.p, kPi, tol, &n)) c.two_p_multiple = static_cast<int>(n);
  const double a = params.coupling();
  if (near_multiple(a - kPi, 2.0 * kPi, tol, &n)) c.coupling_odd_multiple = static_cast<int>(n);
  c.coupling_even_multiple = near_multiple(a, 2.0 * kPi, tol);
  return c;
}

AnalyticEigenstate bound_state_vector(const Params& params, Family family) {
  params.validate();
  const Complex em = std::exp(-kI * params.p), ep = std::exp(kI * params.p);
  switch (family) {
    case Family::PhiBMinus:
      return impurity_state(params, family, em, -ep, 1.0);
    case Family::PhiBPlus:
      return impurity_state(params, family, em, ep, -1.0);
    case Family::PhiB0: {
      const auto n = criticality(params).two_p_multiple;
      return impurity_state(params, family, 1.0, -1.0, (n && *n % 2 != 0) ? -1.0 : 1.0);
    }
    default:
      throw std::invalid_argument("bound_state_vector: not a bound family");
  }
}

std::vector<AnalyticEigenstate> bound_states(const Params& params) {
  params.validate();
  const Criticality crit = criticality(params);
  std::vector<AnalyticEigenstate> out;
  if (crit.coupling_odd_multiple) {
    out.push_back(bound_state_vector(params, Family::PhiBMinus));
    out.push_back(bound_state_vector(params, Family::PhiBPlus));
  } else if (crit.two_p_multiple) {
    out.push_back(bound_state_vector(params, Family::PhiB0));
  }
  return out;
}

CharacteristicRoots characteristic_roots(double gamma, double eps) {
  if (gamma == 0.0) throw std::domain_error("characteristic_roots: gamma = 0");
  const double disc = eps * eps - 4.0 * gamma;
  const Complex root = disc >= 0.0 ? Complex(std::sqrt(disc), 0.0) : Complex(0.0, std::sqrt(-disc));
  return {(eps + root) / (2.0 * gamma), (eps - root) / (2.0 * gamma), gamma, eps};
}

CharacteristicRoots characteristic_roots(const Params& params) {
  const Coefficients c = base_coefficients(params);
  return characteristic_roots(c.gamma, c.eps);
}

int hd_chain_site(int index, int L) { return -L / 2 + 1 + index; }

ComplexVector hd_coordinates(const ComplexVector& v, int L) {
  if (v.size() != 12 * L) throw std::invalid_argument("hd_coordinates: dimension mismatch");
  ComplexVector out(L + 2);
  for (int n = 0; n < L; ++n) {
    const int x = hd_chain_site(n, L);
    out(n) = kInvSqrt2 * (v(state_index(2, 2 * x, L)) - v(state_index(5, -2 * x, L)));
  }
  out(L) = kInvSqrt2 * (v(state_index(0, 0, L)) - v(state_index(3, 0, L)));
  out(L + 1) = kInvSqrt2 * (v(state_index(1, 0, L)) - v(state_index(4, 0, L)));
  return out;
}

PairSpace pair_space(int n, Complex lambda) {
  if (n < 2 || n > 8) throw std::invalid_argument("pair_space: need 2 <= n <= 8");
  const Eigen::Index dim = 16 * n * n;
  auto index = [n](int x1, int x2, int i, int j) {
    return static_cast<Eigen::Index>((((x1 * n) + x2) * 4 + i) * 4 + j);
  };
  // modes 0 and 3 move right, 1 and 2 move left
  auto step = [](int mode) { return mode == 0 || mode == 3 ? 1 : -1; };
  auto internal = [](int i, int j) { return 4 * i + j; };

  ComplexMatrix o = ComplexMatrix::Zero(16, 16);  // modes 1-based in the comments: |3><1| (x) |4><4| etc.
  o(internal(2, 3), internal(0, 3)) += 1.0;
  o(internal(2, 3), internal(2, 1)) += 1.0;
  o(internal(3, 2), internal(1, 2)) += 1.0;
  o(internal(3, 2), internal(3, 0)) += 1.0;
  const ComplexMatrix local = hermitian_exp(lambda * o + std::conj(lambda) * o.adjoint(), 1.0);

  PairSpace s;
  s.free = ComplexMatrix::Zero(dim, dim);
  s.interaction = ComplexMatrix::Identity(dim, dim);
  s.antisymmetrizer = 0.5 * ComplexMatrix::Identity(dim, dim);
  s.q = ComplexMatrix::Zero(dim, dim);
  const int q_pairs[6][2] = {{1, 2}, {2, 1}, {2, 3}, {3, 2}, {0, 3}, {3, 0}};
  for (int x1 = 0; x1 < n; ++x1)
    for (int x2 = 0; x2 < n; ++x2)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const Eigen::Index from = index(x1, x2, i, j);
          s.free(index((x1 + step(i) + n) % n, (x2 + step(j) + n) % n, i, j), from) = 1.0;
          s.antisymmetrizer(index(x2, x1, j, i), from) -= 0.5;
          for (const auto& q : q_pairs)
            if (q[0] == i && q[1] == j) s.q(from, from) = 1.0;
        }
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b) s.interaction(index(x, x, a / 4, a % 4), index(x, x, b / 4, b % 4)) = local(a, b);
  return s;
}

}  // namespace fca::twop
