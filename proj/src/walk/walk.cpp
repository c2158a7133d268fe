#include "fca/walk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fca::walk {

namespace {

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

ComplexMatrix pauli(int which) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  switch (which) {
    case 0:
      s << 1, 0, 0, 1;
      break;
    case 1:
      s << 0, 1, 1, 0;
      break;
    case 2:
      s << 0, -kI, kI, 0;
      break;
    case 3:
      s << 1, 0, 0, -1;
      break;
    default:
      throw std::invalid_argument("pauli: index must be 0..3");
  }
  return s;
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Eigen::Matrix3d pi_rotation(int axis) {
  Eigen::Matrix3d r = -Eigen::Matrix3d::Identity();
  r(axis, axis) = 1.0;
  return r;
}

const WalkTerm* find_term(const WalkTerms& terms, const Vec3& h) {
  for (const auto& t : terms)
    if ((t.h - h).cwiseAbs().maxCoeff() < 1e-9) return &t;
  return nullptr;
}

double mass_norm(double m) {
  if (!(std::abs(m) <= 1.0)) throw std::invalid_argument("dirac: |m| must not exceed 1");
  return std::sqrt(1.0 - m * m);
}

}  // namespace

BccGenerators bcc_generators() {
  return {{Vec3(1, -1, -1) * kInvSqrt3, Vec3(1, 1, 1) * kInvSqrt3, Vec3(-1, -1, 1) * kInvSqrt3,
           Vec3(-1, 1, -1) * kInvSqrt3}};
}

ComplexMatrix weyl_matrix(Chirality chirality, const Vec3& k) {
  const double cx = std::cos(k.x() * kInvSqrt3), cy = std::cos(k.y() * kInvSqrt3), cz = std::cos(k.z() * kInvSqrt3);
  const double sx = std::sin(k.x() * kInvSqrt3), sy = std::sin(k.y() * kInvSqrt3), sz = std::sin(k.z() * kInvSqrt3);
  const double pm = chirality == Chirality::Plus ? 1.0 : -1.0;
  const double d = cx * cy * cz - pm * sx * sy * sz;
  const double ax = sx * cy * cz + pm * cx * sy * sz;
  const double ay = cx * sy * cz - pm * sx * cy * sz;
  const double az = cx * cy * sz + pm * sx * sy * cz;
  return d * pauli(0) - kI * ax * pauli(1) + pm * kI * ay * pauli(2) - kI * az * pauli(3);
}

ComplexMatrix dirac_matrix(const Vec3& k, double m, Chirality chirality) {
  const double n = mass_norm(m);
  const ComplexMatrix w = weyl_matrix(chirality, k);
  ComplexMatrix out(4, 4);
  out.topLeftCorner(2, 2) = n * w;
  out.topRightCorner(2, 2) = kI * m * pauli(0);
  out.bottomLeftCorner(2, 2) = kI * m * pauli(0);
  out.bottomRightCorner(2, 2) = n * w.adjoint();
  return out;
}

ComplexMatrix massless_1d_matrix(double k) {
  const Complex minus = std::exp(-kI * k), plus = std::exp(kI * k);
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  out.diagonal() << minus, plus, plus, minus;
  return out;
}

ComplexMatrix massless_1d_position(int n) {
  if (n < 1) throw std::invalid_argument("massless_1d_position: need n >= 1");
  ComplexMatrix f = ComplexMatrix::Zero(4 * n, 4 * n);
  for (int x = 0; x < n; ++x) {
    const int right = (x + 1) % n, left = (x - 1 + n) % n;
    for (int a : {0, 3}) f(4 * right + a, 4 * x + a) = 1.0;
    for (int a : {1, 2}) f(4 * left + a, 4 * x + a) = 1.0;
  }
  return f;
}

WalkTerms weyl_terms_raw(Chirality chirality) {
  const Complex eta = chirality == Chirality::Plus ? Complex(0.25, 0.25) : Complex(0.25, -0.25);
  ComplexMatrix plus(2, 2), minus(2, 2);
  plus << eta, 0, eta, 0;
  minus << 0, -std::conj(eta), 0, std::conj(eta);
  const auto gens = bcc_generators();
  WalkTerms terms;
  for (int j = 0; j < 4; ++j) {
    const ComplexMatrix p = pauli(j);
    terms.push_back({gens.h[j], p * plus * p});
    terms.push_back({-gens.h[j], p * minus * p});
  }
  return terms;
}

WalkTerms weyl_terms(Chirality chirality) {
  const Eigen::Matrix3d rx = pi_rotation(0);
  WalkTerms terms;
  for (const auto& t : weyl_terms_raw(chirality)) terms.push_back({rx * t.h, t.u.transpose()});
  return terms;
}

WalkTerms dirac_terms(double m, Chirality chirality) {
  const double n = mass_norm(m);
  const WalkTerms weyl = weyl_terms(chirality);
  WalkTerms terms;
  for (const auto& t : weyl) {
    const WalkTerm* mirror = find_term(weyl, -t.h);
    terms.push_back({t.h, direct_sum(n * t.u, n * mirror->u.adjoint())});
  }
  ComplexMatrix mass = ComplexMatrix::Zero(4, 4);
  mass.topRightCorner(2, 2) = kI * m * pauli(0);
  mass.bottomLeftCorner(2, 2) = kI * m * pauli(0);
  terms.push_back({Vec3::Zero(), mass});
  return terms;
}

ComplexMatrix walk_symbol(const WalkTerms& terms, const Vec3& k) {
  if (terms.empty()) throw std::invalid_argument("walk_symbol: empty walk");
  ComplexMatrix out = ComplexMatrix::Zero(terms.front().u.rows(), terms.front().u.cols());
  for (const auto& t : terms) out += std::exp(-kI * k.dot(t.h)) * t.u;
  return out;
}

IsotropyRep weyl_isotropy() {
  IsotropyRep rep;
  rep.elements.push_back({"I", Eigen::Matrix3d::Identity(), pauli(0)});
  const char* names[] = {"R(pi,x)", "R(pi,y)", "R(pi,z)"};
  for (int a = 0; a < 3; ++a) rep.elements.push_back({names[a], pi_rotation(a), kI * pauli(a + 1)});
  return rep;
}

IsotropyRep dirac_isotropy(DiracRepVariant variant) {
  IsotropyRep rep;
  rep.elements.push_back({"I", Eigen::Matrix3d::Identity(), ComplexMatrix::Identity(4, 4)});
  const char* names[] = {"R(pi,x)", "R(pi,y)", "R(pi,z)"};
  for (int a = 0; a < 3; ++a) {
    const ComplexMatrix s = pauli(a + 1);
    ComplexMatrix v;
    switch (variant) {
      case DiracRepVariant::Covariant:
        v = direct_sum(kI * s, kI * s);
        break;
      case DiracRepVariant::MinusSigma:
        v = direct_sum(-s, s);
        break;
      case DiracRepVariant::MinusSigmaY:
        v = direct_sum(-s, a == 2 ? pauli(2) : s);
        break;
    }
    rep.elements.push_back({names[a], pi_rotation(a), v});
  }
  return rep;
}

IsotropyRep trivial_isotropy(int dim) {
  IsotropyRep rep = weyl_isotropy();
  for (auto& e : rep.elements) e.v = ComplexMatrix::Identity(dim, dim);
  return rep;
}

double isotropy_covariance_check(const WalkTerms& terms, const IsotropyRep& rep) {
  double worst = 0.0;
  for (const auto& l : rep.elements) {
    for (const auto& t : terms) {
      const WalkTerm* image = find_term(terms, l.rotation * t.h);
      if (image == nullptr) throw std::invalid_argument("isotropy_covariance_check: generators not closed under " + l.name);
      worst = std::max(worst, max_abs(image->u - l.v * t.u * l.v.adjoint()));
    }
  }
  return worst;
}

double projective_closure_defect(const IsotropyRep& rep) {
  double worst = 0.0;
  for (const auto& a : rep.elements)
    for (const auto& b : rep.elements) {
      const Eigen::Matrix3d r = a.rotation * b.rotation;
      const auto it = std::find_if(rep.elements.begin(), rep.elements.end(),
                                   [&](const IsotropyElement& e) { return (e.rotation - r).cwiseAbs().maxCoeff() < 1e-12; });
      if (it == rep.elements.end()) return std::numeric_limits<double>::infinity();
      const ComplexMatrix prod = a.v * b.v;
      const Complex phase = (it->v.adjoint() * prod).trace() / (it->v.adjoint() * it->v).trace();
      worst = std::max({worst, max_abs(prod - phase * it->v), std::abs(std::abs(phase) - 1.0)});
    }
  return worst;
}

WalkModel weyl_model(Chirality chirality) {
  return {chirality == Chirality::Plus ? "weyl+" : "weyl-", [chirality](const Vec3& k) { return weyl_matrix(chirality, k); }};
}

WalkModel dirac_model(double m, Chirality chirality) {
  mass_norm(m);
  return {"dirac", [m, chirality](const Vec3& k) { return dirac_matrix(k, m, chirality); }};
}

WalkModel massless_1d_model() {
  return {"massless1d", [](const Vec3& k) { return massless_1d_matrix(k.x()); }};
}

std::vector<double> dispersion(const ComplexMatrix& u) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(u, false);
  std::vector<double> phases;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double w = std::arg(es.eigenvalues()(i));
    if (w <= -kPi) w = kPi;
    phases.push_back(w);
  }
  std::sort(phases.begin(), phases.end());
  return phases;
}

std::vector<double> dispersion(const WalkModel& walk, const Vec3& k) { return dispersion(walk.symbol(k)); }

bool in_brillouin_zone(const Vec3& k) {
  // Reciprocal lattice of the BCC lattice spanned by h1..h4: pi sqrt3 (a, b, c) with a + b + c even.
  const double g0 = kPi * std::sqrt(3.0);
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c) {
        if ((a + b + c) % 2 != 0 || (a == 0 && b == 0 && c == 0)) continue;
        const Vec3 g = g0 * Vec3(a, b, c);
        if (k.dot(g) > 0.5 * g.squaredNorm() + 1e-12) return false;
      }
  return true;
}

std::vector<Vec3> bz_grid(int n) {
  if (n < 1) throw std::invalid_argument("bz_grid: need n >= 1");
  const double half = 0.5 * kPi * std::sqrt(3.0);
  auto coord = [&](int j) { return n == 1 ? 0.0 : -half + 2.0 * half * j / (n - 1); };
  std::vector<Vec3> grid;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const Vec3 k(coord(i), coord(j), coord(l));
        if (in_brillouin_zone(k)) grid.push_back(k);
      }
  return grid;
}

std::vector<DispersionRow> dispersion_sweep(const WalkModel& walk, int n) {
  std::vector<DispersionRow> rows;
  for (const auto& k : bz_grid(n)) {
    const auto phases = dispersion(walk, k);
    for (std::size_t b = 0; b < phases.size(); ++b) rows.push_back({k, static_cast<int>(b), phases[b]});
  }
  return rows;
}

}  // namespace fca::walk
