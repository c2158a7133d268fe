#include "fca/verify/spectral.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace fca::verify {

namespace {

using twop::Params;
using twop::Sector;
using twop::state_index;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double phase_of(Complex z) {
  const double w = std::arg(z);
  return w <= -kPi ? kPi : w;
}

double spectral_norm_hermitian(const ComplexMatrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Label used to pick a canonical basis inside a degenerate eigenspace: separates the three internal
// channels, then |y|, then the sign of y.
RealVector canonical_labels(const std::vector<twop::AntisymmetricVector>& basis, int L) {
  RealVector s(static_cast<Eigen::Index>(basis.size()));
  const double big = 10.0 * (L + 1);
  for (std::size_t b = 0; b < basis.size(); ++b)
    s(static_cast<Eigen::Index>(b)) = big * basis[b].internal + std::abs(basis[b].y) + (basis[b].y < 0 ? 0.25 : 0.0);
  return s;
}

ComplexVector chain_plane_wave(int L, double k) {
  ComplexVector v = ComplexVector::Zero(L + 2);
  for (int n = 0; n < L; ++n) v(n) = std::exp(-kI * k * static_cast<double>(twop::hd_chain_site(n, L))) / std::sqrt(double(L));
  return v;
}

// Orthonormal-ish family of H_d states, in chain coordinates.
std::vector<ComplexVector> hd_states(const Params& params, bool include_bound, CompletenessGrid grid, std::size_t* scattering,
                                     std::size_t* bound) {
  const int L = params.L;
  std::vector<ComplexVector> states;
  *scattering = *bound = 0;
  if (twop::criticality(params).coupling_even_multiple) {
    // J is the identity: plane waves on the chain and the two frozen impurity channels.
    for (double k : twop::free_momenta(L)) states.push_back(chain_plane_wave(L, k));
    *scattering = states.size();
    if (include_bound) {
      for (int u = 0; u < 2; ++u) {
        ComplexVector v = ComplexVector::Zero(L + 2);
        v(L + u) = 1.0;
        states.push_back(v);
      }
      *bound = 2;
    }
    return states;
  }
  if (grid == CompletenessGrid::Uniform) {
    // Unit amplitude per chain site: divide the unnormalized state by sqrt2 |c_k|, then weight by 1/L.
    for (double k : twop::free_momenta(L)) {
      const auto s = twop::analytic_scattering_state(params, k);
      const double c = std::abs(s.coefficients.c_k);
      if (c < 1e-12) throw std::runtime_error("completeness_check: c_k vanishes on the uniform grid");
      states.push_back(twop::hd_coordinates(s.vector, L) * (s.coefficients.norm / (std::sqrt(2.0 * L) * c)));
    }
  } else {
    for (double k : twop::scattering_momenta(params))
      states.push_back(twop::hd_coordinates(twop::analytic_scattering_state(params, k).vector, L));
  }
  *scattering = states.size();
  if (include_bound)
    for (const auto& b : twop::bound_states(params)) {
      states.push_back(twop::hd_coordinates(b.vector, L));
      ++*bound;
    }
  return states;
}

}  // namespace

std::vector<double> y_marginal(const ComplexVector& full, int L) {
  std::vector<double> p(2 * L, 0.0);
  for (int i = 0; i < 6; ++i)
    for (int y = -L; y < L; ++y) p[y + L] += std::norm(full(state_index(i, y, L)));
  return p;
}

double participation_ratio(const std::vector<double>& marginal) {
  double s = 0.0, s2 = 0.0;
  for (double p : marginal) {
    s += p;
    s2 += p * p;
  }
  return s2 == 0.0 ? 0.0 : s * s / s2;
}

ComplexVector SpectrumReport::full_vector(std::size_t j) const {
  const int L = params.L;
  ComplexVector v = ComplexVector::Zero(params.dim());
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const Complex c = eigenvectors(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)) * kInvSqrt2;
    v(state_index(basis[b].internal, basis[b].y, L)) += c;
    v(state_index(basis[b].internal + 3, -basis[b].y, L)) -= c;
  }
  return v;
}

std::vector<double> SpectrumReport::y_marginal(std::size_t j) const {
  const int L = params.L;
  std::vector<double> p(2 * L, 0.0);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const double w = 0.5 * std::norm(eigenvectors(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)));
    p[basis[b].y + L] += w;
    p[twop::wrap(-basis[b].y, L) + L] += w;
  }
  return p;
}

SpectrumReport brute_spectrum(const twop::BlockedEvolution& ev, const SpectrumOptions& options) {
  SpectrumReport report;
  report.params = ev.params();
  const int L = report.params.L;
  report.basis = twop::antisymmetric_basis(L);
  const ComplexMatrix r = ev.restricted_matrix();
  report.restriction_unitarity = unitarity_defect(r);
  if (report.restriction_unitarity > options.unitarity_tol)
    throw std::runtime_error("brute_spectrum: restriction to range(P_-) is not unitary");

  // The restriction is normal, so its Schur vectors are eigenvectors.
  Eigen::ComplexSchur<ComplexMatrix> schur(r);
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& u = schur.matrixU();
  const Eigen::Index n = r.rows();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return phase_of(t(a, a)) < phase_of(t(b, b)); });

  report.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    report.eigenvalues.push_back(t(order[j], order[j]));
    report.eigenvectors.col(j) = u.col(order[j]);
  }

  // Group degenerate eigenvalues (cyclically) and canonicalize each group.
  std::vector<std::vector<Eigen::Index>> clusters;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!clusters.empty() && std::abs(report.eigenvalues[j] - report.eigenvalues[clusters.back().back()]) < options.cluster_tol)
      clusters.back().push_back(j);
    else
      clusters.push_back({j});
  }
  if (clusters.size() > 1 &&
      std::abs(report.eigenvalues[clusters.front().front()] - report.eigenvalues[clusters.back().back()]) < options.cluster_tol) {
    clusters.front().insert(clusters.front().end(), clusters.back().begin(), clusters.back().end());
    clusters.pop_back();
  }
  const RealVector labels = canonical_labels(report.basis, L);
  for (const auto& c : clusters) {
    if (c.size() < 2) continue;
    const auto m = static_cast<Eigen::Index>(c.size());
    ComplexMatrix v(n, m);
    for (Eigen::Index a = 0; a < m; ++a) v.col(a) = report.eigenvectors.col(c[a]);
    const ComplexMatrix s = v.adjoint() * labels.asDiagonal() * v;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (s + s.adjoint()));
    const ComplexMatrix rotated = v * es.eigenvectors();
    for (Eigen::Index a = 0; a < m; ++a) report.eigenvectors.col(c[a]) = rotated.col(a);
  }

  ComplexMatrix residual = r * report.eigenvectors;
  for (Eigen::Index j = 0; j < n; ++j) residual.col(j) -= report.eigenvalues[j] * report.eigenvectors.col(j);
  report.max_eigen_residual = residual.colwise().norm().maxCoeff();

  for (Eigen::Index j = 0; j < n; ++j) {
    report.eigenphases.push_back(phase_of(report.eigenvalues[j]));
    const ComplexVector col = report.eigenvectors.col(j);
    report.participation.push_back(participation_ratio(report.y_marginal(j)));
    std::array<double, 4> w{};
    for (std::size_t b = 0; b < report.basis.size(); ++b)
      w[static_cast<int>(report.basis[b].sector)] += std::norm(col(static_cast<Eigen::Index>(b)));
    report.sector_weight.push_back(w);
    report.sector.push_back(static_cast<Sector>(std::max_element(w.begin(), w.end()) - w.begin()));
  }
  return report;
}

Match best_match(const SpectrumReport& report, const twop::AnalyticEigenstate& state, std::optional<int> window) {
  const int L = report.params.L;
  const auto n = static_cast<Eigen::Index>(report.basis.size());
  ComplexVector beta(n);
  RealVector mask(n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const auto& v = report.basis[static_cast<std::size_t>(b)];
    beta(b) = kInvSqrt2 * (state.vector(state_index(v.internal, v.y, L)) - state.vector(state_index(v.internal + 3, -v.y, L)));
    mask(b) = (!window || std::abs(v.y) <= *window) ? 1.0 : 0.0;
  }
  const ComplexVector masked_state = mask.asDiagonal() * beta;
  const double state_norm = masked_state.norm();
  Match best;
  if (state_norm == 0.0) return best;
  const ComplexMatrix masked = mask.asDiagonal() * report.eigenvectors;
  const ComplexVector overlaps = masked.adjoint() * masked_state;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double norm = masked.col(j).norm();
    if (norm == 0.0) continue;
    const double f = std::norm(overlaps(j)) / (norm * norm * state_norm * state_norm);
    if (f > best.fidelity) {
      best.fidelity = std::min(f, 1.0);
      best.index = static_cast<std::size_t>(j);
      best.eigenvalue_distance = std::abs(report.eigenvalues[static_cast<std::size_t>(j)] - state.eigenvalue);
    }
  }
  return best;
}

LocalizationSummary localization_summary(const SpectrumReport& report, double threshold) {
  LocalizationSummary s;
  s.eigenvectors = report.participation.size();
  s.min_participation = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < s.eigenvectors; ++j) {
    const double pr = report.participation[j];
    if (pr <= threshold) ++s.localized_raw;
    if (report.sector[j] == Sector::A || report.sector[j] == Sector::B) {
      ++s.flat_band;
      continue;
    }
    if (pr <= threshold) ++s.localized;
    s.min_participation = std::min(s.min_participation, pr);
  }
  return s;
}

CompletenessResult completeness_check(const Params& params, const CompletenessOptions& options) {
  params.validate();
  const int L = params.L;
  CompletenessResult result;
  result.window = options.window.value_or(L - 16);
  if (result.window < 0) throw std::invalid_argument("completeness_check: window must be nonnegative");
  result.dimension = static_cast<std::size_t>(L + 2);

  const auto states = hd_states(params, options.include_bound, options.grid, &result.scattering, &result.bound);
  ComplexMatrix sum = -ComplexMatrix::Identity(L + 2, L + 2);
  for (const auto& v : states) sum.noalias() += v * v.adjoint();

  std::vector<Eigen::Index> keep;
  for (int nidx = 0; nidx < L; ++nidx)
    if (2 * std::abs(twop::hd_chain_site(nidx, L)) <= result.window) keep.push_back(nidx);
  keep.push_back(L);
  keep.push_back(L + 1);
  const auto m = static_cast<Eigen::Index>(keep.size());
  ComplexMatrix window(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) window(a, b) = sum(keep[a], keep[b]);
  result.defect = spectral_norm_hermitian(window);
  return result;
}

double free_completeness_defect(const Params& params) {
  params.validate();
  const int L = params.L;
  ComplexMatrix sum = -ComplexMatrix::Identity(L, L);
  for (double k : twop::free_momenta(L)) {
    const ComplexVector full = twop::analytic_free_state(params, k).vector;
    ComplexVector c(L);
    int idx = 0;
    for (int y = -L + 1; y < L; y += 2)
      c(idx++) = kInvSqrt2 * (full(state_index(2, y, L)) - full(state_index(5, -y, L)));
    sum.noalias() += c * c.adjoint();
  }
  return spectral_norm_hermitian(sum);
}

double orthocomplement_residual(const Params& params, std::uint64_t seed) {
  params.validate();
  const int L = params.L;
  std::size_t scattering = 0, bound = 0;
  const auto states = hd_states(params, true, CompletenessGrid::Quantized, &scattering, &bound);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexVector chi(L + 2);
  for (Eigen::Index i = 0; i < chi.size(); ++i) chi(i) = Complex(g(rng), g(rng));
  chi.normalize();
  if (states.empty()) return chi.norm();
  ComplexMatrix a(L + 2, static_cast<Eigen::Index>(states.size()));
  for (std::size_t j = 0; j < states.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = states[j];
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  const Eigen::Index rank = std::min(a.rows(), a.cols());
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(a.rows(), rank);
  return (chi - q * (q.adjoint() * chi)).norm();
}

double RecurrenceResidual::max_abs() const {
  double m = 0.0;
  for (const auto& v : value) m = std::max(m, std::abs(v));
  return m;
}

RecurrenceResidual recurrence_residual(const Params& params, const ComplexVector& chi, std::optional<double> delta) {
  params.validate();
  const int L = params.L;
  if (chi.size() != params.dim()) throw std::invalid_argument("recurrence_residual: dimension mismatch");
  const twop::Coefficients base = twop::base_coefficients(params);
  const double g = base.gamma, eps = base.eps, d = delta.value_or(g);
  const Complex sigma = base.sigma;
  const Complex c10 = std::conj(chi(state_index(0, 0, L)));
  const Complex c20 = std::conj(chi(state_index(1, 0, L)));

  const int xlo = twop::hd_chain_site(0, L), xhi = twop::hd_chain_site(L - 1, L);
  std::vector<Complex> c3(static_cast<std::size_t>(L));
  int lo = 0, hi = 1;
  bool any = false;
  for (int x = xlo; x <= xhi; ++x) {
    c3[x - xlo] = std::conj(chi(state_index(2, 2 * x, L)));
    if (c3[x - xlo] != Complex(0.0)) {
      if (!any) lo = x;
      hi = std::max(hi, x);
      any = true;
    }
  }
  lo = std::min(lo, 0);
  auto c = [&](int x) { return (x < xlo || x > xhi) ? Complex(0.0) : c3[x - xlo]; };

  RecurrenceResidual out;
  const Complex e2m = std::exp(-2.0 * kI * params.p), e2p = std::exp(2.0 * kI * params.p);
  for (int n = lo - 1; n <= hi + 1; ++n) {
    Complex v;
    if (n <= -1)
      v = g * c(n - 1) - eps * c(n) + c(n + 1);
    else if (n == 0)
      v = g * c(-1) - eps * c(0) + sigma * e2m * c10 + sigma * e2p * c20 + d * c(1);
    else if (n == 1)
      v = g * c(0) - sigma * c10 - sigma * c20 - eps * c(1) + d * c(2);
    else
      v = c(n - 1) - eps * c(n) + g * c(n + 1);
    out.n.push_back(n);
    out.value.push_back(v);
  }
  return out;
}

const char* root_case_name(RootCase c) {
  switch (c) {
    case RootCase::B1:
      return "B1";
    case RootCase::B2:
      return "B2";
    case RootCase::B3:
      return "B3";
  }
  return "?";
}

RootSweep root_bound_sweep(std::size_t n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> up(-kPi, kPi), ul(0.0, 2.0 * kPi / std::sqrt(2.0));
  RootSweep sweep;
  sweep.min_abs = std::numeric_limits<double>::infinity();
  while (sweep.samples.size() < n_samples) {
    Params params{up(rng), ul(rng), 8};
    const twop::Coefficients c = twop::base_coefficients(params);
    if (c.gamma == 0.0) continue;
    const auto r = twop::characteristic_roots(c.gamma, c.eps);
    RootSample s{params.p, std::abs(params.lambda), c.gamma, c.eps, std::min(std::abs(r.r_plus), std::abs(r.r_minus)), RootCase::B1};
    if (c.eps * c.eps - 4.0 * c.gamma < 0.0) {
      s.root_case = RootCase::B3;
      for (Complex x : {r.r_plus, r.r_minus}) {
        sweep.max_b3_abs_error = std::max(sweep.max_b3_abs_error, std::abs(std::norm(x) - 1.0 / c.gamma));
        sweep.max_b3_rel_error = std::max(sweep.max_b3_rel_error, std::abs(c.gamma * std::norm(x) - 1.0));
      }
    } else if (c.gamma < 0.0) {
      s.root_case = RootCase::B2;
    }
    ++sweep.counts[static_cast<int>(s.root_case)];
    sweep.min_abs = std::min(sweep.min_abs, s.min_abs);
    sweep.samples.push_back(s);
  }
  return sweep;
}

void VerifyReport::add(std::string name, double value, double threshold) {
  const bool ok = value < threshold;
  checks.push_back({std::move(name), value, threshold, ok});
  pass = pass && ok;
}

VerifyReport verify_point(const Params& params, const VerifyOptions& options) {
  params.validate();
  VerifyReport report;
  report.params = params;
  const twop::BlockedEvolution ev(params);
  const int L = params.L;
  const twop::Criticality crit = twop::criticality(params);

  std::vector<twop::AnalyticEigenstate> states;
  for (double k : twop::free_momenta(L)) states.push_back(twop::analytic_free_state(params, k));
  const std::size_t free_count = states.size();
  std::size_t scattering = 0;
  if (!crit.coupling_even_multiple) {
    for (double k : twop::scattering_momenta(params)) states.push_back(twop::analytic_scattering_state(params, k));
    scattering = states.size() - free_count;
  }
  const auto bound = twop::bound_states(params);
  states.insert(states.end(), bound.begin(), bound.end());

  double free_res = 0.0, scat_res = 0.0, bound_res = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double res = (ev.apply(states[i].vector) - states[i].eigenvalue * states[i].vector).norm();
    if (i < free_count)
      free_res = std::max(free_res, res);
    else if (i < free_count + scattering)
      scat_res = std::max(scat_res, res);
    else
      bound_res = std::max(bound_res, res);
  }
  report.add("phi_f_residual", free_res, 1e-10);
  if (!crit.coupling_even_multiple) {
    report.add("phi_s_residual", scat_res, 1e-8);
    report.add("state_count_mismatch", std::abs(static_cast<double>(scattering + bound.size()) - (L + 2)), 0.5);
  }
  if (!bound.empty()) report.add("bound_residual", bound_res, 1e-12);
  report.add("completeness_defect", completeness_check(params).defect, 1e-6);
  report.add("free_completeness_defect", free_completeness_defect(params), 1e-10);
  report.add("orthocomplement_residual", orthocomplement_residual(params, options.seed), 1e-8);

  if (options.dense && L <= 128) {
    report.add("sector_decomposition_defect", twop::decomposition_defect(params), 1e-12);
    const SpectrumReport spec = brute_spectrum(ev);
    report.add("restriction_unitarity", spec.restriction_unitarity, 1e-12);
    report.add("eigen_residual", spec.max_eigen_residual, 1e-10);
    double worst_distance = 0.0, worst_infidelity = 0.0;
    if (!crit.coupling_even_multiple)
      for (const auto& s : states) {
        const Match m = best_match(spec, s);
        worst_distance = std::max(worst_distance, m.eigenvalue_distance);
        worst_infidelity = std::max(worst_infidelity, 1.0 - m.fidelity);
      }
    report.add("oracle_eigenvalue_distance", worst_distance, 1e-8);
    report.add("oracle_infidelity", worst_infidelity, 1e-6);
  }
  return report;
}

}  // namespace fca::verify
