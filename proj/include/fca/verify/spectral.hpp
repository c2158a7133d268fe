#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fca/twop/two_particle.hpp"

namespace fca::verify {

struct SpectrumOptions {
  double cluster_tol = 1e-9;      // eigenvalues closer than this share a degenerate eigenspace
  double unitarity_tol = 1e-10;
};

struct SpectrumReport {
  twop::Params params;
  std::vector<twop::AntisymmetricVector> basis;
  std::vector<double> eigenphases;          // ascending, in (-pi, pi]
  std::vector<Complex> eigenvalues;         // same order
  ComplexMatrix eigenvectors;               // columns in the antisymmetric basis (6L x 6L)
  std::vector<double> participation;        // of the y-marginal
  std::vector<twop::Sector> sector;         // sector carrying most of the weight
  std::vector<std::array<double, 4>> sector_weight;
  double restriction_unitarity = 0.0;
  double max_eigen_residual = 0.0;          // max_j ||R v_j - z_j v_j||

  ComplexVector full_vector(std::size_t j) const;
  std::vector<double> y_marginal(std::size_t j) const;  // index y + L
};

// Throws std::runtime_error if the restriction to range(P_-) is not unitary within unitarity_tol.
SpectrumReport brute_spectrum(const twop::BlockedEvolution& ev, const SpectrumOptions& options = {});

double participation_ratio(const std::vector<double>& marginal);
std::vector<double> y_marginal(const ComplexVector& full, int L);

struct Match {
  std::size_t index = 0;
  double fidelity = 0.0;
  double eigenvalue_distance = 0.0;
};

// Best single eigenvector for an analytic state. With a window, both vectors are cut to |y| <= window
// and renormalized before the overlap is taken.
Match best_match(const SpectrumReport& report, const twop::AnalyticEigenstate& state, std::optional<int> window = std::nullopt);

struct LocalizationSummary {
  std::size_t eigenvectors = 0;
  std::size_t flat_band = 0;          // tagged to the non-interacting sectors a, b
  std::size_t localized_raw = 0;      // PR <= threshold over all eigenvectors
  std::size_t localized = 0;          // PR <= threshold outside the flat bands
  double min_participation = 0.0;     // outside the flat bands
};
LocalizationSummary localization_summary(const SpectrumReport& report, double threshold = 4.0);

enum class CompletenessGrid {
  Quantized,  // ring eigenstates at the exact quantized momenta
  Uniform,    // Riemann sum over k = 2 pi j / L of the delta-normalized infinite-lattice states, weight 1/L
};

struct CompletenessOptions {
  std::optional<int> window;  // |y| <= window on the chain, default L - 16
  bool include_bound = true;
  CompletenessGrid grid = CompletenessGrid::Quantized;
};

struct CompletenessResult {
  double defect = 0.0;        // spectral norm of (sum |phi><phi| - P_d) on the window
  std::size_t scattering = 0;
  std::size_t bound = 0;
  std::size_t dimension = 0;  // dim H_d
  int window = 0;
};

CompletenessResult completeness_check(const twop::Params& params, const CompletenessOptions& options = {});
// Same for H_c with the free states alone, on the whole sector.
double free_completeness_defect(const twop::Params& params);

// Norm of the part of a random H_d vector left after removing every analytic eigenstate in H_d.
double orthocomplement_residual(const twop::Params& params, std::uint64_t seed);

struct RecurrenceResidual {
  std::vector<int> n;
  std::vector<Complex> value;
  double max_abs() const;
};

// Lines of the Fourier recurrence for chi in H_d, read on the chain coordinates without wrap-around.
// delta defaults to gamma.
RecurrenceResidual recurrence_residual(const twop::Params& params, const ComplexVector& chi, std::optional<double> delta = std::nullopt);

enum class RootCase { B1, B2, B3 };  // eps^2 - 4 gamma >= 0 with gamma > 0; gamma < 0; eps^2 - 4 gamma < 0
const char* root_case_name(RootCase c);

struct RootSample {
  double p, lambda_abs, gamma, eps;
  double min_abs;
  RootCase root_case;
};

struct RootSweep {
  std::vector<RootSample> samples;
  double min_abs = 0.0;
  double max_b3_abs_error = 0.0;  // max | |r|^2 - 1/gamma | over case B3
  double max_b3_rel_error = 0.0;  // max | gamma |r|^2 - 1 |
  std::array<std::size_t, 3> counts{};
};

RootSweep root_bound_sweep(std::size_t n_samples, std::uint64_t seed);

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

struct VerifyReport {
  twop::Params params;
  std::vector<Check> checks;
  bool pass = true;
  void add(std::string name, double value, double threshold);
};

struct VerifyOptions {
  bool dense = true;  // include brute-force diagonalization (L <= 128)
  std::uint64_t seed = 1;
};

VerifyReport verify_point(const twop::Params& params, const VerifyOptions& options = {});

}  // namespace fca::verify
