#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fca/twop/two_particle.hpp"

namespace fca::sim {

// P(t, y) = sum_i |<e_i, y|psi_t>|^2 for t = 0..steps, y over the 2L-site ring.
struct SimulationTrace {
  twop::Params params;
  int steps = 0;
  std::vector<int> grid;                          // y = -L .. L-1
  std::vector<std::vector<double>> probabilities;  // steps + 1 rows

  double row_sum(int t) const;
  double max_row_defect() const;  // max_t |row_sum(t) - 1|
  double window_probability(int t, int half_width) const;  // P(t, |y| <= half_width)
};

// Accepts phi_b_plus, phi_b_minus, phi_b0, phi_s(k), phi_f(k), gaussian(y0, width, k0).
// Throws std::invalid_argument on unknown names, bad arguments or a vanishing state.
// With random_phases, each gaussian site amplitude gets a phase drawn from seed.
ComplexVector make_initial_state(const twop::Params& params, const std::string& desc, std::uint64_t seed = 0,
                                 bool random_phases = false);

// Throws std::invalid_argument if steps <= 0.
SimulationTrace evolve(const twop::Params& params, const ComplexVector& psi0, int steps);
SimulationTrace evolve(const twop::Params& params, const std::string& initial, int steps, std::uint64_t seed = 0,
                       bool random_phases = false);

inline constexpr int kLocalizationWindow = 2;
double localization_metric(const SimulationTrace& trace);  // P(T, |y| <= 2)

void write_trace_csv(std::ostream& os, const SimulationTrace& trace);

enum class SweepAxis { Lambda, P };

struct SweepConfig {
  SweepAxis axis = SweepAxis::Lambda;
  std::vector<double> values;  // |lambda| or p
  double p = 0.0;              // held fixed on the lambda axis
  double lambda_abs = 0.0;     // held fixed on the p axis
  double lambda_phase = 0.0;
  int L = 128;
  int steps = 100;
  std::string initial = "phi_b_plus";
  std::uint64_t seed = 0;
  bool random_phases = false;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
  double value;
  double metric;
};

// Rows sorted by value; an empty value list gives an empty table.
std::vector<SweepRow> sweep(const SweepConfig& config);
void write_sweep_csv(std::ostream& os, SweepAxis axis, const std::vector<SweepRow>& rows);

std::vector<double> linspace(double a, double b, int n);  // endpoints included; n = 1 gives {a}

std::string format_double(double x);  // 17 significant digits

}  // namespace fca::sim
