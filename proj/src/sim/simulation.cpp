#include "fca/sim/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace fca::sim {

using twop::Params;

double SimulationTrace::row_sum(int t) const {
  double s = 0.0;
  for (double v : probabilities.at(t)) s += v;
  return s;
}

double SimulationTrace::max_row_defect() const {
  double worst = 0.0;
  for (int t = 0; t <= steps; ++t) worst = std::max(worst, std::abs(row_sum(t) - 1.0));
  return worst;
}

double SimulationTrace::window_probability(int t, int half_width) const {
  const auto& row = probabilities.at(t);
  double s = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j)
    if (std::abs(grid[j]) <= half_width) s += row[j];
  return s;
}

namespace {

struct ParsedState {
  std::string name;
  std::vector<double> args;
  bool has_parens = false;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& desc) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v))
    throw std::invalid_argument("initial state '" + desc + "': bad number '" + t + "'");
  return v;
}

ParsedState parse_state(const std::string& desc) {
  ParsedState out;
  const std::string s = trim(desc);
  const auto open = s.find('(');
  if (open == std::string::npos) {
    out.name = s;
    return out;
  }
  if (s.back() != ')') throw std::invalid_argument("initial state '" + desc + "': missing ')'");
  out.name = trim(s.substr(0, open));
  out.has_parens = true;
  const std::string inner = s.substr(open + 1, s.size() - open - 2);
  std::size_t start = 0;
  while (true) {
    const auto comma = inner.find(',', start);
    out.args.push_back(parse_number(inner.substr(start, comma - start), desc));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void require_args(const ParsedState& ps, std::size_t n, const std::string& desc) {
  if (ps.args.size() != n || (n > 0 && !ps.has_parens) || (n == 0 && ps.has_parens))
    throw std::invalid_argument("initial state '" + desc + "': expected " + std::to_string(n) + " argument(s)");
}

ComplexVector gaussian_state(const Params& params, double y0, double width, double k0, std::uint64_t seed,
                             bool random_phases) {
  const int L = params.L;
  if (y0 != std::floor(y0)) throw std::invalid_argument("gaussian: y0 must be an integer site");
  if (width < 0.0) throw std::invalid_argument("gaussian: width must be >= 0");
  const int centre = twop::wrap(static_cast<int>(y0), L);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  ComplexVector v = ComplexVector::Zero(params.dim());
  for (int y = -L; y < L; ++y) {
    const int d = twop::wrap(y - centre, L);
    double env = 0.0;
    if (width == 0.0)
      env = d == 0 ? 1.0 : 0.0;
    else
      env = std::exp(-double(d) * double(d) / (2.0 * width * width));
    Complex a = env * std::exp(kI * k0 * double(y));
    if (random_phases) a *= std::exp(kI * angle(rng));
    if (env == 0.0) continue;
    v(twop::state_index(2, y, L)) += a;
    v(twop::state_index(5, twop::wrap(-y, L), L)) -= a;
  }
  const double n = v.norm();
  if (!(n > 0.0)) throw std::invalid_argument("gaussian: state vanishes");
  return v / n;
}

}  // namespace

ComplexVector make_initial_state(const Params& params, const std::string& desc, std::uint64_t seed, bool random_phases) {
  params.validate();
  const ParsedState ps = parse_state(desc);
  using twop::Family;
  if (ps.name == "phi_b_plus" || ps.name == "phi_b_minus" || ps.name == "phi_b0") {
    require_args(ps, 0, desc);
    const Family f = ps.name == "phi_b_plus" ? Family::PhiBPlus : ps.name == "phi_b_minus" ? Family::PhiBMinus : Family::PhiB0;
    return twop::bound_state_vector(params, f).vector;
  }
  if (ps.name == "phi_s") {
    require_args(ps, 1, desc);
    return twop::analytic_scattering_state(params, ps.args[0]).vector;
  }
  if (ps.name == "phi_f") {
    require_args(ps, 1, desc);
    return twop::analytic_free_state(params, ps.args[0]).vector;
  }
  if (ps.name == "gaussian") {
    require_args(ps, 3, desc);
    return gaussian_state(params, ps.args[0], ps.args[1], ps.args[2], seed, random_phases);
  }
  throw std::invalid_argument("unknown initial state '" + desc + "'");
}

namespace {

std::vector<double> marginal(const ComplexVector& v, int L) {
  std::vector<double> row(2 * L, 0.0);
  for (int i = 0; i < 6; ++i)
    for (int y = -L; y < L; ++y) row[y + L] += std::norm(v(twop::state_index(i, y, L)));
  return row;
}

}  // namespace

SimulationTrace evolve(const Params& params, const ComplexVector& psi0, int steps) {
  if (steps <= 0) throw std::invalid_argument("evolve: T must be positive");
  params.validate();
  if (psi0.size() != params.dim()) throw std::invalid_argument("evolve: initial state has the wrong dimension");
  const twop::BlockedEvolution ev(params);
  SimulationTrace trace;
  trace.params = params;
  trace.steps = steps;
  for (int y = -params.L; y < params.L; ++y) trace.grid.push_back(y);
  trace.probabilities.reserve(steps + 1);
  ComplexVector psi = psi0;
  trace.probabilities.push_back(marginal(psi, params.L));
  for (int t = 1; t <= steps; ++t) {
    psi = ev.apply(psi);
    trace.probabilities.push_back(marginal(psi, params.L));
  }
  return trace;
}

SimulationTrace evolve(const Params& params, const std::string& initial, int steps, std::uint64_t seed, bool random_phases) {
  if (steps <= 0) throw std::invalid_argument("evolve: T must be positive");
  return evolve(params, make_initial_state(params, initial, seed, random_phases), steps);
}

double localization_metric(const SimulationTrace& trace) {
  return trace.window_probability(trace.steps, kLocalizationWindow);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
  os << "t,y,probability\n";
  for (int t = 0; t <= trace.steps; ++t)
    for (std::size_t j = 0; j < trace.grid.size(); ++j)
      os << t << ',' << trace.grid[j] << ',' << format_double(trace.probabilities[t][j]) << '\n';
}

std::vector<SweepRow> sweep(const SweepConfig& config) {
  const std::size_t n = config.values.size();
  std::vector<SweepRow> rows(n);
  if (n == 0) return rows;

  auto point = [&](std::size_t j) {
    const double v = config.values[j];
    const Params params = config.axis == SweepAxis::Lambda ? Params::from_polar(config.p, v, config.lambda_phase, config.L)
                                                           : Params::from_polar(v, config.lambda_abs, config.lambda_phase, config.L);
    const auto trace = evolve(params, config.initial, config.steps, config.seed, config.random_phases);
    rows[j] = {v, localization_metric(trace)};
  };

  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned w) {
    try {
      for (std::size_t j = next++; j < n; j = next++) point(j);
    } catch (...) {
      errors[w] = std::current_exception();
      next = n;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.value < b.value; });
  return rows;
}

void write_sweep_csv(std::ostream& os, SweepAxis axis, const std::vector<SweepRow>& rows) {
  os << (axis == SweepAxis::Lambda ? "lambda" : "p") << ",metric\n";
  for (const auto& r : rows) os << format_double(r.value) << ',' << format_double(r.metric) << '\n';
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  if (n == 1) return {a};
  out.reserve(n);
  for (int j = 0; j < n; ++j) out.push_back(j == n - 1 ? b : a + (b - a) * double(j) / double(n - 1));
  return out;
}

}  // namespace fca::sim
