#include "fca/cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "fca/classify/classifier.hpp"
#include "fca/sim/simulation.hpp"
#include "fca/verify/spectral.hpp"
#include "fca/walk/walk.hpp"

namespace fca::cli {

namespace {

using nlohmann::json;
using sim::format_double;

struct RunConfig {
  double p = kPi / 4;
  double lambda_abs = kPi / std::sqrt(2.0);
  double lambda_phase = 0.0;
  int L = 128;
  int steps = 100;
  int k_grid = 17;
  std::string initial = "phi_b_plus";
  std::string out;
  std::uint64_t seed = 0;
  bool random_phases = false;

  std::string rep_variant = "covariant";
  bool include_quadratic = false;

  std::string walk = "weyl-plus";
  double mass = 0.0;

  std::string axis = "lambda";
  double from = kPi / std::sqrt(2.0);
  double to = 2.0 * kPi / std::sqrt(2.0);
  int points = 33;
  unsigned threads = 0;

  bool dense = true;

  twop::Params params() const { return twop::Params::from_polar(p, lambda_abs, lambda_phase, L); }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes to --out if set, otherwise to the given stream.
void emit(const RunConfig& cfg, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (cfg.out.empty() || cfg.out == "-") {
    body(out);
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + cfg.out + "'");
  body(f);
  if (!f) throw std::runtime_error("write to '" + cfg.out + "' failed");
}

json params_json(const twop::Params& params) {
  return {{"p", params.p}, {"lambda-abs", std::abs(params.lambda)}, {"lambda-phase", std::arg(params.lambda)}, {"L", params.L}};
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  walk::DiracRepVariant variant = walk::DiracRepVariant::Covariant;
  if (cfg.rep_variant == "minus-sigma") variant = walk::DiracRepVariant::MinusSigma;
  if (cfg.rep_variant == "minus-sigma-y") variant = walk::DiracRepVariant::MinusSigmaY;
  const auto rep = walk::dirac_isotropy(variant);
  classify::SolveOptions opts;
  opts.include_quadratic = cfg.include_quadratic;
  const auto basis = classify::solve_invariants(rep, opts);
  const auto report = classify::match_to_reference(basis, rep);

  json families = json::array();
  for (const auto& v : report.verdicts)
    families.push_back({{"name", v.name},
                        {"complex", v.complex_coupling},
                        {"contained", v.contained},
                        {"partner_contained", v.partner_contained},
                        {"commutes", v.commutes}});
  json basis_labels = json::array();
  for (const auto& row : basis.coordinates) {
    json terms = json::array();
    for (std::size_t g = 0; g < row.size(); ++g)
      if (row[g] != 0) terms.push_back({{"generator", basis.generators[g].label()}, {"coefficient", row[g].get_str()}});
    basis_labels.push_back(terms);
  }
  const json doc = {{"rep_variant", cfg.rep_variant},
                    {"include_quadratic", cfg.include_quadratic},
                    {"dimension", basis.dimension},
                    {"coupling_count", report.coupling_count},
                    {"imaginary_dimension", basis.imaginary_dimension},
                    {"family_count", report.family_count},
                    {"family_real_dimension", report.family_real_dimension},
                    {"span_equal", report.span_equal},
                    {"families", families},
                    {"failures", report.failures},
                    {"basis", basis_labels},
                    {"pass", report.pass}};
  emit(cfg, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return report.pass ? kOk : kVerificationFailed;
}

int cmd_dispersion(const RunConfig& cfg, std::ostream& out) {
  if (cfg.k_grid < 1) throw UsageError("--k-grid must be >= 1");
  walk::WalkModel model = walk::weyl_model(walk::Chirality::Plus);
  if (cfg.walk == "weyl-minus") model = walk::weyl_model(walk::Chirality::Minus);
  if (cfg.walk == "dirac") model = walk::dirac_model(cfg.mass);
  if (cfg.walk == "massless-1d") model = walk::massless_1d_model();
  const auto rows = walk::dispersion_sweep(model, cfg.k_grid);
  emit(cfg, out, [&](std::ostream& os) {
    os << "k1,k2,k3,branch,omega\n";
    for (const auto& r : rows)
      os << format_double(r.k.x()) << ',' << format_double(r.k.y()) << ',' << format_double(r.k.z()) << ',' << r.branch << ','
         << format_double(r.omega) << '\n';
  });
  return kOk;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  if (cfg.L > 256) throw UsageError("spectrum: dense diagonalization is limited to L <= 256");
  const auto spec = verify::brute_spectrum(twop::BlockedEvolution(cfg.params()));
  emit(cfg, out, [&](std::ostream& os) {
    os << "index,phase,re,im,participation,sector\n";
    for (std::size_t j = 0; j < spec.eigenphases.size(); ++j)
      os << j << ',' << format_double(spec.eigenphases[j]) << ',' << format_double(spec.eigenvalues[j].real()) << ','
         << format_double(spec.eigenvalues[j].imag()) << ',' << format_double(spec.participation[j]) << ','
         << twop::sector_name(spec.sector[j]) << '\n';
  });
  return kOk;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out) {
  const auto trace = sim::evolve(cfg.params(), cfg.initial, cfg.steps, cfg.seed, cfg.random_phases);
  emit(cfg, out, [&](std::ostream& os) { sim::write_trace_csv(os, trace); });
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.points < 0) throw UsageError("--points must be >= 0");
  sim::SweepConfig sc;
  sc.axis = cfg.axis == "p" ? sim::SweepAxis::P : sim::SweepAxis::Lambda;
  sc.values = sim::linspace(cfg.from, cfg.to, cfg.points);
  sc.p = cfg.p;
  sc.lambda_abs = cfg.lambda_abs;
  sc.lambda_phase = cfg.lambda_phase;
  sc.L = cfg.L;
  sc.steps = cfg.steps;
  sc.initial = cfg.initial;
  sc.seed = cfg.seed;
  sc.random_phases = cfg.random_phases;
  sc.threads = cfg.threads;
  if (!sc.values.empty()) {
    // Fail on a bad initial state or parameters before spawning workers.
    const twop::Params probe = sc.axis == sim::SweepAxis::Lambda ? twop::Params::from_polar(sc.p, sc.values[0], sc.lambda_phase, sc.L)
                                                                 : twop::Params::from_polar(sc.values[0], sc.lambda_abs, sc.lambda_phase, sc.L);
    sim::make_initial_state(probe, sc.initial, sc.seed, sc.random_phases);
    if (sc.steps <= 0) throw std::invalid_argument("evolve: T must be positive");
  }
  const auto rows = sim::sweep(sc);
  emit(cfg, out, [&](std::ostream& os) { sim::write_sweep_csv(os, sc.axis, rows); });
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  verify::VerifyOptions opts;
  opts.dense = cfg.dense;
  opts.seed = cfg.seed;
  const auto report = verify::verify_point(cfg.params(), opts);
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  const json doc = {{"params", params_json(report.params)}, {"checks", checks}, {"pass", report.pass}};
  emit(cfg, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return report.pass ? kOk : kVerificationFailed;
}

std::string json_scalar(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return format_double(v.get<double>());
  throw UsageError("config key '" + key + "' must be a string, number or boolean");
}

// Pulls --config out of the argument list and returns the parsed document, if any.
std::optional<json> take_config(std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a file path");
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (!path) return std::nullopt;
  std::ifstream f(*path);
  if (!f) throw UsageError("cannot read config file '" + *path + "'");
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + *path + "': " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file '" + *path + "' must hold a JSON object");
  return doc;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Interacting fermionic cellular automaton: walks, interaction classification, two-particle dynamics"};
  app.name("fca");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto add_lattice = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "Total momentum p")->capture_default_str();
    sub->add_option("--lambda-abs", cfg.lambda_abs, "|lambda|; the critical couplings are n pi / sqrt2")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--lambda-phase", cfg.lambda_phase, "arg(lambda)")->capture_default_str();
    sub->add_option("--L", cfg.L, "Half ring size; the relative coordinate runs over 2L sites")->capture_default_str();
  };
  auto add_dynamics = [&](CLI::App* sub) {
    sub->add_option("--T,--steps", cfg.steps, "Number of time steps")->capture_default_str();
    sub->add_option("--initial", cfg.initial,
                    "phi_b_plus | phi_b_minus | phi_b0 | phi_s(k) | phi_f(k) | gaussian(y0,width,k0)")
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Seed for randomized gaussian phases")->capture_default_str();
    sub->add_flag("--random-phases", cfg.random_phases, "Randomize the gaussian site phases");
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "Output file (default stdout)"); };

  auto* classify = app.add_subcommand("classify", "Solve for the invariant local interactions and match them to the reference families");
  classify->add_option("--rep-variant", cfg.rep_variant, "Isotropy representation of the Dirac walk")
      ->check(CLI::IsMember({"covariant", "minus-sigma", "minus-sigma-y"}))
      ->capture_default_str();
  classify->add_flag("--include-quadratic", cfg.include_quadratic, "Also admit degree-2 monomials");
  add_out(classify);

  auto* dispersion = app.add_subcommand("dispersion", "Walk dispersion over a Brillouin-zone grid (CSV k1,k2,k3,branch,omega)");
  dispersion->add_option("--walk", cfg.walk)->check(CLI::IsMember({"weyl-plus", "weyl-minus", "dirac", "massless-1d"}))->capture_default_str();
  dispersion->add_option("--mass", cfg.mass, "Dirac mass m, |m| <= 1")->capture_default_str()->check(CLI::Range(-1.0, 1.0));
  dispersion->add_option("--k-grid", cfg.k_grid, "Points per axis")->capture_default_str();
  add_out(dispersion);

  auto* spectrum = app.add_subcommand("spectrum", "Dense spectrum of the blocked two-particle evolution (CSV)");
  add_lattice(spectrum);
  add_out(spectrum);

  auto* evolve = app.add_subcommand("evolve", "Time evolution; CSV t,y,probability");
  add_lattice(evolve);
  add_dynamics(evolve);
  add_out(evolve);

  auto* sweep = app.add_subcommand("sweep", "Localization metric P(T, |y| <= 2) over a lambda or p range");
  add_lattice(sweep);
  add_dynamics(sweep);
  sweep->add_option("--axis", cfg.axis)->check(CLI::IsMember({"lambda", "p"}))->capture_default_str();
  sweep->add_option("--from", cfg.from, "First value (|lambda| or p)")->capture_default_str();
  sweep->add_option("--to", cfg.to, "Last value, included")->capture_default_str();
  sweep->add_option("--points", cfg.points, "Number of values; 0 gives an empty table")->capture_default_str();
  sweep->add_option("--threads", cfg.threads, "Worker threads, 0 for all cores")->capture_default_str();
  add_out(sweep);

  auto* verify = app.add_subcommand("verify", "Check every analytic eigenstate against the evolution; JSON report");
  add_lattice(verify);
  verify->add_option("--seed", cfg.seed, "Seed for the random probe vector")->capture_default_str();
  verify->add_flag("--dense,!--no-dense", cfg.dense, "Include dense diagonalization (L <= 128)");
  add_out(verify);

  for (auto* sub : {classify, dispersion, spectrum, evolve, sweep, verify})
    sub->add_option("--config", "JSON file whose keys mirror the flags");  // consumed before parsing

  std::vector<std::string> args = raw_args;
  try {
    if (auto doc = take_config(args)) {
      auto is_sub = [&](const std::string& a) { return app.get_subcommand_no_throw(a) != nullptr; };
      if (doc->contains("subcommand") && std::none_of(args.begin(), args.end(), is_sub))
        args.insert(args.begin(), (*doc)["subcommand"].get<std::string>());
      // Flags ignore default_val, so boolean keys are passed as --key=value unless given explicitly.
      std::vector<std::string> flags;
      for (const auto& [key, value] : doc->items()) {
        if (key == "subcommand") continue;
        bool known = false;
        for (auto* sub : app.get_subcommands({})) {
          auto* opt = sub->get_option_no_throw("--" + key);
          if (!opt) continue;
          known = true;
          if (opt->get_expected_min() == 0) {
            if (!value.is_boolean()) throw UsageError("config key '" + key + "' must be a boolean");
            const bool explicit_flag = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
              return a == "--" + key || a.rfind("--" + key + "=", 0) == 0 || a == "--no-" + key;
            });
            if (!explicit_flag) flags.push_back("--" + key + "=" + json_scalar(value, key));
            break;
          }
          opt->default_val(json_scalar(value, key));
        }
        if (!known) throw UsageError("unknown config key '" + key + "'");
      }
      const auto sub_pos = std::find_if(args.begin(), args.end(), is_sub);
      if (sub_pos != args.end()) args.insert(sub_pos + 1, flags.begin(), flags.end());
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (classify->parsed()) return cmd_classify(cfg, out);
    if (dispersion->parsed()) return cmd_dispersion(cfg, out);
    if (spectrum->parsed()) return cmd_spectrum(cfg, out);
    if (evolve->parsed()) return cmd_evolve(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  }
  return kUsage;
}

}  // namespace fca::cli
