// Copyright 2026 The Discern Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch command-line front end. Every command reads flags and/or a JSON
// input file, echoes its fully resolved configuration into the output,
// and writes JSON or CSV — to stdout, or atomically to --output.
//
// Exit codes: 0 success, 1 usage, 2 input validation, 3 violation of a
// numerical invariant.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "discern/discrimination.hpp"
#include "discern/io.hpp"
#include "discern/linalg.hpp"
#include "discern/optimize.hpp"
#include "discern/sampling.hpp"

namespace {

using discern::io::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInvariant = 3;

const double kPi = std::acos(-1.0);

// ---------------------------------------------------------------------------
// Shared options
// ---------------------------------------------------------------------------

struct CommonOpts {
  std::string input_path;
  std::string output_path;
  std::string format;  // "json" or "csv"; per-command default
  bool degrees = false;

  double theta = -1.0;
  double alpha = -1.0;
  double lambda = 1.0;
  double mu = 0.0;
  std::size_t dim = 2;
  double p1 = 0.5;
  std::uint64_t n = 100;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  bool allow_unsaturated = false;

  bool has_theta() const { return theta >= 0.0; }
  bool has_alpha() const { return alpha >= 0.0; }

  double angle(double value) const { return degrees ? value * kPi / 180.0 : value; }
};

void add_io_options(CLI::App* cmd, CommonOpts& o, const char* default_format) {
  cmd->add_option("--input", o.input_path, "JSON input file (states/observable/priors)");
  cmd->add_option("--output", o.output_path,
                  "output file; written atomically, relative paths resolve under "
                  "$DISCERN_OUTPUT_DIR when set");
  cmd->add_option("--format", o.format, std::string("output format (default ") +
                                            default_format + ")")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--degrees", o.degrees, "interpret angle flags in degrees");
  cmd->parse_complete_callback([&o, default_format] {
    if (o.format.empty()) o.format = default_format;
  });
}

void add_pair_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--theta", o.theta, "angle between the states, radians in (0, pi/2]");
  cmd->add_option("--dim", o.dim, "ambient dimension (default 2)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{64}));
}

void add_family_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--alpha", o.alpha, "family parameter in [theta, pi - theta]");
  cmd->add_option("--lambda", o.lambda, "scale of the constructed observable (default 1)");
  cmd->add_option("--mu", o.mu, "identity shift of the constructed observable (default 0)");
  cmd->add_flag("--allow-unsaturated", o.allow_unsaturated,
                "admit alpha outside [theta, pi - theta]");
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

void write_output(const std::string& text, const CommonOpts& o) {
  if (o.output_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  namespace fs = std::filesystem;
  fs::path target(o.output_path);
  if (target.is_relative()) {
    if (const char* dir = std::getenv("DISCERN_OUTPUT_DIR"); dir && *dir)
      target = fs::path(dir) / target;
  }
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot open output file: " + target.string());
    out << text;
  }
  fs::rename(tmp, target);
}

void emit_json(json j, const CommonOpts& o) { write_output(j.dump(2) + "\n", o); }

std::string summary_num(double x) { return discern::io::format_short(x); }

// ---------------------------------------------------------------------------
// Problem resolution from flags + input file
// ---------------------------------------------------------------------------

discern::io::InputData load_input(const CommonOpts& o) {
  if (o.input_path.empty()) return {};
  std::ifstream in(o.input_path);
  if (!in) throw std::invalid_argument("cannot read input file: " + o.input_path);
  json j = json::parse(in);  // parse_error carries line/column diagnostics
  return discern::io::parse_input(j);
}

discern::StatePair resolve_pair(const CommonOpts& o, const discern::io::InputData& in) {
  if (in.v && in.w) return discern::make_state_pair(*in.v, *in.w);
  if (in.v || in.w)
    throw std::invalid_argument("input must supply both states.v and states.w, or neither");
  if (!o.has_theta())
    throw std::invalid_argument("no states given: supply --theta or an --input file");
  return discern::canonical_pair(o.angle(o.theta), o.dim);
}

discern::Hermitian resolve_observable(const CommonOpts& o, const discern::io::InputData& in,
                                      const discern::StatePair& pair) {
  if (in.observable) {
    if (in.observable->dim() != pair.dim())
      throw std::invalid_argument("observable dimension does not match the states");
    return *in.observable;
  }
  if (!o.has_alpha())
    throw std::invalid_argument("no observable given: supply --alpha or an --input file");
  return discern::saturating_observable(pair, o.angle(o.alpha), o.lambda, o.mu,
                                        o.allow_unsaturated);
}

json echo_pair_config(const char* command, const CommonOpts& o, const discern::StatePair& pair) {
  // Echo the raw angle (converted to radians) when states come from
  // flags: re-running with the echoed value reproduces the run exactly.
  json cfg{{"command", command}, {"format", o.format}, {"dim", pair.dim()},
           {"theta", o.has_theta() ? o.angle(o.theta) : pair.theta}};
  if (!o.input_path.empty()) cfg["input"] = o.input_path;
  return cfg;
}

json echo_family_config(json cfg, const CommonOpts& o) {
  if (o.has_alpha()) {
    cfg["alpha"] = o.angle(o.alpha);
    cfg["lambda"] = o.lambda;
    cfg["mu"] = o.mu;
    cfg["allow_unsaturated"] = o.allow_unsaturated;
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_delta(const CommonOpts& o) {
  const auto in = load_input(o);
  const discern::StatePair pair = resolve_pair(o, in);
  const discern::Hermitian a = resolve_observable(o, in, pair);
  const discern::DiscriminationStats st = discernability(a, pair);

  json out{{"config", echo_family_config(echo_pair_config("delta", o, pair), o)},
           {"stats", discern::io::to_json(st)}};
  if (pair.orthogonal) {
    out["fleming_bound"] = nullptr;
    out["bound_status"] = "infinite";
  } else {
    const double bound = discern::fleming_bound(pair);
    out["fleming_bound"] = bound;
    if (st.status == discern::DeltaStatus::finite) out["gap"] = bound - st.delta;
  }
  emit_json(out, o);

  if (st.status != discern::DeltaStatus::finite) {
    std::cerr << "delta undefined or infinite (status: " << discern::io::to_string(st.status)
              << ")\n";
    return st.status == discern::DeltaStatus::undefined ? kExitValidation : kExitOk;
  }
  if (!pair.orthogonal)
    std::cerr << "delta = " << summary_num(st.delta)
              << "  tan(theta) = " << summary_num(std::tan(pair.theta))
              << "  gap = " << summary_num(std::tan(pair.theta) - st.delta) << "\n";
  return kExitOk;
}

int cmd_bound(const CommonOpts& o) {
  const auto in = load_input(o);
  const discern::StatePair pair = resolve_pair(o, in);
  const double bound = discern::fleming_bound(pair);  // throws for orthogonal pairs
  json out{{"config", echo_pair_config("bound", o, pair)},
           {"theta", pair.theta},
           {"cos_theta", pair.cos_theta},
           {"fleming_bound", bound}};
  emit_json(out, o);
  std::cerr << "tan(theta) = " << summary_num(bound) << "\n";
  return kExitOk;
}

int cmd_saturate(const CommonOpts& o) {
  const auto in = load_input(o);
  const discern::StatePair pair = resolve_pair(o, in);
  if (!o.has_alpha()) throw std::invalid_argument("saturate requires --alpha");
  const double alpha = o.angle(o.alpha);
  const discern::SaturatingFamilySpec fs =
      discern::family_spec(pair, alpha, o.lambda, o.mu, o.allow_unsaturated);
  const discern::Hermitian a =
      discern::saturating_observable(pair, alpha, o.lambda, o.mu, o.allow_unsaturated);
  const discern::DiscriminationStats st = discernability(a, pair);

  json out{{"config", echo_family_config(echo_pair_config("saturate", o, pair), o)},
           {"observable", discern::io::to_json(a)},
           {"family",
            {{"alpha", fs.alpha},
             {"lambda", fs.lambda_scale},
             {"mu", fs.mu_shift},
             {"e1", discern::io::to_json(fs.basis.e1)},
             {"e2", discern::io::to_json(fs.basis.e2)}}},
           {"stats", discern::io::to_json(st)}};
  if (!pair.orthogonal) out["fleming_bound"] = discern::fleming_bound(pair);
  emit_json(out, o);
  return kExitOk;
}

int cmd_check(const CommonOpts& o) {
  const auto in = load_input(o);
  const discern::StatePair pair = resolve_pair(o, in);
  const discern::Hermitian a = resolve_observable(o, in, pair);
  const discern::SaturationReport rep = discern::check_saturation(a, pair, o.tolerance);
  const discern::DiscriminationStats st = discernability(a, pair);

  json cfg = echo_family_config(echo_pair_config("check", o, pair), o);
  cfg["tol"] = o.tolerance;
  json out{{"config", cfg},
           {"report", discern::io::to_json(rep)},
           {"stats", discern::io::to_json(st)}};
  if (!pair.orthogonal) out["fleming_bound"] = discern::fleming_bound(pair);
  emit_json(out, o);
  std::cerr << (rep.saturated ? "saturated" : "not saturated")
            << "  qmie_gap = " << summary_num(rep.qmie_gap) << "\n";
  return kExitOk;
}

int cmd_simulate(const CommonOpts& o) {
  const auto in = load_input(o);
  const discern::StatePair pair = resolve_pair(o, in);
  const discern::Hermitian a = resolve_observable(o, in, pair);
  const double p1 = in.p1.value_or(o.p1);
  const discern::TrialReport rep = discern::run_experiment(a, pair, p1, o.n, o.trials, o.seed);
  const discern::DiscriminationStats st = discernability(a, pair);

  json cfg = echo_family_config(echo_pair_config("simulate", o, pair), o);
  cfg["n"] = o.n;
  cfg["trials"] = o.trials;
  cfg["seed"] = o.seed;
  cfg["p1"] = p1;
  json out{{"config", cfg}, {"report", discern::io::to_json(rep)}};
  out["report"]["delta_status"] = discern::io::to_string(st.status);
  if (st.status == discern::DeltaStatus::finite) out["report"]["delta"] = st.delta;

  // The bound is a theorem; exceeding it beyond sampling noise means a
  // broken implementation, flagged with the invariant exit code.
  const double se = std::sqrt(rep.cheb_bound * std::max(1.0 - rep.cheb_bound, 0.0) /
                              static_cast<double>(rep.trials));
  const bool violated = rep.empirical_error > rep.cheb_bound + 3.0 * se;
  out["bound_violated"] = violated;
  emit_json(out, o);
  std::cerr << "empirical_error = " << summary_num(rep.empirical_error)
            << "  cheb_bound = " << summary_num(rep.cheb_bound) << "\n";
  return violated ? kExitInvariant : kExitOk;
}

struct SweepOpts {
  std::vector<double> theta_list;
  std::vector<double> alpha_list;
  std::vector<std::uint64_t> n_list;
  std::size_t alpha_steps = 0;
};

int cmd_sweep(const CommonOpts& o, const SweepOpts& so) {
  std::vector<double> thetas;
  for (double t : so.theta_list) thetas.push_back(o.angle(t));
  if (thetas.empty() && o.has_theta()) thetas.push_back(o.angle(o.theta));
  std::vector<std::uint64_t> ns = so.n_list;
  if (ns.empty()) ns.push_back(o.n);
  if (thetas.empty() || ns.empty()) throw std::invalid_argument("sweep: empty grid");
  std::sort(thetas.begin(), thetas.end());
  std::sort(ns.begin(), ns.end());

  json cfg{{"command", "sweep"},   {"format", o.format}, {"dim", o.dim},
           {"trials", o.trials},   {"seed", o.seed},     {"p1", o.p1},
           {"lambda", o.lambda},   {"mu", o.mu},
           {"allow_unsaturated", o.allow_unsaturated},
           {"theta_list", thetas}, {"n_list", ns}};
  if (!so.alpha_list.empty()) {
    json alphas = json::array();
    for (double a : so.alpha_list) alphas.push_back(o.angle(a));
    cfg["alpha_list"] = std::move(alphas);
  } else if (so.alpha_steps > 0) {
    cfg["alpha_steps"] = so.alpha_steps;
  } else {
    cfg["alpha"] = o.has_alpha() ? o.angle(o.alpha) : kPi / 2.0;
  }

  discern::io::CsvWriter csv(
      {"theta", "alpha", "n", "trials", "empirical_error", "cheb_bound", "delta", "seed"});
  json json_rows = json::array();

  // Per-row seeds are consecutive so they stay exact in any numeric
  // column; the per-trial streams inside run_experiment hash them.
  std::uint64_t row_index = 0;
  for (double theta : thetas) {
    const discern::StatePair pair = discern::canonical_pair(theta, o.dim);
    std::vector<double> alphas;
    for (double a : so.alpha_list) alphas.push_back(o.angle(a));
    if (alphas.empty() && so.alpha_steps > 0) {
      if (so.alpha_steps == 1) {
        alphas.push_back(kPi / 2.0);
      } else {
        for (std::size_t k = 0; k < so.alpha_steps; ++k)
          alphas.push_back(theta + (kPi - 2.0 * theta) * static_cast<double>(k) /
                                       static_cast<double>(so.alpha_steps - 1));
      }
    }
    if (alphas.empty()) alphas.push_back(o.has_alpha() ? o.angle(o.alpha) : kPi / 2.0);
    std::sort(alphas.begin(), alphas.end());

    for (double alpha : alphas) {
      const discern::Hermitian a =
          discern::saturating_observable(pair, alpha, o.lambda, o.mu, o.allow_unsaturated);
      const discern::DiscriminationStats st = discernability(a, pair);
      for (std::uint64_t n : ns) {
        const std::uint64_t row_seed = o.seed + row_index;
        const discern::TrialReport rep =
            discern::run_experiment(a, pair, o.p1, n, o.trials, row_seed);
        csv.add_row_cells({discern::io::format_full(theta), discern::io::format_full(alpha),
                           std::to_string(n), std::to_string(rep.trials),
                           discern::io::format_full(rep.empirical_error),
                           discern::io::format_full(rep.cheb_bound),
                           discern::io::format_full(st.delta), std::to_string(row_seed)});
        json_rows.push_back(json{{"theta", theta},
                                 {"alpha", alpha},
                                 {"n", n},
                                 {"trials", rep.trials},
                                 {"empirical_error", rep.empirical_error},
                                 {"cheb_bound", rep.cheb_bound},
                                 {"delta", st.delta},
                                 {"seed", row_seed}});
        ++row_index;
      }
    }
  }
  if (row_index == 0) throw std::invalid_argument("sweep: empty grid");

  if (o.format == "csv") {
    csv.add_comment("config: " + cfg.dump());
    write_output(csv.text(), o);
  } else {
    emit_json(json{{"config", cfg}, {"rows", json_rows}}, o);
  }
  return kExitOk;
}

struct MaximizeOpts {
  int restarts = 16;
  std::size_t max_evals = 20000;
  double step = 0.5;
  double target_tol = 1e-4;
};

int cmd_maximize(const CommonOpts& o, const MaximizeOpts& mo) {
  if (!o.has_theta()) throw std::invalid_argument("maximize requires --theta");
  const double theta = o.angle(o.theta);
  const discern::StatePair pair = discern::canonical_pair(theta, 2);
  if (pair.orthogonal)
    throw std::invalid_argument("maximize: orthogonal states have an infinite bound");
  if (o.dim > 4)
    throw std::invalid_argument("maximize: search dimension capped at 4");

  discern::SearchConfig cfg;
  cfg.restarts = mo.restarts;
  cfg.max_evals = mo.max_evals;
  cfg.init_step = mo.step;
  cfg.target_tol = mo.target_tol;
  cfg.seed = o.seed;

  const discern::SearchResult res = discern::maximize_delta(pair, o.dim, cfg);
  const double bound = std::tan(theta);

  json jcfg{{"command", "maximize"}, {"format", o.format},
            {"theta", theta},        {"dim", o.dim},
            {"restarts", cfg.restarts}, {"max_evals", cfg.max_evals},
            {"step", cfg.init_step}, {"target_tol", cfg.target_tol},
            {"seed", cfg.seed}};
  json out{{"config", jcfg},
           {"result", discern::io::to_json(res)},
           {"tan_theta", bound},
           {"gap", bound - res.best_value}};
  if (o.dim > 2) {
    const discern::StatePair embedded = discern::canonical_pair(theta, o.dim);
    out["subspace_residual"] =
        discern::check_saturation(res.best_operator, embedded, 1e-3).subspace_residual;
  }
  emit_json(out, o);
  std::cerr << "best_value = " << summary_num(res.best_value)
            << "  tan(theta) = " << summary_num(bound)
            << "  gap = " << summary_num(bound - res.best_value)
            << (res.converged ? "" : "  [budget exhausted]") << "\n";
  return kExitOk;
}

struct ReferenceOpts {
  std::vector<double> theta_list;
  std::vector<double> p1_list;
};

int cmd_reference(const CommonOpts& o, const ReferenceOpts& ro) {
  std::vector<double> thetas = ro.theta_list;
  if (thetas.empty() && o.has_theta()) thetas.push_back(o.theta);
  if (thetas.empty()) throw std::invalid_argument("reference requires --theta or --theta-list");
  std::vector<double> p1s = ro.p1_list;
  if (p1s.empty()) p1s.push_back(o.p1);
  std::sort(thetas.begin(), thetas.end());
  std::sort(p1s.begin(), p1s.end());

  json cfg{{"command", "reference"}, {"format", o.format}};
  discern::io::CsvWriter csv({"theta", "p1", "min_error_prob", "unambiguous_max", "regime"});
  csv.add_comment("config: " + cfg.dump());
  json rows = json::array();
  for (double theta_raw : thetas) {
    const double theta = o.angle(theta_raw);
    for (double p1 : p1s) {
      const double me = discern::min_error_prob(theta, p1);
      const double um = discern::unambiguous_max(theta, p1);
      const int regime = discern::unambiguous_regime(theta, p1);
      csv.add_row({theta, p1, me, um, static_cast<double>(regime)});
      rows.push_back(json{{"theta", theta},
                          {"p1", p1},
                          {"min_error_prob", me},
                          {"unambiguous_max", um},
                          {"regime", regime}});
    }
  }
  if (o.format == "csv")
    write_output(csv.text(), o);
  else
    emit_json(json{{"config", cfg}, {"rows", rows}}, o);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-state discrimination toolkit: discernability, saturating observables, "
               "threshold-rule simulation and reference formulas"};
  app.require_subcommand(1);

  CommonOpts o;
  SweepOpts so;
  MaximizeOpts mo;
  ReferenceOpts ro;
  std::function<int()> run;

  auto* delta = app.add_subcommand("delta", "discernability of an observable for a state pair");
  add_io_options(delta, o, "json");
  add_pair_options(delta, o);
  add_family_options(delta, o);
  delta->callback([&] { run = [&] { return cmd_delta(o); }; });

  auto* bound = app.add_subcommand("bound", "Fleming's bound tan(theta)");
  add_io_options(bound, o, "json");
  add_pair_options(bound, o);
  bound->callback([&] { run = [&] { return cmd_bound(o); }; });

  auto* saturate = app.add_subcommand("saturate", "construct a bound-saturating observable");
  add_io_options(saturate, o, "json");
  add_pair_options(saturate, o);
  add_family_options(saturate, o);
  saturate->callback([&] { run = [&] { return cmd_saturate(o); }; });

  auto* check = app.add_subcommand("check", "diagnose the saturation conditions");
  add_io_options(check, o, "json");
  add_pair_options(check, o);
  add_family_options(check, o);
  check->add_option("--tol", o.tolerance, "residual tolerance (default 1e-9)");
  check->callback([&] { run = [&] { return cmd_check(o); }; });

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo identification experiment");
  add_io_options(simulate, o, "json");
  add_pair_options(simulate, o);
  add_family_options(simulate, o);
  simulate->add_option("--p1", o.p1, "prior of state v (default 0.5)")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  simulate->add_option("--n", o.n, "sample size per trial")->check(CLI::PositiveNumber);
  simulate->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed, "master seed (default 1)");
  simulate->callback([&] { run = [&] { return cmd_simulate(o); }; });

  auto* sweep = app.add_subcommand("sweep", "grid of experiments over theta/alpha/n (CSV)");
  add_io_options(sweep, o, "csv");
  add_pair_options(sweep, o);
  add_family_options(sweep, o);
  sweep->add_option("--theta-list", so.theta_list, "comma-separated theta grid")->delimiter(',');
  sweep->add_option("--alpha-list", so.alpha_list, "comma-separated alpha grid")->delimiter(',');
  sweep->add_option("--alpha-steps", so.alpha_steps,
                    "evenly spaced alpha grid over [theta, pi - theta]");
  sweep->add_option("--n-list", so.n_list, "comma-separated sample sizes")->delimiter(',');
  sweep->add_option("--p1", o.p1, "prior of state v (default 0.5)")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  sweep->add_option("--n", o.n, "sample size when --n-list is absent")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--trials", o.trials, "trials per grid point (default 10000)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", o.seed, "master seed; per-row seeds derive from it");
  sweep->callback([&] { run = [&] { return cmd_sweep(o, so); }; });

  auto* maximize = app.add_subcommand("maximize", "derivative-free search for max delta");
  add_io_options(maximize, o, "json");
  add_pair_options(maximize, o);
  maximize->add_option("--restarts", mo.restarts, "search restarts (default 16)")
      ->check(CLI::PositiveNumber);
  maximize->add_option("--max-evals", mo.max_evals, "objective budget per restart");
  maximize->add_option("--step", mo.step, "initial simplex edge (default 0.5)");
  maximize->add_option("--target-tol", mo.target_tol, "convergence tolerance (default 1e-4)");
  maximize->add_option("--seed", o.seed, "restart seed (default 1)");
  maximize->callback([&] { run = [&] { return cmd_maximize(o, mo); }; });

  auto* reference = app.add_subcommand("reference",
                                       "single-shot reference formulas over a (theta, p1) grid");
  add_io_options(reference, o, "csv");
  reference->add_option("--theta", o.theta, "angle between the states");
  reference->add_option("--theta-list", ro.theta_list, "comma-separated theta grid")
      ->delimiter(',');
  reference->add_option("--p1", o.p1, "prior of state v (default 0.5)")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  reference->add_option("--p1-list", ro.p1_list, "comma-separated prior grid")->delimiter(',');
  reference->callback([&] { run = [&] { return cmd_reference(o, ro); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return run ? run() : kExitUsage;
  } catch (const discern::invariant_violation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const json::parse_error& e) {
    std::cerr << "input parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
