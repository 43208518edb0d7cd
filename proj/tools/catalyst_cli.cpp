// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0
//
// catalyst: experiment driver.
//
//   catalyst run <config> [--output-dir DIR]
//   catalyst simulate <c0> <lambda> <alpha> <steps> [--dim N] [--seed S]
//   catalyst sweep <grid-config>
//   catalyst verify [--seed S]
//   catalyst report <run-dir>
//
// Exit codes: 0 ok, 1 config error, 2 numerical failure, 3 verification failure.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "catalyst/checks.hpp"
#include "catalyst/dynamics.hpp"
#include "catalyst/errors.hpp"
#include "catalyst/experiment.hpp"
#include "catalyst/text.hpp"

namespace {

using namespace catalyst;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;
constexpr int kVerifyError = 3;

std::string fmt_pct(double frac) { return format_double(std::round(frac * 1e4) / 1e2) + "%"; }

int cmd_run(const std::string& path, const std::string& outdir) {
  ExperimentConfig cfg = load_config(path);
  if (!outdir.empty()) cfg.output_dir = outdir;
  for (const auto& note : cfg.train.validate()) std::cerr << "note: " << note << '\n';
  const ExperimentResult res = run_experiment(cfg);
  const Summary& s = res.summary;
  std::cout << "channels " << s.channels_initial << " -> " << s.channels_final << '\n';
  for (const auto& e : s.events)
    std::cout << e.phase << ": pruned " << e.pruned << ", delta_acc " << format_double(e.delta_acc)
              << "pp, delta_loss " << format_double(e.delta_loss) << ", max deviation "
              << format_double(e.max_deviation) << '\n';
  std::cout << "test acc " << fmt_pct(s.final_test_acc);
  if (s.baseline_test_acc) std::cout << " (dense baseline " << fmt_pct(*s.baseline_test_acc) << ")";
  std::cout << "\nspeedup " << format_double(s.speedup) << '\n';
  if (!cfg.output_dir.empty()) std::cout << "wrote " << cfg.output_dir.string() << '\n';
  return kOk;
}

int cmd_simulate(double c0, double lr, double alpha, long steps, std::size_t dim, std::uint64_t seed, bool cont) {
  if (!(c0 > 0.0)) throw ConfigError("c0 must be > 0");
  if (!(lr > 0.0)) throw ConfigError("lambda must be > 0");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in [0, 1)");
  if (steps < 0) throw ConfigError("steps must be >= 0");
  if (dim == 0) throw ConfigError("dim must be >= 1");
  std::mt19937_64 rng(seed);
  const auto s0 = dynamics::make_state(c0, dim, alpha, dynamics::LambdaSchedule::constant(lr), rng);
  dynamics::SimulateOptions opts;
  opts.continue_past_exit = cont;
  const auto tr = dynamics::simulate_trajectory(s0, steps, opts);
  std::cout << "t,d,norm_m,c,lambda\n";
  for (const auto& p : tr.points)
    std::cout << p.t << ',' << format_double(p.d) << ',' << format_double(p.norm_m) << ',' << format_double(p.c)
              << ',' << format_double(p.lr) << '\n';
  for (const auto& w : tr.warnings) std::cerr << "warning: " << w << '\n';
  std::cerr << "outcome " << dynamics::to_string(tr.outcome) << ", steps_to_exit " << tr.steps_to_exit
            << ", final_c " << format_double(tr.final_c()) << '\n';
  return kOk;
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(parse_double(trim(item), key));
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

int cmd_sweep(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream text;
  text << in.rdbuf();
  dynamics::SweepSpec spec;
  std::string output;
  for (const auto& [k, v] : parse_key_values(text.str())) {
    if (k == "c0")
      spec.c0s = parse_list(v, k);
    else if (k == "lambda")
      spec.lrs = parse_list(v, k);
    else if (k == "alpha")
      spec.alphas = parse_list(v, k);
    else if (k == "steps")
      spec.steps = parse_long(v, k);
    else if (k == "dim")
      spec.dim = static_cast<std::size_t>(parse_long(v, k));
    else if (k == "seed")
      spec.seed = static_cast<std::uint64_t>(parse_long(v, k));
    else if (k == "output")
      output = v;
    else
      throw ConfigError("unknown key '" + k + "' in " + path);
  }
  if (spec.c0s.empty() || spec.lrs.empty() || spec.alphas.empty())
    throw ConfigError("sweep needs c0, lambda and alpha lists");
  for (double a : spec.alphas)
    if (!(a >= 0.0 && a < 1.0)) throw ConfigError("alpha must be in [0, 1)");
  for (double l : spec.lrs)
    if (!(l > 0.0)) throw ConfigError("lambda must be > 0");
  for (double c : spec.c0s)
    if (!(c > 0.0)) throw ConfigError("c0 must be > 0");
  if (spec.dim == 0 || spec.steps < 0) throw ConfigError("dim must be >= 1 and steps >= 0");

  const auto rows = dynamics::phase_sweep(spec);
  if (output.empty()) {
    dynamics::write_sweep_csv(std::cout, rows);
  } else {
    std::filesystem::path out(output);
    if (out.is_relative()) out = std::filesystem::path(path).parent_path() / out;
    std::ofstream os(out);
    if (!os) throw IoError("cannot write " + out.string());
    dynamics::write_sweep_csv(os, rows);
    std::cout << "wrote " << rows.size() << " rows to " << out.string() << '\n';
  }
  return kOk;
}

int cmd_verify(std::uint64_t seed) {
  bool all = true;
  for (const auto& r : checks::run_invariant_suite(seed)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? kOk : kVerifyError;
}

int cmd_report(const std::string& dir) {
  const Summary recomputed = recompute_summary(dir);
  std::cout << to_json(recomputed).dump(2) << '\n';
  const Summary stored = load_summary(std::filesystem::path(dir) / "summary.json");
  if (!(stored == recomputed)) {
    std::cerr << "summary.json disagrees with the logs in " << dir << '\n';
    return kVerifyError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Catalyst structured pruning"};
  app.require_subcommand(1);

  std::string config_path, outdir;
  auto* run = app.add_subcommand("run", "Run the full prune pipeline from a config file");
  run->add_option("config", config_path)->required();
  run->add_option("--output-dir", outdir, "Overrides output_dir");

  double c0 = 0, lr = 0, alpha = 0;
  long steps = 0;
  std::size_t dim = 8;
  std::uint64_t seed = 0;
  bool cont = false;
  auto* sim = app.add_subcommand("simulate", "Simulate the ratio dynamics of one channel");
  sim->add_option("c0", c0)->required();
  sim->add_option("lambda", lr)->required();
  sim->add_option("alpha", alpha)->required();
  sim->add_option("steps", steps)->required();
  sim->add_option("--dim", dim, "Length of M");
  sim->add_option("--seed", seed);
  sim->add_flag("--continue", cont, "Keep stepping past the window exit");

  std::string grid_path;
  auto* sweep = app.add_subcommand("sweep", "Phase diagram over a c0 x lambda x alpha grid");
  sweep->add_option("grid-config", grid_path)->required();

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--seed", seed);

  std::string run_dir;
  auto* report = app.add_subcommand("report", "Recompute a run summary from its logs");
  report->add_option("run-dir", run_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, outdir);
    if (*sim) return cmd_simulate(c0, lr, alpha, steps, dim, seed, cont);
    if (*sweep) return cmd_sweep(grid_path);
    if (*verify) return cmd_verify(seed);
    if (*report) return cmd_report(run_dir);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const DynamicsError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
