// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0
//
// Regularise-and-prune training: embed the target with D = Dbar = c diag(||F||),
// minimise loss + gamma_t ||DW||_{2,1} (opt1), prune channels with
// |D_ii| > ||F_i||, repeat with Dbar frozen at zero (opt2), prune again, and
// finetune the contracted model.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "catalyst/data.hpp"
#include "catalyst/model.hpp"
#include "catalyst/nn.hpp"

namespace catalyst {

/// Piecewise-constant learning rate: base * ratio^(number of decay epochs passed).
struct LrSchedule {
  double base = 0.01;
  std::vector<long> decay_epochs;
  double ratio = 0.1;

  double at(long epoch) const;
};

struct TrainConfig {
  LrSchedule lr_pretrain{0.05, {}, 0.1};
  LrSchedule lr_opt1{0.05, {30, 60}, 0.1};
  LrSchedule lr_opt2{0.05, {30, 60}, 0.1};
  LrSchedule lr_finetune{0.01, {}, 0.1};
  double alpha_theta = 5e-4;
  double alpha_d = 1e-2;
  double gamma0 = 0.03;
  double gamma0_prime = 0.03;
  double epsilon = 1e-3;
  double epsilon_prime = 1e-3;
  double kappa = std::numeric_limits<double>::infinity();
  long t_budget = 4000;        // opt1 step budget
  long t_prime_budget = 4000;  // opt2 step budget
  double c_init = 1.0;
  std::uint64_t seed = 0;
  std::size_t batch_size = 64;
  long pretrain_epochs = 30;
  long finetune_epochs = 10;
  double momentum = 0.0;
  // Weight of the data loss in opt phases; 0 leaves only the regulariser.
  double loss_weight = 1.0;
  long eval_every = 10;

  // Throws ConfigError; returns informational notes.
  std::vector<std::string> validate() const;
};

/// gamma0 * (1 + 0.25 t), t in epochs since the phase started.
double gamma_schedule(double gamma0, long epoch);

enum class Phase { pretrain, opt1, opt2, finetune, baseline };
std::string to_string(Phase p);

struct StepRecord {
  long step = 0;
  std::string phase;
  double train_loss = std::numeric_limits<double>::quiet_NaN();
  double reg_value = std::numeric_limits<double>::quiet_NaN();
  double test_loss = std::numeric_limits<double>::quiet_NaN();  // NaN when not evaluated
  double test_acc = std::numeric_limits<double>::quiet_NaN();
};

struct ChannelSnapshot {
  std::string checkpoint;
  std::size_t layer = 0;
  Vector c;
  Vector filter_norm;
  Vector d;
};

struct PruneEvent {
  std::string phase;
  long step = 0;
  std::vector<std::size_t> pruned;
  std::size_t channels_before = 0;
  double acc_before = 0.0, acc_after = 0.0;
  double loss_before = 0.0, loss_after = 0.0;
  std::int64_t macs_before = 0, macs_after = 0;
  std::int64_t params_before = 0, params_after = 0;
  double reg_at_prune = 0.0;
  double max_deviation = 0.0;  // largest output change over random inputs
  // min_{i in P} log10 c_i - max_{i not in P} log10 c_i; absent if either side is empty.
  std::optional<double> margin_log10;
};

struct PhaseSummary {
  std::string phase;
  long steps = 0;
  std::string stop_reason;  // "epsilon", "kappa", "budget", "epochs"
};

struct RunLog {
  std::vector<StepRecord> steps;
  std::vector<ChannelSnapshot> snapshots;
  std::vector<PruneEvent> prune_events;
  std::vector<PhaseSummary> phases;
  std::vector<std::string> notes;
};

/// Mutable state threaded through a run: RNG, global step counter, log.
struct TrainContext {
  explicit TrainContext(std::uint64_t seed) : rng(seed) {}
  std::mt19937_64 rng;
  long step = 0;
  RunLog log;
};

ChannelSnapshot snapshot(const Model& m, const std::string& checkpoint);

/// Regularised training of an extended model until ||DW||_{2,1} < eps,
/// every non-degenerate channel has |log c_i| > kappa, or the step budget
/// runs out. In opt2 Dbar must already be zero and stays frozen.
PhaseSummary run_opt_phase(Model& m, const TrainConfig& cfg, Phase phase, const Split& data, TrainContext& ctx);

/// Plain SGD without the regulariser for a number of epochs.
PhaseSummary train_plain(Model& m, const TrainConfig& cfg, Phase phase, long epochs, const LrSchedule& lr,
                         const Split& data, TrainContext& ctx);

/// Selects P, prunes, and records the event with held-out evaluations on both sides.
PruneEvent prune_step(Model& m, Phase phase, const Split& data, TrainContext& ctx, std::uint64_t verify_seed);

struct PruneResult {
  Model model;
  RunLog log;
};

/// embed -> opt1 -> prune -> opt2 -> prune -> finetune on a (pretrained) model.
PruneResult catalyst_prune_full(Model model, const TrainConfig& cfg, const Split& data);
void catalyst_prune_full(Model& model, const TrainConfig& cfg, const Split& data, TrainContext& ctx);

}  // namespace catalyst
