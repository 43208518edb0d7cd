// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "catalyst/accounting.hpp"
#include "catalyst/catalyst.hpp"
#include "catalyst/errors.hpp"
#include "catalyst/prune.hpp"
#include "catalyst/text.hpp"

namespace catalyst {

double LrSchedule::at(long epoch) const {
  double lr = base;
  for (long e : decay_epochs)
    if (epoch >= e) lr *= ratio;
  return lr;
}

std::vector<std::string> TrainConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  };
  for (const auto* s : {&lr_pretrain, &lr_opt1, &lr_opt2, &lr_finetune}) {
    positive(s->base, "learning rate");
    positive(s->ratio, "learning-rate decay ratio");
  }
  positive(gamma0, "gamma0");
  positive(gamma0_prime, "gamma0_prime");
  positive(epsilon, "epsilon");
  positive(epsilon_prime, "epsilon_prime");
  positive(kappa, "kappa");
  positive(c_init, "c_init");
  positive(static_cast<double>(t_budget), "T");
  positive(static_cast<double>(t_prime_budget), "T_prime");
  positive(static_cast<double>(eval_every), "eval_every");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (alpha_theta < 0.0 || alpha_d < 0.0) throw ConfigError("weight decays must be >= 0");
  if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("momentum must lie in [0, 1)");
  if (loss_weight < 0.0) throw ConfigError("loss_weight must be >= 0");
  if (pretrain_epochs < 0 || finetune_epochs < 0) throw ConfigError("epoch counts must be >= 0");

  std::vector<std::string> notes;
  if (alpha_theta > alpha_d)
    notes.push_back("alpha_theta > alpha_D: extra pressure toward pruning");
  else if (alpha_theta < alpha_d)
    notes.push_back("alpha_theta < alpha_D: extra pressure toward preserving");
  return notes;
}

double gamma_schedule(double gamma0, long epoch) { return gamma0 * (1.0 + 0.25 * static_cast<double>(epoch)); }

std::string to_string(Phase p) {
  switch (p) {
    case Phase::pretrain: return "pretrain";
    case Phase::opt1: return "opt1";
    case Phase::opt2: return "opt2";
    case Phase::finetune: return "finetune";
    case Phase::baseline: return "baseline";
  }
  return "?";
}

ChannelSnapshot snapshot(const Model& m, const std::string& checkpoint) {
  ChannelSnapshot s;
  s.checkpoint = checkpoint;
  s.layer = m.pre.size();
  s.filter_norm = filter_norms(m.target.sub.w);
  if (m.extended) {
    s.d = m.target.d.delta;
    s.c = c_ratios(m.target);
  } else {
    s.d = Vector::Zero(s.filter_norm.size());
    s.c = Vector::Zero(s.filter_norm.size());
  }
  return s;
}

namespace {

double current_reg(const Model& m) { return m.extended ? catalyst_reg(m.target.d, m.target.sub.w) : 0.0; }

void evaluate_into(StepRecord& r, const Model& m, const Split& data) {
  const Evaluation e = evaluate(m, data.test);
  r.test_loss = e.loss;
  r.test_acc = e.accuracy;
}

bool kappa_reached(const Model& m, double kappa) {
  if (std::isinf(kappa)) return false;
  const Vector norms = filter_norms(m.target.sub.w);
  const Vector c = c_ratios(m.target);
  bool any = false;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (norms[i] == 0.0 && m.target.d.delta[i] == 0.0) continue;  // degenerate
    any = true;
    if (!(std::abs(std::log(c[i])) > kappa)) return false;
  }
  return any;
}

void check_finite(const Model& m, long step) {
  for (const auto& p : param_refs(m))
    for (double v : p.values)
      if (!std::isfinite(v)) throw NumericalError("non-finite parameter in " + p.name, step);
}

}  // namespace

PhaseSummary run_opt_phase(Model& m, const TrainConfig& cfg, Phase phase, const Split& data, TrainContext& ctx) {
  if (phase != Phase::opt1 && phase != Phase::opt2) throw Error("run_opt_phase: phase must be opt1 or opt2");
  if (!m.extended) throw Error("run_opt_phase: model is not extended");
  const bool second = phase == Phase::opt2;
  if (second && m.target.dbar.delta.cwiseAbs().sum() != 0.0)
    throw Error("run_opt_phase: opt2 requires Dbar = 0");

  const LrSchedule& lr = second ? cfg.lr_opt2 : cfg.lr_opt1;
  const double gamma0 = second ? cfg.gamma0_prime : cfg.gamma0;
  const double eps = second ? cfg.epsilon_prime : cfg.epsilon;
  const long budget = second ? cfg.t_prime_budget : cfg.t_budget;
  const std::string name = to_string(phase);

  Sgd opt({lr.at(0), cfg.alpha_theta, cfg.alpha_d, cfg.momentum});
  PhaseSummary summary{name, 0, "budget"};
  bool done = false;
  for (long epoch = 0; !done; ++epoch) {
    const double gamma = gamma_schedule(gamma0, epoch);
    opt.set_lr(lr.at(epoch));
    for (const auto& cols : epoch_batches(data.train.size(), cfg.batch_size, ctx.rng)) {
      LossAndGrad lg = model_forward_backward(m, gather(data.train, cols), ctx.step);
      Model& g = lg.grad;
      if (cfg.loss_weight != 1.0)
        for (auto& p : param_refs(g))
          for (double& v : p.values) v *= cfg.loss_weight;
      const CatalystRegGrad rg = catalyst_reg_grad(m.target.d, m.target.sub.w);
      g.target.d.delta += gamma * rg.d;
      g.target.sub.w += gamma * rg.w;
      if (second) g.target.dbar.delta.setZero();
      opt.step(m, g);
      ++ctx.step;
      ++summary.steps;
      check_finite(m, ctx.step);

      StepRecord rec;
      rec.step = ctx.step;
      rec.phase = name;
      rec.train_loss = lg.loss;
      rec.reg_value = current_reg(m);

      if (rec.reg_value < eps) {
        summary.stop_reason = "epsilon";
        done = true;
      } else if (kappa_reached(m, cfg.kappa)) {
        summary.stop_reason = "kappa";
        done = true;
      } else if (summary.steps >= budget) {
        done = true;
      }
      if (done || ctx.step % cfg.eval_every == 0) evaluate_into(rec, m, data);
      ctx.log.steps.push_back(std::move(rec));
      if (done) break;
    }
  }
  ctx.log.phases.push_back(summary);
  return summary;
}

PhaseSummary train_plain(Model& m, const TrainConfig& cfg, Phase phase, long epochs, const LrSchedule& lr,
                         const Split& data, TrainContext& ctx) {
  const std::string name = to_string(phase);
  Sgd opt({lr.at(0), cfg.alpha_theta, cfg.alpha_d, cfg.momentum});
  PhaseSummary summary{name, 0, "epochs"};
  for (long epoch = 0; epoch < epochs; ++epoch) {
    opt.set_lr(lr.at(epoch));
    const auto batches = epoch_batches(data.train.size(), cfg.batch_size, ctx.rng);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      LossAndGrad lg = model_forward_backward(m, gather(data.train, batches[b]), ctx.step);
      opt.step(m, lg.grad);
      ++ctx.step;
      ++summary.steps;
      check_finite(m, ctx.step);
      StepRecord rec;
      rec.step = ctx.step;
      rec.phase = name;
      rec.train_loss = lg.loss;
      rec.reg_value = current_reg(m);
      const bool last = epoch + 1 == epochs && b + 1 == batches.size();
      if (last || ctx.step % cfg.eval_every == 0) evaluate_into(rec, m, data);
      ctx.log.steps.push_back(std::move(rec));
    }
  }
  ctx.log.phases.push_back(summary);
  return summary;
}

PruneEvent prune_step(Model& m, Phase phase, const Split& data, TrainContext& ctx, std::uint64_t verify_seed) {
  const PruneSet p = select_prune_indices(m.target);
  const Vector c = c_ratios(m.target);
  PruneEvent ev;
  ev.phase = to_string(phase);
  ev.step = ctx.step;
  ev.pruned = p.indices();
  ev.channels_before = m.target.sub.n_hidden();
  ev.reg_at_prune = current_reg(m);

  if (!p.empty() && p.size() < ev.channels_before) {
    double lo = INFINITY, hi = -INFINITY;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const double l = std::log10(c[i]);
      if (p.contains(static_cast<std::size_t>(i)))
        lo = std::min(lo, l);
      else
        hi = std::max(hi, l);
    }
    ev.margin_log10 = lo - hi;
  }

  const Evaluation before = evaluate(m, data.test);
  const Cost cost_before = count_macs_params(m);
  Model old = m;
  prune(m, p);
  if (phase == Phase::opt2) {
    // D' = -Dbar[P^c] = 0 and Dbar' = 0: psi is sigma again, drop the catalyst.
    m.extended = false;
    m.target.d = CatalystDiag::zeros(m.target.sub.n_hidden());
    m.target.dbar = CatalystDiag::zeros(m.target.sub.n_hidden());
  }
  const Evaluation after = evaluate(m, data.test);
  const Cost cost_after = count_macs_params(m);
  ev.max_deviation = verify_function_preservation(as_forward(old), as_forward(m), 100, m.input_dim(), verify_seed);

  ev.acc_before = before.accuracy;
  ev.acc_after = after.accuracy;
  ev.loss_before = before.loss;
  ev.loss_after = after.loss;
  ev.macs_before = cost_before.macs;
  ev.macs_after = cost_after.macs;
  ev.params_before = cost_before.params;
  ev.params_after = cost_after.params;

  // The preceding step record carries the "before" evaluation.
  if (ctx.log.steps.empty() || std::isnan(ctx.log.steps.back().test_loss)) {
    StepRecord pre;
    pre.step = ctx.step;
    pre.phase = ev.phase;
    pre.reg_value = ev.reg_at_prune;
    pre.test_loss = before.loss;
    pre.test_acc = before.accuracy;
    ctx.log.steps.push_back(pre);
  }
  StepRecord rec;
  rec.step = ctx.step;
  rec.phase = phase == Phase::opt1 ? "prune1" : "prune2";
  rec.reg_value = current_reg(m);
  rec.test_loss = after.loss;
  rec.test_acc = after.accuracy;
  ctx.log.steps.push_back(rec);
  ctx.log.prune_events.push_back(ev);
  return ev;
}

void catalyst_prune_full(Model& model, const TrainConfig& cfg, const Split& data, TrainContext& ctx) {
  for (auto& n : cfg.validate()) ctx.log.notes.push_back(std::move(n));
  model.validate();

  for (std::size_t i : zero_filters(model.target.sub.w))
    ctx.log.notes.push_back("channel " + std::to_string(i) + " has a zero filter at embed (c = 0/0)");
  embed(model, cfg.c_init);
  ctx.log.snapshots.push_back(snapshot(model, "post-embed"));

  run_opt_phase(model, cfg, Phase::opt1, data, ctx);
  ctx.log.snapshots.push_back(snapshot(model, "post-opt1"));
  prune_step(model, Phase::opt1, data, ctx, cfg.seed + 1);
  ctx.log.snapshots.push_back(snapshot(model, "post-prune1"));

  if (model.target.sub.n_hidden() > 0) {
    run_opt_phase(model, cfg, Phase::opt2, data, ctx);
  } else {
    ctx.log.notes.push_back("opt2 skipped: every channel was pruned in opt1");
    ctx.log.phases.push_back({"opt2", 0, "empty"});
  }
  ctx.log.snapshots.push_back(snapshot(model, "post-opt2"));
  prune_step(model, Phase::opt2, data, ctx, cfg.seed + 2);
  ctx.log.snapshots.push_back(snapshot(model, "post-prune2"));

  train_plain(model, cfg, Phase::finetune, cfg.finetune_epochs, cfg.lr_finetune, data, ctx);
  ctx.log.snapshots.push_back(snapshot(model, "final"));
}

PruneResult catalyst_prune_full(Model model, const TrainConfig& cfg, const Split& data) {
  TrainContext ctx(cfg.seed);
  catalyst_prune_full(model, cfg, data, ctx);
  return {std::move(model), std::move(ctx.log)};
}

}  // namespace catalyst
