// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstring>

#include "doctest.h"

#include "catalyst/catalyst.hpp"
#include "catalyst/data.hpp"
#include "catalyst/errors.hpp"
#include "catalyst/pipeline.hpp"

using namespace catalyst;

namespace {

Split small_data() { return generate_dataset({"gaussian-blobs", 3, 2, 300, 90, 1.0, 5}); }

TrainConfig small_cfg() {
  TrainConfig c;
  c.t_budget = 200;
  c.t_prime_budget = 200;
  c.finetune_epochs = 1;
  c.batch_size = 32;
  return c;
}

Model pretrained(const Split& data, const TrainConfig& cfg) {
  Model m = make_mlp(2, {16, 16}, 3, 0, Activation::relu, 1);
  TrainContext ctx(9);
  train_plain(m, cfg, Phase::pretrain, 3, cfg.lr_pretrain, data, ctx);
  return m;
}

}  // namespace

TEST_CASE("gamma_schedule") {
  CHECK(gamma_schedule(0.007, 0) == 0.007);
  CHECK(gamma_schedule(0.007, 4) == doctest::Approx(0.014).epsilon(1e-15));
  CHECK(gamma_schedule(3e-4, 0) == 3e-4);
}

TEST_CASE("LrSchedule steps down at the listed epochs") {
  const LrSchedule s{0.05, {30, 60}, 0.1};
  CHECK(s.at(0) == 0.05);
  CHECK(s.at(29) == 0.05);
  CHECK(s.at(30) == doctest::Approx(0.005));
  CHECK(s.at(75) == doctest::Approx(0.0005));
}

TEST_CASE("TrainConfig validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.gamma0 = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = TrainConfig{};
  c.momentum = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("no forces leave the extended model unchanged") {
  const Split data = small_data();
  TrainConfig cfg = small_cfg();
  cfg.gamma0 = 0.0;
  cfg.loss_weight = 0.0;
  cfg.alpha_theta = 0.0;
  cfg.alpha_d = 0.0;
  cfg.t_budget = 50;
  Model m = pretrained(data, small_cfg());
  embed(m, 1.0);
  const Model before = m;
  TrainContext ctx(0);
  const auto s = run_opt_phase(m, cfg, Phase::opt1, data, ctx);
  CHECK(s.stop_reason == "budget");
  CHECK(s.steps == 50);
  CHECK(m.target.sub.w == before.target.sub.w);
  CHECK(m.target.d.delta == before.target.d.delta);
  CHECK(c_ratios(m.target) == c_ratios(before.target));
}

TEST_CASE("pure regulariser keeps every ratio at one") {
  const Split data = small_data();
  TrainConfig cfg = small_cfg();
  cfg.loss_weight = 0.0;
  cfg.alpha_theta = 0.0;
  cfg.alpha_d = 0.0;
  cfg.epsilon = 1e-300;
  cfg.t_budget = 500;
  Model m = pretrained(data, small_cfg());
  embed(m, 1.0);
  const double reg0 = catalyst_reg(m.target.d, m.target.sub.w);
  TrainContext ctx(0);
  run_opt_phase(m, cfg, Phase::opt1, data, ctx);
  CHECK(catalyst_reg(m.target.d, m.target.sub.w) < reg0);
  const Vector c = c_ratios(m.target);
  CHECK((c.array() - 1.0).abs().maxCoeff() <= 1e-6);
}

TEST_CASE("opt2 requires Dbar = 0") {
  const Split data = small_data();
  Model m = pretrained(data, small_cfg());
  embed(m, 1.0);
  TrainContext ctx(0);
  CHECK_THROWS_AS(run_opt_phase(m, small_cfg(), Phase::opt2, data, ctx), Error);
}

TEST_CASE("tiny budgets still prune totally and log both events") {
  const Split data = small_data();
  TrainConfig cfg = small_cfg();
  cfg.t_budget = 5;
  cfg.t_prime_budget = 5;
  cfg.gamma0 = 50.0;
  cfg.gamma0_prime = 50.0;
  const auto r = catalyst_prune_full(pretrained(data, cfg), cfg, data);
  REQUIRE(r.log.prune_events.size() == 2);
  CHECK(r.log.phases[0].phase == "opt1");
  CHECK(r.log.phases[0].steps <= 5);
  CHECK_FALSE(r.model.extended);
  CHECK(r.model.target.sub.n_hidden() ==
        16 - r.log.prune_events[0].pruned.size() - r.log.prune_events[1].pruned.size());
  for (const auto& ev : r.log.prune_events) CHECK(ev.macs_after <= ev.macs_before);
}

TEST_CASE("short runs are deterministic") {
  const Split data = small_data();
  const TrainConfig cfg = small_cfg();
  const auto a = catalyst_prune_full(pretrained(data, cfg), cfg, data);
  const auto b = catalyst_prune_full(pretrained(data, cfg), cfg, data);
  REQUIRE(a.log.steps.size() == b.log.steps.size());
  bool same = true;
  for (std::size_t i = 0; i < a.log.steps.size(); ++i) {
    const auto& x = a.log.steps[i];
    const auto& y = b.log.steps[i];
    same = same && x.step == y.step && x.phase == y.phase && std::memcmp(&x.train_loss, &y.train_loss, 8) == 0 &&
           std::memcmp(&x.reg_value, &y.reg_value, 8) == 0 && std::memcmp(&x.test_acc, &y.test_acc, 8) == 0;
  }
  CHECK(same);
  CHECK(a.model.target.sub.w == b.model.target.sub.w);

  std::vector<std::string> names;
  for (const auto& s : a.log.snapshots) names.push_back(s.checkpoint);
  CHECK(names == std::vector<std::string>{"post-embed", "post-opt1", "post-prune1", "post-opt2", "post-prune2", "final"});
  for (const auto& s : a.log.snapshots) CHECK(std::size_t(s.c.size()) == std::size_t(s.filter_norm.size()));
}

TEST_CASE("c_init shifts the starting ratios") {
  const Split data = small_data();
  TrainConfig cfg = small_cfg();
  cfg.c_init = 2.0;
  cfg.t_budget = 1;
  cfg.t_prime_budget = 1;
  const auto r = catalyst_prune_full(pretrained(data, cfg), cfg, data);
  const Vector c0 = r.log.snapshots.front().c;
  CHECK((c0.array() - 2.0).abs().maxCoeff() <= 1e-12);
  // One step barely moves c = 2, so every channel is above the threshold.
  CHECK(r.log.prune_events[0].pruned.size() == 16);
}
