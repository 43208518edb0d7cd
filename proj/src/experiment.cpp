// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/experiment.hpp"

namespace catalyst {

Split load_data(const ExperimentConfig& cfg) {
  if (cfg.use_csv) return load_csv_dataset(cfg.csv_path, cfg.csv_label_column, cfg.dataset.seed);
  return generate_dataset(cfg.dataset);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const Split data = load_data(cfg);
  Model model = make_mlp(data.train.dim(), cfg.widths, data.num_classes, cfg.target, cfg.activation, cfg.train.seed);

  TrainContext ctx(cfg.train.seed);
  train_plain(model, cfg.train, Phase::pretrain, cfg.train.pretrain_epochs, cfg.train.lr_pretrain, data, ctx);
  const long pretrain_steps = ctx.step;

  ExperimentResult res;
  res.dense = model;
  catalyst_prune_full(model, cfg.train, data, ctx);
  res.pruned = std::move(model);

  if (cfg.baseline) {
    const long budget = ctx.step - pretrain_steps;
    const long per_epoch =
        static_cast<long>((data.train.size() + cfg.train.batch_size - 1) / cfg.train.batch_size);
    Model dense = res.dense;
    TrainContext bctx(cfg.train.seed + 0x5bd1e995ULL);
    train_plain(dense, cfg.train, Phase::baseline, (budget + per_epoch - 1) / per_epoch, cfg.train.lr_finetune, data,
                bctx);
    res.baseline = evaluate(dense, data.test);
  }

  res.log = std::move(ctx.log);
  res.summary = summarize(res.log);
  res.summary.seed = cfg.train.seed;
  // Where the run was written is not part of what was run.
  for (auto& kv : to_key_values(cfg))
    if (kv.first != "output_dir") res.summary.config.push_back(std::move(kv));
  if (res.baseline) {
    res.summary.baseline_test_acc = res.baseline->accuracy;
    res.summary.baseline_test_loss = res.baseline->loss;
  }
  if (!cfg.output_dir.empty()) emit_reports(res.log, res.summary, cfg.output_dir, cfg.histogram_bins);
  return res;
}

}  // namespace catalyst
