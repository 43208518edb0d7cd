// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "catalyst/config.hpp"
#include "catalyst/nn.hpp"
#include "catalyst/pipeline.hpp"
#include "catalyst/report.hpp"

namespace catalyst {

struct ExperimentResult {
  Model dense;   // after pretraining
  Model pruned;  // after the full prune pipeline and finetuning
  RunLog log;
  Summary summary;
  std::optional<Evaluation> baseline;
};

Split load_data(const ExperimentConfig& cfg);

/// Dataset -> pretrain -> prune pipeline -> (optional) dense baseline trained
/// for the same number of post-pretrain steps. Writes the run directory when
/// cfg.output_dir is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace catalyst
