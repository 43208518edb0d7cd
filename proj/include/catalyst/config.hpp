// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration files: one `key = value` per line, `#` starts a
// comment, lists are comma separated. Unknown keys are rejected.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "catalyst/data.hpp"
#include "catalyst/model.hpp"
#include "catalyst/pipeline.hpp"

namespace catalyst {

struct ExperimentConfig {
  TrainConfig train;
  DatasetSpec dataset;
  bool use_csv = false;
  std::filesystem::path csv_path;
  std::string csv_label_column = "label";
  std::vector<std::size_t> widths{64, 64};
  Activation activation = Activation::relu;
  std::size_t target = 0;
  std::filesystem::path output_dir;
  bool baseline = true;
  std::size_t histogram_bins = 20;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses config text on top of the defaults. Throws ConfigError naming the
/// offending line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Reads flat key/value text without interpreting the keys.
KeyValues parse_key_values(const std::string& text);

/// Every key with its resolved value, in a fixed order; parse_config accepts
/// the rendered form and reproduces the same configuration.
KeyValues to_key_values(const ExperimentConfig& cfg);
std::string render_config(const ExperimentConfig& cfg);

/// Cross-field checks: widths chain, target position valid, CSV present.
void validate(const ExperimentConfig& cfg);

}  // namespace catalyst
