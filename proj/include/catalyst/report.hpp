// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0
//
// Run-directory layout written by emit_reports:
//   steps.csv                 step,phase,train_loss,reg_value,test_loss,test_acc
//   prune_events.csv          phase,pruned_count,delta_acc,delta_loss,macs_before,macs_after,...
//   phases.csv                phase,steps,stop_reason
//   channels_<checkpoint>.csv layer,channel,c,filter_norm,d
//   hist_<checkpoint>.csv     log10(c) histogram: bin_lo,bin_hi,count
//   summary.json
// Missing values are written as empty CSV fields and JSON null.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "catalyst/config.hpp"
#include "catalyst/pipeline.hpp"

namespace catalyst {

struct EventSummary {
  std::string phase;
  std::size_t pruned = 0;
  double delta_acc = 0.0;   // percentage points
  double delta_loss = 0.0;
  double max_deviation = 0.0;
  std::optional<double> margin_log10;

  friend bool operator==(const EventSummary&, const EventSummary&);
};

struct Summary {
  std::uint64_t seed = 0;
  KeyValues config;
  double final_test_acc = 0.0;  // fraction
  double final_test_loss = 0.0;
  std::optional<double> baseline_test_acc;
  std::optional<double> baseline_test_loss;
  std::int64_t macs_dense = 0, macs_final = 0;
  std::int64_t params_dense = 0, params_final = 0;
  double speedup = 1.0;  // macs_dense / macs_final
  std::size_t channels_initial = 0, channels_final = 0;
  std::optional<double> min_margin_log10;
  std::vector<EventSummary> events;
  std::vector<PhaseSummary> phases;

  friend bool operator==(const Summary&, const Summary&);
};

/// Derives every summary field recoverable from the log alone; seed, config
/// and baseline stay default.
Summary summarize(const RunLog& log);

nlohmann::ordered_json to_json(const Summary& s);
Summary summary_from_json(const nlohmann::ordered_json& j);

struct HistogramExport {
  std::string checkpoint;
  std::size_t layer = 0;
  Vector c, filter_norm, d;
  std::vector<double> bin_edges;  // over log10(c), finite ratios only
  std::vector<std::size_t> counts;
};

HistogramExport make_histogram(const ChannelSnapshot& s, std::size_t bins);

/// Writes the run directory (created if needed). Throws IoError with the path.
void emit_reports(const RunLog& log, const Summary& summary, const std::filesystem::path& outdir,
                  std::size_t histogram_bins = 20);

/// Reads steps.csv, prune_events.csv, phases.csv and the channels_*.csv files back.
RunLog read_run_log(const std::filesystem::path& dir);

/// Recomputes the summary of a run directory from its CSV logs, carrying over
/// seed, config and baseline from the stored summary.json.
Summary recompute_summary(const std::filesystem::path& dir);

Summary load_summary(const std::filesystem::path& file);

}  // namespace catalyst
