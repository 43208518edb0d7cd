// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "catalyst/config.hpp"
#include "catalyst/experiment.hpp"
#include "catalyst/report.hpp"
#include "catalyst/text.hpp"

using namespace catalyst;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> read_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    auto f = split(line, ',');
    if (!line.empty() && line.back() == ',') f.push_back("");
    rows.push_back(f);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const ExperimentResult& small_run(const fs::path& dir) {
  static const ExperimentResult r = [&] {
    ExperimentConfig c = parse_config(
        "dataset_train = 300\ndataset_test = 90\nmodel_widths = 16,16\npretrain_epochs = 3\nT = 300\n"
        "T_prime = 300\nfinetune_epochs = 1\n");
    c.output_dir = dir;
    return run_experiment(c);
  }();
  return r;
}

}  // namespace

TEST_CASE("empty run writes header-only CSVs and a valid summary") {
  const fs::path dir = fs::temp_directory_path() / "catalyst_test_report_empty";
  fs::remove_all(dir);
  const RunLog log;
  const Summary s = summarize(log);
  emit_reports(log, s, dir);
  CHECK(slurp(dir / "steps.csv") == "step,phase,train_loss,reg_value,test_loss,test_acc\n");
  CHECK(read_rows(dir / "prune_events.csv").empty());
  CHECK(read_rows(dir / "phases.csv").empty());
  CHECK(load_summary(dir / "summary.json") == s);
  CHECK(recompute_summary(dir) == s);
}

TEST_CASE("summary JSON round trip") {
  Summary s;
  s.seed = 11;
  s.config = {{"seed", "11"}, {"gamma0", "0.03"}};
  s.final_test_acc = 0.9833333333333333;
  s.final_test_loss = 0.0123456789012345;
  s.baseline_test_acc = 0.99;
  s.macs_dense = 4480;
  s.macs_final = 1234;
  s.speedup = 4480.0 / 1234.0;
  s.min_margin_log10 = 6.25;
  s.events.push_back({"opt1", 3, -0.16666666666666666, 1e-7, 2e-12, 6.25});
  s.events.push_back({"opt2", 0, 0.0, 0.0, 0.0, std::nullopt});
  s.phases.push_back({"opt1", 100, "epsilon"});
  CHECK(summary_from_json(nlohmann::ordered_json::parse(to_json(s).dump())) == s);
}

TEST_CASE("histogram bins cover the finite ratios") {
  ChannelSnapshot snap{"post-opt1", 0, Vector{{1e-3, 1.0, 1e3, std::numeric_limits<double>::infinity(), 10.0}}, Vector::Ones(5), Vector::Ones(5)};
  const auto h = make_histogram(snap, 6);
  CHECK(h.bin_edges.size() == 7);
  CHECK(h.bin_edges.front() == doctest::Approx(-3.0));
  CHECK(h.bin_edges.back() == doctest::Approx(3.0));
  std::size_t total = 0;
  for (auto c : h.counts) total += c;
  CHECK(total == 4);
}

TEST_CASE("completed run: files agree with each other and with the summary") {
  const fs::path dir = fs::temp_directory_path() / "catalyst_test_report_run";
  fs::remove_all(dir);
  const auto& r = small_run(dir);
  const Summary& s = r.summary;

  CHECK(recompute_summary(dir) == s);
  CHECK(load_summary(dir / "summary.json") == s);
  if (s.channels_final < s.channels_initial) CHECK(s.speedup > 1.0);
  CHECK(s.speedup == double(s.macs_dense) / double(s.macs_final));
  CHECK(s.macs_final == r.log.prune_events.back().macs_after);

  // Each prune row in steps.csv follows the row holding the "before" evaluation.
  const auto steps = read_rows(dir / "steps.csv");
  const auto events = read_rows(dir / "prune_events.csv");
  REQUIRE(events.size() == 2);
  for (std::size_t e = 0; e < 2; ++e) {
    const std::string tag = e == 0 ? "prune1" : "prune2";
    std::size_t k = 0;
    while (k < steps.size() && steps[k][1] != tag) ++k;
    REQUIRE(k < steps.size());
    REQUIRE(k > 0);
    const double acc_after = std::stod(steps[k][5]), acc_before = std::stod(steps[k - 1][5]);
    const double loss_after = std::stod(steps[k][4]), loss_before = std::stod(steps[k - 1][4]);
    CHECK(std::abs(std::stod(events[e][2]) - 100.0 * (acc_after - acc_before)) <= 1e-12);
    CHECK(std::abs(std::stod(events[e][3]) - (loss_after - loss_before)) <= 1e-12);
  }
  for (const char* cp : {"post-embed", "post-opt1", "post-prune1", "post-opt2", "post-prune2", "final"}) {
    CHECK(fs::exists(dir / (std::string("channels_") + cp + ".csv")));
    CHECK(fs::exists(dir / (std::string("hist_") + cp + ".csv")));
  }
}

TEST_CASE("tampered summary is detected") {
  const fs::path dir = fs::temp_directory_path() / "catalyst_test_report_tamper";
  fs::remove_all(dir);
  const RunLog log;
  Summary s = summarize(log);
  emit_reports(log, s, dir);
  s.channels_final = 99;
  std::ofstream(dir / "summary.json") << to_json(s).dump(2) << '\n';
  CHECK_FALSE(recompute_summary(dir) == load_summary(dir / "summary.json"));
}
