// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "catalyst/errors.hpp"
#include "catalyst/text.hpp"

namespace catalyst {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

const char* const kCheckpoints[] = {"post-embed", "post-opt1", "post-prune1", "post-opt2", "post-prune2", "final"};

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same(*a, *b);
}

// NaN -> null, +-inf -> "inf"/"-inf".
ojson number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return format_double(v);
  return v;
}

ojson number(const std::optional<double>& v) { return v ? number(*v) : ojson(nullptr); }

double read_number(const ojson& j) {
  if (j.is_null()) return NAN;
  if (j.is_string()) return parse_double(j.get<std::string>(), "summary number");
  return j.get<double>();
}

std::optional<double> read_optional(const ojson& j) {
  if (j.is_null()) return std::nullopt;
  return read_number(j);
}

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }
std::string cell(const std::optional<double>& v) { return v ? cell(*v) : std::string(); }

double read_cell(const std::string& s, const char* what) {
  return trim(s).empty() ? NAN : parse_double(s, what);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read '" + p.string() + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(split(line, ','));
  return rows;
}

void expect_fields(const std::vector<std::string>& row, std::size_t n, const fs::path& p) {
  if (row.size() != n)
    throw IoError("'" + p.string() + "': expected " + std::to_string(n) + " fields, found " + std::to_string(row.size()));
}

}  // namespace

bool operator==(const EventSummary& a, const EventSummary& b) {
  return a.phase == b.phase && a.pruned == b.pruned && same(a.delta_acc, b.delta_acc) &&
         same(a.delta_loss, b.delta_loss) && same(a.max_deviation, b.max_deviation) &&
         same(a.margin_log10, b.margin_log10);
}

bool operator==(const Summary& a, const Summary& b) {
  auto phases_eq = [](const std::vector<PhaseSummary>& x, const std::vector<PhaseSummary>& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(), [](const PhaseSummary& p, const PhaseSummary& q) {
      return p.phase == q.phase && p.steps == q.steps && p.stop_reason == q.stop_reason;
    });
  };
  return a.seed == b.seed && a.config == b.config && same(a.final_test_acc, b.final_test_acc) &&
         same(a.final_test_loss, b.final_test_loss) && same(a.baseline_test_acc, b.baseline_test_acc) &&
         same(a.baseline_test_loss, b.baseline_test_loss) && a.macs_dense == b.macs_dense &&
         a.macs_final == b.macs_final && a.params_dense == b.params_dense && a.params_final == b.params_final &&
         same(a.speedup, b.speedup) && a.channels_initial == b.channels_initial &&
         a.channels_final == b.channels_final && same(a.min_margin_log10, b.min_margin_log10) &&
         a.events == b.events && phases_eq(a.phases, b.phases);
}

Summary summarize(const RunLog& log) {
  Summary s;
  s.final_test_acc = NAN;
  s.final_test_loss = NAN;
  for (auto it = log.steps.rbegin(); it != log.steps.rend(); ++it)
    if (!std::isnan(it->test_acc)) {
      s.final_test_acc = it->test_acc;
      s.final_test_loss = it->test_loss;
      break;
    }
  for (const auto& e : log.prune_events) {
    EventSummary es;
    es.phase = e.phase;
    es.pruned = e.pruned.size();
    es.delta_acc = 100.0 * (e.acc_after - e.acc_before);
    es.delta_loss = e.loss_after - e.loss_before;
    es.max_deviation = e.max_deviation;
    es.margin_log10 = e.margin_log10;
    if (e.margin_log10 && (!s.min_margin_log10 || *e.margin_log10 < *s.min_margin_log10))
      s.min_margin_log10 = e.margin_log10;
    s.events.push_back(std::move(es));
  }
  if (!log.prune_events.empty()) {
    const auto& first = log.prune_events.front();
    const auto& last = log.prune_events.back();
    s.macs_dense = first.macs_before;
    // The first event sees an extended model: remove the 2 N_W catalyst scalars.
    s.params_dense = first.params_before - 2 * static_cast<std::int64_t>(first.channels_before);
    s.macs_final = last.macs_after;
    s.params_final = last.params_after;
    s.channels_initial = first.channels_before;
    s.channels_final = last.channels_before - last.pruned.size();
    s.speedup = static_cast<double>(s.macs_dense) / static_cast<double>(s.macs_final);
  }
  s.phases = log.phases;
  return s;
}

ojson to_json(const Summary& s) {
  ojson j;
  j["seed"] = s.seed;
  j["final_test_acc"] = number(s.final_test_acc);
  j["final_test_loss"] = number(s.final_test_loss);
  j["baseline_test_acc"] = number(s.baseline_test_acc);
  j["baseline_test_loss"] = number(s.baseline_test_loss);
  j["macs_dense"] = s.macs_dense;
  j["macs_final"] = s.macs_final;
  j["params_dense"] = s.params_dense;
  j["params_final"] = s.params_final;
  j["speedup"] = number(s.speedup);
  j["channels_initial"] = s.channels_initial;
  j["channels_final"] = s.channels_final;
  j["min_margin_log10"] = number(s.min_margin_log10);
  ojson events = ojson::array();
  for (const auto& e : s.events)
    events.push_back(ojson{{"phase", e.phase},
                           {"pruned", e.pruned},
                           {"delta_acc_pp", number(e.delta_acc)},
                           {"delta_loss", number(e.delta_loss)},
                           {"max_deviation", number(e.max_deviation)},
                           {"margin_log10", number(e.margin_log10)}});
  j["prune_events"] = std::move(events);
  ojson phases = ojson::array();
  for (const auto& p : s.phases)
    phases.push_back(ojson{{"phase", p.phase}, {"steps", p.steps}, {"stop_reason", p.stop_reason}});
  j["phases"] = std::move(phases);
  ojson cfg = ojson::object();
  for (const auto& [k, v] : s.config) cfg[k] = v;
  j["config"] = std::move(cfg);
  return j;
}

Summary summary_from_json(const ojson& j) {
  Summary s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.final_test_acc = read_number(j.at("final_test_acc"));
  s.final_test_loss = read_number(j.at("final_test_loss"));
  s.baseline_test_acc = read_optional(j.at("baseline_test_acc"));
  s.baseline_test_loss = read_optional(j.at("baseline_test_loss"));
  s.macs_dense = j.at("macs_dense").get<std::int64_t>();
  s.macs_final = j.at("macs_final").get<std::int64_t>();
  s.params_dense = j.at("params_dense").get<std::int64_t>();
  s.params_final = j.at("params_final").get<std::int64_t>();
  s.speedup = read_number(j.at("speedup"));
  s.channels_initial = j.at("channels_initial").get<std::size_t>();
  s.channels_final = j.at("channels_final").get<std::size_t>();
  s.min_margin_log10 = read_optional(j.at("min_margin_log10"));
  for (const auto& e : j.at("prune_events")) {
    EventSummary es;
    es.phase = e.at("phase").get<std::string>();
    es.pruned = e.at("pruned").get<std::size_t>();
    es.delta_acc = read_number(e.at("delta_acc_pp"));
    es.delta_loss = read_number(e.at("delta_loss"));
    es.max_deviation = read_number(e.at("max_deviation"));
    es.margin_log10 = read_optional(e.at("margin_log10"));
    s.events.push_back(std::move(es));
  }
  for (const auto& p : j.at("phases"))
    s.phases.push_back({p.at("phase").get<std::string>(), p.at("steps").get<long>(), p.at("stop_reason").get<std::string>()});
  for (const auto& [k, v] : j.at("config").items()) s.config.emplace_back(k, v.get<std::string>());
  return s;
}

HistogramExport make_histogram(const ChannelSnapshot& s, std::size_t bins) {
  HistogramExport h{s.checkpoint, s.layer, s.c, s.filter_norm, s.d, {}, {}};
  std::vector<double> logs;
  for (Eigen::Index i = 0; i < s.c.size(); ++i)
    if (s.c[i] > 0.0 && std::isfinite(s.c[i])) logs.push_back(std::log10(s.c[i]));
  if (bins == 0) bins = 1;
  double lo = -0.5, hi = 0.5;
  if (!logs.empty()) {
    lo = *std::min_element(logs.begin(), logs.end());
    hi = *std::max_element(logs.begin(), logs.end());
    if (hi - lo < 1e-9) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  for (std::size_t b = 0; b <= bins; ++b)
    h.bin_edges.push_back(lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins));
  h.counts.assign(bins, 0);
  for (double l : logs) {
    auto b = static_cast<std::size_t>((l - lo) / (hi - lo) * static_cast<double>(bins));
    ++h.counts[std::min(b, bins - 1)];
  }
  return h;
}

void emit_reports(const RunLog& log, const Summary& summary, const fs::path& outdir, std::size_t histogram_bins) {
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw IoError("cannot create '" + outdir.string() + "': " + ec.message());

  {
    auto out = open_out(outdir / "steps.csv");
    out << "step,phase,train_loss,reg_value,test_loss,test_acc\n";
    for (const auto& r : log.steps)
      out << r.step << ',' << r.phase << ',' << cell(r.train_loss) << ',' << cell(r.reg_value) << ','
          << cell(r.test_loss) << ',' << cell(r.test_acc) << '\n';
  }
  {
    auto out = open_out(outdir / "prune_events.csv");
    out << "phase,pruned_count,delta_acc,delta_loss,macs_before,macs_after,params_before,params_after,"
           "channels_before,acc_before,acc_after,loss_before,loss_after,reg_at_prune,max_deviation,margin_log10,"
           "step,pruned_indices\n";
    for (const auto& e : log.prune_events) {
      std::string idx;
      for (std::size_t k = 0; k < e.pruned.size(); ++k) idx += (k ? ";" : "") + std::to_string(e.pruned[k]);
      out << e.phase << ',' << e.pruned.size() << ',' << cell(100.0 * (e.acc_after - e.acc_before)) << ','
          << cell(e.loss_after - e.loss_before) << ',' << e.macs_before << ',' << e.macs_after << ','
          << e.params_before << ',' << e.params_after << ',' << e.channels_before << ',' << cell(e.acc_before) << ','
          << cell(e.acc_after) << ',' << cell(e.loss_before) << ',' << cell(e.loss_after) << ','
          << cell(e.reg_at_prune) << ',' << cell(e.max_deviation) << ',' << cell(e.margin_log10) << ',' << e.step
          << ',' << idx << '\n';
    }
  }
  {
    auto out = open_out(outdir / "phases.csv");
    out << "phase,steps,stop_reason\n";
    for (const auto& p : log.phases) out << p.phase << ',' << p.steps << ',' << p.stop_reason << '\n';
  }
  for (const auto& snap : log.snapshots) {
    auto out = open_out(outdir / ("channels_" + snap.checkpoint + ".csv"));
    out << "layer,channel,c,filter_norm,d\n";
    for (Eigen::Index i = 0; i < snap.c.size(); ++i)
      out << snap.layer << ',' << i << ',' << cell(snap.c[i]) << ',' << cell(snap.filter_norm[i]) << ','
          << cell(snap.d[i]) << '\n';
    const HistogramExport h = make_histogram(snap, histogram_bins);
    auto hist = open_out(outdir / ("hist_" + snap.checkpoint + ".csv"));
    hist << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
      hist << cell(h.bin_edges[b]) << ',' << cell(h.bin_edges[b + 1]) << ',' << h.counts[b] << '\n';
  }
  {
    auto out = open_out(outdir / "summary.json");
    out << to_json(summary).dump(2) << '\n';
  }
}

RunLog read_run_log(const fs::path& dir) {
  RunLog log;
  const fs::path steps = dir / "steps.csv";
  for (const auto& row : read_csv(steps)) {
    expect_fields(row, 6, steps);
    StepRecord r;
    r.step = parse_long(row[0], "step");
    r.phase = row[1];
    r.train_loss = read_cell(row[2], "train_loss");
    r.reg_value = read_cell(row[3], "reg_value");
    r.test_loss = read_cell(row[4], "test_loss");
    r.test_acc = read_cell(row[5], "test_acc");
    log.steps.push_back(std::move(r));
  }
  const fs::path events = dir / "prune_events.csv";
  for (const auto& row : read_csv(events)) {
    expect_fields(row, 18, events);
    PruneEvent e;
    e.phase = row[0];
    e.macs_before = parse_long(row[4], "macs_before");
    e.macs_after = parse_long(row[5], "macs_after");
    e.params_before = parse_long(row[6], "params_before");
    e.params_after = parse_long(row[7], "params_after");
    e.channels_before = static_cast<std::size_t>(parse_long(row[8], "channels_before"));
    e.acc_before = read_cell(row[9], "acc_before");
    e.acc_after = read_cell(row[10], "acc_after");
    e.loss_before = read_cell(row[11], "loss_before");
    e.loss_after = read_cell(row[12], "loss_after");
    e.reg_at_prune = read_cell(row[13], "reg_at_prune");
    e.max_deviation = read_cell(row[14], "max_deviation");
    if (!trim(row[15]).empty()) e.margin_log10 = parse_double(row[15], "margin_log10");
    e.step = parse_long(row[16], "step");
    if (!trim(row[17]).empty())
      for (const auto& k : split(row[17], ';')) e.pruned.push_back(static_cast<std::size_t>(parse_long(k, "index")));
    if (e.pruned.size() != static_cast<std::size_t>(parse_long(row[1], "pruned_count")))
      throw IoError("'" + events.string() + "': pruned_count disagrees with pruned_indices");
    log.prune_events.push_back(std::move(e));
  }
  const fs::path phases = dir / "phases.csv";
  for (const auto& row : read_csv(phases)) {
    expect_fields(row, 3, phases);
    log.phases.push_back({row[0], parse_long(row[1], "steps"), row[2]});
  }
  for (const char* name : kCheckpoints) {
    const fs::path p = dir / (std::string("channels_") + name + ".csv");
    if (!fs::exists(p)) continue;
    const auto rows = read_csv(p);
    ChannelSnapshot s;
    s.checkpoint = name;
    const auto n = static_cast<Eigen::Index>(rows.size());
    s.c.resize(n);
    s.filter_norm.resize(n);
    s.d.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      expect_fields(row, 5, p);
      s.layer = static_cast<std::size_t>(parse_long(row[0], "layer"));
      s.c[i] = read_cell(row[2], "c");
      s.filter_norm[i] = read_cell(row[3], "filter_norm");
      s.d[i] = read_cell(row[4], "d");
    }
    log.snapshots.push_back(std::move(s));
  }
  return log;
}

Summary load_summary(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read '" + file.string() + "'");
  try {
    return summary_from_json(ojson::parse(in));
  } catch (const ojson::exception& e) {
    throw IoError("'" + file.string() + "': " + e.what());
  }
}

Summary recompute_summary(const fs::path& dir) {
  Summary s = summarize(read_run_log(dir));
  if (fs::exists(dir / "summary.json")) {
    const Summary stored = load_summary(dir / "summary.json");
    s.seed = stored.seed;
    s.config = stored.config;
    s.baseline_test_acc = stored.baseline_test_acc;
    s.baseline_test_loss = stored.baseline_test_loss;
  }
  return s;
}

}  // namespace catalyst
