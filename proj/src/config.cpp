// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "catalyst/errors.hpp"
#include "catalyst/text.hpp"

namespace catalyst {

namespace {

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

std::size_t parse_size(std::string_view v, std::string_view key) {
  const long n = parse_long(v, key);
  if (n < 0) throw ConfigError(std::string(key) + " must be >= 0");
  return static_cast<std::size_t>(n);
}

bool parse_bool(std::string_view v, std::string_view key) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(std::string(key) + ": '" + std::string(v) + "' is not a boolean");
}

template <class T, class Parse>
std::vector<T> parse_list(std::string_view v, std::string_view key, Parse parse) {
  std::vector<T> out;
  if (trim(v).empty()) return out;
  for (const auto& item : split(v, ',')) out.push_back(static_cast<T>(parse(item, key)));
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(xs[i]);
    else
      out += std::to_string(xs[i]);
  }
  return out;
}

Field real(std::string key, double TrainConfig::*member) {
  return {key, [member, key](ExperimentConfig& c, std::string_view v) { c.train.*member = parse_double(v, key); },
          [member](const ExperimentConfig& c) { return format_double(c.train.*member); }};
}

Field integer(std::string key, long TrainConfig::*member) {
  return {key, [member, key](ExperimentConfig& c, std::string_view v) { c.train.*member = parse_long(v, key); },
          [member](const ExperimentConfig& c) { return std::to_string(c.train.*member); }};
}

void add_schedule(std::vector<Field>& f, const std::string& name, LrSchedule TrainConfig::*member) {
  f.push_back({"lr_" + name,
               [=](ExperimentConfig& c, std::string_view v) { (c.train.*member).base = parse_double(v, "lr_" + name); },
               [=](const ExperimentConfig& c) { return format_double((c.train.*member).base); }});
  const std::string ek = "lr_" + name + "_decay_epochs";
  f.push_back({ek,
               [=](ExperimentConfig& c, std::string_view v) {
                 (c.train.*member).decay_epochs = parse_list<long>(v, ek, parse_long);
               },
               [=](const ExperimentConfig& c) { return join((c.train.*member).decay_epochs); }});
  const std::string rk = "lr_" + name + "_decay_ratio";
  f.push_back({rk, [=](ExperimentConfig& c, std::string_view v) { (c.train.*member).ratio = parse_double(v, rk); },
               [=](const ExperimentConfig& c) { return format_double((c.train.*member).ratio); }});
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"seed",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.train.seed = static_cast<std::uint64_t>(parse_size(v, "seed"));
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.train.seed); }});
    f.push_back({"batch_size",
                 [](ExperimentConfig& c, std::string_view v) { c.train.batch_size = parse_size(v, "batch_size"); },
                 [](const ExperimentConfig& c) { return std::to_string(c.train.batch_size); }});
    f.push_back(real("c_init", &TrainConfig::c_init));
    f.push_back(real("alpha_theta", &TrainConfig::alpha_theta));
    f.push_back(real("alpha_D", &TrainConfig::alpha_d));
    f.push_back(real("gamma0", &TrainConfig::gamma0));
    f.push_back(real("gamma0_prime", &TrainConfig::gamma0_prime));
    f.push_back(real("epsilon", &TrainConfig::epsilon));
    f.push_back(real("epsilon_prime", &TrainConfig::epsilon_prime));
    f.push_back(real("kappa", &TrainConfig::kappa));
    f.push_back(integer("T", &TrainConfig::t_budget));
    f.push_back(integer("T_prime", &TrainConfig::t_prime_budget));
    f.push_back(integer("pretrain_epochs", &TrainConfig::pretrain_epochs));
    f.push_back(integer("finetune_epochs", &TrainConfig::finetune_epochs));
    f.push_back(real("momentum", &TrainConfig::momentum));
    f.push_back(real("loss_weight", &TrainConfig::loss_weight));
    f.push_back(integer("eval_every", &TrainConfig::eval_every));
    add_schedule(f, "pretrain", &TrainConfig::lr_pretrain);
    add_schedule(f, "opt1", &TrainConfig::lr_opt1);
    add_schedule(f, "opt2", &TrainConfig::lr_opt2);
    add_schedule(f, "finetune", &TrainConfig::lr_finetune);

    f.push_back({"dataset",
                 [](ExperimentConfig& c, std::string_view v) {
                   v = trim(v);
                   c.use_csv = v == "csv";
                   if (!c.use_csv) c.dataset.generator = std::string(v);
                 },
                 [](const ExperimentConfig& c) { return c.use_csv ? std::string("csv") : c.dataset.generator; }});
    f.push_back({"dataset_classes",
                 [](ExperimentConfig& c, std::string_view v) { c.dataset.classes = parse_size(v, "dataset_classes"); },
                 [](const ExperimentConfig& c) { return std::to_string(c.dataset.classes); }});
    f.push_back({"dataset_dim", [](ExperimentConfig& c, std::string_view v) { c.dataset.dim = parse_size(v, "dataset_dim"); },
                 [](const ExperimentConfig& c) { return std::to_string(c.dataset.dim); }});
    f.push_back({"dataset_train",
                 [](ExperimentConfig& c, std::string_view v) { c.dataset.n_train = parse_size(v, "dataset_train"); },
                 [](const ExperimentConfig& c) { return std::to_string(c.dataset.n_train); }});
    f.push_back({"dataset_test",
                 [](ExperimentConfig& c, std::string_view v) { c.dataset.n_test = parse_size(v, "dataset_test"); },
                 [](const ExperimentConfig& c) { return std::to_string(c.dataset.n_test); }});
    f.push_back({"dataset_noise",
                 [](ExperimentConfig& c, std::string_view v) { c.dataset.noise = parse_double(v, "dataset_noise"); },
                 [](const ExperimentConfig& c) { return format_double(c.dataset.noise); }});
    f.push_back({"dataset_seed",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.dataset.seed = static_cast<std::uint64_t>(parse_size(v, "dataset_seed"));
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.dataset.seed); }});
    f.push_back({"csv_path", [](ExperimentConfig& c, std::string_view v) { c.csv_path = std::string(trim(v)); },
                 [](const ExperimentConfig& c) { return c.csv_path.string(); }});
    f.push_back({"csv_label_column",
                 [](ExperimentConfig& c, std::string_view v) { c.csv_label_column = std::string(trim(v)); },
                 [](const ExperimentConfig& c) { return c.csv_label_column; }});
    f.push_back({"model_widths",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.widths = parse_list<std::size_t>(v, "model_widths", parse_size);
                 },
                 [](const ExperimentConfig& c) { return join(c.widths); }});
    f.push_back({"model_activation",
                 [](ExperimentConfig& c, std::string_view v) { c.activation = activation_from_string(trim(v)); },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.activation)); }});
    f.push_back({"model_target", [](ExperimentConfig& c, std::string_view v) { c.target = parse_size(v, "model_target"); },
                 [](const ExperimentConfig& c) { return std::to_string(c.target); }});
    f.push_back({"output_dir", [](ExperimentConfig& c, std::string_view v) { c.output_dir = std::string(trim(v)); },
                 [](const ExperimentConfig& c) { return c.output_dir.string(); }});
    f.push_back({"baseline", [](ExperimentConfig& c, std::string_view v) { c.baseline = parse_bool(v, "baseline"); },
                 [](const ExperimentConfig& c) { return std::string(c.baseline ? "true" : "false"); }});
    f.push_back({"histogram_bins",
                 [](ExperimentConfig& c, std::string_view v) { c.histogram_bins = parse_size(v, "histogram_bins"); },
                 [](const ExperimentConfig& c) { return std::to_string(c.histogram_bins); }});
    return f;
  }();
  return table;
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key(trim(s.substr(0, eq)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert(key).second)
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    out.emplace_back(std::move(key), std::string(trim(s.substr(eq + 1))));
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : parse_key_values(text)) {
    const auto& table = fields();
    auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->set(cfg, value);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg = parse_config(buf.str());
  if (cfg.use_csv && cfg.csv_path.is_relative()) cfg.csv_path = path.parent_path() / cfg.csv_path;
  return cfg;
}

KeyValues to_key_values(const ExperimentConfig& cfg) {
  KeyValues out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(cfg));
  return out;
}

std::string render_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : to_key_values(cfg)) out += k + " = " + v + "\n";
  return out;
}

void validate(const ExperimentConfig& cfg) {
  cfg.train.validate();
  if (cfg.widths.empty()) throw ConfigError("model_widths must list at least one hidden width");
  for (auto w : cfg.widths)
    if (w == 0) throw ConfigError("model_widths entries must be positive");
  if (cfg.target >= cfg.widths.size())
    throw ConfigError("model_target " + std::to_string(cfg.target) + " out of range for " +
                      std::to_string(cfg.widths.size()) + " hidden layers");
  if (cfg.use_csv) {
    if (cfg.csv_path.empty()) throw ConfigError("dataset = csv requires csv_path");
    if (!std::filesystem::exists(cfg.csv_path)) throw ConfigError("csv_path '" + cfg.csv_path.string() + "' does not exist");
  } else if (cfg.dataset.generator != "gaussian-blobs" && cfg.dataset.generator != "concentric-rings" &&
             cfg.dataset.generator != "spiral") {
    throw ConfigError("unknown dataset generator '" + cfg.dataset.generator + "'");
  }
  if (cfg.histogram_bins == 0) throw ConfigError("histogram_bins must be positive");
}

}  // namespace catalyst
