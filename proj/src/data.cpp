// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>

#include "catalyst/errors.hpp"
#include "catalyst/text.hpp"

namespace catalyst {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fills column j of `x` for class `label`.
using Sampler = void (*)(Eigen::Ref<Vector> x, std::size_t label, const DatasetSpec& spec, std::mt19937_64& rng);

void blob(Eigen::Ref<Vector> x, std::size_t label, const DatasetSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  // Centres evenly spaced on a circle of radius 4 in the first two coordinates.
  const double angle = kTwoPi * static_cast<double>(label) / static_cast<double>(spec.classes);
  x.setZero();
  x[0] = 4.0 * std::cos(angle);
  if (x.size() > 1) x[1] = 4.0 * std::sin(angle);
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += spec.noise * n01(rng);
}

void ring(Eigen::Ref<Vector> x, std::size_t label, const DatasetSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  const double r = static_cast<double>(label + 1) + spec.noise * n01(rng);
  const double theta = u(rng);
  x.setZero();
  x[0] = r * std::cos(theta);
  if (x.size() > 1) x[1] = r * std::sin(theta);
  for (Eigen::Index i = 2; i < x.size(); ++i) x[i] = spec.noise * n01(rng);
}

void spiral(Eigen::Ref<Vector> x, std::size_t label, const DatasetSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double t = u(rng);
  const double theta = 1.5 * kTwoPi * t + kTwoPi * static_cast<double>(label) / static_cast<double>(spec.classes);
  const double r = 4.0 * t;
  x.setZero();
  x[0] = r * std::cos(theta) + spec.noise * n01(rng);
  if (x.size() > 1) x[1] = r * std::sin(theta) + spec.noise * n01(rng);
  for (Eigen::Index i = 2; i < x.size(); ++i) x[i] = spec.noise * n01(rng);
}

LabeledData sample(std::size_t n, std::size_t offset, Sampler fn, const DatasetSpec& spec, std::mt19937_64& rng) {
  LabeledData d;
  d.inputs.resize(static_cast<Eigen::Index>(spec.dim), static_cast<Eigen::Index>(n));
  d.labels.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t label = (offset + j) % spec.classes;
    d.labels[j] = static_cast<int>(label);
    Vector x(static_cast<Eigen::Index>(spec.dim));
    fn(x, label, spec, rng);
    d.inputs.col(static_cast<Eigen::Index>(j)) = x;
  }
  return d;
}

}  // namespace

Split generate_dataset(const DatasetSpec& spec) {
  Sampler fn = nullptr;
  if (spec.generator == "gaussian-blobs")
    fn = blob;
  else if (spec.generator == "concentric-rings")
    fn = ring;
  else if (spec.generator == "spiral")
    fn = spiral;
  else
    throw ConfigError("unknown dataset generator '" + spec.generator + "'");
  if (spec.classes < 2) throw ConfigError("dataset: need at least 2 classes");
  if (spec.dim < 1) throw ConfigError("dataset: dim must be >= 1");
  if (spec.n_train < 1) throw ConfigError("dataset: n_train must be >= 1");
  if (spec.noise < 0.0) throw ConfigError("dataset: noise must be >= 0");

  std::mt19937_64 rng(spec.seed);
  Split s;
  s.num_classes = spec.classes;
  s.train = sample(spec.n_train, 0, fn, spec, rng);
  s.test = sample(spec.n_test, 0, fn, spec, rng);
  return s;
}

Split load_csv_dataset(const std::filesystem::path& path, const std::string& label_column, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
  std::vector<std::string> header = split(line, ',');
  for (auto& h : header) h = std::string(trim(h));
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) throw ConfigError(path.string() + ": no label column '" + label_column + "'");
  const auto label_idx = static_cast<std::size_t>(label_it - header.begin());
  const std::size_t n_feat = header.size() - 1;
  if (n_feat == 0) throw ConfigError(path.string() + ": no feature columns");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != header.size())
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " fields, found " + std::to_string(fields.size()));
    std::vector<double> feat;
    feat.reserve(n_feat);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_idx) continue;
      try {
        feat.push_back(parse_double(fields[c], header[c]));
      } catch (const ConfigError&) {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": non-numeric value '" +
                          std::string(trim(fields[c])) + "' in feature column '" + header[c] + "'");
      }
    }
    rows.push_back(std::move(feat));
    raw_labels.emplace_back(trim(fields[label_idx]));
  }
  if (rows.size() < 2) throw ConfigError(path.string() + ": need at least two data rows");

  std::map<std::string, int> label_ids;
  for (const auto& l : raw_labels) label_ids.emplace(l, 0);
  int next = 0;
  for (auto& [name, id] : label_ids) id = next++;

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t n_train = rows.size() * 4 / 5;

  auto build = [&](std::size_t begin, std::size_t end) {
    LabeledData d;
    d.inputs.resize(static_cast<Eigen::Index>(n_feat), static_cast<Eigen::Index>(end - begin));
    for (std::size_t j = begin; j < end; ++j) {
      const auto r = order[j];
      for (std::size_t f = 0; f < n_feat; ++f)
        d.inputs(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(j - begin)) = rows[r][f];
      d.labels.push_back(label_ids.at(raw_labels[r]));
    }
    return d;
  };
  Split s;
  s.num_classes = label_ids.size();
  s.train = build(0, n_train);
  s.test = build(n_train, rows.size());

  const Vector mean = s.train.inputs.rowwise().mean();
  Vector sd = ((s.train.inputs.colwise() - mean).array().square().rowwise().sum() /
               static_cast<double>(s.train.size()))
                  .sqrt();
  for (Eigen::Index f = 0; f < sd.size(); ++f)
    if (sd[f] == 0.0) sd[f] = 1.0;
  for (LabeledData* d : {&s.train, &s.test})
    d->inputs = (d->inputs.colwise() - mean).array().colwise() / sd.array();
  return s;
}

LabeledData gather(const LabeledData& data, const std::vector<std::size_t>& columns) {
  LabeledData out;
  out.inputs.resize(data.inputs.rows(), static_cast<Eigen::Index>(columns.size()));
  out.labels.reserve(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out.inputs.col(static_cast<Eigen::Index>(j)) = data.inputs.col(static_cast<Eigen::Index>(columns[j]));
    out.labels.push_back(data.labels[columns[j]]);
  }
  return out;
}

std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, std::size_t batch_size, std::mt19937_64& rng) {
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t b = 0; b < n; b += batch_size)
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(b),
                     order.begin() + static_cast<std::ptrdiff_t>(std::min(n, b + batch_size)));
  return out;
}

}  // namespace catalyst
