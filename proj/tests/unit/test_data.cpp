// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "catalyst/data.hpp"
#include "catalyst/errors.hpp"
#include "catalyst/pipeline.hpp"

using namespace catalyst;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = CATALYST_FIXTURES;

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("catalyst_test_data_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("generators are deterministic") {
  const DatasetSpec spec{"gaussian-blobs", 3, 2, 500, 100, 1.0, 42};
  const Split a = generate_dataset(spec), b = generate_dataset(spec);
  CHECK(a.train.inputs == b.train.inputs);
  CHECK(a.test.inputs == b.test.inputs);
  CHECK(a.train.labels == b.train.labels);
  DatasetSpec other = spec;
  other.seed = 43;
  CHECK(generate_dataset(other).train.inputs != a.train.inputs);
  other.generator = "moons";
  CHECK_THROWS_AS(generate_dataset(other), ConfigError);
}

TEST_CASE("spiral classes are balanced") {
  const Split s = generate_dataset({"spiral", 4, 2, 1001, 203, 0.1, 0});
  for (const LabeledData* d : {&s.train, &s.test}) {
    std::vector<long> count(4, 0);
    for (int l : d->labels) ++count[std::size_t(l)];
    CHECK(*std::max_element(count.begin(), count.end()) - *std::min_element(count.begin(), count.end()) <= 1);
  }
  CHECK(generate_dataset({"concentric-rings", 3, 3, 30, 9, 0.1, 0}).train.dim() == 3);
}

TEST_CASE("zero-noise blobs are learnable to 99%") {
  const Split s = generate_dataset({"gaussian-blobs", 3, 2, 600, 300, 0.0, 1});
  Model m = make_mlp(2, {16}, 3, 0, Activation::relu, 0);
  TrainConfig cfg;
  TrainContext ctx(0);
  train_plain(m, cfg, Phase::baseline, 10, cfg.lr_pretrain, s, ctx);
  CHECK(evaluate(m, s.test).accuracy >= 0.99);
}

TEST_CASE("CSV loading splits 80/20 and standardises on train") {
  const Split s = load_csv_dataset(kFixtures / "flowers.csv", "species", 0);
  CHECK(s.train.size() == 120);
  CHECK(s.test.size() == 30);
  CHECK(s.num_classes == 3);
  CHECK(s.train.dim() == 4);
  for (Eigen::Index f = 0; f < 4; ++f) {
    double mean = 0.0, var = 0.0;
    for (Eigen::Index j = 0; j < 120; ++j) mean += s.train.inputs(f, j);
    mean /= 120;
    for (Eigen::Index j = 0; j < 120; ++j) var += (s.train.inputs(f, j) - mean) * (s.train.inputs(f, j) - mean);
    CHECK(std::abs(mean) <= 1e-10);
    CHECK(var / 120 == doctest::Approx(1.0).epsilon(1e-12));
  }
  const Split again = load_csv_dataset(kFixtures / "flowers.csv", "species", 0);
  CHECK(again.train.inputs == s.train.inputs);
  CHECK(load_csv_dataset(kFixtures / "flowers.csv", "species", 1).train.inputs != s.train.inputs);
}

TEST_CASE("CSV errors") {
  CHECK_THROWS_AS(load_csv_dataset(kFixtures / "missing.csv", "species"), IoError);
  CHECK_THROWS_AS(load_csv_dataset(kFixtures / "flowers.csv", "kind"), ConfigError);

  const auto short_row = write_temp("short.csv", "a,b,label\n1,2,x\n3,y\n4,5,y\n");
  try {
    load_csv_dataset(short_row, "label");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  const auto text = write_temp("text.csv", "a,width,label\n1,2,x\n3,wide,y\n4,5,y\n");
  try {
    load_csv_dataset(text, "label");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("width") != std::string::npos);
  }
}

TEST_CASE("epoch_batches covers every index once") {
  std::mt19937_64 rng(0);
  const auto batches = epoch_batches(10, 4, rng);
  REQUIRE(batches.size() == 3);
  CHECK(batches[2].size() == 2);
  std::vector<std::size_t> all;
  for (const auto& b : batches) all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 10; ++i) CHECK(all[i] == i);
}
