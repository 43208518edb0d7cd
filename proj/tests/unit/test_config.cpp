// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "catalyst/config.hpp"
#include "catalyst/errors.hpp"

using namespace catalyst;
namespace fs = std::filesystem;

TEST_CASE("defaults parse from empty text") {
  const ExperimentConfig c = parse_config("# nothing\n\n");
  CHECK(c.widths == std::vector<std::size_t>{64, 64});
  CHECK(c.dataset.generator == "gaussian-blobs");
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("values and lists") {
  const ExperimentConfig c = parse_config(
      "seed = 7\nmodel_widths = 8, 4\nlr_opt1_decay_epochs = 5,9\ngamma0 = 0.5 # inline\nkappa = inf\n"
      "model_activation = tanh\n");
  CHECK(c.train.seed == 7);
  CHECK(c.widths == std::vector<std::size_t>{8, 4});
  CHECK(c.train.lr_opt1.decay_epochs == std::vector<long>{5, 9});
  CHECK(c.train.gamma0 == 0.5);
  CHECK(std::isinf(c.train.kappa));
  CHECK(c.activation == Activation::tanh);
}

TEST_CASE("config errors") {
  CHECK_THROWS_WITH_AS(parse_config("learning_rate = 1\n"), doctest::Contains("learning_rate"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("seed = 1\nseed = 2\n"), doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("seed 1\n"), doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("gamma0 = fast\n"), ConfigError);
  CHECK_THROWS_AS(validate(parse_config("model_widths = 8\nmodel_target = 1\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse_config("dataset = csv\n")), ConfigError);
  CHECK_THROWS_AS(validate(parse_config("epsilon = 0\n")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("render_config round-trips") {
  ExperimentConfig c = parse_config("seed = 3\ngamma0 = 0.0123\nmodel_widths = 10,6,4\nmodel_target = 2\n");
  const std::string text = render_config(c);
  const ExperimentConfig back = parse_config(text);
  CHECK(render_config(back) == text);
  CHECK(to_key_values(back) == to_key_values(c));
}

TEST_CASE("relative csv_path resolves against the config file") {
  const fs::path dir = fs::temp_directory_path() / "catalyst_test_config";
  fs::create_directories(dir / "data");
  std::ofstream(dir / "data" / "x.csv") << "a,label\n1,x\n2,y\n";
  std::ofstream(dir / "run.cfg") << "dataset = csv\ncsv_path = data/x.csv\n";
  const ExperimentConfig c = load_config(dir / "run.cfg");
  CHECK(c.use_csv);
  CHECK(c.csv_path == dir / "data" / "x.csv");
  CHECK_NOTHROW(validate(c));
}
