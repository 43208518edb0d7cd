// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "catalyst/nn.hpp"

namespace catalyst {

struct Split {
  LabeledData train;
  LabeledData test;
  std::size_t num_classes = 0;
};

/// Builtin synthetic generators: "gaussian-blobs", "concentric-rings", "spiral".
/// Sample i has label i % classes, so classes are balanced to within one.
struct DatasetSpec {
  std::string generator = "gaussian-blobs";
  std::size_t classes = 3;
  std::size_t dim = 2;
  std::size_t n_train = 3000;
  std::size_t n_test = 600;
  double noise = 1.0;
  std::uint64_t seed = 0;
};

Split generate_dataset(const DatasetSpec& spec);

/// Numeric CSV with a header row. The label column may hold any text; its
/// distinct values are sorted and numbered. Rows are split 80/20 after a
/// seeded shuffle, and features are standardised with train-split moments.
Split load_csv_dataset(const std::filesystem::path& path, const std::string& label_column, std::uint64_t seed = 0);

/// Minibatch of the given columns.
LabeledData gather(const LabeledData& data, const std::vector<std::size_t>& columns);

/// Epoch-wise shuffled minibatch index lists. The last batch may be short.
std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, std::size_t batch_size, std::mt19937_64& rng);

}  // namespace catalyst
