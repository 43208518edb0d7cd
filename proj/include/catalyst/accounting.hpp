// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "catalyst/model.hpp"

namespace catalyst {

struct Cost {
  std::int64_t macs = 0;    // multiply-accumulates per forward pass of one sample
  std::int64_t params = 0;  // trainable scalars
};

/// A dense m x n layer costs m*n MACs and m*n + m parameters; an extended
/// target adds 2*N_W parameters for D and Dbar.
Cost count_macs_params(const Model& m);

}  // namespace catalyst
