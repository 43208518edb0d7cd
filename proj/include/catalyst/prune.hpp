// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

#include "catalyst/model.hpp"

namespace catalyst {

/// P = { i : |D_ii| > ||F_i|| }. Ties stay.
PruneSet select_prune_indices(const ExtendedSubmodule& ext);

/// Removes channels P and folds their constant output into b_A:
///   b_A' = b_A + A D b_W + A[:,P] * psi_{-Dbar,0}(b_W)[P]
/// and returns (W[P^c], b_W[P^c], A[:,P^c], b_A', -Dbar[P^c], 0).
/// Exact whenever D W = 0 and P = supp(D); total otherwise.
ExtendedSubmodule prune(const ExtendedSubmodule& ext, const PruneSet& p);

/// Prunes the model's target in place (the model must be extended).
void prune(Model& m, const PruneSet& p);

/// Something that maps an input vector to an output vector.
struct ForwardFn {
  std::size_t input_dim = 0;
  std::function<Vector(const Vector&)> fn;
};

ForwardFn as_forward(const Submodule& sub);
ForwardFn as_forward(const ExtendedSubmodule& ext);
ForwardFn as_forward(const Model& m);

/// max over `n_samples` seeded N(0,1) inputs of ||before(x) - after(x)||_inf.
double verify_function_preservation(const ForwardFn& before, const ForwardFn& after, std::size_t n_samples,
                                    std::size_t input_dim, std::uint64_t seed = 0);

}  // namespace catalyst
