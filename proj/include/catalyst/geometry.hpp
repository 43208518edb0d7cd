// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0
//
// The pruning-invariant set: weight matrices with at least one zero filter.
// Its open epsilon-neighbourhood is exactly the projection onto W of
// { (W, D) : ||DW||_{2,1} < k eps, ||D||_1 > k } for any k > 0.

#pragma once

#include <optional>
#include <string>

#include "catalyst/model.hpp"

namespace catalyst::geometry {

/// min_i ||F_i|| <= tol.
bool in_xtgt(const Matrix& w, double tol = 0.0);

/// Euclidean distance from W to the nearest zero-filter subspace, i.e. the
/// smallest filter norm.
double dist_to_xtgt(const Matrix& w);

/// Lowest index attaining the smallest filter norm.
std::size_t nearest_filter(const Matrix& w);

/// Single-entry D on the nearest filter with value k' = (k + eps k / ||F||) / 2
/// (2k for a zero filter), so that ||DW||_{2,1} < k eps and ||D||_1 > k.
/// Throws NoWitnessError unless dist_to_xtgt(W) < eps.
CatalystDiag witness_d(const Matrix& w, double epsilon, double k);

double l1_norm(const CatalystDiag& d);

struct Thm1Check {
  bool ok = true;
  bool in_neighbourhood = false;  // dist_to_xtgt(W) < eps
  std::string diagnostic;
};

/// Forward direction: when W is inside the neighbourhood the witness exists
/// and satisfies both inequalities. Backward direction, for `d` when given:
/// if ||DW||_{2,1} < k eps and ||D||_1 > k then the weighted-average bound
/// min_i ||F_i|| <= sum_i (|D_ii|/||D||_1) ||F_i|| < eps holds.
Thm1Check check_thm1_equivalence(const Matrix& w, double epsilon, double k,
                                 const std::optional<CatalystDiag>& d = std::nullopt);

}  // namespace catalyst::geometry
