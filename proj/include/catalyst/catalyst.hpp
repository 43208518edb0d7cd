// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0
//
// The catalyst-extended parameter space: psi_{D,Dbar}, the function-preserving
// embed, and the ||DW||_{2,1} regulariser with its analytic subgradient.

#pragma once

#include <limits>
#include <vector>

#include "catalyst/model.hpp"

namespace catalyst {

/// Element-wise D_ii x_i - Dbar_ii x_i + sigma(x_i).
Vector psi(const CatalystDiag& d, const CatalystDiag& dbar, const Vector& x, Activation sigma);

/// (sub, D, D) with D = c * diag(||F_1||, ..., ||F_N||). The realised function
/// is unchanged because psi_{D,D} = sigma. Throws ConfigError unless c > 0.
ExtendedSubmodule embed(const Submodule& sub, double c = 1.0);

/// Applies embed to the model's target in place and marks it extended.
void embed(Model& m, double c = 1.0);

/// Channels whose filter is exactly zero. After embed they sit at c = 0/0.
std::vector<std::size_t> zero_filters(const Matrix& w);

Vector forward_extended(const ExtendedSubmodule& ext, const Vector& x);

/// ||DW||_{2,1} = sum_i |D_ii| * ||F_i||_2.
double catalyst_reg(const CatalystDiag& d, const Matrix& w);

struct CatalystRegGrad {
  Vector d;  // sgn(D_ii) * ||F_i||
  Matrix w;  // row i: |D_ii| * F_i / ||F_i||
};

/// Subgradient with sgn(0) = 0 and a zero row for zero filters.
CatalystRegGrad catalyst_reg_grad(const CatalystDiag& d, const Matrix& w);

inline constexpr double kInfiniteRatio = std::numeric_limits<double>::infinity();

/// c_i = |D_ii| / ||F_i||. A zero filter gives +inf when D_ii != 0 and 1 when
/// D_ii == 0 as well (a degenerate channel).
Vector c_ratios(const ExtendedSubmodule& ext);

}  // namespace catalyst
