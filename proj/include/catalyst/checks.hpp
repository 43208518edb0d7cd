// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0
//
// Self-contained invariant suite behind `catalyst verify`: geometry sampling,
// prune exactness, ratio dynamics, and finite-difference gradient checks.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "catalyst/model.hpp"
#include "catalyst/nn.hpp"

namespace catalyst::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Largest per-tensor ||fd - analytic|| / max(||fd||, ||analytic||, 1e-8) over
/// all parameters, using central differences with step h.
double model_gradient_error(const Model& m, const LabeledData& batch, double h = 1e-5);

/// Same measure for catalyst_reg_grad against differences of catalyst_reg.
double catalyst_grad_error(const CatalystDiag& d, const Matrix& w, double h = 1e-5);

/// Random model with three dense maps around a target submodule; inputs are
/// N(0,1) and labels uniform.
Model random_model(std::size_t in, std::size_t hidden, std::size_t out, bool extended, std::uint64_t seed);
LabeledData random_batch(std::size_t dim, std::size_t n, std::size_t classes, std::uint64_t seed);

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed = 0);

}  // namespace catalyst::checks
