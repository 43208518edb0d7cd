// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/prune.hpp"

#include <cmath>
#include <random>

#include "catalyst/catalyst.hpp"
#include "catalyst/errors.hpp"
#include "catalyst/nn.hpp"

namespace catalyst {

PruneSet select_prune_indices(const ExtendedSubmodule& ext) {
  const Vector norms = filter_norms(ext.sub.w);
  std::vector<std::size_t> idx;
  for (Eigen::Index i = 0; i < norms.size(); ++i)
    if (std::abs(ext.d.delta[i]) > norms[i]) idx.push_back(static_cast<std::size_t>(i));
  return PruneSet(std::move(idx), static_cast<std::size_t>(norms.size()));
}

ExtendedSubmodule prune(const ExtendedSubmodule& ext, const PruneSet& p) {
  ext.validate();
  const Submodule& s = ext.sub;
  const std::size_t n = s.n_hidden();
  if (!p.empty() && p.indices().back() >= n)
    throw IndexError("prune: index " + std::to_string(p.indices().back()) + " out of range for N_W=" +
                     std::to_string(n));

  Vector b_a = s.b_a + s.a * ext.d.delta.cwiseProduct(s.b_w);
  for (std::size_t i : p.indices()) {
    const auto k = static_cast<Eigen::Index>(i);
    const double folded = -ext.dbar.delta[k] * s.b_w[k] + activate(s.sigma, s.b_w[k]);
    b_a += s.a.col(k) * folded;
  }

  const std::vector<std::size_t> keep = p.complement(n);
  const auto m = static_cast<Eigen::Index>(keep.size());
  ExtendedSubmodule out;
  out.sub.sigma = s.sigma;
  out.sub.w.resize(m, s.w.cols());
  out.sub.b_w.resize(m);
  out.sub.a.resize(s.a.rows(), m);
  out.sub.b_a = std::move(b_a);
  out.d.delta.resize(m);
  out.dbar = CatalystDiag::zeros(keep.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto k = static_cast<Eigen::Index>(keep[static_cast<std::size_t>(j)]);
    out.sub.w.row(j) = s.w.row(k);
    out.sub.b_w[j] = s.b_w[k];
    out.sub.a.col(j) = s.a.col(k);
    out.d.delta[j] = -ext.dbar.delta[k];
  }
  return out;
}

void prune(Model& m, const PruneSet& p) {
  if (!m.extended) throw Error("prune: model target is not extended");
  m.target = prune(m.target, p);
}

ForwardFn as_forward(const Submodule& sub) {
  return {sub.n_in(), [sub](const Vector& x) { return forward_submodule(sub, x); }};
}

ForwardFn as_forward(const ExtendedSubmodule& ext) {
  return {ext.sub.n_in(), [ext](const Vector& x) { return forward_extended(ext, x); }};
}

ForwardFn as_forward(const Model& m) {
  return {m.input_dim(), [m](const Vector& x) { return forward(m, x); }};
}

double verify_function_preservation(const ForwardFn& before, const ForwardFn& after, std::size_t n_samples,
                                    std::size_t input_dim, std::uint64_t seed) {
  if (n_samples < 1) throw Error("verify_function_preservation: need at least one sample");
  if (before.input_dim != input_dim || after.input_dim != input_dim)
    throw ShapeError("verify_function_preservation: input dims " + std::to_string(before.input_dim) + " and " +
                     std::to_string(after.input_dim) + " do not both equal " + std::to_string(input_dim));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    Vector x = Vector::NullaryExpr(static_cast<Eigen::Index>(input_dim), [&]() { return dist(rng); });
    const Vector y0 = before.fn(x);
    const Vector y1 = after.fn(x);
    if (y0.size() != y1.size()) throw ShapeError("verify_function_preservation: output dims differ");
    worst = std::max(worst, (y0 - y1).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace catalyst
