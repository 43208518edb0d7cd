// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/geometry.hpp"

#include "catalyst/catalyst.hpp"
#include "catalyst/errors.hpp"
#include "catalyst/nn.hpp"
#include "catalyst/text.hpp"

namespace catalyst::geometry {

bool in_xtgt(const Matrix& w, double tol) { return dist_to_xtgt(w) <= tol; }

double dist_to_xtgt(const Matrix& w) {
  if (w.rows() == 0) return 0.0;
  return filter_norms(w).minCoeff();
}

std::size_t nearest_filter(const Matrix& w) {
  if (w.rows() == 0) throw ShapeError("nearest_filter: W has no rows");
  const Vector norms = filter_norms(w);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < norms.size(); ++i)
    if (norms[i] < norms[best]) best = i;
  return static_cast<std::size_t>(best);
}

CatalystDiag witness_d(const Matrix& w, double epsilon, double k) {
  if (!(k > 0.0)) throw NoWitnessError("witness_d: k must be positive");
  const double dist = dist_to_xtgt(w);
  if (!(dist < epsilon))
    throw NoWitnessError("witness_d: distance " + format_double(dist) + " is not below eps " + format_double(epsilon));
  const std::size_t i = nearest_filter(w);
  CatalystDiag d = CatalystDiag::zeros(static_cast<std::size_t>(w.rows()));
  d[i] = dist == 0.0 ? 2.0 * k : 0.5 * (k + epsilon * k / dist);
  return d;
}

double l1_norm(const CatalystDiag& d) { return d.delta.cwiseAbs().sum(); }

Thm1Check check_thm1_equivalence(const Matrix& w, double epsilon, double k, const std::optional<CatalystDiag>& d) {
  Thm1Check out;
  auto fail = [&](const std::string& why) {
    out.ok = false;
    if (!out.diagnostic.empty()) out.diagnostic += "; ";
    out.diagnostic += why;
  };
  if (!(epsilon > 0.0) || !(k > 0.0)) {
    fail("eps and k must be positive");
    return out;
  }
  const double dist = dist_to_xtgt(w);
  out.in_neighbourhood = dist < epsilon;

  if (out.in_neighbourhood) {
    try {
      const CatalystDiag wd = witness_d(w, epsilon, k);
      const double reg = catalyst_reg(wd, w);
      const double l1 = l1_norm(wd);
      if (!(reg < k * epsilon)) fail("witness violates ||DW|| < k eps: " + format_double(reg));
      if (!(l1 > k)) fail("witness violates ||D||_1 > k: " + format_double(l1));
    } catch (const NoWitnessError& e) {
      fail(e.what());
    }
  }

  if (d) {
    const double reg = catalyst_reg(*d, w);
    const double l1 = l1_norm(*d);
    if (reg < k * epsilon && l1 > k) {
      const Vector norms = filter_norms(w);
      const double weighted = (d->delta.cwiseAbs().array() * norms.array()).sum() / l1;
      if (!(dist <= weighted * (1.0 + 1e-12))) fail("min filter norm exceeds weighted average");
      if (!(weighted < epsilon)) fail("weighted filter norm not below eps: " + format_double(weighted));
      if (!(dist < epsilon)) fail("(W, D) satisfies both inequalities but W is outside the neighbourhood");
    }
  }
  return out;
}

}  // namespace catalyst::geometry
