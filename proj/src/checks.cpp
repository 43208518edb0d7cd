// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "catalyst/catalyst.hpp"
#include "catalyst/dynamics.hpp"
#include "catalyst/errors.hpp"
#include "catalyst/geometry.hpp"
#include "catalyst/prune.hpp"
#include "catalyst/text.hpp"

namespace catalyst::checks {

namespace {

double rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-8});
}

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return Matrix::NullaryExpr(r, c, [&]() { return n(rng); });
}

Vector random_vector(Eigen::Index r, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return Vector::NullaryExpr(r, [&]() { return n(rng); });
}

CheckResult make(std::string name, bool ok, std::string detail) { return {std::move(name), ok, std::move(detail)}; }

CheckResult check_neighbourhood(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> dims(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t failures = 0;
  for (std::size_t s = 0; s < n; ++s) {
    // Forward: W pulled inside the neighbourhood by shrinking one row.
    const int rows = dims(rng), cols = dims(rng);
    const double eps = std::pow(10.0, -3.0 + 3.0 * unit(rng));
    const double k = std::pow(10.0, -1.0 + 2.0 * unit(rng));
    Matrix w = random_matrix(rows, cols, rng);
    const auto r = static_cast<Eigen::Index>(std::uniform_int_distribution<int>(0, rows - 1)(rng));
    w.row(r) *= unit(rng) * eps / std::max(w.row(r).norm(), 1e-300);
    if (!geometry::check_thm1_equivalence(w, eps, k).ok) ++failures;

    // Backward: any (W, D) satisfying both inequalities.
    Matrix w2 = random_matrix(rows, cols, rng);
    Vector delta = random_vector(rows, rng).cwiseAbs();
    const double l1 = delta.sum();
    delta *= k * (1.0 + unit(rng)) / l1;
    const double reg = catalyst_reg(CatalystDiag(delta), w2);
    if (reg >= k * eps) w2 *= unit(rng) * k * eps / reg;
    if (!geometry::check_thm1_equivalence(w2, eps, k, CatalystDiag(delta)).ok) ++failures;
  }
  return make("neighbourhood-equivalence", failures == 0, std::to_string(2 * n) + " instances, " + std::to_string(failures) + " failures");
}

CheckResult check_exact_prune(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> dims(1, 8);
  std::bernoulli_distribution coin(0.5);
  double worst = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const int ni = dims(rng), nw = dims(rng), na = dims(rng);
    ExtendedSubmodule ext;
    ext.sub = {random_matrix(nw, ni, rng), random_vector(nw, rng), random_matrix(na, nw, rng), random_vector(na, rng),
               Activation::relu};
    ext.d = CatalystDiag::zeros(nw);
    ext.dbar = CatalystDiag(random_vector(nw, rng));
    std::vector<std::size_t> p;
    for (int i = 0; i < nw; ++i)
      if (coin(rng)) {
        p.push_back(static_cast<std::size_t>(i));
        ext.sub.w.row(i).setZero();
        ext.d.delta[i] = random_vector(1, rng)[0];
      }
    const ExtendedSubmodule after = prune(ext, PruneSet(p, static_cast<std::size_t>(nw)));
    worst = std::max(worst, verify_function_preservation(as_forward(ext), as_forward(after), 100,
                                                         static_cast<std::size_t>(ni), s));
  }
  return make("prune-exactness", worst <= 1e-10, "max deviation " + format_double(worst));
}

CheckResult check_boundary() {
  double worst = 0.0;
  std::mt19937_64 rng(7);
  for (double alpha : {0.0, 1e-4})
    for (double lr : {1e-3, 1e-2}) {
      auto s = dynamics::make_state(1.0, 16, alpha, dynamics::LambdaSchedule::constant(lr), rng);
      s.d = s.norm_m();
      const auto tr = dynamics::simulate_trajectory(s, 1000);
      for (const auto& p : tr.points) worst = std::max(worst, std::abs(p.c - 1.0));
    }
  return make("dynamics-boundary", worst <= 1e-6, "max |c_t - 1| " + format_double(worst));
}

CheckResult check_bifurcation(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> dims(1, 64);
  std::size_t misclassified = 0, bound_violations = 0;
  double worst_rel = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    double c0 = std::pow(10.0, -1.0 + 2.0 * unit(rng));
    if (c0 == 1.0) c0 = 1.5;
    const double alpha = unit(rng) < 0.5 ? 0.0 : 1e-4;
    const double lr = (0.1 + 0.9 * unit(rng)) * dynamics::safety_bound(c0, alpha);
    const auto s0 = dynamics::make_state(c0, static_cast<std::size_t>(dims(rng)), alpha,
                                         dynamics::LambdaSchedule::constant(lr), rng);
    const auto tr = dynamics::simulate_trajectory(s0, 1000);
    const double start = tr.points.front().c;
    const auto expect = start < 1.0 ? dynamics::Outcome::preserve : dynamics::Outcome::prune;
    if (tr.outcome != expect) ++misclassified;
    const double k = dynamics::f_coeff(start, lr, alpha);
    double rec = start;
    const double a = 1.0 - alpha;
    for (std::size_t i = 1; i < tr.points.size(); ++i) {
      const double prev = tr.points[i - 1].c, cur = tr.points[i].c;
      if (prev <= lr / a || prev >= a / lr) break;
      const double ratio = cur / prev;
      if (start < 1.0 ? ratio > k + 1e-10 : ratio < k - 1e-10) ++bound_violations;
      rec = dynamics::recurrence_step(rec, lr, alpha);
      // The exit value itself is a cancellation in 1 - alpha - lr/c (or
      // 1 - alpha - lr c); only states still inside the window are compared.
      if (cur > lr / a && cur < a / lr) worst_rel = std::max(worst_rel, std::abs(rec - cur) / std::abs(rec));
    }
  }
  const bool ok = misclassified == 0 && bound_violations == 0 && worst_rel <= 1e-10;
  return make("dynamics-bifurcation", ok,
              std::to_string(n) + " trajectories, " + std::to_string(misclassified) + " misclassified, " +
                  std::to_string(bound_violations) + " ratio-bound violations, recurrence rel err " +
                  format_double(worst_rel));
}

CheckResult check_lemma() {
  const auto grid = dynamics::lemma_grid(0.05, 20.0, 20, 20, {0.0, 1e-4, 1e-2});
  const auto rep = dynamics::check_lemma_f(grid);
  return make("f-sign-grid", rep.all_pass(),
              std::to_string(grid.size()) + " points, " + std::to_string(rep.failures) + " failures");
}

CheckResult check_embed(std::mt19937_64& rng, std::size_t n) {
  double worst_fn = 0.0, worst_spread = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    Submodule sub{random_matrix(12, 5, rng), random_vector(12, rng), random_matrix(3, 12, rng), random_vector(3, rng),
                  Activation::relu};
    // Filter norms spanning three decades.
    for (Eigen::Index i = 0; i < sub.w.rows(); ++i) sub.w.row(i) *= std::pow(10.0, -1.5 + 3.0 * double(i) / 11.0);
    const double c = 0.5 + 1.5 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const ExtendedSubmodule ext = embed(sub, c);
    worst_fn = std::max(worst_fn, verify_function_preservation(as_forward(sub), as_forward(ext), 100, 5, s));
    const Vector r = c_ratios(ext);
    worst_spread = std::max(worst_spread, (r.maxCoeff() - r.minCoeff()) / c);
  }
  return make("embed-preservation", worst_fn <= 1e-12 && worst_spread <= 1e-12,
              "max deviation " + format_double(worst_fn) + ", ratio spread " + format_double(worst_spread));
}

CheckResult check_gradients(std::mt19937_64& rng, std::size_t n) {
  double worst_reg = 0.0, worst_model = 0.0;
  std::uniform_int_distribution<int> dims(2, 6);
  for (std::size_t s = 0; s < n; ++s) {
    const int rows = dims(rng), cols = dims(rng);
    worst_reg = std::max(worst_reg, catalyst_grad_error(CatalystDiag(random_vector(rows, rng)),
                                                        random_matrix(rows, cols, rng)));
    const Model m = random_model(static_cast<std::size_t>(dims(rng)), static_cast<std::size_t>(dims(rng)),
                                 static_cast<std::size_t>(dims(rng)), s % 2 == 0, rng());
    worst_model = std::max(worst_model, model_gradient_error(m, random_batch(m.input_dim(), 8, m.output_dim(), rng())));
  }
  return make("gradient-checks", worst_reg <= 1e-5 && worst_model <= 1e-5,
              "regulariser " + format_double(worst_reg) + ", backprop " + format_double(worst_model));
}

}  // namespace

double model_gradient_error(const Model& m, const LabeledData& batch, double h) {
  const LossAndGrad lg = model_forward_backward(m, batch);
  Model probe = m;
  auto probe_refs = param_refs(probe);
  const auto grad_refs = param_refs(static_cast<const Model&>(lg.grad));
  double worst = 0.0;
  for (std::size_t r = 0; r < probe_refs.size(); ++r) {
    auto values = probe_refs[r].values;
    std::vector<double> fd(values.size()), an(grad_refs[r].values.begin(), grad_refs[r].values.end());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double keep = values[i];
      values[i] = keep + h;
      const double up = model_forward_backward(probe, batch).loss;
      values[i] = keep - h;
      const double down = model_forward_backward(probe, batch).loss;
      values[i] = keep;
      fd[i] = (up - down) / (2 * h);
    }
    worst = std::max(worst, rel_error(fd, an));
  }
  return worst;
}

double catalyst_grad_error(const CatalystDiag& d, const Matrix& w, double h) {
  const CatalystRegGrad g = catalyst_reg_grad(d, w);
  std::vector<double> fd_d(d.size()), an_d(g.d.data(), g.d.data() + g.d.size());
  CatalystDiag dp = d;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double keep = dp[i];
    dp[i] = keep + h;
    const double up = catalyst_reg(dp, w);
    dp[i] = keep - h;
    const double down = catalyst_reg(dp, w);
    dp[i] = keep;
    fd_d[i] = (up - down) / (2 * h);
  }
  std::vector<double> fd_w(static_cast<std::size_t>(w.size())), an_w(static_cast<std::size_t>(w.size()));
  Matrix wp = w;
  std::size_t k = 0;
  for (Eigen::Index c = 0; c < w.cols(); ++c)
    for (Eigen::Index r = 0; r < w.rows(); ++r, ++k) {
      const double keep = wp(r, c);
      wp(r, c) = keep + h;
      const double up = catalyst_reg(d, wp);
      wp(r, c) = keep - h;
      const double down = catalyst_reg(d, wp);
      wp(r, c) = keep;
      fd_w[k] = (up - down) / (2 * h);
      an_w[k] = g.w(r, c);
    }
  return std::max(rel_error(fd_d, an_d), rel_error(fd_w, an_w));
}

Model random_model(std::size_t in, std::size_t hidden, std::size_t out, bool extended, std::uint64_t seed) {
  Model m = make_mlp(in, {in + 2, hidden, out + 2}, out, 1, Activation::relu, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  if (extended) embed(m, 1.0);
  std::normal_distribution<double> n(0.0, 0.7);
  for (auto& ref : param_refs(m))
    for (double& v : ref.values) v = n(rng);
  return m;
}

LabeledData random_batch(std::size_t dim, std::size_t n, std::size_t classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> label(0, static_cast<int>(classes) - 1);
  LabeledData b;
  b.inputs = Matrix::NullaryExpr(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n), [&]() { return g(rng); });
  for (std::size_t i = 0; i < n; ++i) b.labels.push_back(label(rng));
  return b;
}

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  out.push_back(check_neighbourhood(rng, 500));
  out.push_back(check_exact_prune(rng, 200));
  out.push_back(check_boundary());
  out.push_back(check_bifurcation(rng, 1000));
  out.push_back(check_lemma());
  out.push_back(check_embed(rng, 20));
  out.push_back(check_gradients(rng, 50));
  return out;
}

}  // namespace catalyst::checks
