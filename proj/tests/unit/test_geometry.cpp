// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"

#include "catalyst/catalyst.hpp"
#include "catalyst/errors.hpp"
#include "catalyst/geometry.hpp"

using namespace catalyst;
using namespace catalyst::geometry;

namespace {

// Distance to the subspace {row i = 0} is the Frobenius norm of the
// difference after zeroing that row; take the minimum over all subspaces.
double brute_force_dist(const Matrix& w) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    Matrix p = w;
    p.row(i).setZero();
    double s = 0.0;
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) s += (w(r, c) - p(r, c)) * (w(r, c) - p(r, c));
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

}  // namespace

TEST_CASE("in_xtgt") {
  CHECK(in_xtgt(Matrix{{1.0, 2.0}, {0.0, 0.0}}));
  CHECK_FALSE(in_xtgt(Matrix::Identity(2, 2)));
  CHECK(in_xtgt(Matrix::Identity(2, 2), 1.0));
}

TEST_CASE("dist_to_xtgt") {
  CHECK(dist_to_xtgt(Matrix{{1.0, 2.0}, {0.0, 0.0}}) == 0.0);
  CHECK(dist_to_xtgt(Matrix{{3.0, 0.0}, {0.0, 1.0}}) == 1.0);
  CHECK(nearest_filter(Matrix{{3.0, 0.0}, {0.0, 1.0}}) == 1);
  std::mt19937_64 rng(0);
  std::normal_distribution<double> n;
  for (int k = 0; k < 100; ++k) {
    const Matrix w = Matrix::NullaryExpr(1 + k % 9, 1 + k % 5, [&]() { return n(rng); });
    CHECK(dist_to_xtgt(w) == brute_force_dist(w));
  }
}

TEST_CASE("witness_d") {
  Matrix w{{0.5, 0.0}, {0.0, 2.0}};
  const auto d = witness_d(w, 1.0, 1.0);
  CHECK(d.delta == Vector{{1.5, 0.0}});
  CHECK(catalyst_reg(d, w) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(l1_norm(d) == 1.5);

  const Matrix z{{0.0, 0.0}, {1.0, 1.0}};
  const auto dz = witness_d(z, 0.3, 1.0);
  CHECK(dz.delta == Vector{{2.0, 0.0}});
  CHECK(catalyst_reg(dz, z) == 0.0);

  CHECK_THROWS_AS(witness_d(Matrix::Identity(2, 2), 0.5, 1.0), NoWitnessError);
}

TEST_CASE("open neighbourhood boundary") {
  const Matrix w{{0.0, 0.4}, {3.0, 0.0}};
  const auto r = check_thm1_equivalence(w, 0.4, 1.0);
  CHECK_FALSE(r.in_neighbourhood);
  CHECK(r.ok);
  CHECK_THROWS_AS(witness_d(w, 0.4, 1.0), NoWitnessError);
}

TEST_CASE("neighbourhood equivalence both directions on random samples") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double eps = 0.05 + u(rng), kk = 0.1 + 5 * u(rng);
    Matrix w = Matrix::NullaryExpr(2 + k % 6, 1 + k % 4, [&]() { return n(rng); });
    const auto row = Eigen::Index(k % w.rows());
    w.row(row) *= (0.999 * eps * u(rng)) / w.row(row).norm();
    const auto r = check_thm1_equivalence(w, eps, kk);
    CHECK(r.in_neighbourhood);
    CHECK(r.ok);
    const auto d = witness_d(w, eps, kk);
    CHECK(catalyst_reg(d, w) < kk * eps);
    CHECK(l1_norm(d) > kk);
  }
  // Backward direction: sample D, W and keep the pairs that satisfy the
  // right-hand side; their smallest filter must be below eps.
  int checked = 0;
  while (checked < 200) {
    const double eps = 0.5, kk = 1.0;
    const Matrix w = 0.6 * Matrix::NullaryExpr(3, 2, [&]() { return n(rng); });
    const CatalystDiag d(Vector::NullaryExpr(3, [&]() { return 2 * n(rng); }));
    if (!(catalyst_reg(d, w) < kk * eps && l1_norm(d) > kk)) continue;
    ++checked;
    CHECK(dist_to_xtgt(w) < eps);
    CHECK(check_thm1_equivalence(w, eps, kk, d).ok);
  }
}
