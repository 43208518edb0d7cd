// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"

#include "catalyst/catalyst.hpp"
#include "catalyst/errors.hpp"
#include "catalyst/nn.hpp"

using namespace catalyst;

namespace {

Matrix randn(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Matrix::NullaryExpr(r, c, [&]() { return n(rng); });
}

Submodule random_sub(std::size_t in, std::size_t hidden, std::size_t out, std::mt19937_64& rng) {
  const auto i = Eigen::Index(in), h = Eigen::Index(hidden), o = Eigen::Index(out);
  return {randn(h, i, rng), randn(h, 1, rng), randn(o, h, rng), randn(o, 1, rng), Activation::relu};
}

// Second implementation of the extended forward pass.
Vector naive_extended(const ExtendedSubmodule& e, const Vector& x) {
  const auto& s = e.sub;
  Vector out = s.b_a;
  for (Eigen::Index i = 0; i < s.w.rows(); ++i) {
    double z = s.b_w[i];
    for (Eigen::Index j = 0; j < s.w.cols(); ++j) z += s.w(i, j) * x[j];
    const double h = e.d.delta[i] * z - e.dbar.delta[i] * z + activate(s.sigma, z);
    for (Eigen::Index k = 0; k < s.a.rows(); ++k) out[k] += s.a(k, i) * h;
  }
  return out;
}

}  // namespace

TEST_CASE("psi") {
  std::mt19937_64 rng(0);
  const Vector x = randn(50, 1, rng);
  const CatalystDiag d(randn(50, 1, rng));
  for (Activation a : {Activation::relu, Activation::tanh, Activation::identity}) {
    const Vector y = psi(d, d, x, a);
    for (Eigen::Index i = 0; i < 50; ++i) CHECK(std::abs(y[i] - activate(a, x[i])) <= 1e-15);
  }
  CHECK(psi(CatalystDiag(Vector{{1.0}}), CatalystDiag(Vector{{0.0}}), Vector{{-2.0}}, Activation::relu)[0] == -2.0);
  CHECK(psi(CatalystDiag(Vector{{0.0}}), CatalystDiag(Vector{{1.0}}), Vector{{3.0}}, Activation::relu)[0] == 0.0);
  CHECK_THROWS_AS(psi(CatalystDiag::zeros(2), CatalystDiag::zeros(3), Vector::Zero(2), Activation::relu), ShapeError);
}

TEST_CASE("embed") {
  Submodule s{Matrix{{3.0, 4.0}, {1.0, 0.0}}, Vector::Zero(2), Matrix::Identity(1, 2), Vector::Zero(1),
              Activation::relu};
  const auto e = embed(s, 1.0);
  CHECK(e.d.delta == Vector{{5.0, 1.0}});
  CHECK(e.dbar.delta == e.d.delta);
  CHECK(c_ratios(e) == Vector{{1.0, 1.0}});
  CHECK(c_ratios(embed(s, 2.0)) == Vector{{2.0, 2.0}});
  CHECK_THROWS_AS(embed(s, 0.0), ConfigError);

  std::mt19937_64 rng(1);
  const Submodule r = random_sub(4, 7, 3, rng);
  const auto er = embed(r, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Vector x = randn(4, 1, rng);
    worst = std::max(worst, (forward_extended(er, x) - forward_submodule(r, x)).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("embed ratios do not depend on filter magnitude") {
  std::mt19937_64 rng(2);
  Submodule s = random_sub(5, 12, 2, rng);
  // Row norms spread across three decades.
  for (Eigen::Index i = 0; i < 12; ++i) s.w.row(i) *= std::pow(10.0, -1.5 + 3.0 * double(i) / 11.0) / s.w.row(i).norm();
  for (double c : {0.3, 1.0, 7.0}) {
    const Vector r = c_ratios(embed(s, c));
    CHECK(r.maxCoeff() - r.minCoeff() <= 1e-12 * c);
  }
}

TEST_CASE("forward_extended") {
  std::mt19937_64 rng(3);
  const Submodule s = random_sub(3, 5, 4, rng);
  const ExtendedSubmodule zero{s, CatalystDiag::zeros(5), CatalystDiag::zeros(5)};
  const Vector x = randn(3, 1, rng);
  CHECK(forward_extended(zero, x) == forward_submodule(s, x));

  Submodule lin = s;
  lin.sigma = Activation::identity;
  const Vector dv = randn(5, 1, rng);
  const ExtendedSubmodule e{lin, CatalystDiag(dv), CatalystDiag::zeros(5)};
  const Vector closed = lin.b_a + lin.a * (Vector::Ones(5) + dv).asDiagonal() * (lin.b_w + lin.w * x);
  CHECK((forward_extended(e, x) - closed).cwiseAbs().maxCoeff() <= 1e-12);

  const ExtendedSubmodule r{s, CatalystDiag(randn(5, 1, rng)), CatalystDiag(randn(5, 1, rng))};
  for (int k = 0; k < 20; ++k) {
    const Vector xi = randn(3, 1, rng);
    CHECK((forward_extended(r, xi) - naive_extended(r, xi)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("catalyst_reg") {
  const Matrix w{{3.0, 4.0}, {1.0, 0.0}};
  CHECK(catalyst_reg(CatalystDiag(Vector{{2.0, 0.0}}), w) == 10.0);
  CHECK(catalyst_reg(CatalystDiag::zeros(2), w) == 0.0);
  CHECK(catalyst_reg(CatalystDiag(Vector{{1.0, 1.0}}), Matrix::Identity(2, 2)) == 2.0);

  std::mt19937_64 rng(4);
  const Matrix r = randn(6, 3, rng);
  const CatalystDiag d(randn(6, 1, rng));
  const double base = catalyst_reg(d, r);
  for (double t : {-3.0, -0.5, 0.0, 2.0, 11.0})
    CHECK(std::abs(catalyst_reg(CatalystDiag(t * d.delta), r) - std::abs(t) * base) <= 1e-12 * std::max(1.0, base));
}

TEST_CASE("zero regulariser with nonzero D forces zero filters") {
  Matrix w{{0.0, 0.0}, {1.0, 2.0}};
  const CatalystDiag d(Vector{{4.0, 0.0}});
  REQUIRE(catalyst_reg(d, w) == 0.0);
  CHECK(w.row(0).norm() <= 1e-15);
}

TEST_CASE("catalyst_reg_grad matches finite differences") {
  std::mt19937_64 rng(5);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix w = randn(4, 3, rng);
    CatalystDiag d(randn(4, 1, rng));
    const auto g = catalyst_reg_grad(d, w);
    Vector fd_d(4);
    for (Eigen::Index i = 0; i < 4; ++i) {
      CatalystDiag up = d, dn = d;
      up.delta[i] += h;
      dn.delta[i] -= h;
      fd_d[i] = (catalyst_reg(up, w) - catalyst_reg(dn, w)) / (2 * h);
    }
    Matrix fd_w(4, 3);
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) {
        Matrix up = w, dn = w;
        up(i, j) += h;
        dn(i, j) -= h;
        fd_w(i, j) = (catalyst_reg(d, up) - catalyst_reg(d, dn)) / (2 * h);
      }
    CHECK((fd_d - g.d).norm() / g.d.norm() <= 1e-6);
    CHECK((fd_w - g.w).norm() / g.w.norm() <= 1e-6);
  }
}

TEST_CASE("catalyst_reg_grad singular conventions") {
  const Matrix w{{3.0, 4.0}, {0.0, 0.0}, {1.0, 1.0}};
  const auto g = catalyst_reg_grad(CatalystDiag(Vector{{-2.0, 5.0, 0.0}}), w);
  CHECK(g.d == Vector{{-5.0, 0.0, 0.0}});
  CHECK(g.w.row(0).isApprox(Matrix{{1.2, 1.6}}, 1e-15));
  CHECK(g.w.row(1).isZero(0.0));
  CHECK(g.w.row(2).isZero(0.0));
}

TEST_CASE("c_ratios") {
  Submodule s{Matrix::Identity(2, 2), Vector::Zero(2), Matrix::Identity(2, 2), Vector::Zero(2), Activation::relu};
  CHECK(c_ratios({s, CatalystDiag(Vector{{3.0, 0.1}}), CatalystDiag::zeros(2)}) == Vector{{3.0, 0.1}});
  CHECK(c_ratios({s, CatalystDiag(Vector{{-3.0, 0.1}}), CatalystDiag::zeros(2)}) == Vector{{3.0, 0.1}});
  s.w.row(0).setZero();
  const Vector inf = c_ratios({s, CatalystDiag(Vector{{2.0, 1.0}}), CatalystDiag::zeros(2)});
  CHECK(inf[0] == kInfiniteRatio);
  CHECK(c_ratios({s, CatalystDiag(Vector{{0.0, 1.0}}), CatalystDiag::zeros(2)})[0] == 1.0);
  CHECK(zero_filters(s.w) == std::vector<std::size_t>{0});
}

TEST_CASE("embed on a model marks it extended and keeps the logits") {
  Model m = make_mlp(2, {6, 5}, 3, 0, Activation::relu, 4);
  std::mt19937_64 rng(6);
  const Matrix x = randn(2, 30, rng);
  const Matrix before = forward(m, x);
  embed(m, 1.0);
  CHECK(m.extended);
  CHECK((forward(m, x) - before).cwiseAbs().maxCoeff() <= 1e-12);
}
