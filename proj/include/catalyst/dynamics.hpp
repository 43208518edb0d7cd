// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0
//
// Gradient descent on the scalar-times-vector norm |d| * ||M||_2 with weight
// decay, and the closed-form recurrence for the ratio c = |d| / ||M||.
//
// One step with learning rate lr and decay alpha is
//   d <- (1 - alpha - lr / c) d,     M <- (1 - alpha - lr * c) M,
// so c_{t+1} = f(c_t, lr) c_t with f(x, y) = (1 - alpha - y/x) / (1 - alpha - x y).
// Starting exactly at c = 1 the ratio stays at 1; otherwise it diverges
// exponentially away from 1 until it leaves the window
// lr/(1-alpha) <= c <= (1-alpha)/lr.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "catalyst/model.hpp"

namespace catalyst::dynamics {

/// lr_t = floor + (base - floor) * decay^t; decay == 1 gives a constant rate.
struct LambdaSchedule {
  double base = 1e-3;
  double floor = 1e-3;
  double decay = 1.0;

  static LambdaSchedule constant(double lr) { return {lr, lr, 1.0}; }
  double at(long t) const;
  double infimum() const;
  double supremum() const;
};

struct DynamicsState {
  double d = 1.0;
  Vector m;
  long t = 0;
  double alpha = 0.0;
  LambdaSchedule schedule;

  double norm_m() const { return m.norm(); }
  double c() const;
};

/// State with ||M|| drawn from N(0, I_dim) and d = c0 * ||M||.
DynamicsState make_state(double c0, std::size_t dim, double alpha, LambdaSchedule schedule, std::mt19937_64& rng);

struct StepResult {
  DynamicsState next;
  bool sign_flip = false;  // some entry of d or M changed sign
  bool terminal = false;   // d == 0 or M == 0; `next` equals the input
};

/// One raw gradient step on |d| * ||M|| with decay:
///   d -= alpha d + sgn(d) lr ||M||,   M_i -= alpha M_i + lr |d| M_i / ||M||.
StepResult gd_step(const DynamicsState& s);

/// (1 - alpha - y/x) / (1 - alpha - x y). Throws DynamicsError for x <= 0 or a
/// denominator within 1e-12 of zero.
double f_coeff(double x, double y, double alpha);

/// Closed-form partial derivatives of f_coeff.
double f_coeff_dx(double x, double y, double alpha);
double f_coeff_dy(double x, double y, double alpha);

/// c_{t+1} = f(c_t, lr_t) c_t. Throws DynamicsError outside
/// lr/(1-alpha) <= c <= (1-alpha)/lr.
double recurrence_step(double c, double lr, double alpha);

enum class Outcome { preserve, prune, boundary, sign_flip };
std::string_view to_string(Outcome o);

struct TrajectoryPoint {
  long t;
  double d;
  double norm_m;
  double c;
  double lr;
};

struct SimulateOptions {
  // Treat |c0 - 1| <= boundary_tol as starting on the decision boundary.
  double boundary_tol = 1e-12;
  // Keep stepping after leaving the validity window (exploratory plots only).
  bool continue_past_exit = false;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;  // points[0] is the initial state
  Outcome outcome = Outcome::boundary;
  bool window_exit = false;
  long steps_to_exit = -1;
  // lr_t <= 0.1 * min((1-alpha)/c0, (1-alpha) c0) for every t.
  bool safety_ok = true;
  std::vector<std::string> warnings;

  double final_c() const { return points.back().c; }
};

double safety_bound(double c0, double alpha);

/// Runs gd_step for up to `steps` steps; stops at a window exit (unless
/// continuing is requested) or the first sign flip.
Trajectory simulate_trajectory(const DynamicsState& s0, long steps, const SimulateOptions& opts = {});

struct LemmaPoint {
  double x, y, alpha;
  double f;
  double dfdx_fd, dfdy_fd;
  double dfdx, dfdy;
  bool pass;
  std::string failure;
};

struct LemmaReport {
  std::vector<LemmaPoint> points;
  std::size_t failures = 0;
  bool all_pass() const { return failures == 0; }
};

struct GridPoint {
  double x, y, alpha;
};

/// Checks the sign claims on f: for x < 1, f < 1, df/dx > 0, df/dy < 0; for
/// x > 1, f > 1, df/dx > 0, df/dy > 0; at x == 1, f == 1 and df/dy == 0.
/// Partials are central differences (step h) compared with the closed forms
/// at relative tolerance `rel_tol`.
LemmaReport check_lemma_f(const std::vector<GridPoint>& grid, double h = 1e-6, double rel_tol = 1e-4);

/// nx log-spaced x in [x_lo, x_hi] times ny interior y values per alpha. The y
/// range is (0, (1-alpha) * min(1, 1/x)), i.e. restricted so that
/// 1 - alpha - x y > 0.
std::vector<GridPoint> lemma_grid(double x_lo, double x_hi, std::size_t nx, std::size_t ny,
                                  const std::vector<double>& alphas);

struct SweepRow {
  double c0, lr, alpha;
  Outcome outcome;
  long steps_to_exit;
  double final_c;
};

struct SweepSpec {
  std::vector<double> c0s;
  std::vector<double> lrs;
  std::vector<double> alphas;
  long steps = 1000;
  std::size_t dim = 8;
  std::uint64_t seed = 0;
};

std::vector<SweepRow> phase_sweep(const SweepSpec& spec);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace catalyst::dynamics
