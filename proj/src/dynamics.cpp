// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "catalyst/errors.hpp"
#include "catalyst/text.hpp"

namespace catalyst::dynamics {

double LambdaSchedule::at(long t) const {
  if (decay == 1.0) return base;
  return floor + (base - floor) * std::pow(decay, static_cast<double>(t));
}

double LambdaSchedule::infimum() const { return decay == 1.0 ? base : std::min(base, floor); }
double LambdaSchedule::supremum() const { return decay == 1.0 ? base : std::max(base, floor); }

double DynamicsState::c() const {
  const double n = norm_m();
  if (n == 0.0) return d == 0.0 ? 1.0 : INFINITY;
  return std::abs(d) / n;
}

DynamicsState make_state(double c0, std::size_t dim, double alpha, LambdaSchedule schedule, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  DynamicsState s;
  s.m = Vector::NullaryExpr(static_cast<Eigen::Index>(dim), [&]() { return dist(rng); });
  s.d = c0 * s.m.norm();
  s.alpha = alpha;
  s.schedule = schedule;
  return s;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

StepResult gd_step(const DynamicsState& s) {
  StepResult r{s, false, false};
  const double norm = s.norm_m();
  if (norm == 0.0 || s.d == 0.0) {
    r.terminal = true;
    return r;
  }
  const double lr = s.schedule.at(s.t);
  const double abs_d = std::abs(s.d);
  DynamicsState& n = r.next;
  n.d = s.d - s.alpha * s.d - sign(s.d) * lr * norm;
  n.m = s.m - s.alpha * s.m - (lr * abs_d / norm) * s.m;
  n.t = s.t + 1;
  r.sign_flip = sign(n.d) != sign(s.d);
  for (Eigen::Index i = 0; i < s.m.size() && !r.sign_flip; ++i)
    if (s.m[i] != 0.0 && sign(n.m[i]) != sign(s.m[i])) r.sign_flip = true;
  return r;
}

double f_coeff(double x, double y, double alpha) {
  if (!(x > 0.0)) throw DynamicsError("f_coeff: x must be positive");
  const double den = 1.0 - alpha - x * y;
  if (std::abs(den) < 1e-12) throw DynamicsError("f_coeff: singular denominator 1 - alpha - x y");
  return (1.0 - alpha - y / x) / den;
}

double f_coeff_dx(double x, double y, double alpha) {
  const double a = 1.0 - alpha;
  const double den = a - x * y;
  const double shift = x - y / a;
  return y * a / (x * x * den * den) * (shift * shift - y * y / (a * a) + 1.0);
}

double f_coeff_dy(double x, double y, double alpha) {
  const double a = 1.0 - alpha;
  const double den = a - x * y;
  return a * (x * x - 1.0) / (x * den * den);
}

double recurrence_step(double c, double lr, double alpha) {
  const double a = 1.0 - alpha;
  if (c < lr / a || c > a / lr)
    throw DynamicsError("recurrence_step: c=" + format_double(c) + " outside validity window [" +
                        format_double(lr / a) + ", " + format_double(a / lr) + "]");
  return f_coeff(c, lr, alpha) * c;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::preserve: return "preserve";
    case Outcome::prune: return "prune";
    case Outcome::boundary: return "boundary";
    case Outcome::sign_flip: return "sign_flip";
  }
  return "boundary";
}

double safety_bound(double c0, double alpha) {
  const double a = 1.0 - alpha;
  return 0.1 * std::min(a / c0, a * c0);
}

Trajectory simulate_trajectory(const DynamicsState& s0, long steps, const SimulateOptions& opts) {
  Trajectory tr;
  auto record = [&](const DynamicsState& s) {
    tr.points.push_back({s.t, s.d, s.norm_m(), s.c(), s.schedule.at(s.t)});
  };
  record(s0);

  const double c0 = s0.c();
  if (s0.d == 0.0 || s0.norm_m() == 0.0) {
    tr.outcome = s0.d == 0.0 ? Outcome::preserve : Outcome::prune;
    tr.window_exit = true;
    tr.steps_to_exit = 0;
    tr.warnings.push_back("degenerate initial state");
    return tr;
  }
  if (s0.schedule.supremum() > safety_bound(c0, s0.alpha)) {
    tr.safety_ok = false;
    tr.warnings.push_back("learning rate " + format_double(s0.schedule.supremum()) + " exceeds safety bound " +
                          format_double(safety_bound(c0, s0.alpha)));
  }
  const bool on_boundary = std::abs(c0 - 1.0) <= opts.boundary_tol;
  const double a = 1.0 - s0.alpha;

  DynamicsState s = s0;
  bool flipped = false;
  while (true) {
    if (!tr.window_exit) {
      const double c = s.c();
      const double lr = s.schedule.at(s.t);
      if (c <= lr / a || c >= a / lr) {
        tr.window_exit = true;
        tr.steps_to_exit = s.t - s0.t;
        tr.outcome = c <= lr / a ? Outcome::preserve : Outcome::prune;
        if (!opts.continue_past_exit) break;
      }
    }
    if (s.t - s0.t >= steps) break;
    StepResult r = gd_step(s);
    if (r.terminal) break;
    s = std::move(r.next);
    record(s);
    if (r.sign_flip) {
      flipped = true;
      break;
    }
  }

  if (flipped)
    tr.outcome = Outcome::sign_flip;
  else if (!tr.window_exit)
    tr.outcome = on_boundary ? Outcome::boundary : (s.c() < 1.0 ? Outcome::preserve : Outcome::prune);
  return tr;
}

LemmaReport check_lemma_f(const std::vector<GridPoint>& grid, double h, double rel_tol) {
  LemmaReport rep;
  for (const auto& g : grid) {
    LemmaPoint p{g.x, g.y, g.alpha, NAN, NAN, NAN, NAN, NAN, true, {}};
    auto fail = [&](std::string why) {
      if (p.pass) ++rep.failures;
      p.pass = false;
      if (!p.failure.empty()) p.failure += "; ";
      p.failure += std::move(why);
    };
    try {
      p.f = f_coeff(g.x, g.y, g.alpha);
      p.dfdx_fd = (f_coeff(g.x + h, g.y, g.alpha) - f_coeff(g.x - h, g.y, g.alpha)) / (2 * h);
      p.dfdy_fd = (f_coeff(g.x, g.y + h, g.alpha) - f_coeff(g.x, g.y - h, g.alpha)) / (2 * h);
    } catch (const DynamicsError& e) {
      fail(e.what());
      rep.points.push_back(std::move(p));
      continue;
    }
    p.dfdx = f_coeff_dx(g.x, g.y, g.alpha);
    p.dfdy = f_coeff_dy(g.x, g.y, g.alpha);

    if (!(p.dfdx > 0.0)) fail("df/dx not positive");
    if (g.x < 1.0) {
      if (!(p.f < 1.0)) fail("f >= 1 for x < 1");
      if (!(p.dfdy < 0.0)) fail("df/dy not negative for x < 1");
    } else if (g.x > 1.0) {
      if (!(p.f > 1.0)) fail("f <= 1 for x > 1");
      if (!(p.dfdy > 0.0)) fail("df/dy not positive for x > 1");
    } else {
      if (std::abs(p.f - 1.0) > 1e-12) fail("f != 1 at x = 1");
      if (std::abs(p.dfdy) > 0.0) fail("df/dy != 0 at x = 1");
    }
    auto close = [&](double fd, double closed) { return std::abs(fd - closed) <= rel_tol * std::abs(closed) + 1e-8; };
    if (!close(p.dfdx_fd, p.dfdx)) fail("finite-difference df/dx disagrees with closed form");
    if (!close(p.dfdy_fd, p.dfdy)) fail("finite-difference df/dy disagrees with closed form");
    rep.points.push_back(std::move(p));
  }
  return rep;
}

std::vector<GridPoint> lemma_grid(double x_lo, double x_hi, std::size_t nx, std::size_t ny,
                                  const std::vector<double>& alphas) {
  std::vector<GridPoint> out;
  const double l0 = std::log(x_lo), l1 = std::log(x_hi);
  for (double alpha : alphas) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = nx == 1 ? x_lo : std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(nx - 1));
      const double y_max = (1.0 - alpha) * std::min(1.0, 1.0 / x);
      for (std::size_t j = 0; j < ny; ++j)
        out.push_back({x, y_max * static_cast<double>(j + 1) / static_cast<double>(ny + 1), alpha});
    }
  }
  return out;
}

std::vector<SweepRow> phase_sweep(const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  std::uint64_t k = 0;
  for (double alpha : spec.alphas)
    for (double lr : spec.lrs)
      for (double c0 : spec.c0s) {
        std::mt19937_64 rng(spec.seed + 0x9E3779B97F4A7C15ULL * ++k);
        auto s = make_state(c0, spec.dim, alpha, LambdaSchedule::constant(lr), rng);
        auto tr = simulate_trajectory(s, spec.steps);
        rows.push_back({c0, lr, alpha, tr.outcome, tr.steps_to_exit, tr.final_c()});
      }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "c0,lambda,alpha,outcome,steps_to_exit,final_c\n";
  for (const auto& r : rows)
    os << format_double(r.c0) << ',' << format_double(r.lr) << ',' << format_double(r.alpha) << ','
       << to_string(r.outcome) << ',' << r.steps_to_exit << ',' << format_double(r.final_c) << '\n';
}

}  // namespace catalyst::dynamics
