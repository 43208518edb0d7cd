// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/nn.hpp"

#include <cmath>
#include <random>

#include "catalyst/errors.hpp"

namespace catalyst {

namespace {

Matrix apply(Activation act, const Matrix& z) {
  return z.unaryExpr([act](double v) { return activate(act, v); });
}

Matrix apply_grad(Activation act, const Matrix& z) {
  return z.unaryExpr([act](double v) { return activate_grad(act, v); });
}

Vector diag_gain(const Model& m) {
  // Linear part of psi: (D - Dbar) per channel.
  if (!m.extended) return Vector::Zero(static_cast<Eigen::Index>(m.target.sub.n_hidden()));
  return m.target.d.delta - m.target.dbar.delta;
}

// Activations retained for the backward pass.
struct Trace {
  std::vector<Matrix> pre_in, pre_z;
  Matrix sub_in, u, v, o;
  Matrix joint_out;
  std::vector<Matrix> post_in, post_z;
  Matrix logits;
};

Trace run_forward(const Model& m, const Matrix& x) {
  if (static_cast<std::size_t>(x.rows()) != m.input_dim())
    throw ShapeError("model input has " + std::to_string(x.rows()) + " features, expected " +
                     std::to_string(m.input_dim()));
  Trace t;
  Matrix h = x;
  for (const auto& l : m.pre) {
    t.pre_in.push_back(h);
    Matrix z = (l.weight * h).colwise() + l.bias;
    h = apply(l.act, z);
    t.pre_z.push_back(std::move(z));
  }
  const Submodule& s = m.target.sub;
  t.sub_in = h;
  t.u = (s.w * h).colwise() + s.b_w;
  t.v = apply(s.sigma, t.u);
  if (m.extended) t.v += diag_gain(m).asDiagonal() * t.u;
  t.o = (s.a * t.v).colwise() + s.b_a;
  if (m.post.empty()) {
    t.logits = t.o;
    return t;
  }
  h = apply(m.joint, t.o);
  t.joint_out = h;
  for (const auto& l : m.post) {
    t.post_in.push_back(h);
    Matrix z = (l.weight * h).colwise() + l.bias;
    h = apply(l.act, z);
    t.post_z.push_back(std::move(z));
  }
  t.logits = std::move(h);
  return t;
}

}  // namespace

Vector forward_submodule(const Submodule& sub, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != sub.n_in())
    throw ShapeError("forward_submodule: input length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(sub.n_in()));
  Vector u = sub.b_w + sub.w * x;
  return sub.b_a + sub.a * u.unaryExpr([&](double v) { return activate(sub.sigma, v); });
}

// Plain left-to-right sums: the value does not depend on how Eigen vectorises.
Vector filter_norms(const Matrix& w) {
  Vector out(w.rows());
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < w.cols(); ++j) s += w(i, j) * w(i, j);
    out[i] = std::sqrt(s);
  }
  return out;
}

Matrix forward(const Model& m, const Matrix& inputs) { return run_forward(m, inputs).logits; }

Vector forward(const Model& m, const Vector& x) {
  Matrix in = x;
  return run_forward(m, in).logits.col(0);
}

LossAndGrad model_forward_backward(const Model& m, const LabeledData& batch, long step) {
  const auto n = static_cast<Eigen::Index>(batch.size());
  if (n == 0) throw ShapeError("empty batch");
  if (batch.inputs.cols() != n) throw ShapeError("batch inputs/labels count mismatch");
  Trace t = run_forward(m, batch.inputs);

  const auto classes = t.logits.rows();
  Matrix probs(classes, n);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const int label = batch.labels[static_cast<std::size_t>(j)];
    if (label < 0 || label >= classes) throw ShapeError("label out of range");
    const double mx = t.logits.col(j).maxCoeff();
    Vector e = (t.logits.col(j).array() - mx).exp();
    const double z = e.sum();
    loss += std::log(z) + mx - t.logits(label, j);
    probs.col(j) = e / z;
  }
  loss /= static_cast<double>(n);
  if (!std::isfinite(loss)) throw NumericalError("non-finite loss", step);

  LossAndGrad out{loss, zeros_like(m)};
  Model& g = out.grad;

  Matrix delta = probs;  // dL/dlogits
  for (Eigen::Index j = 0; j < n; ++j) delta(batch.labels[static_cast<std::size_t>(j)], j) -= 1.0;
  delta /= static_cast<double>(n);

  for (std::size_t k = m.post.size(); k-- > 0;) {
    const auto& l = m.post[k];
    Matrix dz = delta.cwiseProduct(apply_grad(l.act, t.post_z[k]));
    g.post[k].weight = dz * t.post_in[k].transpose();
    g.post[k].bias = dz.rowwise().sum();
    delta = l.weight.transpose() * dz;
  }
  if (!m.post.empty()) delta = delta.cwiseProduct(apply_grad(m.joint, t.o));

  const Submodule& s = m.target.sub;
  g.target.sub.a = delta * t.v.transpose();
  g.target.sub.b_a = delta.rowwise().sum();
  Matrix dv = s.a.transpose() * delta;
  Matrix du = dv.cwiseProduct(apply_grad(s.sigma, t.u));
  if (m.extended) {
    Vector dgain = dv.cwiseProduct(t.u).rowwise().sum();
    g.target.d.delta = dgain;
    g.target.dbar.delta = -dgain;
    du += diag_gain(m).asDiagonal() * dv;
  }
  g.target.sub.w = du * t.sub_in.transpose();
  g.target.sub.b_w = du.rowwise().sum();
  delta = s.w.transpose() * du;

  for (std::size_t k = m.pre.size(); k-- > 0;) {
    const auto& l = m.pre[k];
    Matrix dz = delta.cwiseProduct(apply_grad(l.act, t.pre_z[k]));
    g.pre[k].weight = dz * t.pre_in[k].transpose();
    g.pre[k].bias = dz.rowwise().sum();
    if (k > 0) delta = l.weight.transpose() * dz;
  }
  return out;
}

Evaluation evaluate(const Model& m, const LabeledData& data) {
  if (data.size() == 0) return {};
  Matrix logits = forward(m, data.inputs);
  double loss = 0.0;
  std::size_t correct = 0;
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    const int label = data.labels[static_cast<std::size_t>(j)];
    Eigen::Index arg = 0;
    const double mx = logits.col(j).maxCoeff(&arg);
    loss += std::log((logits.col(j).array() - mx).exp().sum()) + mx - logits(label, j);
    if (arg == label) ++correct;
  }
  const double n = static_cast<double>(data.size());
  return {loss / n, static_cast<double>(correct) / n};
}

Model make_mlp(std::size_t in_dim, const std::vector<std::size_t>& widths, std::size_t classes,
               std::size_t target, Activation act, std::uint64_t seed) {
  if (widths.empty()) throw ConfigError("make_mlp: need at least one hidden width");
  if (target >= widths.size()) throw ConfigError("make_mlp: target position out of range");
  std::mt19937_64 rng(seed);
  auto layer = [&](std::size_t in, std::size_t out, Activation a) {
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(in)));
    DenseLayer l;
    l.weight = Matrix::NullaryExpr(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in),
                                   [&]() { return dist(rng); });
    l.bias = Vector::Zero(static_cast<Eigen::Index>(out));
    l.act = a;
    return l;
  };
  std::vector<std::size_t> dims{in_dim};
  dims.insert(dims.end(), widths.begin(), widths.end());
  dims.push_back(classes);
  const std::size_t n_layers = dims.size() - 1;

  Model m;
  m.joint = act;
  for (std::size_t k = 0; k < n_layers; ++k) {
    const bool last = k + 1 == n_layers;
    DenseLayer l = layer(dims[k], dims[k + 1], last ? Activation::identity : act);
    if (k < target) {
      m.pre.push_back(std::move(l));
    } else if (k == target) {
      m.target.sub.w = std::move(l.weight);
      m.target.sub.b_w = std::move(l.bias);
      m.target.sub.sigma = act;
    } else if (k == target + 1) {
      m.target.sub.a = std::move(l.weight);
      m.target.sub.b_a = std::move(l.bias);
    } else {
      m.post.push_back(std::move(l));
    }
  }
  const auto hidden = m.target.sub.n_hidden();
  m.target.d = CatalystDiag::zeros(hidden);
  m.target.dbar = CatalystDiag::zeros(hidden);
  m.validate();
  return m;
}

void sgd_update(std::span<double> p, std::span<const double> g, double lr, double decay) {
  if (p.size() != g.size()) throw ShapeError("sgd_update: parameter/gradient size mismatch");
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * (g[i] + decay * p[i]);
}

void sgd_step(Model& params, const Model& grads, const SgdOptions& opts) {
  auto p = param_refs(params);
  auto g = param_refs(grads);
  if (p.size() != g.size()) throw ShapeError("sgd_step: gradient layout differs from model");
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double decay = p[k].group == ParamGroup::theta ? opts.decay_theta : opts.decay_catalyst;
    sgd_update(p[k].values, g[k].values, opts.lr, decay);
  }
}

void Sgd::step(Model& params, const Model& grads) {
  if (opts_.momentum == 0.0) {
    sgd_step(params, grads, opts_);
    return;
  }
  if (!velocity_) velocity_ = zeros_like(params);
  auto p = param_refs(params);
  auto g = param_refs(grads);
  auto v = param_refs(*velocity_);
  if (p.size() != g.size() || p.size() != v.size())
    throw ShapeError("Sgd::step: parameter layout changed; call reset()");
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double decay = p[k].group == ParamGroup::theta ? opts_.decay_theta : opts_.decay_catalyst;
    auto pv = p[k].values;
    auto gv = g[k].values;
    auto vv = v[k].values;
    if (pv.size() != vv.size()) throw ShapeError("Sgd::step: parameter shape changed; call reset()");
    for (std::size_t i = 0; i < pv.size(); ++i) {
      vv[i] = opts_.momentum * vv[i] + gv[i] + decay * pv[i];
      pv[i] -= opts_.lr * vv[i];
    }
  }
}

}  // namespace catalyst
