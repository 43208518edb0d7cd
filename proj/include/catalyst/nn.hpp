// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "catalyst/model.hpp"

namespace catalyst {

/// Column-major sample matrix (features x samples) with integer class labels.
struct LabeledData {
  Matrix inputs;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(inputs.rows()); }
};

Vector forward_submodule(const Submodule& sub, const Vector& x);

/// Row-wise Euclidean norms of W, i.e. the filter norms ||F_i||_2.
Vector filter_norms(const Matrix& w);

/// Logits for a batch (one column per sample).
Matrix forward(const Model& m, const Matrix& inputs);
Vector forward(const Model& m, const Vector& x);

struct LossAndGrad {
  double loss = 0.0;
  Model grad;  // same shapes as the model
};

/// Mean softmax cross-entropy over the batch and its exact gradient for every
/// parameter (D and Dbar included when the model is extended). Throws
/// NumericalError tagged with `step` when the loss is not finite.
LossAndGrad model_forward_backward(const Model& m, const LabeledData& batch, long step = 0);

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;  // fraction in [0,1]
};

Evaluation evaluate(const Model& m, const LabeledData& data);

/// He-normal initialised MLP in -> widths... -> classes; the hidden layer at
/// `target` together with the layer consuming it forms the pruning target.
Model make_mlp(std::size_t in_dim, const std::vector<std::size_t>& widths, std::size_t classes,
               std::size_t target, Activation act, std::uint64_t seed);

struct SgdOptions {
  double lr = 0.01;
  double decay_theta = 0.0;
  double decay_catalyst = 0.0;
  double momentum = 0.0;
};

/// p <- p - lr * (g + decay * p) for a single tensor.
void sgd_update(std::span<double> p, std::span<const double> g, double lr, double decay);

/// SGD with per-group weight decay and optional heavy-ball momentum
/// (buf <- momentum * buf + g + decay * p; p <- p - lr * buf).
class Sgd {
 public:
  explicit Sgd(SgdOptions opts) : opts_(opts) {}

  void step(Model& params, const Model& grads);
  void set_lr(double lr) { opts_.lr = lr; }
  const SgdOptions& options() const { return opts_; }
  // Drop momentum buffers; required after the model changes shape.
  void reset() { velocity_.reset(); }

 private:
  SgdOptions opts_;
  std::optional<Model> velocity_;
};

/// Plain stateless step (no momentum).
void sgd_step(Model& params, const Model& grads, const SgdOptions& opts);

}  // namespace catalyst
