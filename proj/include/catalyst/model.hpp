// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0
//
// Parameter containers: the two-layer pruning target, its catalyst-extended
// form, and the small MLP that hosts it. All types are plain values.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace catalyst {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Activation { relu, identity, tanh };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view name);

double activate(Activation a, double x);
// Derivative at x; ReLU'(0) is taken as 0.
double activate_grad(Activation a, double x);

/// A dense layer computing act(weight * x + bias).
struct DenseLayer {
  Matrix weight;
  Vector bias;
  Activation act = Activation::relu;

  std::size_t in_dim() const { return static_cast<std::size_t>(weight.cols()); }
  std::size_t out_dim() const { return static_cast<std::size_t>(weight.rows()); }
};

/// The pruning target x -> b_A + A * sigma(b_W + W x).
///
/// Rows of `w` are the filters; hidden channel i is produced by row i of `w`
/// and consumed by column i of `a`.
struct Submodule {
  Matrix w;    // N_W x N_I
  Vector b_w;  // N_W
  Matrix a;    // N_A x N_W
  Vector b_a;  // N_A
  Activation sigma = Activation::relu;

  std::size_t n_in() const { return static_cast<std::size_t>(w.cols()); }
  std::size_t n_hidden() const { return static_cast<std::size_t>(w.rows()); }
  std::size_t n_out() const { return static_cast<std::size_t>(a.rows()); }

  // Throws ShapeError on inconsistent shapes. N_W == 0 is accepted: it is
  // what pruning every channel leaves behind.
  void validate() const;
};

/// Diagonal matrix D = diag(delta), stored as its diagonal.
struct CatalystDiag {
  Vector delta;

  CatalystDiag() = default;
  explicit CatalystDiag(Vector d) : delta(std::move(d)) {}
  static CatalystDiag zeros(std::size_t n) { return CatalystDiag(Vector::Zero(static_cast<Eigen::Index>(n))); }

  std::size_t size() const { return static_cast<std::size_t>(delta.size()); }
  double operator[](std::size_t i) const { return delta[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return delta[static_cast<Eigen::Index>(i)]; }
};

/// Submodule with the learnable activation psi_{D,Dbar}(x) = Dx - Dbar x + sigma(x).
struct ExtendedSubmodule {
  Submodule sub;
  CatalystDiag d;
  CatalystDiag dbar;

  void validate() const;
};

/// Channels to remove. Indices are 0-based, sorted, unique.
class PruneSet {
 public:
  PruneSet() = default;
  // Sorts and checks for duplicates; throws IndexError on any index >= n_hidden.
  PruneSet(std::vector<std::size_t> indices, std::size_t n_hidden);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t i) const;
  // Complement within [0, n_hidden), ascending.
  std::vector<std::size_t> complement(std::size_t n_hidden) const;

  friend bool operator==(const PruneSet&, const PruneSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

/// MLP: pre layers -> target submodule -> joint activation -> post layers.
///
/// When `post` is empty the submodule output is the logit vector and `joint`
/// is unused. `extended` says whether target.d / target.dbar are live
/// parameters; when false the submodule uses plain sigma.
struct Model {
  std::vector<DenseLayer> pre;
  ExtendedSubmodule target;
  bool extended = false;
  Activation joint = Activation::relu;
  std::vector<DenseLayer> post;

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  void validate() const;
};

/// Zero-valued copy with identical shapes (used as a gradient container).
Model zeros_like(const Model& m);

enum class ParamGroup { theta, catalyst };

struct ParamRef {
  ParamGroup group;
  std::string name;
  std::span<double> values;
};

struct ConstParamRef {
  ParamGroup group;
  std::string name;
  std::span<const double> values;
};

// Every trainable scalar of `m`, in a fixed order. D/Dbar appear only when
// the model is extended.
std::vector<ParamRef> param_refs(Model& m);
std::vector<ConstParamRef> param_refs(const Model& m);

}  // namespace catalyst
