// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/model.hpp"

#include <algorithm>
#include <cmath>

#include "catalyst/errors.hpp"

namespace catalyst {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::identity: return "identity";
    case Activation::tanh: return "tanh";
  }
  return "relu";
}

Activation activation_from_string(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "identity") return Activation::identity;
  if (name == "tanh") return Activation::tanh;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

double activate(Activation a, double x) {
  switch (a) {
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::identity: return x;
    case Activation::tanh: return std::tanh(x);
  }
  return x;
}

double activate_grad(Activation a, double x) {
  switch (a) {
    case Activation::relu: return x > 0.0 ? 1.0 : 0.0;
    case Activation::identity: return 1.0;
    case Activation::tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

void Submodule::validate() const {
  if (w.cols() < 1) throw ShapeError("submodule: N_I must be >= 1");
  if (a.rows() < 1) throw ShapeError("submodule: N_A must be >= 1");
  if (b_w.size() != w.rows())
    throw ShapeError("submodule: len(b_W)=" + std::to_string(b_w.size()) +
                     " but rows(W)=" + std::to_string(w.rows()));
  if (a.cols() != w.rows())
    throw ShapeError("submodule: cols(A)=" + std::to_string(a.cols()) +
                     " but rows(W)=" + std::to_string(w.rows()));
  if (b_a.size() != a.rows())
    throw ShapeError("submodule: len(b_A)=" + std::to_string(b_a.size()) +
                     " but rows(A)=" + std::to_string(a.rows()));
}

void ExtendedSubmodule::validate() const {
  sub.validate();
  if (d.size() != sub.n_hidden() || dbar.size() != sub.n_hidden())
    throw ShapeError("extended submodule: catalyst length must equal N_W=" +
                     std::to_string(sub.n_hidden()));
}

PruneSet::PruneSet(std::vector<std::size_t> indices, std::size_t n_hidden)
    : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw IndexError("prune set: duplicate channel index");
  if (!indices_.empty() && indices_.back() >= n_hidden)
    throw IndexError("prune set: index " + std::to_string(indices_.back()) +
                     " out of range for N_W=" + std::to_string(n_hidden));
}

bool PruneSet::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

std::vector<std::size_t> PruneSet::complement(std::size_t n_hidden) const {
  std::vector<std::size_t> out;
  out.reserve(n_hidden);
  for (std::size_t i = 0; i < n_hidden; ++i)
    if (!contains(i)) out.push_back(i);
  return out;
}

std::size_t Model::input_dim() const {
  return pre.empty() ? target.sub.n_in() : pre.front().in_dim();
}

std::size_t Model::output_dim() const {
  return post.empty() ? target.sub.n_out() : post.back().out_dim();
}

void Model::validate() const {
  if (extended)
    target.validate();
  else
    target.sub.validate();
  std::size_t width = input_dim();
  auto chain = [&](std::size_t in, std::size_t out, const std::string& what) {
    if (in != width)
      throw ShapeError(what + ": expects input " + std::to_string(in) + ", got " + std::to_string(width));
    width = out;
  };
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const auto& l = pre[i];
    if (l.bias.size() != l.weight.rows()) throw ShapeError("pre layer bias length mismatch");
    chain(l.in_dim(), l.out_dim(), "pre layer " + std::to_string(i));
  }
  chain(target.sub.n_in(), target.sub.n_out(), "target submodule");
  for (std::size_t i = 0; i < post.size(); ++i) {
    const auto& l = post[i];
    if (l.bias.size() != l.weight.rows()) throw ShapeError("post layer bias length mismatch");
    chain(l.in_dim(), l.out_dim(), "post layer " + std::to_string(i));
  }
}

Model zeros_like(const Model& m) {
  Model z = m;
  for (auto& l : z.pre) {
    l.weight.setZero();
    l.bias.setZero();
  }
  for (auto& l : z.post) {
    l.weight.setZero();
    l.bias.setZero();
  }
  z.target.sub.w.setZero();
  z.target.sub.b_w.setZero();
  z.target.sub.a.setZero();
  z.target.sub.b_a.setZero();
  z.target.d.delta.setZero();
  z.target.dbar.delta.setZero();
  return z;
}

namespace {

template <class M, class Ref, class Span>
std::vector<Ref> collect(M& m) {
  std::vector<Ref> out;
  auto add = [&](ParamGroup g, std::string name, auto& mat) {
    out.push_back(Ref{g, std::move(name), Span(mat.data(), static_cast<std::size_t>(mat.size()))});
  };
  for (std::size_t i = 0; i < m.pre.size(); ++i) {
    add(ParamGroup::theta, "pre" + std::to_string(i) + ".weight", m.pre[i].weight);
    add(ParamGroup::theta, "pre" + std::to_string(i) + ".bias", m.pre[i].bias);
  }
  add(ParamGroup::theta, "target.W", m.target.sub.w);
  add(ParamGroup::theta, "target.b_W", m.target.sub.b_w);
  add(ParamGroup::theta, "target.A", m.target.sub.a);
  add(ParamGroup::theta, "target.b_A", m.target.sub.b_a);
  if (m.extended) {
    add(ParamGroup::catalyst, "target.D", m.target.d.delta);
    add(ParamGroup::catalyst, "target.Dbar", m.target.dbar.delta);
  }
  for (std::size_t i = 0; i < m.post.size(); ++i) {
    add(ParamGroup::theta, "post" + std::to_string(i) + ".weight", m.post[i].weight);
    add(ParamGroup::theta, "post" + std::to_string(i) + ".bias", m.post[i].bias);
  }
  return out;
}

}  // namespace

std::vector<ParamRef> param_refs(Model& m) {
  return collect<Model, ParamRef, std::span<double>>(m);
}

std::vector<ConstParamRef> param_refs(const Model& m) {
  return collect<const Model, ConstParamRef, std::span<const double>>(m);
}

}  // namespace catalyst
