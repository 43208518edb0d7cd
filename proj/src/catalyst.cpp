// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/catalyst.hpp"

#include <cmath>

#include "catalyst/errors.hpp"
#include "catalyst/nn.hpp"

namespace catalyst {

Vector psi(const CatalystDiag& d, const CatalystDiag& dbar, const Vector& x, Activation sigma) {
  if (d.size() != static_cast<std::size_t>(x.size()) || dbar.size() != static_cast<std::size_t>(x.size()))
    throw ShapeError("psi: catalyst length does not match input length " + std::to_string(x.size()));
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out[i] = d.delta[i] * x[i] - dbar.delta[i] * x[i] + activate(sigma, x[i]);
  return out;
}

ExtendedSubmodule embed(const Submodule& sub, double c) {
  if (!(c > 0.0)) throw ConfigError("embed: scale c must be positive");
  sub.validate();
  CatalystDiag init(c * filter_norms(sub.w));
  return ExtendedSubmodule{sub, init, init};
}

void embed(Model& m, double c) {
  m.target = embed(m.target.sub, c);
  m.extended = true;
}

std::vector<std::size_t> zero_filters(const Matrix& w) {
  std::vector<std::size_t> out;
  const Vector norms = filter_norms(w);
  for (Eigen::Index i = 0; i < norms.size(); ++i)
    if (norms[i] == 0.0) out.push_back(static_cast<std::size_t>(i));
  return out;
}

Vector forward_extended(const ExtendedSubmodule& ext, const Vector& x) {
  ext.validate();
  const Submodule& s = ext.sub;
  if (static_cast<std::size_t>(x.size()) != s.n_in())
    throw ShapeError("forward_extended: input length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(s.n_in()));
  return s.b_a + s.a * psi(ext.d, ext.dbar, s.b_w + s.w * x, s.sigma);
}

double catalyst_reg(const CatalystDiag& d, const Matrix& w) {
  if (d.size() != static_cast<std::size_t>(w.rows())) throw ShapeError("catalyst_reg: length mismatch");
  return (d.delta.cwiseAbs().array() * filter_norms(w).array()).sum();
}

CatalystRegGrad catalyst_reg_grad(const CatalystDiag& d, const Matrix& w) {
  if (d.size() != static_cast<std::size_t>(w.rows())) throw ShapeError("catalyst_reg_grad: length mismatch");
  const Vector norms = filter_norms(w);
  CatalystRegGrad g{Vector::Zero(w.rows()), Matrix::Zero(w.rows(), w.cols())};
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const double di = d.delta[i];
    const double sgn = di > 0.0 ? 1.0 : (di < 0.0 ? -1.0 : 0.0);
    g.d[i] = sgn * norms[i];
    if (norms[i] > 0.0) g.w.row(i) = (std::abs(di) / norms[i]) * w.row(i);
  }
  return g;
}

Vector c_ratios(const ExtendedSubmodule& ext) {
  const Vector norms = filter_norms(ext.sub.w);
  if (ext.d.size() != static_cast<std::size_t>(norms.size())) throw ShapeError("c_ratios: length mismatch");
  Vector c(norms.size());
  for (Eigen::Index i = 0; i < norms.size(); ++i) {
    const double di = std::abs(ext.d.delta[i]);
    if (norms[i] == 0.0)
      c[i] = di == 0.0 ? 1.0 : kInfiniteRatio;
    else
      c[i] = di / norms[i];
  }
  return c;
}

}  // namespace catalyst
