// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include "catalyst/accounting.hpp"

namespace catalyst {

namespace {

void add_dense(Cost& c, Eigen::Index rows, Eigen::Index cols) {
  c.macs += static_cast<std::int64_t>(rows) * cols;
  c.params += static_cast<std::int64_t>(rows) * cols + rows;
}

}  // namespace

Cost count_macs_params(const Model& m) {
  Cost c;
  for (const auto& l : m.pre) add_dense(c, l.weight.rows(), l.weight.cols());
  add_dense(c, m.target.sub.w.rows(), m.target.sub.w.cols());
  add_dense(c, m.target.sub.a.rows(), m.target.sub.a.cols());
  if (m.extended) c.params += 2 * static_cast<std::int64_t>(m.target.sub.n_hidden());
  for (const auto& l : m.post) add_dense(c, l.weight.rows(), l.weight.cols());
  return c;
}

}  // namespace catalyst
