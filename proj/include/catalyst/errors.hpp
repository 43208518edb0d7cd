// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace catalyst {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched matrix/vector dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Channel index outside [0, N_W).
class IndexError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or parameter during training.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, long step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

// f_coeff denominator vanishing, recurrence outside its validity window.
class DynamicsError : public Error {
 public:
  using Error::Error;
};

// Witness D requested for W outside the open epsilon-neighbourhood.
class NoWitnessError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace catalyst
