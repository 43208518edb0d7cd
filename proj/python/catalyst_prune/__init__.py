# Copyright 2026 The Catalyst Prune Authors
# SPDX-License-Identifier: Apache-2.0
"""Catalyst structured pruning: extended-parameter regulariser, exact prune, ratio dynamics."""

import json

from . import _core
from ._core import (
    CatalystError,
    ConfigError,
    DynamicsError,
    ExtendedSubmodule,
    IndexError,
    IoError,
    NoWitnessError,
    NumericalError,
    ShapeError,
    Submodule,
    c_ratios,
    catalyst_reg,
    catalyst_reg_grad,
    dist_to_xtgt,
    embed,
    f_coeff,
    filter_norms,
    prune,
    psi,
    recurrence_step,
    select_prune_indices,
    simulate,
    verify_function_preservation,
    witness_d,
)


def run(config_text, output_dir=None):
    """Runs the full pipeline from config text; returns the summary as a dict."""
    return json.loads(_core.run_json(config_text, output_dir or ""))

