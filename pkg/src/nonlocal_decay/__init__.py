"""Kernels, exact decay rates and solitary waves for Whitham-type equations."""

from .decay_rate import DecayRateResult, solve_delta
from .errors import *  # noqa: F401,F403
from .grid import Grid
from .kernel import (
    KernelDecayModel,
    KernelSamples,
    analytic_prefactor,
    compute_kernel,
    decay_model,
    near_origin_exponent,
    tail_decay_fit,
)
from .symbols import DispersionSymbol, admissible, eval_imag, eval_real, invert, make_symbol

__version__ = "0.1.0"
