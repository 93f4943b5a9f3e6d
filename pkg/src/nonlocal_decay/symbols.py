"""Dispersion symbols m(xi) of the built-in Fourier multiplier operators.

Each symbol is evaluated on the real line (``eval_real``) and along the
imaginary axis, ``g(y) = m(iy)`` (``eval_imag``).  The imaginary restriction
is what fixes the exponential decay rate of the convolution kernel.

Built-ins
---------
whitham               m = sqrt(tanh(xi)/xi)
bidirectional-whitham m = tanh(xi)/xi
capillary-whitham     m = sqrt((1 + beta xi^2) tanh(xi)/xi), beta > 4/pi^2
kdv-oracle            m = 1 - xi^2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, DomainError, InversionError

CAPILLARY_BETA_MIN = 4.0 / math.pi**2
SERIES_CUTOFF = 1e-4

SYMBOL_NAMES = ("whitham", "bidirectional-whitham", "capillary-whitham", "kdv-oracle")
_ALIASES = {"bidirectional": "bidirectional-whitham", "capillary": "capillary-whitham", "kdv": "kdv-oracle"}


def _tanhc(xi):
    """tanh(xi)/xi with the removable singularity at 0 filled in."""
    xi = np.asarray(xi, dtype=float)
    small = np.abs(xi) < SERIES_CUTOFF
    safe = np.where(small, 1.0, xi)
    x2 = xi * xi
    return np.where(small, 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0, np.tanh(safe) / safe)


def _tanc(y):
    """tan(y)/y, the imaginary-axis continuation of tanh(xi)/xi."""
    y = np.asarray(y, dtype=float)
    small = np.abs(y) < SERIES_CUTOFF
    safe = np.where(small, 1.0, y)
    y2 = y * y
    return np.where(small, 1.0 + y2 / 3.0 + 2.0 * y2 * y2 / 15.0, np.tan(safe) / safe)


def _scalar_or_array(value, like):
    if np.ndim(like) == 0:
        return float(value)
    return value


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    regime: str  # "smoothing" or "differentiating"
    c_eff: float
    bound: float
    reason: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class DispersionSymbol:
    """A named dispersion relation plus the metadata the analysis needs.

    ``m0`` is the algebraic exponent of m at infinity, ``tail_coefficient``
    the constant a in m(xi) ~ a |xi|^m0, ``c_power`` the exponent placed on
    the speed in the kernel denominator, and ``strip_height`` the half-height
    of the strip on which ``eval_imag`` is defined.
    """

    name: str
    params: dict = field(default_factory=dict)
    m0: float = -0.5
    tail_coefficient: float = 1.0
    c_power: int = 1
    strip_height: float = math.pi / 2
    inverted: bool = False

    @property
    def label(self):
        base = self.name
        if "beta" in self.params:
            base += f"-beta{self.params['beta']:g}"
        return base + ("-inverted" if self.inverted else "")

    # -- evaluation ------------------------------------------------------
    def eval_real(self, xi):
        xi_arr = np.asarray(xi, dtype=float)
        if self.name == "whitham":
            out = np.sqrt(_tanhc(xi_arr))
        elif self.name == "bidirectional-whitham":
            out = _tanhc(xi_arr)
        elif self.name == "capillary-whitham":
            beta = self.params["beta"]
            sq = (1.0 + beta * xi_arr * xi_arr) * _tanhc(xi_arr)
            out = 1.0 / np.sqrt(sq) if self.inverted else np.sqrt(sq)
        elif self.name == "kdv-oracle":
            out = 1.0 - xi_arr * xi_arr
        else:  # pragma: no cover - guarded by make_symbol
            raise ConfigError(f"unknown symbol {self.name!r}")
        return _scalar_or_array(out, xi)

    def eval_imag(self, y):
        y_arr = np.abs(np.asarray(y, dtype=float))
        if np.any(y_arr >= self.strip_height) or np.any(~np.isfinite(y_arr)):
            raise DomainError(
                f"{self.label}: imaginary-axis evaluation requires |y| < {self.strip_height:.12g}"
            )
        if self.name == "whitham":
            out = np.sqrt(_tanc(y_arr))
        elif self.name == "bidirectional-whitham":
            out = _tanc(y_arr)
        elif self.name == "capillary-whitham":
            beta = self.params["beta"]
            sq = (1.0 - beta * y_arr * y_arr) * _tanc(y_arr)
            out = 1.0 / np.sqrt(sq) if self.inverted else np.sqrt(sq)
        else:
            out = 1.0 + y_arr * y_arr
        return _scalar_or_array(out, y)

    # -- global bounds on the real line ------------------------------------
    @property
    def is_bounded(self):
        return math.isfinite(self.sup)

    @property
    def sup(self):
        """sup over the real line of m."""
        if self.name == "capillary-whitham" and not self.inverted:
            return math.inf
        if self.name == "capillary-whitham":
            return 1.0 / _capillary_inf(self.params["beta"])
        return 1.0  # attained at xi = 0

    @property
    def inf(self):
        """inf over the real line of m."""
        if self.name == "capillary-whitham" and not self.inverted:
            return _capillary_inf(self.params["beta"])
        if self.name == "kdv-oracle":
            return -math.inf
        return 0.0

    def c_eff(self, c):
        return float(c) ** self.c_power


def _capillary_inf(beta):
    # (1 + beta xi^2) tanh(xi)/xi has its minimum at 0 whenever beta >= 1/3,
    # but a dense scan keeps this honest for any supported beta.
    xi = np.concatenate(([0.0], np.geomspace(1e-3, 1e3, 4001)))
    vals = np.sqrt((1.0 + beta * xi * xi) * _tanhc(xi))
    return float(vals.min())


def make_symbol(name, c_power=None, **params):
    """Build a built-in symbol by name.

    ``capillary-whitham`` needs ``beta``; the other symbols take no
    parameters.  ``c_power`` overrides the default exponent on c (2 for the
    bidirectional symbol, which enters the Whitham-Boussinesq system, 1
    otherwise).
    """
    key = _ALIASES.get(name, name)
    if key not in SYMBOL_NAMES:
        raise ConfigError(f"unknown symbol {name!r}; choose from {', '.join(SYMBOL_NAMES)}", key="symbol")
    if key == "capillary-whitham":
        if "beta" not in params:
            raise ConfigError("capillary-whitham needs a bond number", key="beta")
        beta = float(params.pop("beta"))
        if not beta > CAPILLARY_BETA_MIN:
            raise ConfigError(
                f"beta = {beta:g} <= 4/pi^2 = {CAPILLARY_BETA_MIN:.6f}: decay root leaves the "
                "imaginary axis and is not supported",
                key="beta",
            )
        extra = {"beta": beta}
    else:
        extra = {}
    if params:
        raise ConfigError(f"{key} takes no parameters {sorted(params)}", key=sorted(params)[0])

    if key == "whitham":
        sym = DispersionSymbol(key, {}, m0=-0.5, tail_coefficient=1.0, c_power=1, strip_height=math.pi / 2)
    elif key == "bidirectional-whitham":
        sym = DispersionSymbol(key, {}, m0=-1.0, tail_coefficient=1.0, c_power=2, strip_height=math.pi / 2)
    elif key == "capillary-whitham":
        beta = extra["beta"]
        sym = DispersionSymbol(
            key,
            extra,
            m0=0.5,
            tail_coefficient=math.sqrt(beta),
            c_power=1,
            strip_height=min(math.pi / 2, beta**-0.5),
        )
    else:
        sym = DispersionSymbol(key, {}, m0=2.0, tail_coefficient=-1.0, c_power=1, strip_height=math.inf)

    if c_power is not None:
        c_power = int(c_power)
        if c_power < 1:
            raise ConfigError("c_power must be a positive integer", key="c_power")
        sym = replace(sym, c_power=c_power)
    return sym


def eval_real(sym, xi):
    return sym.eval_real(xi)


def eval_imag(sym, y):
    return sym.eval_imag(y)


def admissible(sym, c):
    """Check the speed bound that makes c_eff - m sign-definite.

    Bounded symbols need c^c_power > sup m.  Unbounded (differentiating)
    symbols need 0 < c < inf m, the regime in which 1/m is a smoothing
    symbol with speed 1/c.
    """
    c = float(c)
    if not c > 0:
        return Admissibility(False, "smoothing", c, sym.sup, f"speed must be positive, got {c:g}")
    if sym.is_bounded:
        ce = sym.c_eff(c)
        if ce > sym.sup:
            return Admissibility(True, "smoothing", ce, sym.sup)
        return Admissibility(
            False, "smoothing", ce, sym.sup, f"c^{sym.c_power} = {ce:.12g} must exceed sup m = {sym.sup:.12g}"
        )
    ce = sym.c_eff(c)
    if ce < sym.inf:
        return Admissibility(True, "differentiating", ce, sym.inf)
    return Admissibility(
        False, "differentiating", ce, sym.inf, f"c = {ce:.12g} must lie below inf m = {sym.inf:.12g}"
    )


def invert(sym):
    """Return the smoothing symbol 1/m of a positive, unbounded symbol.

    Inverting an already inverted symbol gives the original back.
    """
    if sym.name != "capillary-whitham":
        reason = "bounded" if sym.is_bounded and sym.inf >= 0 else "not strictly positive"
        raise InversionError(f"{sym.label} is {reason}; only positive unbounded symbols can be inverted")
    if sym.inverted:
        return replace(sym, inverted=False, m0=-sym.m0, tail_coefficient=1.0 / sym.tail_coefficient)
    return replace(sym, inverted=True, m0=-sym.m0, tail_coefficient=1.0 / sym.tail_coefficient, c_power=1)
