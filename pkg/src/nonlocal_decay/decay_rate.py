"""Exact kernel decay rate from the imaginary-axis equation g(delta) = c_eff.

The kernel ``F^{-1}(m/(c_eff - m))`` extends analytically into the strip
``|Im z| < delta_c`` where ``delta_c`` is the height of the first pole, i.e.
the first zero of ``c_eff - m(i y)``.  For the built-in symbols ``g(y) =
m(iy)`` is real and strictly increasing, so a bracketed bisection finds the
root without any complex arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BracketError, NotSupercritical
from .symbols import invert

BRACKET_LO = 1e-12
STRIP_MARGIN = 1e-9
BISECT_WIDTH = 1e-14


@dataclass(frozen=True)
class DecayRateResult:
    delta_c: float
    iterations: int
    bracket: tuple
    residual: float
    c_eff: float
    symbol: str

    def to_dict(self):
        return {
            "symbol": self.symbol,
            "c_eff": self.c_eff,
            "delta_c": self.delta_c,
            "residual": self.residual,
            "iterations": self.iterations,
            "bracket": list(self.bracket),
        }


def _fd_derivative(g, y, step):
    return (g(y + step) - g(y - step)) / (2.0 * step)


def solve_delta(sym, c):
    """Decay rate delta_c solving ``sym.eval_imag(delta) = c ** sym.c_power``.

    Parameters
    ----------
    sym : DispersionSymbol
        A smoothing symbol.  An unbounded (differentiating) symbol is
        accepted too: it is inverted and solved at speed ``1/c``, which has
        the same root because ``m(z) = c`` iff ``1/m(z) = 1/c``.
    c : float
        Wave speed (before raising to ``c_power``).

    Returns
    -------
    DecayRateResult

    Raises
    ------
    NotSupercritical
        If ``c_eff <= g(0+)``, so that the equation has no positive root.
    BracketError
        If ``g`` stays below ``c_eff`` all the way to the strip edge.
    """
    c = float(c)
    if not sym.is_bounded:
        if not c > 0:
            raise NotSupercritical(f"speed must be positive, got {c:g}")
        return solve_delta(invert(sym), 1.0 / c)

    c_eff = sym.c_eff(c)
    g = sym.eval_imag
    g0 = g(0.0)
    if not c_eff > g0:
        raise NotSupercritical(f"{sym.label}: c_eff = {c_eff:.15g} does not exceed g(0+) = {g0:.15g}")

    lo = BRACKET_LO
    if math.isfinite(sym.strip_height):
        hi = sym.strip_height * (1.0 - STRIP_MARGIN)
        if not g(hi) > c_eff:
            raise BracketError(
                f"{sym.label}: g stays below c_eff = {c_eff:.15g} up to y = {hi:.15g}"
            )
    else:
        hi = 1.0
        while not g(hi) > c_eff:
            hi *= 2.0
            if hi > 1e12:
                raise BracketError(f"{sym.label}: no root of g(y) = {c_eff:.15g} below y = 1e12")
    if not g(lo) < c_eff:
        # c_eff is within rounding of g(0); the root sits below the bracket.
        raise NotSupercritical(f"{sym.label}: c_eff = {c_eff:.15g} is indistinguishable from g(0+)")

    iterations = 0
    while hi - lo > BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) < c_eff:
            lo = mid
        else:
            hi = mid
        iterations += 1

    delta = 0.5 * (lo + hi)
    res = abs(g(delta) - c_eff)
    # One Newton polish step, kept only if it improves the residual.
    step = 1e-6 * delta
    if delta + step < sym.strip_height:
        slope = _fd_derivative(g, delta, step)
        if slope > 0:
            cand = delta - (g(delta) - c_eff) / slope
            if 0 < cand < sym.strip_height:
                cand_res = abs(g(cand) - c_eff)
                if cand_res < res:
                    delta, res = cand, cand_res
        iterations += 1

    return DecayRateResult(
        delta_c=float(delta),
        iterations=iterations,
        bracket=(float(lo), float(hi)),
        residual=float(res),
        c_eff=c_eff,
        symbol=sym.label,
    )
