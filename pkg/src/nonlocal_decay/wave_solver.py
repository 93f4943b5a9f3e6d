"""Spectral fixed-point solvers for ``c_eff u - L(u) - G(u) = 0``.

Both solvers work with ``c_eff - m(xi)`` directly in Fourier space, so smoothing
and differentiating symbols are handled the same way and no kernel is ever
sampled pointwise.  Multipliers are applied with ``np.fft`` on arrays stored
in physical order; a multiplier commutes with translations, so the position
of the origin inside the array does not matter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decay_rate import solve_delta
from .errors import (
    AdmissibilityError,
    ConfigError,
    Divergence,
    NonConvergence,
    ResonanceError,
    TrivialCollapse,
)
from .symbols import admissible

COLLAPSE_LEVEL = 1e-12
DIVERGENCE_FACTOR = 1e3
S_TOL = 1e-10


# ---------------------------------------------------------------------------
# Nonlinearities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Nonlinearity:
    """Local nonlinearity ``G(u)``.

    ``kind`` is one of ``quadratic`` (``coef u^2``), ``power`` (``coef |u|^r``)
    or ``wb-cubic`` (``u^2/2 (3c - u)`` with the speed ``c`` frozen in).
    ``degree`` is the small-amplitude order ``r`` with ``|G(u)| <~ |u|^r``.
    """

    kind: str
    degree: float
    coef: float = 1.0
    speed: float | None = None

    @property
    def name(self):
        if self.kind == "power":
            return f"power-{self.degree:g}"
        return self.kind

    @property
    def homogeneous_degree(self):
        """Degree p with G(s u) = s^p G(u) for s > 0, or None."""
        return None if self.kind == "wb-cubic" else self.degree

    def __call__(self, u):
        if self.kind == "quadratic":
            return self.coef * u * u
        if self.kind == "power":
            return self.coef * np.abs(u) ** self.degree
        c = self.speed
        return 0.5 * u * u * (3.0 * c - u)

    def derivative(self, u):
        if self.kind == "quadratic":
            return 2.0 * self.coef * u
        if self.kind == "power":
            r = self.degree
            return r * self.coef * np.abs(u) ** (r - 1.0) * np.sign(u)
        c = self.speed
        return 3.0 * c * u - 1.5 * u * u

    def quadratic_truncation(self):
        """The ``u^2`` part of G; for a homogeneous G this is G itself."""
        if self.kind == "wb-cubic":
            return quadratic(1.5 * self.speed)
        return self

    def initial_amplitude(self, target):
        """Amplitude A with G(A)/A = target (the KdV scaling of the guess)."""
        if self.kind == "wb-cubic":
            return target / (1.5 * self.speed)
        if self.kind == "quadratic":
            return target / self.coef
        if target <= 0:
            raise ConfigError("power nonlinearity needs a positive amplitude target", key="nonlinearity")
        return (target / self.coef) ** (1.0 / (self.degree - 1.0))

    def small_amplitude_ratio(self, half_width=0.01, samples=2001):
        """max |G(u)| / |u|^r on ``[-half_width, half_width]`` without 0."""
        u = np.linspace(-half_width, half_width, samples)
        u = u[u != 0]
        return float(np.max(np.abs(self(u)) / np.abs(u) ** self.degree))

    def to_dict(self):
        out = {"name": self.name, "degree": self.degree, "coef": self.coef}
        if self.speed is not None:
            out["speed"] = self.speed
        return out


def quadratic(coef=1.0):
    return Nonlinearity("quadratic", 2.0, float(coef))


def power(r, coef=1.0):
    r = float(r)
    if not r > 1:
        raise ConfigError(f"power nonlinearity needs r > 1, got {r:g}", key="nonlinearity")
    return Nonlinearity("power", r, float(coef))


def wb_cubic(c):
    """Whitham-Boussinesq nonlinearity ``u^2/2 (3c - u)``."""
    return Nonlinearity("wb-cubic", 2.0, 1.0, float(c))


def make_nonlinearity(name, c=None):
    """Parse ``quadratic``, ``wb-cubic`` or ``power-<r>``."""
    if name == "quadratic":
        return quadratic()
    if name == "wb-cubic":
        if c is None:
            raise ConfigError("wb-cubic needs the wave speed", key="nonlinearity")
        return wb_cubic(c)
    if name.startswith("power-"):
        try:
            r = float(name[len("power-"):])
        except ValueError:
            raise ConfigError(f"cannot read the degree in {name!r}", key="nonlinearity") from None
        return power(r)
    raise ConfigError(f"unknown nonlinearity {name!r}", key="nonlinearity")


# ---------------------------------------------------------------------------
# Multipliers
# ---------------------------------------------------------------------------

MULTIPLIER_FORMS = ("m", "inverse", "kernel")


def _denominator(sym, c, grid):
    c_eff = sym.c_eff(c)
    m = sym.eval_real(grid.xi)
    den = c_eff - m
    scale = np.max(np.abs(den))
    if np.any(np.abs(den) <= 1e-14 * scale):
        k = int(np.argmin(np.abs(den)))
        raise ResonanceError(f"c_eff - m(xi) vanishes at xi = {grid.xi[k]:.6g}")
    return m, den


def apply_multiplier(sym, c, form, values, grid):
    """Apply ``m``, ``1/(c_eff - m)`` or ``m/(c_eff - m)`` to a sampled field.

    Parameters
    ----------
    sym : DispersionSymbol
    c : float
        Speed (ignored for ``form="m"``).
    form : {"m", "inverse", "kernel"}
    values : ndarray
        Samples on ``grid``.
    grid : Grid

    Raises
    ------
    ResonanceError
        If ``c_eff - m`` vanishes at a grid wavenumber.
    """
    if form not in MULTIPLIER_FORMS:
        raise ConfigError(f"multiplier form must be one of {MULTIPLIER_FORMS}, got {form!r}")
    if form == "m":
        mult = sym.eval_real(grid.xi)
    else:
        m, den = _denominator(sym, c, grid)
        mult = 1.0 / den if form == "inverse" else m / den
    out = np.fft.ifft(mult * np.fft.fft(values))
    return out.real


# ---------------------------------------------------------------------------
# Waves
# ---------------------------------------------------------------------------


@dataclass
class SolitaryWave:
    grid: object
    samples: np.ndarray
    speed: float
    symbol: object
    nonlinearity: Nonlinearity
    residual_sup: float
    iterations: int
    converged: bool
    method: str = ""
    residual_history: list = field(default_factory=list)
    s_history: list = field(default_factory=list)

    @property
    def x(self):
        return self.grid.x

    @property
    def c_eff(self):
        return self.symbol.c_eff(self.speed)

    @property
    def amplitude(self):
        """Signed value of the sample with the largest magnitude."""
        return float(self.samples[np.argmax(np.abs(self.samples))])

    @property
    def crest_inside(self):
        j = int(np.argmax(np.abs(self.samples)))
        return 0 < j < self.grid.n_points - 1

    def translated(self, shift):
        """Copy shifted by a whole number of grid nodes (periodic)."""
        return SolitaryWave(
            self.grid, np.roll(self.samples, int(shift)), self.speed, self.symbol, self.nonlinearity,
            self.residual_sup, self.iterations, self.converged, self.method,
        )

    def diagnostics(self):
        out = {
            "symbol": self.symbol.label,
            "c": self.speed,
            "c_eff": self.c_eff,
            "nonlinearity": self.nonlinearity.to_dict(),
            "method": self.method,
            "converged": self.converged,
            "iterations": self.iterations,
            "residual_sup": self.residual_sup,
            "amplitude": self.amplitude,
            "grid": {"n": self.grid.n_points, "X": self.grid.half_length},
        }
        if self.s_history:
            out["S_history"] = list(self.s_history)
        return out

    def to_csv(self, path):
        data = np.column_stack([self.x, self.samples])
        np.savetxt(path, data, delimiter=",", header="x,u", comments="", fmt="%.16e")


def residual_field(sym, c, nonlinearity, values, grid):
    """``c_eff u - L(u) - G(u)`` evaluated spectrally."""
    c_eff = sym.c_eff(c)
    Lu = apply_multiplier(sym, c, "m", values, grid)
    return c_eff * values - Lu - nonlinearity(values)


def residual(wave):
    """Sup norm of ``c_eff u - L(u) - G(u)`` for a wave."""
    r = residual_field(wave.symbol, wave.speed, wave.nonlinearity, wave.samples, wave.grid)
    return float(np.max(np.abs(r)))


def sech2_guess(sym, c, nonlinearity, grid):
    """``A sech^2(delta_c x / 2)`` with A matched to the KdV limit.

    A solves ``G(A)/A = 3 (c_eff - m(0)) / 2``, which for ``G = u^2`` is the
    exact KdV soliton amplitude; the width uses the exact decay rate so the
    guess already has the right tail.
    """
    c_eff = sym.c_eff(c)
    target = 1.5 * (c_eff - sym.eval_real(0.0))
    A = nonlinearity.initial_amplitude(target)
    delta = solve_delta(sym, c).delta_c
    return A / np.cosh(0.5 * delta * grid.x) ** 2


def _check_admissible(sym, c):
    adm = admissible(sym, c)
    if not adm:
        raise AdmissibilityError(f"{sym.label} at c = {c:g}: {adm.reason}")


def _stabilizer(den, uh, Gh):
    num = float(np.sum(den * np.abs(uh) ** 2))
    dot = float(np.real(np.sum(np.conj(uh) * Gh)))
    if dot == 0 or not math.isfinite(num / dot):
        return math.nan
    return num / dot


def solve_petviashvili(sym, c, nonlinearity, grid, max_iter=2000, tol=1e-10, gamma=None, init=None):
    """Petviashvili iteration for a homogeneous nonlinearity of degree p.

    Iterates ``u_hat <- S^gamma G(u)_hat / (c_eff - m)`` with the
    stabilizing factor ``S = sum (c_eff - m)|u_hat|^2 / Re sum conj(u_hat)
    G(u)_hat`` and ``gamma = p/(p-1)``.  Converged when the residual sup
    norm drops below ``tol`` and ``|S - 1| < 1e-10``.

    Parameters
    ----------
    sym, c : symbol and speed
    nonlinearity : Nonlinearity
        Must be homogeneous.
    grid : Grid
    max_iter : int
    tol : float
    gamma : float, optional
        Defaults to ``p / (p - 1)``.
    init : ndarray, optional
        Initial guess; defaults to :func:`sech2_guess`.

    Raises
    ------
    NonConvergence
        Iteration budget exhausted (carries the history and the last iterate).
    TrivialCollapse
        Iterate fell below 1e-12 in sup norm.
    """
    _check_admissible(sym, c)
    p = nonlinearity.homogeneous_degree
    if p is None:
        raise ConfigError(f"{nonlinearity.name} is not homogeneous; use the damped fixed point", key="solver.method")
    if gamma is None:
        gamma = p / (p - 1.0)
    m, den = _denominator(sym, c, grid)
    c_eff = sym.c_eff(c)
    u = sech2_guess(sym, c, nonlinearity, grid) if init is None else np.array(init, dtype=float)
    if not np.max(np.abs(u)) >= COLLAPSE_LEVEL:
        raise TrivialCollapse("initial guess is zero")

    res_hist, s_hist = [], []
    uh = np.fft.fft(u)
    for it in range(1, max_iter + 1):
        Gh = np.fft.fft(nonlinearity(u))
        S = _stabilizer(den, uh, Gh)
        if not math.isfinite(S) or S <= 0:
            raise TrivialCollapse(f"stabilizing factor degenerated (S = {S}) at iteration {it}", res_hist)
        uh = S**gamma * Gh / den
        u = np.fft.ifft(uh).real
        uh = np.fft.fft(u)
        if np.max(np.abs(u)) < COLLAPSE_LEVEL:
            raise TrivialCollapse(f"iterate collapsed to zero at iteration {it}", res_hist)
        r = float(np.max(np.abs(c_eff * u - np.fft.ifft(m * uh).real - nonlinearity(u))))
        res_hist.append(r)
        s_hist.append(S)
        if r < tol and abs(S - 1.0) < S_TOL:
            return SolitaryWave(grid, u, float(c), sym, nonlinearity, r, it, True, "petviashvili", res_hist, s_hist)
    wave = SolitaryWave(grid, u, float(c), sym, nonlinearity, r, max_iter, False, "petviashvili", res_hist, s_hist)
    raise NonConvergence(
        f"Petviashvili iteration stopped after {max_iter} steps with residual {r:.3e}", res_hist, wave
    )


def solve_damped_fixed_point(
    sym, c, nonlinearity, grid, theta=0.5, max_iter=2000, tol=1e-10, init=None, stabilize=True
):
    """Damped fixed-point iteration for a general (non-homogeneous) G.

    The plain update ``u <- (1 - theta) u + theta F^{-1}[G(u)_hat/(c_eff - m)]``
    has an unstable direction along ``u`` itself: the linearised map
    multiplies it by ``1 + theta (p - 1)`` where ``p`` is the local degree of
    G.  With ``stabilize=True`` the update is rescaled by ``S^gamma_eff``, the
    Petviashvili factor built from the effective degree
    ``p_eff = <G'(u) u, u> / <G(u), u>``, which removes that direction.  At a
    solution ``S = 1`` so fixed points are unchanged.

    Parameters
    ----------
    theta : float
        Damping in (0, 1].
    init : ndarray, optional
        Defaults to the Petviashvili solution for the quadratic truncation
        of G.
    stabilize : bool
        Apply the rescaling above.

    Raises
    ------
    ConfigError
        theta outside (0, 1].
    NonConvergence, Divergence, TrivialCollapse
    """
    if not (0.0 < theta <= 1.0):
        raise ConfigError(f"damping theta must lie in (0, 1], got {theta!r}", key="solver.theta")
    _check_admissible(sym, c)
    m, den = _denominator(sym, c, grid)
    c_eff = sym.c_eff(c)
    if init is None:
        u = solve_petviashvili(sym, c, nonlinearity.quadratic_truncation(), grid, max_iter=max_iter, tol=tol).samples
    else:
        u = np.array(init, dtype=float)
    size0 = float(np.max(np.abs(u)))
    if not size0 >= COLLAPSE_LEVEL:
        raise TrivialCollapse("initial guess is zero")

    res_hist, s_hist = [], []
    for it in range(1, max_iter + 1):
        Gu = nonlinearity(u)
        uh = np.fft.fft(u)
        Gh = np.fft.fft(Gu)
        S = _stabilizer(den, uh, Gh)
        update = Gh / den
        if stabilize:
            p_eff = float(np.sum(nonlinearity.derivative(u) * u * u) / np.sum(Gu * u))
            if not (math.isfinite(S) and S > 0 and p_eff > 1):
                raise TrivialCollapse(f"stabilizer degenerated at iteration {it}", res_hist)
            update = update * S ** (p_eff / (p_eff - 1.0))
        u = (1.0 - theta) * u + theta * np.fft.ifft(update).real
        size = float(np.max(np.abs(u)))
        if not math.isfinite(size) or size > DIVERGENCE_FACTOR * size0:
            raise Divergence(f"iterate grew past {DIVERGENCE_FACTOR:g} x its initial size at iteration {it}", res_hist)
        if size < COLLAPSE_LEVEL:
            raise TrivialCollapse(f"iterate collapsed to zero at iteration {it}", res_hist)
        r = float(np.max(np.abs(residual_field(sym, c, nonlinearity, u, grid))))
        res_hist.append(r)
        s_hist.append(S)
        if r < tol and abs(S - 1.0) < S_TOL:
            return SolitaryWave(grid, u, float(c), sym, nonlinearity, r, it, True, "damped", res_hist, s_hist)
    wave = SolitaryWave(grid, u, float(c), sym, nonlinearity, r, max_iter, False, "damped", res_hist, s_hist)
    raise NonConvergence(f"damped iteration stopped after {max_iter} steps with residual {r:.3e}", res_hist, wave)


def solve(sym, c, nonlinearity, grid, method="auto", **opts):
    """Dispatch to Petviashvili for homogeneous G, damped iteration otherwise."""
    if method == "auto":
        method = "petviashvili" if nonlinearity.homogeneous_degree is not None else "damped"
    if method == "petviashvili":
        return solve_petviashvili(sym, c, nonlinearity, grid, **opts)
    if method == "damped":
        return solve_damped_fixed_point(sym, c, nonlinearity, grid, **opts)
    raise ConfigError(f"unknown solver method {method!r}", key="solver.method")
