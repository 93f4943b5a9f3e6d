"""Kernel synthesis ``H_c = F^{-1}(m / (c_eff - m))`` and its asymptotic descriptors.

Fourier convention
------------------
Unitary: ``F f(xi) = (2 pi)^{-1/2} int f(x) e^{-i x xi} dx``.  On a grid with
``n`` nodes, spacing ``h`` and wavenumber spacing ``dxi = pi / X``, the inverse
transform at node offset ``x = j h`` is approximated by

    H(j h) ~ (2 pi)^{-1/2} sum_k f(xi_k) e^{i j h xi_k} dxi
           = n * dxi / sqrt(2 pi) * ifft(f)[j]

because numpy's ``ifft`` already divides by ``n``.  With this scaling the
trapezoid sum ``h * sum_j H_j`` equals ``sqrt(2 pi) f(0)`` exactly, which is
the discrete form of the zero-frequency identity.

Spectral taper
--------------
The multiplier ``m / (c_eff - m)`` is not smooth at the Nyquist edge of the
periodic box, and plain truncation leaves an alternating O(1e-7) error at
every node.  That swamps the exponentially small tail long before the wrap
zone.  A high-order exponential filter ``exp(-36 (|xi|/xi_N)^32)`` removes the
edge without touching the resolved band; its only cost is a smearing of the
integrable singularity over the first few nodes around the origin, which the
fits below stay clear of.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decay_rate import solve_delta
from .errors import AdmissibilityError, DegenerateError, FitError, NonlocalDecayError
from .symbols import admissible

SQRT_2PI = math.sqrt(2.0 * math.pi)
EPS = np.finfo(float).eps
TAPER_STRENGTH = 36.0
TAPER_ORDER = 32
FLOOR_FACTOR = 100.0
MIN_FIT_NODES = 8
ORIGIN_CLEARANCE = 10  # grid nodes skipped next to the origin by default
TAIL_START_FLOOR = 10.0


def spectral_taper(grid, order=TAPER_ORDER, strength=TAPER_STRENGTH):
    return np.exp(-strength * (np.abs(grid.xi) / grid.xi_nyquist) ** order)


@dataclass
class KernelSamples:
    """Samples of ``H_c`` on a grid, in physical order (origin at ``n // 2``)."""

    grid: object
    values: np.ndarray
    symbol: object
    speed: float
    c_eff: float
    delta_c: float | None = None
    wrap_bound: float | None = None
    imag_residue: float = 0.0
    tapered: bool = True

    @property
    def x(self):
        return self.grid.x

    @property
    def noise_floor(self):
        """Level below which samples are indistinguishable from round-off.

        The larger of ``100 eps max|H|`` and the largest value on the outer
        tenth of the box, where no resolved signal is left once the wrap
        bound is small.
        """
        vals = np.abs(self.values)
        outer = np.abs(self.x) >= 0.9 * self.grid.half_length
        return float(max(FLOOR_FACTOR * EPS * vals.max(), vals[outer].max()))

    def trapezoid_integral(self):
        return float(self.grid.h * np.sum(self.values))

    def zero_frequency_value(self):
        m0 = self.symbol.eval_real(0.0)
        return SQRT_2PI * m0 / (self.c_eff - m0)

    def max_asymmetry(self):
        """max_j |H(x_j) - H(-x_j)| over mirrored node pairs."""
        v = self.values
        return float(np.max(np.abs(v - v[self.grid.reflection_indices()])))

    def to_csv(self, path):
        data = np.column_stack([self.x, self.values])
        np.savetxt(path, data, delimiter=",", header="x,H_c", comments="", fmt="%.16e")


def compute_kernel(sym, c, grid, taper=True):
    """Sample the kernel ``F^{-1}(m / (c_eff - m))`` on ``grid``.

    Parameters
    ----------
    sym : DispersionSymbol
    c : float
        Speed; the denominator uses ``c ** sym.c_power``.
    grid : Grid
    taper : bool
        Apply the high-order spectral filter (see module notes).

    Raises
    ------
    AdmissibilityError
        If ``c_eff - m`` is not sign-definite on the real line.
    """
    adm = admissible(sym, c)
    if not adm:
        raise AdmissibilityError(f"{sym.label} at c = {c:g}: {adm.reason}")
    c_eff = adm.c_eff
    m = sym.eval_real(grid.xi)
    mult = m / (c_eff - m)
    if taper:
        mult = mult * spectral_taper(grid)
    raw = np.fft.fftshift(np.fft.ifft(mult)) * (grid.n_points * grid.dxi / SQRT_2PI)
    scale = float(np.max(np.abs(raw.real))) or 1.0
    imag_residue = float(np.max(np.abs(raw.imag))) / scale

    try:
        delta_c = solve_delta(sym, c).delta_c
        wrap = math.exp(-delta_c * grid.half_length)
    except NonlocalDecayError:
        delta_c, wrap = None, None
    return KernelSamples(
        grid=grid,
        values=np.ascontiguousarray(raw.real),
        symbol=sym,
        speed=float(c),
        c_eff=c_eff,
        delta_c=delta_c,
        wrap_bound=wrap,
        imag_residue=imag_residue,
        tapered=taper,
    )


# ---------------------------------------------------------------------------
# Fits
# ---------------------------------------------------------------------------


def _linfit(t, y):
    """Least-squares line ``y = a + b t``; returns (a, b, r_squared, max_dev)."""
    A = np.column_stack([np.ones_like(t), t])
    (a, b), *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = a + b * t
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(a), float(b), r2, float(np.max(np.abs(y - pred)))


def _window_nodes(k, lo, hi):
    x = k.x
    sel = (x >= lo) & (x <= hi)
    return x[sel], k.values[sel]


@dataclass(frozen=True)
class NearOriginFit:
    model: str  # "power" or "log"
    exponent: float  # slope of ln|H| against ln x
    log_slope: float  # slope of ln|H| against ln|ln x|
    r2_power: float
    r2_log: float
    window: tuple
    n_nodes: int
    expected_exponent: float

    def to_dict(self):
        return {
            "model": self.model,
            "exponent": self.exponent,
            "log_slope": self.log_slope,
            "r2_power": self.r2_power,
            "r2_log": self.r2_log,
            "window": list(self.window),
            "n_nodes": self.n_nodes,
            "expected_exponent": self.expected_exponent,
        }


def default_origin_window(grid):
    return (ORIGIN_CLEARANCE * grid.h, 0.2)


def near_origin_exponent(k, window=None):
    """Compare a power law and a log law for ``|H|`` near the origin.

    The power model regresses ``ln|H|`` on ``ln x`` and estimates ``-1 - m0``;
    the log model regresses ``ln|H|`` on ``ln|ln x|``.  The model with the
    larger r-squared is reported.

    Notes
    -----
    For ``-1 < m0 < 0`` the kernel is ``a x^{-1-m0}`` plus a logarithmic and
    a constant correction, so the fitted exponent only approaches
    ``-1 - m0`` on windows that are small compared with ``(a/b)^{1/(1+m0)}``.
    """
    lo, hi = window if window is not None else default_origin_window(k.grid)
    if not (0 < lo < hi <= 0.5):
        raise FitError(f"origin window must satisfy 0 < x_lo < x_hi <= 0.5, got ({lo:g}, {hi:g})")
    x, v = _window_nodes(k, lo, hi)
    if x.size < MIN_FIT_NODES:
        raise FitError(f"origin window ({lo:g}, {hi:g}) holds {x.size} nodes, need {MIN_FIT_NODES}")
    if np.any(v == 0):
        raise FitError("kernel vanishes inside the origin window")
    y = np.log(np.abs(v))
    _, p_slope, r2_p, _ = _linfit(np.log(x), y)
    _, l_slope, r2_l, _ = _linfit(np.log(np.abs(np.log(x))), y)
    return NearOriginFit(
        model="power" if r2_p >= r2_l else "log",
        exponent=p_slope,
        log_slope=l_slope,
        r2_power=r2_p,
        r2_log=r2_l,
        window=(float(lo), float(hi)),
        n_nodes=int(x.size),
        expected_exponent=-1.0 - k.symbol.m0,
    )


@dataclass(frozen=True)
class TailFit:
    delta_hat: float
    prefactor_hat: float
    residual: float
    window: tuple
    noise_floor: float
    n_nodes: int
    core_cleared: bool

    def to_dict(self):
        return {
            "delta_hat": self.delta_hat,
            "prefactor_hat": self.prefactor_hat,
            "residual": self.residual,
            "window": list(self.window),
            "noise_floor": self.noise_floor,
            "n_nodes": self.n_nodes,
            "core_cleared": self.core_cleared,
        }


def default_tail_window(k):
    """``(max(10, 5/delta_c), 0.5 X)``, with the right end pulled in to the
    last node whose magnitude is still above the noise floor."""
    X = k.grid.half_length
    if k.delta_c is None:
        raise FitError("no decay rate available for this kernel")
    lo = max(TAIL_START_FLOOR, 5.0 / k.delta_c)
    hi = 0.5 * X
    floor = k.noise_floor
    x = k.x
    above = (x > 0) & (np.abs(k.values) > floor)
    # first node beyond lo that drops to the floor ends the usable range
    beyond = (x >= lo) & ~above
    if np.any(beyond & (x <= hi)):
        hi = float(x[beyond][0] - k.grid.h)
    return (lo, hi)


def tail_decay_fit(k, window=None):
    """Fit ``ln|H| = ln|C| - delta x`` on a tail window.

    Parameters
    ----------
    k : KernelSamples
    window : (float, float), optional
        Fit range in x.  Defaults to :func:`default_tail_window`.

    Returns
    -------
    TailFit
        ``prefactor_hat`` carries the sign of the kernel on the window;
        ``residual`` is the largest deviation of the log-linear fit.

    Raises
    ------
    FitError
        If the window reaches past ``0.8 X``, holds too few nodes, changes
        sign, or dips to the noise floor.
    """
    X = k.grid.half_length
    lo, hi = window if window is not None else default_tail_window(k)
    floor = k.noise_floor
    if not (0 < lo < hi):
        raise FitError(f"tail window must satisfy 0 < x_lo < x_hi, got ({lo:g}, {hi:g})", floor=floor)
    if hi > 0.8 * X:
        raise FitError(f"tail window end {hi:g} exceeds 0.8 X = {0.8 * X:g}", floor=floor)
    x, v = _window_nodes(k, lo, hi)
    if x.size < MIN_FIT_NODES:
        raise FitError(f"tail window ({lo:g}, {hi:g}) holds {x.size} nodes", floor=floor)
    if np.min(np.abs(v)) <= floor:
        raise FitError(f"tail window ({lo:g}, {hi:g}) touches the noise floor", floor=floor)
    sign = np.sign(v)
    if not np.all(sign == sign[0]):
        raise FitError(f"kernel changes sign inside the tail window ({lo:g}, {hi:g})", floor=floor)
    a, b, _, dev = _linfit(x, np.log(np.abs(v)))
    core = 5.0 / k.delta_c if k.delta_c else math.inf
    return TailFit(
        delta_hat=-b,
        prefactor_hat=float(sign[0]) * math.exp(a),
        residual=dev,
        window=(float(lo), float(hi)),
        noise_floor=floor,
        n_nodes=int(x.size),
        core_cleared=bool(lo >= core),
    )


# ---------------------------------------------------------------------------
# Residue prefactor
# ---------------------------------------------------------------------------


def imag_derivative(sym, y, rel_step=1e-6):
    """g'(y) by a centered difference with one Richardson extrapolation."""
    s = rel_step * y
    if y + s >= sym.strip_height:
        s = 0.5 * (sym.strip_height - y)
    g = sym.eval_imag
    d1 = (g(y + s) - g(y - s)) / (2.0 * s)
    d2 = (g(y + s / 2) - g(y - s / 2)) / s
    return (4.0 * d2 - d1) / 3.0


def analytic_prefactor(sym, c, delta_c=None):
    """Residue prefactor ``C = sqrt(2 pi) c_eff / g'(delta_c)``.

    ``C`` is the limit of ``e^{delta_c |x|} H_c(x)``.  For an unbounded
    (differentiating) symbol ``g`` decreases through the root and ``C``
    comes out negative, matching the sign of that kernel's tail.

    Raises
    ------
    DegenerateError
        If ``|g'(delta_c)| < 1e-8``; the tail would then carry a polynomial
        factor that this library does not model.
    """
    c_eff = sym.c_eff(c)
    if delta_c is None:
        delta_c = solve_delta(sym, c).delta_c
    slope = imag_derivative(sym, delta_c)
    if abs(slope) < 1e-8:
        raise DegenerateError(f"g'({delta_c:.12g}) = {slope:.3e} is degenerate")
    return SQRT_2PI * c_eff / slope


def whitham_prefactor(delta):
    """Closed form for the Whitham symbol, ``c = sqrt(tan(delta)/delta)``."""
    t = math.tan(delta)
    return SQRT_2PI * 2.0 * t * delta / (delta / math.cos(delta) ** 2 - t)


def bidirectional_prefactor(delta):
    """Closed form for ``m = tanh(xi)/xi``, ``c_eff = tan(delta)/delta``."""
    t = math.tan(delta)
    return SQRT_2PI * t * delta / (delta / math.cos(delta) ** 2 - t)


def closed_form_prefactor(sym, delta):
    if sym.name == "whitham":
        return whitham_prefactor(delta)
    if sym.name == "bidirectional-whitham":
        return bidirectional_prefactor(delta)
    return None


@dataclass(frozen=True)
class KernelDecayModel:
    """``H_c(x) ~ C e^{-delta_c |x|}`` with polynomial order 0."""

    delta_c: float
    prefactor: float
    poly_order: int = 0
    fit_window: tuple = ()
    fit_residual: float = math.nan
    delta_hat: float = math.nan
    prefactor_hat: float = math.nan
    notes: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {
            "delta_c": self.delta_c,
            "prefactor": self.prefactor,
            "poly_order": self.poly_order,
            "fit_window": list(self.fit_window),
            "fit_residual": self.fit_residual,
            "delta_hat": self.delta_hat,
            "prefactor_hat": self.prefactor_hat,
            "notes": list(self.notes),
        }


def decay_model(k, window=None):
    """Analytic decay model of ``k`` together with its numerical tail fit."""
    delta = solve_delta(k.symbol, k.speed).delta_c
    C = analytic_prefactor(k.symbol, k.speed, delta)
    fit = tail_decay_fit(k, window)
    notes = []
    if not fit.core_cleared:
        notes.append("tail window starts before 5/delta_c; the constant term may not dominate yet")
    if k.wrap_bound is not None and k.wrap_bound >= 1e-10:
        notes.append(f"wrap bound exp(-delta_c X) = {k.wrap_bound:.2e} exceeds 1e-10")
    return KernelDecayModel(
        delta_c=delta,
        prefactor=C,
        poly_order=0,
        fit_window=fit.window,
        fit_residual=fit.residual,
        delta_hat=fit.delta_hat,
        prefactor_hat=fit.prefactor_hat,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# Integrability and shape checks
# ---------------------------------------------------------------------------


def _signal_mask(k):
    """Nodes away from the wrap zone whose magnitude clears the noise floor."""
    x = k.x
    return (np.abs(x) <= 0.8 * k.grid.half_length) & (np.abs(k.values) > k.noise_floor)


def weighted_integral(k, alpha, p=1.0, x_range=None):
    """``(h sum |x|^alpha |H|^p)^(1/p)``; ``p = inf`` gives the weighted sup.

    The origin node is always excluded.  ``x_range = (lo, hi)`` restricts
    the nodes to ``lo <= |x| <= hi``, which is how the behaviour near the
    origin is isolated from the bulk of the kernel.
    """
    x = k.x
    mask = _signal_mask(k) & (x != 0)
    if x_range is not None:
        mask &= (np.abs(x) >= x_range[0]) & (np.abs(x) <= x_range[1])
    w = np.abs(x[mask]) ** alpha * np.abs(k.values[mask])
    if math.isinf(p):
        return float(w.max())
    return float((k.grid.h * np.sum(w**p)) ** (1.0 / p))


def exp_weighted_integral(k, delta):
    """``h sum e^{delta |x|} |H|`` over nodes above the noise floor.

    Restricting to resolved nodes keeps round-off from being amplified by the
    exponential weight.
    """
    mask = _signal_mask(k)
    return float(k.grid.h * np.sum(np.exp(delta * np.abs(k.x[mask])) * np.abs(k.values[mask])))


MONOTONE_SKIP = 2 * ORIGIN_CLEARANCE


def positive_monotone(k, skip=MONOTONE_SKIP):
    """True if H > 0 and strictly decreasing on (0, X/2) above the floor.

    ``skip`` nodes next to the origin are ignored.  With the spectral taper
    the singular peak rings over roughly the first fifteen nodes, so the
    default skip is twenty; an untapered kernel fails much further out
    because of the truncation error described in the module notes.
    """
    x = k.x
    i0 = k.grid.origin_index
    mask = (x > 0) & (x < 0.5 * k.grid.half_length) & (np.abs(k.values) > k.noise_floor)
    mask[: i0 + 1 + skip] = False
    v = k.values[mask]
    return bool(np.all(v > 0) and np.all(np.diff(v) < 0))
