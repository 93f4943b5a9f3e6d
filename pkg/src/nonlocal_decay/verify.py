"""Numerical checks of decay, weighted norms and symmetry for computed waves."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decay_rate import solve_delta
from .errors import FitError

EPS = np.finfo(float).eps
HYPOTHESIS_SAMPLES = 10_000
CREST_THRESHOLD = 1e-6


def _orientation(samples):
    """+1 for elevation waves, -1 for depression waves."""
    j = int(np.argmax(np.abs(samples)))
    return 1.0 if samples[j] >= 0 else -1.0


def _interp_derivatives(coeffs, grid, lam):
    """First and second derivative of the trigonometric interpolant at lam."""
    phase = np.exp(1j * grid.xi * (lam - grid.x[0]))
    n = grid.n_points
    d1 = np.sum(1j * grid.xi * coeffs * phase).real / n
    d2 = np.sum(-(grid.xi**2) * coeffs * phase).real / n
    return d1, d2


def crest_location(wave, polish=True):
    """Crest position with sub-grid refinement.

    Takes the leftmost discrete maximum of the (oriented) profile and moves
    it to the vertex of the parabola through it and its two neighbours.
    With ``polish`` a few Newton steps on the derivative of the
    trigonometric interpolant follow, which removes the O(h^3) error of the
    parabola; the result is kept only if it stays within one node.
    """
    u = _orientation(wave.samples) * wave.samples
    n = u.size
    j = int(np.argmax(u))  # numpy returns the first (leftmost) maximum
    h = wave.grid.h
    um, u0, up = u[(j - 1) % n], u[j], u[(j + 1) % n]
    curv = um - 2.0 * u0 + up
    offset = 0.5 * (um - up) / curv if curv < 0 else 0.0
    lam = float(wave.grid.x[j] + offset * h)
    if not polish or curv >= 0:
        return lam
    coeffs = np.fft.fft(u)
    coeffs[n // 2] = 0.0
    cand = lam
    for _ in range(4):
        d1, d2 = _interp_derivatives(coeffs, wave.grid, cand)
        if d2 >= 0:
            return lam
        cand -= d1 / d2
    return float(cand) if abs(cand - wave.grid.x[j]) <= h else lam


def spectral_tail_ratio(values, band=0.8):
    """max |u_hat| beyond ``band`` of the Nyquist wavenumber over max |u_hat|.

    Near round-off for a resolved analytic profile; order one for a
    grid-scale feature.
    """
    coeffs = np.abs(np.fft.fft(values))
    n = values.size
    k = np.abs(np.fft.fftfreq(n)) * 2.0
    top = coeffs.max()
    return float(coeffs[k > band].max() / top) if top > 0 else 0.0


def solution_noise_floor(wave):
    u = np.abs(wave.samples)
    outer = np.abs(wave.grid.x) >= 0.9 * wave.grid.half_length
    return float(max(100.0 * EPS * u.max(), u[outer].max()))


# ---------------------------------------------------------------------------
# Decay
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayVerdict:
    delta_hat: float
    delta_c_reference: float
    relative_error: float
    plateau_value: float
    window: tuple
    crest: float
    noise_floor: float
    n_nodes: int

    def to_dict(self):
        return {
            "delta_hat": self.delta_hat,
            "delta_c_reference": self.delta_c_reference,
            "relative_error": self.relative_error,
            "plateau_value": self.plateau_value,
            "window": list(self.window),
            "crest": self.crest,
            "noise_floor": self.noise_floor,
            "n_nodes": self.n_nodes,
        }


def default_decay_window(wave, delta_c, crest=None):
    """Distances from the crest ``(max(10, 5/delta_c), 0.5 X)``, with the far
    end pulled in to stay above the noise floor."""
    if crest is None:
        crest = crest_location(wave)
    X = wave.grid.half_length
    lo = max(10.0, 5.0 / delta_c)
    hi = min(0.5 * X, 0.8 * X - abs(crest))
    floor = solution_noise_floor(wave)
    s = np.abs(wave.grid.x - crest)
    low = (s >= lo) & (s <= hi) & (np.abs(wave.samples) <= floor)
    if np.any(low):
        hi = float(s[low].min() - wave.grid.h)
    return (lo, hi)


def fit_solution_decay(wave, delta_c_reference=None, window=None):
    """Regress ``ln|u|`` on the distance to the crest over a tail window.

    Both flanks of the wave enter the fit.  ``plateau_value`` is the median
    of ``e^{delta_c |x - crest|} |u|`` over the window; for a simple pole
    this tends to a finite nonzero constant.

    Parameters
    ----------
    wave : SolitaryWave
    delta_c_reference : float, optional
        Defaults to ``solve_delta(wave.symbol, wave.speed)``.
    window : (float, float), optional
        Range of distances from the crest.

    Raises
    ------
    FitError
        If the window leaves ``(5/delta_c, 0.8 X)``, holds too few nodes or
        reaches the noise floor.
    """
    if delta_c_reference is None:
        delta_c_reference = solve_delta(wave.symbol, wave.speed).delta_c
    crest = crest_location(wave)
    floor = solution_noise_floor(wave)
    lo, hi = window if window is not None else default_decay_window(wave, delta_c_reference, crest)
    X = wave.grid.half_length
    if lo < 5.0 / delta_c_reference:
        raise FitError(f"decay window start {lo:g} lies inside the core 5/delta_c = {5 / delta_c_reference:g}")
    if hi + abs(crest) > 0.8 * X:
        raise FitError(f"decay window end {hi:g} reaches past 0.8 X from the crest at {crest:g}")
    s = np.abs(wave.grid.x - crest)
    sel = (s >= lo) & (s <= hi)
    if sel.sum() < 8:
        raise FitError(f"decay window ({lo:g}, {hi:g}) holds {int(sel.sum())} nodes", floor=floor)
    u = np.abs(wave.samples[sel])
    if u.min() <= floor:
        raise FitError(f"decay window ({lo:g}, {hi:g}) touches the noise floor", floor=floor)
    slope, _ = np.polyfit(s[sel], np.log(u), 1)
    delta_hat = -float(slope)
    plateau = float(np.median(np.exp(delta_c_reference * s[sel]) * u))
    return DecayVerdict(
        delta_hat=delta_hat,
        delta_c_reference=float(delta_c_reference),
        relative_error=abs(delta_hat - delta_c_reference) / delta_c_reference,
        plateau_value=plateau,
        window=(float(lo), float(hi)),
        crest=crest,
        noise_floor=floor,
        n_nodes=int(sel.sum()),
    )


def weighted_sup_norm(wave, l):
    """``max_j |x_j - crest|^l |u_j|``."""
    s = np.abs(wave.grid.x - crest_location(wave))
    return float(np.max(s**l * np.abs(wave.samples)))


def exp_weighted_l1(wave, delta):
    """``h sum e^{delta |x - crest|} |u|`` over nodes above the noise floor.

    Round-off in the far field would otherwise be amplified by the weight;
    dropping those nodes keeps the sum a property of the resolved wave.
    """
    s = np.abs(wave.grid.x - crest_location(wave))
    u = np.abs(wave.samples)
    mask = (u > solution_noise_floor(wave)) & (s <= 0.8 * wave.grid.half_length)
    return float(wave.grid.h * np.sum(np.exp(delta * s[mask]) * u[mask]))


# ---------------------------------------------------------------------------
# Symmetry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetryVerdict:
    crest_location: float
    sup_asymmetry: float
    amplitude: float
    crest_count: int
    hypotheses_ok: dict
    lipschitz_constant: float
    c_eff: float
    range: tuple

    @property
    def all_hypotheses(self):
        return all(self.hypotheses_ok.values())

    def to_dict(self):
        return {
            "crest_location": self.crest_location,
            "sup_asymmetry": self.sup_asymmetry,
            "amplitude": self.amplitude,
            "crest_count": self.crest_count,
            "hypotheses_ok": dict(self.hypotheses_ok),
            "lipschitz_constant": self.lipschitz_constant,
            "c_eff": self.c_eff,
            "range": list(self.range),
        }


def reflect_about(values, grid, center):
    """Spectral interpolant of ``x -> u(2 center - x)`` on the grid.

    The grid reflection ``x -> -x`` is exact on nodes; the remaining shift by
    ``2 center`` is applied as a phase.  The Nyquist mode is dropped because
    a fractional shift of it is not real.
    """
    flipped = values[grid.reflection_indices()]
    coeffs = np.fft.fft(flipped) * np.exp(-1j * grid.xi * 2.0 * center)
    coeffs[grid.n_points // 2] = 0.0
    return np.fft.ifft(coeffs).real


def _drop_nyquist(values, grid):
    coeffs = np.fft.fft(values)
    coeffs[grid.n_points // 2] = 0.0
    return np.fft.ifft(coeffs).real


def count_crests(values, threshold=CREST_THRESHOLD):
    """Local maxima (strict on the left) above ``threshold * max`` of an
    oriented profile; a flat two-node top counts once."""
    u = _orientation(values) * values
    level = threshold * u.max()
    left = np.roll(u, 1)
    right = np.roll(u, -1)
    peaks = (u > left) & (u >= right) & (u > level)
    return int(peaks.sum())


def check_hypotheses(nonlinearity, c_eff, lo, hi, samples=HYPOTHESIS_SAMPLES):
    """Sample G on [lo, hi]: nonnegative, nondecreasing, Lipschitz below c_eff.

    Returns the flag dictionary and the sampled Lipschitz constant.
    """
    v = np.linspace(lo, hi, samples)
    G = nonlinearity(v)
    scale = max(float(np.max(np.abs(G))), EPS)
    dG = np.diff(G)
    slopes = np.abs(dG / np.diff(v)) if hi > lo else np.zeros(1)
    lip = float(np.max(slopes))
    flags = {
        "G_nonnegative": bool(np.all(G >= -1e-12 * scale)),
        "G_increasing": bool(np.all(dG >= -1e-12 * scale)),
        "lipschitz_bound": bool(lip < c_eff),
    }
    return flags, lip


def check_symmetry(wave, tol=1e-6):
    """Crest, reflection asymmetry, crest count and the structural hypotheses on G.

    ``tol`` is not used to decide anything here; it is recorded so that the
    verdict can be judged by :func:`verify_wave`.  Hypotheses are evaluated
    on the actual range ``[min u, max u]`` of the wave.
    """
    grid = wave.grid
    u = wave.samples
    crest = crest_location(wave)
    mirrored = reflect_about(u, grid, crest)
    asym = float(np.max(np.abs(_drop_nyquist(u, grid) - mirrored)))
    flags, lip = check_hypotheses(wave.nonlinearity, wave.c_eff, float(u.min()), float(u.max()))
    return SymmetryVerdict(
        crest_location=crest,
        sup_asymmetry=asym,
        amplitude=float(np.max(np.abs(u))),
        crest_count=count_crests(u),
        hypotheses_ok=flags,
        lipschitz_constant=lip,
        c_eff=wave.c_eff,
        range=(float(u.min()), float(u.max())),
    )


# ---------------------------------------------------------------------------
# Aggregate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyTolerances:
    decay_rel: float = 0.05
    asymmetry_rel: float = 1e-6
    residual: float = 1e-10
    spectral_tail: float = 1e-8


@dataclass
class VerificationReport:
    wave: dict
    decay: DecayVerdict | None
    symmetry: SymmetryVerdict
    weighted_norms: dict
    checks: dict
    tolerances: VerifyTolerances
    errors: list = field(default_factory=list)

    @property
    def passed(self):
        return all(self.checks.values())

    def to_dict(self):
        return {
            "wave": self.wave,
            "decay": self.decay.to_dict() if self.decay is not None else None,
            "symmetry": self.symmetry.to_dict(),
            "weighted_norms": self.weighted_norms,
            "checks": dict(self.checks),
            "passed": self.passed,
            "tolerances": {
                "decay_rel": self.tolerances.decay_rel,
                "asymmetry_rel": self.tolerances.asymmetry_rel,
                "residual": self.tolerances.residual,
                "spectral_tail": self.tolerances.spectral_tail,
            },
            "errors": list(self.errors),
        }


def verify_wave(wave, tolerances=None, decay_window=None, norm_powers=(0, 1, 2, 4, 6, 8)):
    """Run every check on a wave and collect pass/fail flags."""
    tol = tolerances or VerifyTolerances()
    delta_c = solve_delta(wave.symbol, wave.speed).delta_c
    errors = []
    try:
        decay = fit_solution_decay(wave, delta_c, decay_window)
    except FitError as exc:
        decay = None
        errors.append(f"decay fit: {exc}")
    sym = check_symmetry(wave, tol.asymmetry_rel)
    norms = {f"l={l:g}": weighted_sup_norm(wave, l) for l in norm_powers}
    norms["exp_l1_0.9"] = exp_weighted_l1(wave, 0.9 * delta_c)
    tail = spectral_tail_ratio(wave.samples)
    checks = {
        "converged": bool(wave.converged and wave.residual_sup <= tol.residual),
        "resolved": bool(tail <= tol.spectral_tail),
        "decay_rate": bool(decay is not None and decay.relative_error <= tol.decay_rel),
        "plateau_positive": bool(decay is not None and math.isfinite(decay.plateau_value) and decay.plateau_value > 0),
        "symmetric": bool(sym.sup_asymmetry <= tol.asymmetry_rel * sym.amplitude),
        "single_crest": sym.crest_count == 1,
        "hypotheses": sym.all_hypotheses,
    }
    info = wave.diagnostics()
    info["spectral_tail"] = tail
    return VerificationReport(info, decay, sym, norms, checks, tol, errors)
