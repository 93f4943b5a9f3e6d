import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonlocal_decay import Grid, make_symbol, solve_delta
from nonlocal_decay.errors import FitError
from nonlocal_decay.verify import (
    check_hypotheses,
    check_symmetry,
    count_crests,
    crest_location,
    exp_weighted_l1,
    fit_solution_decay,
    spectral_tail_ratio,
    verify_wave,
    weighted_sup_norm,
)
from nonlocal_decay.wave_solver import SolitaryWave, quadratic, solve_petviashvili


def wave_from(samples, grid, sym=None, c=1.5):
    sym = sym or make_symbol("kdv-oracle")
    return SolitaryWave(grid, samples, c, sym, quadratic(), 0.0, 0, True)


@pytest.fixture(scope="module")
def g():
    return Grid(1024, 40.0)


@pytest.fixture(scope="module")
def kdv_wave(kdv, g):
    return solve_petviashvili(kdv, 1.5, quadratic(), g)


@pytest.fixture(scope="module")
def whitham_wave(whitham):
    return solve_petviashvili(whitham, 1.1, quadratic(), Grid(2**14, 120.0))


def test_even_profile(g):
    v = check_symmetry(wave_from(1 / np.cosh(g.x) ** 2, g))
    assert v.sup_asymmetry <= 1e-10
    assert v.crest_location == pytest.approx(0.0, abs=1e-12)
    assert v.crest_count == 1


@pytest.mark.parametrize("shift", [7.0, 0.3, -12.345])
def test_shifted_profile(g, shift):
    v = check_symmetry(wave_from(1 / np.cosh(g.x - shift) ** 2, g))
    assert abs(v.crest_location - shift) <= g.h
    assert v.sup_asymmetry <= 1e-10


def test_asymmetric_profile_is_detected(g):
    u = 1 / np.cosh(g.x) ** 2 + 0.1 / np.cosh(g.x - 3) ** 2
    assert check_symmetry(wave_from(u, g)).sup_asymmetry > 1e-3


def test_two_crests(g):
    u = 1 / np.cosh(g.x - 5) ** 2 + 1 / np.cosh(g.x + 5) ** 2
    assert count_crests(u) == 2


def test_crest_tie_breaks_left():
    g = Grid(256, 10.0)
    u = np.zeros(256)
    u[100] = u[140] = 1.0
    assert crest_location(wave_from(u, g), polish=False) == g.x[100]


@given(st.floats(min_value=1e-3, max_value=1e3))
def test_scaling_leaves_crest_unchanged(scale):
    g = Grid(512, 20.0)
    u = 1 / np.cosh(g.x - 1.234) ** 2
    a, b = wave_from(u, g), wave_from(scale * u, g)
    assert crest_location(b) == pytest.approx(crest_location(a), abs=1e-9)
    assert count_crests(scale * u) == count_crests(u)


def test_kdv_decay(kdv_wave):
    v = fit_solution_decay(kdv_wave)
    assert v.delta_hat == pytest.approx(math.sqrt(0.5), rel=0.01)
    # the exact tail is 4 * 0.75 * e^{-sqrt(c-1)|x|}
    assert v.plateau_value == pytest.approx(3.0, rel=1e-3)


def test_whitham_decay(whitham_wave, whitham):
    delta = solve_delta(whitham, 1.1).delta_c
    v = fit_solution_decay(whitham_wave, delta)
    assert v.relative_error <= 0.05
    shifted = fit_solution_decay(whitham_wave, delta, (v.window[0] + 5, v.window[1]))
    assert abs(shifted.plateau_value / v.plateau_value - 1) < 0.1


def test_decay_window_checks(whitham_wave):
    with pytest.raises(FitError):
        fit_solution_decay(whitham_wave, None, (2.0, 20.0))  # inside the core
    with pytest.raises(FitError):
        fit_solution_decay(whitham_wave, None, (10.0, 110.0))  # wrap zone
    with pytest.raises(FitError):
        fit_solution_decay(whitham_wave, None, (10.0, 70.0))  # noise floor


def test_weighted_sup_norm(kdv_wave):
    assert weighted_sup_norm(kdv_wave, 0) == pytest.approx(kdv_wave.amplitude)
    s = np.linspace(0, 40, 100_000)
    brute = np.max(s**2 * 0.75 / np.cosh(s * math.sqrt(0.5) / 2) ** 2)
    # the grid max sits within h/2 of the continuous one: O(h^2) relative gap
    assert weighted_sup_norm(kdv_wave, 2) == pytest.approx(brute, rel=1e-3)


def test_weighted_norms_increase_in_l(whitham_wave):
    vals = [weighted_sup_norm(whitham_wave, l) for l in (1, 2, 4, 6, 8)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert all(math.isfinite(v) for v in vals)


def test_weighted_norms_stable_under_domain_doubling(whitham_wave, whitham):
    big = solve_petviashvili(whitham, 1.1, quadratic(), Grid(2**15, 240.0))
    for l in (1, 2, 4, 6, 8):
        a, b = weighted_sup_norm(whitham_wave, l), weighted_sup_norm(big, l)
        assert abs(b / a - 1) < 0.01
    d = 0.9 * solve_delta(whitham, 1.1).delta_c
    assert abs(exp_weighted_l1(big, d) / exp_weighted_l1(whitham_wave, d) - 1) < 0.01


def test_hypotheses_quadratic():
    flags, lip = check_hypotheses(quadratic(), 1.1, 0.0, 0.16)
    assert all(flags.values())
    assert lip == pytest.approx(0.32, rel=1e-3)
    flags, _ = check_hypotheses(quadratic(), 1.1, 0.0, 0.6)
    assert not flags["lipschitz_bound"]
    flags, _ = check_hypotheses(quadratic(), 1.1, -0.2, 0.1)
    assert not flags["G_increasing"]


def test_spectral_tail_ratio(g):
    assert spectral_tail_ratio(1 / np.cosh(g.x) ** 2) < 1e-12
    spike = np.zeros(g.n_points)
    spike[g.origin_index] = 1.0
    assert spectral_tail_ratio(spike) > 0.5


def test_full_report(whitham_wave):
    rep = verify_wave(whitham_wave)
    assert rep.passed, rep.checks
    d = rep.to_dict()
    assert d["passed"] and d["symmetry"]["crest_count"] == 1
    assert set(d["weighted_norms"]) >= {"l=0", "l=8", "exp_l1_0.9"}
