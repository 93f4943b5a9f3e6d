import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonlocal_decay import admissible, eval_imag, eval_real, invert, make_symbol
from nonlocal_decay.errors import ConfigError, DomainError, InversionError
from nonlocal_decay.symbols import CAPILLARY_BETA_MIN

ALL = [
    make_symbol("whitham"),
    make_symbol("bidirectional-whitham"),
    make_symbol("capillary-whitham", beta=0.5),
    make_symbol("kdv-oracle"),
]
SMOOTHING = [ALL[0], ALL[1], invert(ALL[2]), ALL[3]]


def test_values_at_origin(whitham, bidirectional):
    assert eval_real(whitham, 0.0) == 1.0
    assert eval_real(bidirectional, 0.0) == 1.0


def test_capillary_direct_evaluation(capillary):
    expected = math.sqrt((1 + 0.5 * 4) * math.tanh(2.0) / 2.0)
    assert eval_real(capillary, 2.0) == pytest.approx(expected, rel=1e-15)


def test_imaginary_axis_closed_forms(whitham, bidirectional):
    assert eval_imag(whitham, math.pi / 4) == pytest.approx(math.sqrt(4 / math.pi), rel=1e-15)
    assert eval_imag(bidirectional, math.pi / 4) == pytest.approx(4 / math.pi, rel=1e-15)


def test_imaginary_axis_pole_is_rejected(whitham):
    with pytest.raises(DomainError):
        eval_imag(whitham, math.pi / 2)


def test_series_branch_is_continuous(whitham):
    # both sides of the 1e-4 switch agree to rounding
    lo, hi = eval_real(whitham, 0.99999e-4), eval_real(whitham, 1.00001e-4)
    assert abs(lo - hi) < 1e-12


@pytest.mark.parametrize("sym", ALL, ids=lambda s: s.label)
def test_evenness(sym):
    xi = np.random.default_rng(0).uniform(-50, 50, 1000)
    assert np.array_equal(sym.eval_real(xi), sym.eval_real(-xi))


@pytest.mark.parametrize("sym", SMOOTHING, ids=lambda s: s.label)
def test_imaginary_restriction_increasing(sym):
    top = sym.strip_height if math.isfinite(sym.strip_height) else 10.0
    y = np.linspace(1e-6, 0.999 * top, 200)
    g = sym.eval_imag(y)
    assert np.all(np.diff(g) > 0)
    assert sym.eval_imag(0.0) == pytest.approx(sym.eval_real(0.0))


def test_capillary_uninverted_restriction_decreases(capillary):
    y = np.linspace(1e-6, 0.999 * capillary.strip_height, 200)
    assert np.all(np.diff(capillary.eval_imag(y)) < 0)


@pytest.mark.parametrize(
    "sym,a", [(ALL[0], 1.0), (ALL[1], 1.0), (ALL[2], math.sqrt(0.5))], ids=["whitham", "bidirectional", "capillary"]
)
def test_asymptotics(sym, a):
    assert sym.tail_coefficient == pytest.approx(a)
    for xi in (100.0, 1e3, 1e4):
        rel = abs(sym.eval_real(xi) - a * xi**sym.m0) / xi**sym.m0
        assert rel < 0.01


def test_admissibility(whitham):
    assert admissible(whitham, 1.2)
    bad = admissible(whitham, 0.9)
    assert not bad and "sup m" in bad.reason
    assert admissible(make_symbol("bidirectional-whitham", c_power=2), 1.05)


def test_admissibility_differentiating(capillary):
    assert capillary.inf == pytest.approx(1.0)
    assert admissible(capillary, 0.9)
    assert not admissible(capillary, 1.1)


def test_inversion(capillary):
    inv = invert(capillary)
    assert inv.eval_real(0.0) == 1.0
    assert inv.m0 == -0.5
    assert inv.strip_height == pytest.approx(math.sqrt(2.0))
    y = np.linspace(1e-3, 0.999 * math.sqrt(2.0), 100)
    expected = np.sqrt(y / ((1 - 0.5 * y * y) * np.tan(y)))
    assert np.allclose(inv.eval_imag(y), expected, rtol=1e-14)
    assert np.all(np.diff(inv.eval_imag(y)) > 0)


def test_inversion_is_an_involution(capillary):
    twice = invert(invert(capillary))
    xi = np.linspace(-30, 30, 100)
    assert twice == capillary
    assert np.array_equal(twice.eval_real(xi), capillary.eval_real(xi))


@pytest.mark.parametrize("name", ["whitham", "bidirectional-whitham", "kdv-oracle"])
def test_inversion_rejected(name):
    with pytest.raises(InversionError):
        invert(make_symbol(name))


def test_capillary_beta_gate():
    with pytest.raises(ConfigError):
        make_symbol("capillary-whitham", beta=0.3)
    assert CAPILLARY_BETA_MIN == pytest.approx(0.405284734569351)
    with pytest.raises(ConfigError):
        make_symbol("capillary-whitham")


def test_unknown_symbol():
    with pytest.raises(ConfigError):
        make_symbol("airy")


@given(st.floats(min_value=-1e3, max_value=1e3, allow_nan=False))
def test_whitham_bounded_by_one(xi):
    v = make_symbol("whitham").eval_real(xi)
    assert 0 < v <= 1.0
