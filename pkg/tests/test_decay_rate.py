import math
import time

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonlocal_decay import invert, make_symbol, solve_delta
from nonlocal_decay.errors import NotSupercritical

C_PI4 = 2.0 / math.sqrt(math.pi)


def test_whitham_closed_form():
    t = time.perf_counter()
    res = solve_delta(make_symbol("whitham"), C_PI4)
    assert time.perf_counter() - t < 0.01
    assert abs(res.delta_c - math.pi / 4) < 1e-10
    assert res.residual <= 1e-12 * res.c_eff
    lo, hi = res.bracket
    assert hi - lo <= 1e-14


def test_bidirectional_closed_form():
    res = solve_delta(make_symbol("bidirectional-whitham", c_power=2), C_PI4)
    assert abs(res.delta_c - math.pi / 4) < 1e-10


def test_kdv_closed_form():
    assert solve_delta(make_symbol("kdv-oracle"), 1.5).delta_c == pytest.approx(math.sqrt(0.5), rel=1e-13)


def test_not_supercritical():
    with pytest.raises(NotSupercritical):
        solve_delta(make_symbol("whitham"), 1.0)


def test_monotone_in_speed():
    w = make_symbol("whitham")
    deltas = [solve_delta(w, c).delta_c for c in (1.05, 1.1, 1.2, 1.5)]
    assert all(a < b for a, b in zip(deltas, deltas[1:]))


def test_vanishes_at_critical_speed():
    w = make_symbol("whitham")
    deltas = [solve_delta(w, 1 + 10.0**-k).delta_c for k in range(2, 7)]
    assert all(a > b for a, b in zip(deltas, deltas[1:]))
    assert deltas[-1] < 0.01


SPEEDS = {
    "whitham": st.floats(min_value=1.001, max_value=5.0),
    "bidirectional-whitham": st.floats(min_value=1.001, max_value=3.0),
    "kdv-oracle": st.floats(min_value=1.001, max_value=20.0),
}


@pytest.mark.parametrize("name", sorted(SPEEDS))
def test_round_trip(name):
    sym = make_symbol(name)

    @given(SPEEDS[name])
    def check(c):
        res = solve_delta(sym, c)
        assert 0 < res.delta_c < sym.strip_height
        assert abs(sym.eval_imag(res.delta_c) - res.c_eff) <= 1e-12 * res.c_eff

    check()


@given(st.floats(min_value=0.05, max_value=0.999))
def test_capillary_round_trip(c):
    cap = make_symbol("capillary-whitham", beta=0.5)
    inv = invert(cap)
    res = solve_delta(inv, 1.0 / c)
    assert 0 < res.delta_c < min(math.pi / 2, 0.5**-0.5)
    assert abs(inv.eval_imag(res.delta_c) - 1.0 / c) <= 1e-12 / c
    # the differentiating symbol is inverted on the fly
    assert solve_delta(cap, c).delta_c == res.delta_c


def test_delta_below_strip_for_all_whitham_speeds():
    w = make_symbol("whitham")
    for c in np.linspace(1.01, 50, 30):
        assert solve_delta(w, c).delta_c < math.pi / 2
