"""Amplitude continuation of Whitham-Boussinesq solitary waves.

Solves c^2 u - L u - u^2/2 (3c - u) = 0 with the crest height u(0) = A
prescribed and the speed c as an unknown, stepping A upward with a
Newton-Krylov solver.  For each step it prints the speed, the spectral tail
ratio (a resolution monitor) and the value u* = c (1 - 1/sqrt 3) at which
G'(u) reaches c^2.  The branch turns back near A ~ u*, where the speed
peaks around 1.16; past that point the profile develops a grid-scale spike
and the tail ratio jumps, so no resolved wave exists at c = 1.2.

Requires scipy.

    python3 scripts/wb_branch_continuation.py --n 4096 --X 60
"""

import warnings

import click
import numpy as np
from scipy.optimize import newton_krylov

from nonlocal_decay import Grid, make_symbol
from nonlocal_decay.verify import spectral_tail_ratio
from nonlocal_decay.wave_solver import solve_damped_fixed_point, wb_cubic


def _system(sym, grid):
    m = sym.eval_real(grid.xi)
    j0 = grid.origin_index
    ri = grid.reflection_indices()

    def residual(z, amplitude):
        u, c = z[:-1], z[-1]
        r = c * c * u - np.fft.ifft(m * np.fft.fft(u)).real - u * u / 2 * (3 * c - u)
        r = 0.5 * (r + r[ri])  # keep the iterate even
        return np.r_[r, u[j0] - amplitude]

    return residual


@click.command()
@click.option("--n", default=2**12, show_default=True)
@click.option("--X", "half_length", default=60.0, show_default=True)
@click.option("--start-speed", default=1.05, show_default=True)
@click.option("--step", default=0.03, show_default=True)
@click.option("--max-amplitude", default=1.0, show_default=True)
def main(n, half_length, start_speed, step, max_amplitude):
    warnings.filterwarnings("ignore", category=RuntimeWarning)
    sym = make_symbol("bidirectional-whitham", c_power=2)
    grid = Grid(n, half_length)
    seed = solve_damped_fixed_point(sym, start_speed, wb_cubic(start_speed), grid)
    z = np.r_[seed.samples, start_speed]
    residual = _system(sym, grid)
    click.echo(f"seed c={start_speed} amplitude {seed.amplitude:.4f}")
    click.echo(f"{'A':>6}{'c':>10}{'tail':>10}{'u*':>8}")
    best = start_speed
    for amplitude in np.arange(seed.amplitude + step, max_amplitude, step):
        try:
            z = newton_krylov(lambda zz: residual(zz, amplitude), z, f_tol=1e-11, maxiter=300)
        except Exception as exc:  # scipy raises several types on stagnation
            click.echo(f"{amplitude:6.2f}  continuation stopped: {type(exc).__name__}")
            break
        c = z[-1]
        best = max(best, c)
        tail = spectral_tail_ratio(z[:-1])
        click.echo(f"{amplitude:6.2f}{c:10.5f}{tail:10.1e}{c * (1 - 1 / np.sqrt(3)):8.3f}")
    click.echo(f"largest speed reached: {best:.5f}")


if __name__ == "__main__":
    main()
