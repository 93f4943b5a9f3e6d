"""Tail-rate and prefactor sweep for the bounded built-in kernels.

For each symbol and speed, fits the kernel tail on the default window and
compares the fitted rate and prefactor against the exact decay rate and the
residue formula.  Prints one row per run.

    python3 scripts/kernel_tail_sweep.py --n 16384 --X 80
"""

import click

from nonlocal_decay import Grid, analytic_prefactor, compute_kernel, make_symbol, solve_delta, tail_decay_fit
from nonlocal_decay.errors import FitError


@click.command()
@click.option("--n", default=2**14, show_default=True)
@click.option("--X", "half_length", default=80.0, show_default=True)
@click.option("--speeds", default="1.05,1.1,1.2,1.5,2.0", show_default=True)
def main(n, half_length, speeds):
    grid = Grid(n, half_length)
    click.echo(f"{'symbol':<24}{'c':>6}{'delta_c':>14}{'delta_hat':>14}{'rate err':>10}{'C':>12}{'C_hat':>12}{'C err':>10}")
    for name in ("whitham", "bidirectional-whitham"):
        sym = make_symbol(name)
        for c in (float(s) for s in speeds.split(",")):
            delta = solve_delta(sym, c).delta_c
            try:
                fit = tail_decay_fit(compute_kernel(sym, c, grid))
            except FitError as exc:
                click.echo(f"{name:<24}{c:>6g}  fit failed: {exc}")
                continue
            pre = analytic_prefactor(sym, c, delta)
            click.echo(
                f"{name:<24}{c:>6g}{delta:>14.8f}{fit.delta_hat:>14.8f}{abs(fit.delta_hat / delta - 1):>10.1e}"
                f"{pre:>12.6f}{fit.prefactor_hat:>12.6f}{abs(fit.prefactor_hat / pre - 1):>10.1e}"
            )


if __name__ == "__main__":
    main()
