"""Near-origin behaviour of the Whitham kernel under window shrinking.

The kernel blows up like |x|^(-1/2) at the origin, but the law only takes
over very close to 0.  This script fits the power exponent on decade windows
approaching the origin, using a short, very fine grid, and prints how the
exponent moves toward -1/2.  The bidirectional kernel is fitted alongside to
show its logarithmic singularity.

    python3 scripts/near_origin_convergence.py --c 1.2
"""

import click

from nonlocal_decay import Grid, compute_kernel, make_symbol, near_origin_exponent


@click.command()
@click.option("--c", "speed", default=1.2, show_default=True)
@click.option("--log2n", default=22, show_default=True, help="Grid size exponent on [-2, 2].")
def main(speed, log2n):
    grid = Grid(2**log2n, 2.0)
    click.echo(f"grid h = {grid.h:.3e}")
    for name in ("whitham", "bidirectional-whitham"):
        k = compute_kernel(make_symbol(name), speed, grid)
        click.echo(name)
        for lo in (1e-2, 1e-3, 1e-4, 1e-5):
            fit = near_origin_exponent(k, (lo, 10 * lo))
            click.echo(
                f"  window [{lo:.0e}, {10 * lo:.0e}]  exponent {fit.exponent:+.4f}  "
                f"r2 power {fit.r2_power:.6f}  r2 log {fit.r2_log:.6f}  -> {fit.model}"
            )


if __name__ == "__main__":
    main()
