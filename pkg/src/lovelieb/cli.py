"""Command-line interface.

Thin client over :mod:`lovelieb.tables`: flags are parsed, the matching
operation runs in-process, and the resulting table is written as CSV (a
``#``-prefixed metadata block, a header row, then rows with 12-significant-
digit floats).  Identical invocations produce byte-identical output.

Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import pathlib
import sys

import click

from .core import SolverError
from .tables import (
    OutputTable,
    energy_table,
    fig_table,
    fit_table,
    infinite_table,
    solve_table,
    sweep_table,
)

_SIGNS = click.Choice(["plus", "minus"])
_QUADS = click.Choice(["trapezoid", "simpson", "gauss", "cc"])
_METHODS = click.Choice(
    ["nystrom", "elements", "neumann", "collocation", "galerkin", "maclaurin"]
)


def _emit(table: OutputTable, output: str | None):
    text = table.to_csv()
    if output:
        pathlib.Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


def _run(fn, output, *args, **kwargs):
    try:
        table = fn(*args, **kwargs)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    except SolverError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    _emit(table, output)


@click.group()
def main():
    """Love-Lieb integral equation toolkit."""


@main.command()
@click.option("--sign", type=_SIGNS, required=True, help="sign before the integral")
@click.option("--rhs", default="one", show_default=True,
              help="one | x | poly:<c0,c1,...> | hulthen | qwell:<beta>")
@click.option("--alpha", type=float, required=True)
@click.option("--method", type=_METHODS, default="nystrom", show_default=True)
@click.option("--quad", type=_QUADS, default="gauss", show_default=True)
@click.option("--n", type=int, default=129, show_default=True,
              help="nodes / elements / basis size, per method")
@click.option("--probes", type=int, default=201, show_default=True)
@click.option("--regularize", is_flag=True)
@click.option("--parity", is_flag=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
def solve(sign, rhs, alpha, method, quad, n, probes, regularize, parity, output):
    """Solve one equation instance; tabulate u at probe points."""
    cmd = (f"solve --sign {sign} --rhs {rhs} --alpha {alpha:g} --method {method} "
           f"--quad {quad} --n {n} --probes {probes}"
           + (" --regularize" if regularize else "")
           + (" --parity" if parity else ""))
    _run(solve_table, output, sign, rhs, alpha, method, quad, n, probes,
         regularize, parity, command=cmd)


@main.command()
@click.option("--sign", type=_SIGNS, required=True)
@click.option("--alphas", required=True, help="list a,b,c or range start:stop:count")
@click.option("--quad", type=_QUADS, default="simpson", show_default=True)
@click.option("--n", type=int, default=1025, show_default=True)
@click.option("--no-regularize", is_flag=True)
@click.option("--log", is_flag=True, help="log-space the range grid")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
def sweep(sign, alphas, quad, n, no_regularize, log, output):
    """Endpoint values u(1; alpha) over an alpha grid."""
    cmd = (f"sweep --sign {sign} --alphas {alphas} --quad {quad} --n {n}"
           + (" --no-regularize" if no_regularize else "")
           + (" --log" if log else ""))
    _run(sweep_table, output, sign, alphas, quad, n, not no_regularize, True,
         log, command=cmd)


@main.command()
@click.option("--model", type=click.Choice(["lieb-liniger", "gaudin"]), required=True)
@click.option("--alphas", required=True)
@click.option("--quad", type=_QUADS, default="gauss", show_default=True)
@click.option("--n", type=int, default=128, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
def energy(model, alphas, quad, n, output):
    """Ground-state energy curve (gamma, e) for a gas model."""
    cmd = f"energy --model {model} --alphas {alphas} --quad {quad} --n {n}"
    _run(energy_table, output, model, alphas, quad, n, command=cmd)


@main.command()
@click.option("--sign", type=_SIGNS, required=True)
@click.option("--rhs", required=True, help="tophat:<L> | odd:<kappa> | even:<kappa>")
@click.option("--alpha", type=float, required=True)
@click.option("--xs", required=True, help="list a,b,c or range start:stop:count")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
def infinite(sign, rhs, alpha, xs, output):
    """Whole-line solutions (adds the closed form column when one exists)."""
    cmd = f"infinite --sign {sign} --rhs {rhs} --alpha {alpha:g} --xs {xs}"
    _run(infinite_table, output, sign, rhs, alpha, xs, command=cmd)


@main.command()
@click.argument("in_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
def fit(in_path, output):
    """Two-term power fit of the first two columns of a CSV file."""
    try:
        table = OutputTable.parse_csv(pathlib.Path(in_path).read_text())
        points = [(row[0], row[1]) for row in table.rows]
    except (ValueError, IndexError) as exc:
        raise click.UsageError(f"could not read fit data: {exc}")
    _run(fit_table, output, points, command=f"fit {in_path}")


@main.command()
@click.argument("fig_id", type=click.IntRange(1, 4))
@click.option("--out-dir", type=click.Path(file_okay=False), default=".",
              show_default=True)
def fig(fig_id, out_dir):
    """Write the plot data of one survey figure as fig<N>.csv."""
    try:
        table = fig_table(fig_id)
    except SolverError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    directory = pathlib.Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"fig{fig_id}.csv"
    try:
        path.write_text(table.to_csv())
    except OSError as exc:
        click.echo(f"error: cannot write {path}: {exc}", err=True)
        sys.exit(1)
    click.echo(str(path))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("lovelieb.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
