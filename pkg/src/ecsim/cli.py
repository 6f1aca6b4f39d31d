"""``ecsim`` command line.

Exit codes: 0 success, 2 configuration error, 3 domain error (empty
subspace, degenerate cat, zero conditioned vector).
"""
from __future__ import annotations

import functools
from pathlib import Path

import click

from . import reports
from .config import RunConfig, load_config, parse_config
from .errors import ConfigError, DomainError

EXIT_CONFIG = 2
EXIT_DOMAIN = 3

# fig1 parameter sets do not fix the harmonic order; q=3 unless overridden
FIG1_Q = 3
FIG1_CASES = {
    3: {"alpha": 1.2, "delta_alpha": -0.3, "chi": 0.1},
    8: {"alpha": 4.2, "delta_alpha": -1.3, "chi": 0.3},
    15: {"alpha": 5.2, "delta_alpha": -2.3, "chi": 0.8},
}
FIG2 = {
    "state": {"alpha": 2.5, "delta_alpha": -0.1, "ladder": [1, 5], "chi": [0.1]},
    "subspace": {"N0": 10, "dN": 1},
    "conditioning": {"q": 5, "n_q": 2},
    "wigner": {"source": "conditioned"},
    "output": {"stem": "fig2"},
}


def _handle_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            raise SystemExit(EXIT_CONFIG)
        except DomainError as exc:
            click.echo(f"domain error: {exc}", err=True)
            raise SystemExit(EXIT_DOMAIN)

    return wrapper


def _load(path: str) -> RunConfig:
    return load_config(path)


config_option = click.option(
    "--config", "config_path", required=True, type=click.Path(dir_okay=False),
    help="TOML run configuration.",
)
out_option = click.option(
    "--out", "out_dir", required=True, type=click.Path(file_okay=False),
    help="Output directory (created if missing).",
)


@click.group()
def cli():
    """Energy-conserving subspace toolkit for quantum-optical high harmonic generation."""


@cli.command()
@config_option
@out_option
@_handle_errors
def project(config_path, out_dir):
    """Project the product coherent state onto energy subspaces."""
    config = _load(config_path)
    path = Path(out_dir) / config.file_name("project.json")
    reports.write_record(path, reports.project_report(config))
    click.echo(str(path))


def _write_wigner(config: RunConfig, out_dir: str, slice_only: bool, gnuplot: bool) -> list[Path]:
    grid = reports.wigner_for_config(config, slice_only)
    name = config.file_name("wigner_slice.csv" if slice_only else "wigner_grid.csv")
    written = [reports.write_wigner_csv(Path(out_dir) / name, grid, slice_only)]
    if gnuplot:
        script = reports.gnuplot_script(name, slice_only)
        written.append(reports.write_atomic(Path(out_dir) / (name[: -len(".csv")] + ".gp"), script))
    return written


@cli.command()
@config_option
@click.option("--slice", "mode", flag_value="slice", default=True, help="Im(beta) = 0 slice (default).")
@click.option("--grid", "mode", flag_value="grid", help="Full 2-D grid.")
@click.option("--gnuplot", is_flag=True, help="Also write a gnuplot script next to the CSV.")
@out_option
@_handle_errors
def wigner(config_path, mode, gnuplot, out_dir):
    """Evaluate the Wigner function of the reduced or conditioned IR state."""
    config = _load(config_path)
    for path in _write_wigner(config, out_dir, mode == "slice", gnuplot):
        click.echo(str(path))


@cli.command()
@config_option
@click.option("--optimize", is_flag=True, help="Also maximize the fidelity over the cat amplitudes.")
@click.option("--complex-amplitudes", is_flag=True, help="Search complex cat amplitudes.")
@out_option
@_handle_errors
def fidelity(config_path, optimize, complex_amplitudes, out_dir):
    """Cat-state fidelity of the conditioned IR state."""
    config = _load(config_path)
    record = reports.fidelity_record(config, optimize, complex_amplitudes)
    path = Path(out_dir) / config.file_name("fidelity.json")
    reports.write_record(path, record)
    click.echo(str(path))


def fig1_configs(q: int = FIG1_Q) -> dict[int, RunConfig]:
    configs = {}
    for N, case in FIG1_CASES.items():
        configs[N] = parse_config({
            "state": {
                "alpha": case["alpha"],
                "delta_alpha": case["delta_alpha"],
                "ladder": [1, q],
                "chi": [case["chi"]],
            },
            "subspace": {"N": N},
            "wigner": {"source": "mixture"},
            "output": {"stem": f"fig1_N{N}"},
        })
    return configs


def fig2_config() -> RunConfig:
    return parse_config(FIG2)


@cli.command()
@click.argument("figure", type=click.Choice(["fig1", "fig2"]))
@click.option("--q", "q", default=FIG1_Q, show_default=True, help="Harmonic order used for fig1.")
@click.option("--gnuplot", is_flag=True, help="Also write gnuplot scripts.")
@out_option
@_handle_errors
def repro(figure, q, gnuplot, out_dir):
    """Write every data file needed to re-plot a figure."""
    written = []
    if figure == "fig1":
        configs = fig1_configs(q)
        for config in configs.values():
            written += _write_wigner(config, out_dir, True, gnuplot)
        manifest = {
            "figure": "fig1",
            "q": q,
            "cases": [
                {"N": N, **FIG1_CASES[N], "file": configs[N].file_name("wigner_slice.csv")}
                for N in configs
            ],
        }
        written.append(reports.write_record(Path(out_dir) / "fig1_manifest.json", manifest))
    else:
        config = fig2_config()
        written += _write_wigner(config, out_dir, False, gnuplot)
        written.append(
            reports.write_record(
                Path(out_dir) / config.file_name("fidelity.json"),
                reports.fidelity_record(config, optimize=True),
            )
        )
    for path in written:
        click.echo(str(path))


def main():
    cli()


if __name__ == "__main__":
    main()
