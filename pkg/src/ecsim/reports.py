"""Report records and deterministic file writers used by the command-line interface.

Every number in a report comes straight from a library call; this module
only arranges and formats.  Floats are written with 17 significant digits so
that they round-trip exactly.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any

import numpy as np

from .catfidelity import CatFit, fidelity_analytic, optimize_cat
from .config import RunConfig
from .errors import ConfigError, DomainError, EmptySubspaceError
from .fockspace import FockVector, MultiModeState, product_coherent_state
from .phasespace import WignerGrid, wigner_of_diagonal_mixture, wigner_of_fock_vector
from .subspace import (
    condition_on_harmonic,
    enumerate_energy_basis,
    photon_loss,
    project,
    reduce_ir_diagonal,
    windowed_project,
)

__all__ = [
    "format_float",
    "dumps_record",
    "write_atomic",
    "write_record",
    "write_wigner_csv",
    "gnuplot_script",
    "build_state",
    "project_report",
    "conditioned_state",
    "wigner_for_config",
    "fidelity_record",
]


def format_float(x: float) -> str:
    x = float(x)
    if x == 0.0:
        return "0"  # also folds -0.0 so output bytes do not depend on sign of zero
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(x, ".17g")


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _encode({"re": obj.real, "im": obj.imag}, indent, level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, complex)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_record(record: dict) -> str:
    """JSON text for ``record``; complex numbers become ``{"re": .., "im": ..}``."""
    return _encode(record, 2, 0) + "\n"


def write_atomic(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_record(path: str | Path, record: dict) -> Path:
    return write_atomic(path, dumps_record(record))


def wigner_csv(grid: WignerGrid, slice_only: bool) -> str:
    if slice_only:
        if grid.im_axis.size != 1:
            raise ValueError("a slice needs a grid with a single imaginary coordinate")
        lines = ["re,w"]
        lines += [f"{format_float(x)},{format_float(w)}" for x, w in zip(grid.re_axis, grid.values[0])]
    else:
        lines = ["re,im,w"]
        for i, y in enumerate(grid.im_axis):
            ys = format_float(y)
            lines += [
                f"{format_float(x)},{ys},{format_float(w)}" for x, w in zip(grid.re_axis, grid.values[i])
            ]
    return "\n".join(lines) + "\n"


def write_wigner_csv(path: str | Path, grid: WignerGrid, slice_only: bool) -> Path:
    return write_atomic(path, wigner_csv(grid, slice_only))


def gnuplot_script(csv_name: str, slice_only: bool) -> str:
    if slice_only:
        return (
            "set datafile separator ','\n"
            "set xlabel 'Re(beta)'\n"
            "set ylabel 'W(beta)'\n"
            f"plot '{csv_name}' skip 1 using 1:2 with lines title 'W'\n"
        )
    return (
        "set datafile separator ','\n"
        "set xlabel 'Re(beta)'\n"
        "set ylabel 'Im(beta)'\n"
        "set view map\n"
        "set dgrid3d\n"
        f"splot '{csv_name}' skip 1 using 1:2:3 with pm3d title 'W'\n"
    )


def build_state(config: RunConfig) -> MultiModeState:
    return product_coherent_state(config.amplitudes, config.ladder, config.truncations)


def project_report(config: RunConfig) -> dict:
    """Basis tuples, coefficients, subspace probabilities, and IR photon loss."""
    state = build_state(config)
    two_mode = config.ladder.n_modes == 2
    subspaces = []
    merged: dict = {}
    for N in config.subspace_energies:
        basis = enumerate_energy_basis(N, config.ladder, config.truncations)
        if not basis.tuples:
            raise EmptySubspaceError(f"no occupation tuple has total energy {N} within the truncations")
        projected = project(state, basis)
        entry: dict[str, Any] = {
            "N": N,
            "tuples": [list(t) for t in basis.tuples],
            "coefficients": [projected.amplitude(t) for t in basis.tuples],
            "probability": projected.norm_squared,
        }
        merged.update(projected.terms)
        if two_mode and projected.norm_squared > 0.0:
            mixture = reduce_ir_diagonal(state, basis)
            entry["mixture"] = {
                "ir_photon_numbers": list(mixture.probabilities),
                "probabilities": list(mixture.probabilities.values()),
            }
            entry["photon_loss"] = photon_loss(mixture, N, config.ladder.energies[1])
            entry["mean_ir_photon_number"] = mixture.mean_photon_number()
        subspaces.append(entry)
    return {
        "ladder": list(config.ladder.energies),
        "amplitudes": list(config.amplitudes),
        "truncations": None if config.truncations is None else list(config.truncations),
        "subspaces": subspaces,
        "total_probability": MultiModeState(merged, config.ladder).norm_squared,
    }


def conditioned_state(config: RunConfig) -> FockVector:
    """Normalized IR state after the windowed projection and harmonic conditioning."""
    state = build_state(config)
    energies = config.subspace_energies
    if config.window is not None:
        projected = windowed_project(state, *config.window, config.ladder, config.truncations)
    else:
        terms = {}
        for N in energies:
            terms.update(project(state, enumerate_energy_basis(N, config.ladder, config.truncations)).terms)
        projected = MultiModeState(terms, config.ladder)
    if config.n_q is None:
        raise ConfigError("conditioning requires [conditioning] q and n_q")
    phi = condition_on_harmonic(projected, config.mode_index, config.n_q)
    if phi.is_zero:
        raise DomainError(
            f"conditioning on n_q={config.n_q} of harmonic q={config.q} leaves the zero vector"
        )
    return phi.normalized()


def _axes(config: RunConfig, slice_only: bool):
    g = config.grid
    re_axis = np.linspace(g.re_min, g.re_max, g.re_points)
    im_axis = np.array([0.0]) if slice_only else np.linspace(g.im_min, g.im_max, g.im_points)
    return re_axis, im_axis


def wigner_for_config(config: RunConfig, slice_only: bool) -> WignerGrid:
    re_axis, im_axis = _axes(config, slice_only)
    if config.wigner_source == "conditioned":
        return wigner_of_fock_vector(conditioned_state(config), re_axis, im_axis)
    state = build_state(config)
    basis = enumerate_energy_basis(config.single_energy, config.ladder, config.truncations)
    if not basis.tuples:
        raise EmptySubspaceError(f"no occupation tuple has total energy {config.single_energy}")
    mixture = reduce_ir_diagonal(state, basis)
    return wigner_of_diagonal_mixture(mixture, re_axis, im_axis)


def _fit_record(fit: CatFit, complex_amplitudes: bool) -> dict:
    return {
        "beta": fit.beta if complex_amplitudes else fit.beta.real,
        "delta_beta": fit.delta_beta if complex_amplitudes else fit.delta_beta.real,
        "fidelity": fit.fidelity,
        "diagnostics": {
            "restarts": fit.n_restarts,
            "converged_restarts": sum(r.converged for r in fit.restarts),
            "total_iterations": sum(r.iterations for r in fit.restarts),
            "total_evaluations": sum(r.evaluations for r in fit.restarts),
            "runs": [
                {
                    "start": list(r.start),
                    "x": list(r.x),
                    "fidelity": r.fidelity,
                    "iterations": r.iterations,
                    "converged": r.converged,
                }
                for r in fit.restarts
            ],
        },
    }


def fidelity_record(config: RunConfig, optimize: bool = False, complex_amplitudes: bool = False) -> dict:
    if config.q is None or config.n_q is None:
        raise ConfigError("fidelity requires a [conditioning] section")
    if config.ladder.n_modes != 2:
        raise ConfigError("the closed-form fidelity needs a two-mode ladder")
    window = config.subspace_energies
    report = fidelity_analytic(config.alpha, config.delta_alpha, window, config.q, config.n_q)
    record: dict[str, Any] = {
        "alpha": config.alpha,
        "delta_alpha": config.delta_alpha,
        "window": window,
        "q": config.q,
        "n_q": config.n_q,
        "matched_cat": {
            "fidelity": report.fidelity,
            "lower_bound": report.lower_bound,
            "upper_bound": report.upper_bound,
            "delta_p": report.delta_p,
            "xi": report.xi,
            "window_probability": report.window_probability,
        },
    }
    if optimize:
        fit = optimize_cat(
            conditioned_state(config),
            bounds=(config.beta_bounds, config.delta_beta_bounds),
            restarts=config.restarts,
            complex_amplitudes=complex_amplitudes,
            seed=config.seed,
        )
        record["optimized_cat"] = _fit_record(fit, complex_amplitudes)
    return record
