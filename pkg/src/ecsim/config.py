"""TOML run configurations for the command-line interface.

Schema (all sections except ``[state]`` are optional unless a command needs them)::

    [state]
    alpha = 2.5                 # driving amplitude; number or [re, im]
    delta_alpha = -0.1          # depletion shift; number or [re, im]
    ladder = [1, 5]             # per-photon energies, IR first
    chi = [0.1]                 # one amplitude per harmonic
    truncations = [40, 16]      # optional, default rule per mode otherwise

    [subspace]                  # exactly one of: N | energies | N0 (+ dN)
    N0 = 10
    dN = 1

    [conditioning]
    q = 5                       # harmonic order, must appear in the ladder
    n_q = 2

    [wigner]
    source = "conditioned"      # or "mixture" (needs subspace.N)
    re_min = -6.0
    re_max = 6.0
    re_points = 401
    im_min = -6.0
    im_max = 6.0
    im_points = 401

    [fidelity]
    beta_bounds = [-5.0, 5.0]
    delta_beta_bounds = [-5.0, 5.0]
    restarts = 7
    seed = 0

    [output]
    stem = "fig2"               # prefix for output file names
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .fockspace import ModeLadder
from .subspace import window_energies

__all__ = ["RunConfig", "GridSpec", "load_config", "parse_config"]

_SECTIONS = {"state", "subspace", "conditioning", "wigner", "fidelity", "output"}


@dataclass(frozen=True)
class GridSpec:
    re_min: float = -6.0
    re_max: float = 6.0
    re_points: int = 401
    im_min: float = -6.0
    im_max: float = 6.0
    im_points: int = 401


@dataclass(frozen=True)
class RunConfig:
    alpha: complex
    delta_alpha: complex
    ladder: ModeLadder
    chi: tuple[complex, ...]
    truncations: tuple[int, ...] | None = None
    energies: tuple[int, ...] | None = None
    window: tuple[int, int] | None = None
    q: int | None = None
    n_q: int | None = None
    wigner_source: str = "mixture"
    grid: GridSpec = field(default_factory=GridSpec)
    beta_bounds: tuple[float, float] = (-5.0, 5.0)
    delta_beta_bounds: tuple[float, float] = (-5.0, 5.0)
    restarts: int = 7
    seed: int = 0
    stem: str = ""

    @property
    def amplitudes(self) -> tuple[complex, ...]:
        """Per-mode coherent amplitudes, with the depleted driving amplitude first."""
        return (self.alpha + self.delta_alpha,) + self.chi

    @property
    def subspace_energies(self) -> list[int]:
        if self.energies is not None:
            return list(self.energies)
        if self.window is not None:
            return window_energies(*self.window)
        raise ConfigError("config has no [subspace] section")

    @property
    def single_energy(self) -> int:
        if self.energies is None or len(self.energies) != 1:
            raise ConfigError("this command needs a single subspace energy (subspace.N)")
        return self.energies[0]

    @property
    def mode_index(self) -> int:
        if self.q is None:
            raise ConfigError("config has no [conditioning] section")
        return self.ladder.energies.index(self.q)

    def file_name(self, name: str) -> str:
        return f"{self.stem}_{name}" if self.stem else name


def _complex(value: Any, key: str) -> complex:
    if isinstance(value, bool):
        raise ConfigError(f"{key} must be a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{key} must be a number or [re, im], got {value!r}")


def _int(value: Any, key: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {value}")
    return value


def _float(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    return float(value)


def _pair(value: Any, key: str) -> tuple[float, float]:
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigError(f"{key} must be a two-element list")
    lo, hi = (_float(v, key) for v in value)
    if not lo < hi:
        raise ConfigError(f"{key} must be increasing, got {value}")
    return lo, hi


def _check_keys(section: dict, allowed: set[str], name: str):
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in [{name}]: {', '.join(sorted(unknown))}")


def parse_config(data: dict) -> RunConfig:
    """Validate a parsed TOML document and build a :class:`RunConfig`."""
    unknown = set(data) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown sections: {', '.join(sorted(unknown))}")
    if "state" not in data:
        raise ConfigError("config needs a [state] section")
    state = data["state"]
    _check_keys(state, {"alpha", "delta_alpha", "ladder", "chi", "truncations"}, "state")
    for key in ("alpha", "delta_alpha", "ladder", "chi"):
        if key not in state:
            raise ConfigError(f"[state] is missing {key}")
    try:
        ladder = ModeLadder(tuple(_int(e, "state.ladder", 1) for e in state["ladder"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid state.ladder: {exc}") from exc
    if not isinstance(state["chi"], list):
        raise ConfigError("state.chi must be a list with one amplitude per harmonic")
    chi = tuple(_complex(c, "state.chi") for c in state["chi"])
    if len(chi) != ladder.n_modes - 1:
        raise ConfigError(
            f"state.chi has {len(chi)} entries but the ladder has {ladder.n_modes - 1} harmonics"
        )
    truncations = None
    if "truncations" in state:
        truncations = tuple(_int(t, "state.truncations", 0) for t in state["truncations"])
        if len(truncations) != ladder.n_modes:
            raise ConfigError("state.truncations needs one entry per mode")

    kwargs: dict[str, Any] = {}
    sub = data.get("subspace")
    if sub is not None:
        _check_keys(sub, {"N", "energies", "N0", "dN"}, "subspace")
        forms = [k for k in ("N", "energies", "N0") if k in sub]
        if len(forms) != 1:
            raise ConfigError("[subspace] needs exactly one of N, energies, or N0 (+ dN)")
        if "dN" in sub and "N0" not in sub:
            raise ConfigError("subspace.dN requires subspace.N0")
        if "N" in sub:
            kwargs["energies"] = (_int(sub["N"], "subspace.N", 0),)
        elif "energies" in sub:
            if not isinstance(sub["energies"], list) or not sub["energies"]:
                raise ConfigError("subspace.energies must be a nonempty list")
            kwargs["energies"] = tuple(_int(e, "subspace.energies", 0) for e in sub["energies"])
        else:
            kwargs["window"] = (
                _int(sub["N0"], "subspace.N0", 0),
                _int(sub.get("dN", 0), "subspace.dN", 0),
            )

    cond = data.get("conditioning")
    if cond is not None:
        _check_keys(cond, {"q", "n_q"}, "conditioning")
        q = _int(cond.get("q"), "conditioning.q", 2)
        if q not in ladder.energies[1:]:
            raise ConfigError(f"conditioning.q={q} is not a harmonic of the ladder {ladder.energies}")
        kwargs["q"] = q
        kwargs["n_q"] = _int(cond.get("n_q"), "conditioning.n_q", 0)

    wig = data.get("wigner")
    if wig is not None:
        fields = set(GridSpec.__dataclass_fields__)
        _check_keys(wig, fields | {"source"}, "wigner")
        source = wig.get("source", "mixture")
        if source not in ("mixture", "conditioned"):
            raise ConfigError(f"wigner.source must be 'mixture' or 'conditioned', got {source!r}")
        kwargs["wigner_source"] = source
        grid = {}
        for key in fields:
            if key in wig:
                if key.endswith("_points"):
                    grid[key] = _int(wig[key], f"wigner.{key}", 2)
                else:
                    grid[key] = _float(wig[key], f"wigner.{key}")
        spec = GridSpec(**grid)
        if spec.re_min >= spec.re_max or spec.im_min >= spec.im_max:
            raise ConfigError("wigner grid bounds must satisfy min < max")
        kwargs["grid"] = spec

    fid = data.get("fidelity")
    if fid is not None:
        _check_keys(fid, {"beta_bounds", "delta_beta_bounds", "restarts", "seed"}, "fidelity")
        if "beta_bounds" in fid:
            kwargs["beta_bounds"] = _pair(fid["beta_bounds"], "fidelity.beta_bounds")
        if "delta_beta_bounds" in fid:
            kwargs["delta_beta_bounds"] = _pair(fid["delta_beta_bounds"], "fidelity.delta_beta_bounds")
        if "restarts" in fid:
            kwargs["restarts"] = _int(fid["restarts"], "fidelity.restarts", 1)
        if "seed" in fid:
            kwargs["seed"] = _int(fid["seed"], "fidelity.seed", 0)

    out = data.get("output")
    if out is not None:
        _check_keys(out, {"stem"}, "output")
        stem = out.get("stem", "")
        if not isinstance(stem, str) or "/" in stem:
            raise ConfigError("output.stem must be a plain file-name prefix")
        kwargs["stem"] = stem

    return RunConfig(
        alpha=_complex(state["alpha"], "state.alpha"),
        delta_alpha=_complex(state["delta_alpha"], "state.delta_alpha"),
        ladder=ladder,
        chi=chi,
        truncations=truncations,
        **kwargs,
    )


def load_config(path: str | Path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    return parse_config(data)
