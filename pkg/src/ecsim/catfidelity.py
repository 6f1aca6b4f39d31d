"""Cat states ``|b + db> - <b|b + db> |b>`` and their fidelity with conditioned IR states."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import DegenerateCatError, OptimizationError, UndefinedConditioningError
from .fockspace import (
    FockVector,
    coherent_amplitudes,
    coherent_overlap,
    default_truncation,
    fock_coefficient,
    inner_product,
)

__all__ = [
    "CatParams",
    "FidelityReport",
    "RestartResult",
    "CatFit",
    "cat_state_vector",
    "delta_p",
    "fidelity_analytic",
    "fidelity_bruteforce",
    "optimize_cat",
]


@dataclass(frozen=True)
class CatParams:
    beta: complex
    delta_beta: complex

    def __post_init__(self):
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "delta_beta", complex(self.delta_beta))

    @cached_property
    def xi(self) -> complex:
        """Overlap ``<beta|beta + delta_beta>``."""
        return coherent_overlap(self.beta, self.beta + self.delta_beta)

    @property
    def norm_squared(self) -> float:
        return 1.0 - abs(self.xi) ** 2

    @property
    def is_degenerate(self) -> bool:
        return self.delta_beta == 0


@dataclass(frozen=True)
class FidelityReport:
    fidelity: float
    delta_p: complex
    lower_bound: float
    upper_bound: float
    window_probability: float
    xi: complex


def cat_state_vector(beta: complex, delta_beta: complex, n_max: int | None = None) -> FockVector:
    """Unnormalized cat ``|beta + delta_beta> - xi |beta>`` on the number basis.

    Its squared norm is ``1 - |xi|^2`` up to truncation error and it is
    orthogonal to ``|beta>`` by construction.
    """
    params = CatParams(beta, delta_beta)
    if params.is_degenerate:
        raise DegenerateCatError("delta_beta = 0 makes the cat state vanish")
    if n_max is None:
        n_max = default_truncation(abs(params.beta) + abs(params.delta_beta))
    shifted = coherent_amplitudes(params.beta + params.delta_beta, n_max).amplitudes
    base = coherent_amplitudes(params.beta, n_max).amplitudes
    return FockVector(shifted - params.xi * base)


def _window_photon_numbers(window: Sequence[int], q: int, n_q: int) -> list[int]:
    # IR photon numbers N_i - q n_q; negative ones are outside the Fock space
    return sorted({N - q * n_q for N in window if N - q * n_q >= 0})


def _window_sums(alpha, delta_alpha, window, q, n_q):
    shifted = complex(alpha) + complex(delta_alpha)
    num = 0j
    den = 0.0
    for k in _window_photon_numbers(window, q, n_q):
        c_shift = fock_coefficient(k, shifted)
        c_base = fock_coefficient(k, complex(alpha))
        num += c_base.conjugate() * c_shift
        den += c_shift.real**2 + c_shift.imag**2
    return num, den


def delta_p(alpha: complex, delta_alpha: complex, window: Sequence[int], q: int, n_q: int) -> complex:
    """Ratio of windowed overlaps.

    ``sum_k <alpha|k><k|alpha + delta_alpha> / sum_k |<k|alpha + delta_alpha>|^2``
    with ``k`` running over the IR photon numbers ``N_i - q n_q`` of the window.
    """
    num, den = _window_sums(alpha, delta_alpha, window, q, n_q)
    if den == 0.0:
        raise UndefinedConditioningError(
            f"window {list(window)} with q={q}, n_q={n_q} has no support on the coherent state"
        )
    return num / den


def fidelity_analytic(
    alpha: complex, delta_alpha: complex, window: Sequence[int], q: int, n_q: int
) -> FidelityReport:
    """Closed-form fidelity between the matched cat and the conditioned IR state.

    The cat is built from the same ``(alpha, delta_alpha)`` as the driving
    field.  Bounds follow from ``window_probability <= 1`` and
    ``1 - |xi|^2 <= 1``.
    """
    if complex(delta_alpha) == 0:
        raise DegenerateCatError("delta_alpha = 0 makes the matched cat state vanish")
    dp = delta_p(alpha, delta_alpha, window, q, n_q)
    _, window_prob = _window_sums(alpha, delta_alpha, window, q, n_q)
    xi = coherent_overlap(alpha, complex(alpha) + complex(delta_alpha))
    cat_norm2 = 1.0 - abs(xi) ** 2
    if cat_norm2 <= 0.0:
        raise DegenerateCatError(f"cat state norm underflows for delta_alpha={delta_alpha}")
    contrast = abs(1.0 - xi.conjugate() * dp) ** 2
    return FidelityReport(
        fidelity=window_prob * contrast / cat_norm2,
        delta_p=dp,
        lower_bound=contrast * window_prob,
        upper_bound=contrast / cat_norm2,
        window_probability=window_prob,
        xi=xi,
    )


def fidelity_bruteforce(cat: FockVector, phi: FockVector) -> float:
    """``|<cat|phi>|^2`` for two normalized vectors."""
    for name, v in (("cat", cat), ("phi", phi)):
        if not v.is_normalized(1e-9):
            raise ValueError(f"{name} is not normalized (norm^2 = {v.norm_squared!r})")
    return abs(inner_product(cat, phi)) ** 2


@dataclass(frozen=True)
class RestartResult:
    start: tuple[float, ...]
    x: tuple[float, ...]
    fidelity: float
    iterations: int
    evaluations: int
    converged: bool
    message: str


@dataclass(frozen=True)
class CatFit:
    beta: complex
    delta_beta: complex
    fidelity: float
    restarts: tuple[RestartResult, ...] = field(repr=False)

    @property
    def n_restarts(self) -> int:
        return len(self.restarts)


def _unpack(x, complex_amplitudes):
    if complex_amplitudes:
        return complex(x[0], x[1]), complex(x[2], x[3])
    return complex(x[0]), complex(x[1])


def _cat_fidelity(x, phi: FockVector, complex_amplitudes: bool) -> float:
    beta, delta_beta = _unpack(x, complex_amplitudes)
    if abs(delta_beta) < 1e-8:
        return 0.0
    cat = cat_state_vector(beta, delta_beta)
    norm2 = cat.norm_squared
    if norm2 < 1e-24:
        return 0.0
    return fidelity_bruteforce(cat.normalized(), phi)


def _start_points(bounds, restarts, complex_amplitudes, seed):
    (b_lo, b_hi), (d_lo, d_hi) = bounds
    if not complex_amplitudes:
        grid_b = np.linspace(b_lo, b_hi, restarts)
        grid_d = np.linspace(d_lo, d_hi, restarts)
        return [np.array([b, d]) for b in grid_b for d in grid_d]
    rng = np.random.default_rng(seed)
    lo = np.array([b_lo, b_lo, d_lo, d_lo])
    hi = np.array([b_hi, b_hi, d_hi, d_hi])
    return list(rng.uniform(lo, hi, size=(restarts * restarts, 4)))


def optimize_cat(
    phi: FockVector,
    bounds: Sequence[tuple[float, float]] = ((-5.0, 5.0), (-5.0, 5.0)),
    restarts: int = 7,
    complex_amplitudes: bool = False,
    seed: int = 0,
    fatol: float = 1e-8,
    xatol: float = 1e-6,
    maxiter: int = 4000,
) -> CatFit:
    """Maximize ``|<cat(beta, delta_beta)|phi>|^2`` over the cat amplitudes.

    Runs a bounded Nelder-Mead search from every point of a
    ``restarts x restarts`` grid over ``bounds`` (``bounds[0]`` for beta,
    ``bounds[1]`` for delta_beta).  With ``complex_amplitudes`` the real and
    imaginary parts of both amplitudes are free and ``restarts**2`` start
    points are drawn uniformly with ``seed``; each bound then applies to both
    parts.
    """
    if not phi.is_normalized(1e-9):
        raise ValueError(f"phi is not normalized (norm^2 = {phi.norm_squared!r})")
    (b_lo, b_hi), (d_lo, d_hi) = bounds
    box = [(b_lo, b_hi), (d_lo, d_hi)]
    if complex_amplitudes:
        box = [(b_lo, b_hi), (b_lo, b_hi), (d_lo, d_hi), (d_lo, d_hi)]

    def objective(x):
        return -_cat_fidelity(x, phi, complex_amplitudes)

    results = []
    for x0 in _start_points(bounds, restarts, complex_amplitudes, seed):
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            bounds=box,
            options={"xatol": xatol, "fatol": fatol, "maxiter": maxiter, "maxfev": 2 * maxiter},
        )
        results.append(
            RestartResult(
                start=tuple(float(v) for v in x0),
                x=tuple(float(v) for v in res.x),
                fidelity=float(-res.fun),
                iterations=int(res.nit),
                evaluations=int(res.nfev),
                converged=bool(res.success),
                message=str(res.message),
            )
        )

    useful = [r for r in results if abs(_unpack(r.x, complex_amplitudes)[1]) >= 1e-8]
    if not useful:
        raise OptimizationError("every restart collapsed onto a degenerate cat (delta_beta = 0)")
    # ties broken by restart order so the result is reproducible
    best = max(useful, key=lambda r: r.fidelity)
    beta, delta_beta = _unpack(best.x, complex_amplitudes)
    return CatFit(beta, delta_beta, best.fidelity, tuple(results))
