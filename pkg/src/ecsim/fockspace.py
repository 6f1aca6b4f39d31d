"""Truncated single-mode and multimode bosonic states.

Every mode carries an integer per-photon energy in units of the driving
frequency, so all energy bookkeeping downstream stays in exact integer
arithmetic.  Amplitudes are complex floats.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

NORM_TOL = 1e-10
PRUNE_TOL = 1e-15

__all__ = [
    "ModeLadder",
    "FockVector",
    "MultiModeState",
    "TruncationWarning",
    "default_truncation",
    "fock_coefficient",
    "coherent_amplitudes",
    "fock_state",
    "inner_product",
    "coherent_overlap",
    "product_coherent_state",
]


class TruncationWarning(UserWarning):
    """A truncated coherent expansion captured less than ``1 - 1e-10`` of the norm."""


@dataclass(frozen=True)
class ModeLadder:
    """Per-photon energies of the field modes, in units of the driving frequency.

    Entry 0 is the driving (IR) mode and always has energy 1; the following
    entries are harmonic orders in strictly increasing order.
    """

    energies: tuple[int, ...]

    def __post_init__(self):
        energies = tuple(int(e) for e in self.energies)
        if any(e != orig for e, orig in zip(energies, self.energies)):
            raise ValueError(f"mode energies must be integers, got {self.energies!r}")
        if not energies or energies[0] != 1:
            raise ValueError("the first mode must be the driving mode with energy 1")
        if any(b <= a for a, b in zip(energies, energies[1:])):
            raise ValueError(f"mode energies must be strictly increasing, got {energies}")
        object.__setattr__(self, "energies", energies)

    @classmethod
    def two_mode(cls, q: int) -> ModeLadder:
        return cls((1, q))

    @property
    def n_modes(self) -> int:
        return len(self.energies)

    def energy(self, occupation: Sequence[int]) -> int:
        return sum(e * n for e, n in zip(self.energies, occupation))

    def __len__(self):
        return len(self.energies)


@dataclass(frozen=True, eq=False)
class FockVector:
    """Complex amplitudes of a single mode on the number basis ``|0>, ..., |n_max>``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size == 0:
            raise ValueError("a FockVector needs at least one amplitude")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max(self) -> int:
        return self.amplitudes.size - 1

    def __len__(self):
        return self.amplitudes.size

    def __getitem__(self, n):
        return self.amplitudes[n]

    @property
    def norm_squared(self) -> float:
        a = self.amplitudes
        return float(np.sum(a.real**2 + a.imag**2))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.amplitudes)

    def is_normalized(self, tol: float = 1e-9) -> bool:
        return abs(self.norm_squared - 1.0) <= tol

    def normalized(self) -> FockVector:
        norm2 = self.norm_squared
        if norm2 == 0.0:
            raise ZeroDivisionError("cannot normalize the zero vector")
        return FockVector(self.amplitudes / math.sqrt(norm2))

    def padded(self, n_max: int) -> FockVector:
        if n_max < self.n_max:
            raise ValueError("padding cannot shorten a vector")
        out = np.zeros(n_max + 1, dtype=complex)
        out[: len(self)] = self.amplitudes
        return FockVector(out)

    def density_matrix(self) -> np.ndarray:
        """Return ``|v><v|`` as a dense array with ``rho[n, m] = v_n conj(v_m)``."""
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def __repr__(self):
        return f"FockVector(n_max={self.n_max}, norm_squared={self.norm_squared:.12g})"


@dataclass(frozen=True, eq=False)
class MultiModeState:
    """Sparse multimode amplitudes keyed by occupation tuples ``(n_0, n_1, ...)``.

    Amplitudes with magnitude below ``1e-15`` are dropped on construction.
    """

    terms: Mapping[tuple[int, ...], complex]
    ladder: ModeLadder
    _terms: dict = field(init=False, repr=False)

    def __post_init__(self):
        n_modes = self.ladder.n_modes
        clean = {}
        for occ, amp in self.terms.items():
            occ = tuple(int(n) for n in occ)
            if len(occ) != n_modes:
                raise ValueError(
                    f"occupation {occ} has {len(occ)} entries, ladder has {n_modes} modes"
                )
            if any(n < 0 for n in occ):
                raise ValueError(f"negative occupation in {occ}")
            amp = complex(amp)
            if abs(amp) >= PRUNE_TOL:
                clean[occ] = amp
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "terms", _FrozenDict(clean))

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def amplitude(self, occupation: Sequence[int]) -> complex:
        return self._terms.get(tuple(occupation), 0j)

    @property
    def norm_squared(self) -> float:
        return float(sum(a.real**2 + a.imag**2 for a in self._terms.values()))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def normalized(self) -> MultiModeState:
        norm2 = self.norm_squared
        if norm2 == 0.0:
            raise ZeroDivisionError("cannot normalize the zero state")
        scale = 1.0 / math.sqrt(norm2)
        return MultiModeState({k: v * scale for k, v in self._terms.items()}, self.ladder)

    def energies(self) -> dict[tuple[int, ...], int]:
        return {occ: self.ladder.energy(occ) for occ in self._terms}

    def max_occupations(self) -> tuple[int, ...]:
        if not self._terms:
            return (0,) * self.ladder.n_modes
        return tuple(max(col) for col in zip(*self._terms))

    def to_dense(self, truncations: Sequence[int] | None = None) -> np.ndarray:
        """Dense amplitude tensor of shape ``(t_0 + 1, t_1 + 1, ...)``."""
        if truncations is None:
            truncations = self.max_occupations()
        out = np.zeros([t + 1 for t in truncations], dtype=complex)
        for occ, amp in self._terms.items():
            if any(n > t for n, t in zip(occ, truncations)):
                raise ValueError(f"occupation {occ} exceeds truncations {tuple(truncations)}")
            out[occ] = amp
        return out

    def __repr__(self):
        return (
            f"MultiModeState(n_terms={len(self)}, ladder={self.ladder.energies}, "
            f"norm_squared={self.norm_squared:.12g})"
        )


class _FrozenDict(dict):
    def _readonly(self, *args, **kwargs):
        raise TypeError("MultiModeState terms are read-only")

    __setitem__ = __delitem__ = clear = pop = popitem = setdefault = update = _readonly


def default_truncation(alpha: complex) -> int:
    """Photon-number cutoff whose Poisson tail mass is below 1e-10 for ``|alpha| <= 6``."""
    mean = abs(alpha) ** 2
    return max(16, math.ceil(mean + 8.0 * math.sqrt(mean + 1.0)))


def fock_coefficient(n: int, alpha: complex) -> complex:
    """``<n|alpha> = exp(-|alpha|^2/2) alpha^n / sqrt(n!)``, evaluated in log space."""
    if n < 0:
        return 0j
    r = abs(alpha)
    if r == 0.0:
        return 1.0 + 0j if n == 0 else 0j
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * math.lgamma(n + 1)
    return math.exp(log_mag) * (complex(alpha) / r) ** n


def coherent_amplitudes(alpha: complex, n_max: int | None = None) -> FockVector:
    """Truncated number-basis expansion of the coherent state ``|alpha>``.

    Uses the recurrence ``c_n = c_{n-1} alpha / sqrt(n)`` from
    ``c_0 = exp(-|alpha|^2 / 2)``.  When ``n_max`` is omitted the default
    truncation rule is applied.  A :class:`TruncationWarning` is emitted if
    the captured norm falls short of one by more than ``1e-10``; inspect
    ``norm_squared`` on the result for the captured value.
    """
    if n_max is None:
        n_max = default_truncation(alpha)
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    alpha = complex(alpha)
    amps = np.empty(n_max + 1, dtype=complex)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_max + 1):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    vec = FockVector(amps)
    if vec.norm_squared < 1.0 - NORM_TOL:
        warnings.warn(
            f"coherent expansion of alpha={alpha} truncated at n_max={n_max} "
            f"captures norm {vec.norm_squared:.15g}",
            TruncationWarning,
            stacklevel=2,
        )
    return vec


def fock_state(n: int, n_max: int | None = None) -> FockVector:
    if n_max is None:
        n_max = n
    if not 0 <= n <= n_max:
        raise ValueError(f"need 0 <= n <= n_max, got n={n}, n_max={n_max}")
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def inner_product(a: FockVector, b: FockVector) -> complex:
    """``<a|b>``; the shorter vector is implicitly zero-padded."""
    k = min(len(a), len(b))
    return complex(np.vdot(a.amplitudes[:k], b.amplitudes[:k]))


def coherent_overlap(alpha: complex, gamma: complex) -> complex:
    """Exact overlap ``<alpha|gamma>`` of two coherent states."""
    alpha, gamma = complex(alpha), complex(gamma)
    return complex(np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * abs(gamma) ** 2 + alpha.conjugate() * gamma))


def product_coherent_state(
    amplitudes: Sequence[complex],
    ladder: ModeLadder,
    truncations: Sequence[int] | None = None,
) -> MultiModeState:
    """Product of coherent states, one per mode of ``ladder``.

    ``amplitudes[0]`` is the (already depleted) driving amplitude and the
    remaining entries are the harmonic amplitudes in ladder order.
    """
    amplitudes = list(amplitudes)
    if len(amplitudes) != ladder.n_modes:
        raise ValueError(
            f"got {len(amplitudes)} amplitudes for a ladder of {ladder.n_modes} modes"
        )
    if truncations is None:
        truncations = [default_truncation(a) for a in amplitudes]
    truncations = list(truncations)
    if len(truncations) != ladder.n_modes:
        raise ValueError(
            f"got {len(truncations)} truncations for a ladder of {ladder.n_modes} modes"
        )
    per_mode = []
    for alpha, n_max in zip(amplitudes, truncations):
        vec = coherent_amplitudes(alpha, n_max)
        per_mode.append([(n, c) for n, c in enumerate(vec.amplitudes) if abs(c) >= PRUNE_TOL])
    terms = {}
    for combo in itertools.product(*per_mode):
        occ = tuple(n for n, _ in combo)
        amp = 1.0 + 0j
        for _, c in combo:
            amp *= c
        terms[occ] = amp
    return MultiModeState(terms, ladder)
