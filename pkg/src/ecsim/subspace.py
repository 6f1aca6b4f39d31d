"""Energy-conserving subspaces, projections onto them, and IR-mode reductions.

A subspace of total energy ``N`` (in units of the driving frequency) is the
span of all occupation tuples ``t`` with ``sum(energies[m] * t[m]) == N``.
Membership is decided with integer arithmetic only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import EmptySubspaceError, InconsistentBasisError, UndefinedMixtureError
from .fockspace import FockVector, ModeLadder, MultiModeState

__all__ = [
    "SubspaceBasis",
    "DiagonalMixture",
    "enumerate_energy_basis",
    "subspace_energy",
    "project",
    "window_energies",
    "windowed_project",
    "condition_on_harmonic",
    "reduce_ir_diagonal",
    "photon_loss",
]


@dataclass(frozen=True)
class SubspaceBasis:
    total_energy: int
    tuples: tuple[tuple[int, ...], ...]
    ladder: ModeLadder

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, occ):
        return tuple(occ) in self._members

    @property
    def _members(self) -> frozenset:
        # cached lazily; dataclass is frozen so go through __dict__
        try:
            return self.__dict__["_member_set"]
        except KeyError:
            members = frozenset(self.tuples)
            object.__setattr__(self, "_member_set", members)
            return members


@dataclass(frozen=True)
class DiagonalMixture:
    """Photon-number mixture of the driving mode.

    ``probabilities`` maps IR photon number to weight and is normalized;
    ``norm_probability`` is the weight of the projected state before
    normalization.
    """

    probabilities: Mapping[int, float]
    norm_probability: float

    def __post_init__(self):
        probs = {int(n): float(p) for n, p in sorted(self.probabilities.items())}
        if any(p < 0 for p in probs.values()):
            raise ValueError("mixture probabilities must be nonnegative")
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def deterministic(cls, n: int) -> DiagonalMixture:
        return cls({n: 1.0}, 1.0)

    def mean_photon_number(self) -> float:
        return float(sum(n * p for n, p in self.probabilities.items()))

    def density_matrix(self, n_max: int | None = None) -> np.ndarray:
        if n_max is None:
            n_max = max(self.probabilities)
        rho = np.zeros((n_max + 1, n_max + 1))
        for n, p in self.probabilities.items():
            rho[n, n] = p
        return rho


def _iter_occupations(
    remaining: int, energies: Sequence[int], caps: Sequence[int | None]
) -> Iterator[tuple[int, ...]]:
    # harmonic modes are filled from the lowest order upward; the IR mode
    # (energy 1) absorbs whatever energy is left
    if len(energies) == 1:
        cap = caps[0]
        if cap is None or remaining <= cap:
            yield (remaining,)
        return
    e, cap = energies[-1], caps[-1]
    top = remaining // e
    if cap is not None:
        top = min(top, cap)
    for n in range(top + 1):
        for head in _iter_occupations(remaining - e * n, energies[:-1], caps[:-1]):
            yield head + (n,)


def enumerate_energy_basis(
    N: int, ladder: ModeLadder, truncations: Sequence[int] | None = None
) -> SubspaceBasis:
    """All occupation tuples of total energy ``N`` within the per-mode truncations.

    ``truncations=None`` leaves every mode unbounded (the energy constraint
    already bounds each occupation).  For a two-mode ladder ``(1, q)`` the
    tuples come out as ``(N, 0), (N - q, 1), ...`` in increasing harmonic
    occupation.
    """
    if N < 0:
        raise ValueError("total energy must be nonnegative")
    caps = [None] * ladder.n_modes if truncations is None else list(truncations)
    if len(caps) != ladder.n_modes:
        raise ValueError("need one truncation per mode")
    tuples = sorted(_iter_occupations(int(N), ladder.energies, caps), key=lambda t: t[:0:-1])
    return SubspaceBasis(int(N), tuple(tuples), ladder)


def subspace_energy(basis: SubspaceBasis) -> int:
    """Total energy shared by every tuple of ``basis``; raises if they disagree."""
    if not basis.tuples:
        raise EmptySubspaceError("the energy of an empty subspace is undefined")
    energies = {basis.ladder.energy(t) for t in basis.tuples}
    if len(energies) != 1:
        raise InconsistentBasisError(f"basis tuples carry several energies: {sorted(energies)}")
    return energies.pop()


def _check_ladder(state: MultiModeState, ladder: ModeLadder):
    if state.ladder != ladder:
        raise ValueError(
            f"ladder mismatch: state has {state.ladder.energies}, basis has {ladder.energies}"
        )


def project(state: MultiModeState, basis: SubspaceBasis) -> MultiModeState:
    """Apply the subspace projector to ``state``; the result is not renormalized."""
    _check_ladder(state, basis.ladder)
    return MultiModeState({occ: amp for occ, amp in state if occ in basis}, state.ladder)


def window_energies(N0: int, dN: int) -> list[int]:
    """Integer energies ``N0 - dN, ..., N0 + dN``, clipped at zero."""
    if N0 < 0 or dN < 0:
        raise ValueError("N0 and dN must be nonnegative")
    return list(range(max(0, N0 - dN), N0 + dN + 1))


def windowed_project(
    state: MultiModeState,
    N0: int,
    dN: int,
    ladder: ModeLadder | None = None,
    truncations: Sequence[int] | None = None,
) -> MultiModeState:
    """Sum of the projections onto every energy in ``[N0 - dN, N0 + dN]``."""
    ladder = state.ladder if ladder is None else ladder
    _check_ladder(state, ladder)
    terms = {}
    for N in window_energies(N0, dN):
        basis = enumerate_energy_basis(N, ladder, truncations)
        for occ, amp in project(state, basis):
            terms[occ] = amp
    return MultiModeState(terms, ladder)


def condition_on_harmonic(state: MultiModeState, mode_index: int, n_q: int) -> FockVector:
    """Driving-mode vector left after projecting harmonic ``mode_index`` on ``|n_q>``.

    The result is not normalized.  When nothing survives the projection the
    zero vector is returned (check ``FockVector.is_zero``).  For ladders with
    more than two modes the remaining harmonics must be left in a single
    occupation pattern, otherwise the driving mode is not in a pure state.
    """
    n_modes = state.ladder.n_modes
    if n_modes < 2:
        raise ValueError("conditioning needs at least one harmonic mode")
    if not 1 <= mode_index < n_modes:
        raise ValueError(f"mode_index must address a harmonic mode, got {mode_index}")
    if n_q < 0:
        raise ValueError("n_q must be nonnegative")
    kept = {}
    others = set()
    for occ, amp in state:
        if occ[mode_index] != n_q:
            continue
        others.add(tuple(n for m, n in enumerate(occ[1:], 1) if m != mode_index))
        kept[occ[0]] = kept.get(occ[0], 0j) + amp
    if len(others) > 1:
        raise ValueError(
            "conditioned state still populates several patterns of the other harmonics"
        )
    amps = np.zeros(max(kept, default=0) + 1, dtype=complex)
    for n, amp in kept.items():
        amps[n] = amp
    return FockVector(amps)


def _require_two_mode(state: MultiModeState):
    if state.ladder.n_modes != 2:
        raise ValueError("reduction is defined for a driving mode plus a single harmonic")


def reduce_ir_diagonal(state: MultiModeState, basis: SubspaceBasis) -> DiagonalMixture:
    """Reduced driving-mode state after projecting ``state`` on ``basis``.

    Inside one energy subspace each IR photon number pairs with exactly one
    harmonic occupation, so the partial trace over the harmonic is diagonal.
    """
    _require_two_mode(state)
    projected = project(state, basis)
    weight = projected.norm_squared
    if weight == 0.0:
        raise UndefinedMixtureError(
            f"state has no weight in the subspace of energy {basis.total_energy}"
        )
    probs = {}
    for (n_ir, _), amp in projected:
        probs[n_ir] = probs.get(n_ir, 0.0) + (amp.real**2 + amp.imag**2) / weight
    return DiagonalMixture(probs, weight)


def photon_loss(mixture: DiagonalMixture, N: int, q: int) -> float:
    """Mean number of driving photons converted into harmonic photons.

    An IR outcome ``n`` in the subspace of energy ``N`` comes with
    ``(N - n) / q`` harmonic photons, each costing ``q`` driving photons.
    """
    loss = 0.0
    for n_ir, p in mixture.probabilities.items():
        n_q, rest = divmod(N - n_ir, q)
        if rest or n_q < 0:
            raise ValueError(f"IR photon number {n_ir} is not in the subspace N={N}, q={q}")
        loss += p * q * n_q
    return loss
