r"""Wigner functions in the convention ``W_{|n><n|}(b) = (-1)^n / pi exp(-|b|^2) L_n(2|b|^2)``.

This is the common ``(2/pi) exp(-2|a|^2) L_n(4|a|^2)`` form rescaled by
``a = b / sqrt(2)``, so that the vacuum is ``exp(-|b|^2) / pi`` and every
state integrates to one over the ``b`` plane.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .fockspace import FockVector
from .subspace import DiagonalMixture

__all__ = [
    "WignerGrid",
    "laguerre",
    "laguerre_table",
    "wigner_fock_diag",
    "wigner_fock_offdiag",
    "wigner_of_density",
    "wigner_of_fock_vector",
    "wigner_of_diagonal_mixture",
    "wigner_oracle",
    "default_axis",
]

DEFAULT_EXTENT = 6.0
DEFAULT_POINTS = 401


def default_axis(extent: float = DEFAULT_EXTENT, points: int = DEFAULT_POINTS) -> np.ndarray:
    return np.linspace(-extent, extent, points)


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """Wigner values on a rectangular grid; ``values[i, j]`` sits at ``re_axis[j] + 1j * im_axis[i]``."""

    re_axis: np.ndarray
    im_axis: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        for name in ("re_axis", "im_axis", "values"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.values.shape != (self.im_axis.size, self.re_axis.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({self.im_axis.size}, {self.re_axis.size})"
            )

    def integral(self) -> float:
        """Trapezoidal estimate of the integral over the grid."""
        return float(np.trapezoid(np.trapezoid(self.values, self.re_axis, axis=1), self.im_axis))

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())


def laguerre(n: int, x, k: int = 0):
    """Generalized Laguerre polynomial ``L_n^{(k)}(x)`` by upward three-term recurrence."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + k - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
    return cur


def laguerre_table(n_max: int, x, k: int = 0) -> np.ndarray:
    """Stack ``[L_0^{(k)}(x), ..., L_{n_max}^{(k)}(x)]`` along a new leading axis."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + k - x
    for j in range(1, n_max):
        out[j + 1] = ((2 * j + 1 + k - x) * out[j] - (j + k) * out[j - 1]) / (j + 1)
    return out


def wigner_fock_diag(n: int, beta):
    """Wigner function of the number state ``|n><n|``."""
    beta = np.asarray(beta)
    r2 = np.abs(beta) ** 2
    w = (-1) ** n / math.pi * np.exp(-r2) * laguerre(n, 2.0 * r2)
    return w if w.ndim else float(w)


def _offdiag_kernel(n: int, m: int, beta: np.ndarray, lag: np.ndarray) -> np.ndarray:
    # m >= n; lag = L_n^{(m-n)}(2|beta|^2)
    k = m - n
    r2 = np.abs(beta) ** 2
    log_pref = 0.5 * (math.lgamma(n + 1) - math.lgamma(m + 1))
    return (
        (-1) ** n / math.pi
        * math.exp(log_pref)
        * (math.sqrt(2.0) * np.conj(beta)) ** k
        * np.exp(-r2)
        * lag
    )


def wigner_fock_offdiag(n: int, m: int, beta):
    """Number-basis element ``<n|Delta(beta)|m>`` of the Wigner kernel.

    For ``m >= n`` this is
    ``(-1)^n / pi sqrt(n!/m!) (sqrt(2) conj(beta))^(m-n) exp(-|beta|^2) L_n^(m-n)(2|beta|^2)``.
    It is the Wigner transform of the operator ``|m><n|``, so a pure state
    ``v`` has ``W = sum_{n,m} conj(v_n) v_m wigner_fock_offdiag(n, m, beta)``.
    Swapping ``n`` and ``m`` conjugates the value; ``n == m`` gives
    :func:`wigner_fock_diag`.
    """
    if n < 0 or m < 0:
        raise ValueError("photon numbers must be nonnegative")
    beta = np.asarray(beta, dtype=complex)
    lo, hi = min(n, m), max(n, m)
    w = _offdiag_kernel(lo, hi, beta, laguerre(lo, 2.0 * np.abs(beta) ** 2, hi - lo))
    if n > m:
        w = np.conj(w)
    return w if w.ndim else complex(w)


def wigner_of_density(rho: np.ndarray, beta) -> np.ndarray:
    """Wigner function of a Hermitian number-basis matrix ``rho``."""
    rho = np.asarray(rho, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    d = rho.shape[0]
    x = 2.0 * np.abs(beta) ** 2
    w = np.zeros(beta.shape)
    for k in range(d):
        diag = np.diagonal(rho, -k)  # rho[n + k, n]
        if k and not np.any(diag):
            continue
        lags = laguerre_table(d - 1 - k, x, k)
        acc = np.zeros(beta.shape, dtype=complex)
        for n, coeff in enumerate(diag):
            if coeff != 0:
                acc += coeff * _offdiag_kernel(n, n + k, beta, lags[n])
        # rho[n+k, n] K[n, n+k] + rho[n, n+k] K[n+k, n] = 2 Re(rho[n+k, n] K[n, n+k])
        w += acc.real if k == 0 else 2.0 * acc.real
    return w


def _mesh(re_axis, im_axis):
    re_axis = np.asarray(re_axis, dtype=float)
    im_axis = np.asarray(im_axis, dtype=float)
    return re_axis, im_axis, re_axis[None, :] + 1j * im_axis[:, None]


def wigner_of_fock_vector(v: FockVector, re_axis, im_axis=None) -> WignerGrid:
    """Wigner function of the pure state ``v`` on a grid; ``v`` must be normalized."""
    if not v.is_normalized(1e-9):
        raise ValueError(f"state is not normalized (norm^2 = {v.norm_squared!r})")
    if im_axis is None:
        im_axis = [0.0]
    re_axis, im_axis, beta = _mesh(re_axis, im_axis)
    return WignerGrid(re_axis, im_axis, wigner_of_density(v.density_matrix(), beta))


def wigner_of_diagonal_mixture(mixture: DiagonalMixture, re_axis, im_axis=None) -> WignerGrid:
    """Probability-weighted sum of number-state Wigner functions.

    With ``im_axis`` omitted the result is the slice along ``Im(beta) = 0``.
    """
    if im_axis is None:
        im_axis = [0.0]
    re_axis, im_axis, beta = _mesh(re_axis, im_axis)
    r2 = np.abs(beta) ** 2
    n_top = max(mixture.probabilities)
    lags = laguerre_table(n_top, 2.0 * r2)
    acc = np.zeros(beta.shape)
    for n, p in mixture.probabilities.items():
        if p:
            acc += p * (-1) ** n * lags[n]
    return WignerGrid(re_axis, im_axis, acc * np.exp(-r2) / math.pi)


# --- independent oracle -------------------------------------------------------

_ORACLE_RADIUS = 18.0
_ORACLE_RADIAL_NODES = 220
_ORACLE_ANGULAR_NODES = 256


@lru_cache(maxsize=4)
def _quadrature_generator_eig(dim: int):
    """Eigendecomposition of ``i (a^dag - a)`` truncated to ``dim`` levels."""
    off = np.sqrt(np.arange(1, dim))
    gen = np.diag(1j * off, -1) - np.diag(1j * off, 1)  # i a^dag - i a
    mu, vecs = np.linalg.eigh(gen)
    return mu, vecs


def wigner_oracle(density_elements, beta, radius: float = _ORACLE_RADIUS,
                  radial_nodes: int = _ORACLE_RADIAL_NODES,
                  angular_nodes: int = _ORACLE_ANGULAR_NODES):
    """Wigner function by numerical Fourier transform of the characteristic function.

    Evaluates ``W(a) = pi^-2 \\int d^2 lam exp(a conj(lam) - conj(a) lam) Tr[rho D(lam)]``
    with ``D(r e^{i theta}) = U(theta) exp(r (a^dag - a)) U(theta)^dag`` built from a
    spectral decomposition in an enlarged truncated space, polar quadrature
    (Gauss-Legendre in ``r``, trapezoid in ``theta``), and the rescaling
    ``beta = sqrt(2) a``.  Shares no code with the Laguerre evaluators.
    """
    rho = np.asarray(density_elements, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T), initial=0.0) > 1e-12:
        raise ValueError("density matrix is not Hermitian")
    beta = np.asarray(beta, dtype=complex)
    alpha = beta.reshape(-1) / math.sqrt(2.0)
    d = rho.shape[0]

    # displaced number states up to d-1 must fit inside the enlarged space
    reach = (radius + math.sqrt(d)) ** 2
    dim = int(reach + 12.0 * math.sqrt(reach) + 50)
    mu, vecs = _quadrature_generator_eig(dim)
    # exp(r (a^dag - a)) = exp(-i r G) with G = i (a^dag - a)
    low = vecs[:d, :]

    x, wx = np.polynomial.legendre.leggauss(radial_nodes)
    r = 0.5 * radius * (x + 1.0)
    wr = 0.5 * radius * wx * r  # polar Jacobian
    theta = 2.0 * math.pi * np.arange(angular_nodes) / angular_nodes
    wtheta = 2.0 * math.pi / angular_nodes
    phase_r = np.exp(-1j * np.outer(r, mu))  # (n_r, dim)
    n_idx = np.arange(d)

    w_std = np.zeros(alpha.size, dtype=complex)
    for th in theta:
        rot = np.exp(1j * th * n_idx)[:, None] * low  # <n|U(theta)|k-th eigvec>
        s = np.einsum("nk,nm,mk->k", rot.conj(), rho, rot)
        # chi(r, theta) = Tr[rho D] = sum_k exp(-i r mu_k) (rot^dag rho rot)_{kk}
        chi = phase_r @ s
        # a conj(lam) - conj(a) lam = 2i r (Im(a) cos(theta) - Re(a) sin(theta))
        c = 2.0 * (alpha.imag * math.cos(th) - alpha.real * math.sin(th))
        w_std += np.exp(1j * np.outer(c, r)) @ (wr * chi)
    w_std *= wtheta / math.pi**2
    w = (0.5 * w_std.real).reshape(beta.shape)
    return w if w.ndim else float(w)
