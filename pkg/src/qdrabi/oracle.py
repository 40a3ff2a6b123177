"""Brute-force validator on a truncated Fock basis.

Builds the transformed Hamiltonian on |s, m, n> product states (dot level,
fundamental photons, second-harmonic photons), propagates exactly by
spectral decomposition, and rotates into the interaction picture so the
result is directly comparable to the six-amplitude integrator.

Restricted mode zeroes every off-diagonal element touching a state outside
the six-state manifold, reproducing the truncation behind the amplitude
equations exactly.  Full mode keeps everything the cutoffs allow, so the
probability that leaks out of the manifold measures the truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import ManifoldAmplitudes, ManifoldIndex, TimeSeries
from .errors import ConfigError, GridMismatchError
from .model import ModelParams

__all__ = [
    "BasisState",
    "FockOperatorMatrix",
    "OracleResult",
    "MAX_FULL_CUTOFF",
    "basis_states",
    "basis_index",
    "manifold_states",
    "default_cutoffs",
    "build_hamiltonian",
    "propagate",
    "to_interaction_picture",
    "run_oracle",
    "compare",
]

MAX_FULL_CUTOFF = 16


@dataclass(frozen=True)
class BasisState:
    """Product state |s, m, n>: dot level (1 or 2) and the two photon numbers."""

    s: int
    m: int
    n: int

    def __post_init__(self):
        if self.s not in (1, 2):
            raise ValueError(f"dot level must be 1 or 2, got {self.s}")
        if self.m < 0 or self.n < 0:
            raise ValueError(f"photon numbers must be >= 0, got m={self.m}, n={self.n}")


def basis_states(n_a: int, n_b: int) -> list[BasisState]:
    """Total ordered enumeration: s-major, then m, then n."""
    return [
        BasisState(s, m, n)
        for s in (1, 2)
        for m in range(n_a + 1)
        for n in range(n_b + 1)
    ]


def basis_index(s: int, m: int, n: int, n_a: int, n_b: int) -> int:
    """Position of |s, m, n> in the basis_states ordering."""
    return (s - 1) * (n_a + 1) * (n_b + 1) + m * (n_b + 1) + n


def manifold_states(index: ManifoldIndex) -> tuple[BasisState, ...]:
    """The six states around |2, m, n>, ordered to match the amplitude layout a..f."""
    m, n = index.m, index.n
    return (
        BasisState(2, m + 2, n),
        BasisState(2, m, n + 1),
        BasisState(1, m, n + 1),
        BasisState(2, m, n),
        BasisState(1, m + 2, n),
        BasisState(1, m + 1, n),
    )


def default_cutoffs(index: ManifoldIndex, mode: str) -> tuple[int, int]:
    """Smallest cutoffs valid for the mode: tight for restricted, +2 margin for full."""
    if mode == "restricted":
        return index.m + 2, index.n + 1
    return index.m + 4, index.n + 3


@dataclass(frozen=True)
class FockOperatorMatrix:
    """Dense Hermitian Hamiltonian on the truncated basis, plus its layout."""

    matrix: np.ndarray
    n_a: int
    n_b: int
    mode: str
    params: ModelParams
    index: ManifoldIndex

    @property
    def dimension(self) -> int:
        return 2 * (self.n_a + 1) * (self.n_b + 1)


def _free_energies(params: ModelParams, n_a: int, n_b: int) -> np.ndarray:
    """Diagonal of the uncoupled Hamiltonian; the shifted exciton level sits on s=2 only."""
    level = params.omega_ex - params.shift
    e0 = np.empty(2 * (n_a + 1) * (n_b + 1))
    for s in (1, 2):
        for m in range(n_a + 1):
            for n in range(n_b + 1):
                e0[basis_index(s, m, n, n_a, n_b)] = (
                    params.omega_a * m + params.omega_b * n + level * (s - 1)
                )
    return e0


def build_hamiltonian(
    params: ModelParams,
    n_a: int,
    n_b: int,
    mode: str = "full",
    index: ManifoldIndex = ManifoldIndex(),
) -> FockOperatorMatrix:
    """Assemble the transformed Hamiltonian with the phonon operator at its mean exp(-lam/2).

    Photon cutoffs must contain the manifold (n_a >= m+2, n_b >= n+1); full
    mode additionally demands two quanta of headroom in each mode and caps
    cutoffs at MAX_FULL_CUTOFF.  The matrix is exactly conjugate-symmetric by
    construction.
    """
    if mode not in ("restricted", "full"):
        raise ConfigError(f"oracle mode must be 'restricted' or 'full', got {mode!r}")
    need_a, need_b = index.m + 2, index.n + 1
    if n_a < need_a or n_b < need_b:
        raise ConfigError(
            f"cutoffs ({n_a}, {n_b}) cannot contain the (m={index.m}, n={index.n}) "
            f"manifold; need at least ({need_a}, {need_b})"
        )
    if mode == "full":
        if n_a < need_a + 2 or n_b < need_b + 2:
            raise ConfigError(
                f"full mode needs two quanta of headroom beyond the manifold: "
                f"cutoffs ({n_a}, {n_b}) < ({need_a + 2}, {need_b + 2})"
            )
        if n_a > MAX_FULL_CUTOFF or n_b > MAX_FULL_CUTOFF:
            raise ConfigError(
                f"full-mode cutoffs are capped at {MAX_FULL_CUTOFF}, got ({n_a}, {n_b})"
            )

    dim = 2 * (n_a + 1) * (n_b + 1)
    ham = np.zeros((dim, dim), dtype=complex)
    np.fill_diagonal(ham, _free_energies(params, n_a, n_b))

    ga = params.dressed_g_a()
    gb = params.dressed_g_b()

    def put(i: int, j: int, value: float):
        ham[i, j] = value
        ham[j, i] = value

    # sigma+ a + sigma- a^dag: |2,m,n> <-> |1,m+1,n>, element sqrt(m+1)
    for m in range(n_a):
        for n in range(n_b + 1):
            put(basis_index(2, m, n, n_a, n_b), basis_index(1, m + 1, n, n_a, n_b),
                ga * math.sqrt(m + 1))
    # sigma+ b + sigma- b^dag: |2,m,n> <-> |1,m,n+1>, element sqrt(n+1)
    for m in range(n_a + 1):
        for n in range(n_b):
            put(basis_index(2, m, n, n_a, n_b), basis_index(1, m, n + 1, n_a, n_b),
                gb * math.sqrt(n + 1))
    # b (a^dag)^2 + b^dag a^2: |s,m,n+1> <-> |s,m+2,n>, element sqrt((n+1)(m+1)(m+2))
    for s in (1, 2):
        for m in range(n_a - 1):
            for n in range(n_b):
                put(basis_index(s, m + 2, n, n_a, n_b), basis_index(s, m, n + 1, n_a, n_b),
                    params.g_nl * math.sqrt((n + 1) * (m + 1) * (m + 2)))

    if mode == "restricted":
        keep = np.zeros(dim, dtype=bool)
        for state in manifold_states(index):
            keep[basis_index(state.s, state.m, state.n, n_a, n_b)] = True
        mask = np.outer(keep, keep)
        np.fill_diagonal(mask, True)
        ham[~mask] = 0.0

    return FockOperatorMatrix(matrix=ham, n_a=n_a, n_b=n_b, mode=mode,
                              params=params, index=index)


def propagate(ham, psi0, times) -> np.ndarray:
    """Evolve psi0 under a time-independent Hermitian matrix, one row per time.

    Spectral decomposition is done once; each time is a phase rotation in the
    eigenbasis, so the evolution is unitary to eigensolver accuracy and the
    norm of psi0 is preserved.
    """
    matrix = ham.matrix if isinstance(ham, FockOperatorMatrix) else np.asarray(ham, dtype=complex)
    psi0 = np.asarray(psi0, dtype=complex)
    times = np.asarray(times, dtype=float)
    try:
        energies, vectors = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        scale = float(np.abs(matrix).max()) if matrix.size else 0.0
        raise RuntimeError(
            f"eigendecomposition failed for a {matrix.shape[0]}x{matrix.shape[1]} "
            f"matrix with max |entry| {scale:.3e}: {exc}"
        ) from exc
    coeffs = vectors.conj().T @ psi0
    phases = np.exp(-1j * np.outer(times, energies))
    return (phases * coeffs) @ vectors.T


def to_interaction_picture(psi_t, times, params: ModelParams, n_a: int, n_b: int) -> np.ndarray:
    """Slowly varying amplitudes: each component gains exp(+i E0_k t) against its free energy."""
    e0 = _free_energies(params, n_a, n_b)
    times = np.asarray(times, dtype=float)
    return np.exp(1j * np.outer(times, e0)) * psi_t


@dataclass
class OracleResult:
    """Manifold-projected oracle trajectory plus the probability that left the manifold."""

    t: np.ndarray
    amplitudes: np.ndarray
    p2: np.ndarray
    norm: np.ndarray
    leakage: np.ndarray
    mode: str

    def max_leakage(self) -> float:
        return float(self.leakage.max())


def run_oracle(
    params: ModelParams,
    times,
    index: ManifoldIndex = ManifoldIndex(),
    y0: ManifoldAmplitudes | None = None,
    mode: str = "restricted",
    cutoffs: tuple[int, int] | None = None,
) -> OracleResult:
    """Propagate the truncated-basis Hamiltonian and project onto the manifold."""
    if y0 is None:
        y0 = ManifoldAmplitudes.unit("d")
    n_a, n_b = cutoffs if cutoffs is not None else default_cutoffs(index, mode)
    ham = build_hamiltonian(params, n_a, n_b, mode=mode, index=index)

    slots = [basis_index(st.s, st.m, st.n, n_a, n_b) for st in manifold_states(index)]
    psi0 = np.zeros(ham.dimension, dtype=complex)
    y0_flat = y0.as_tuple()
    for k, slot in enumerate(slots):
        psi0[slot] = complex(y0_flat[2 * k], y0_flat[2 * k + 1])

    psi_t = propagate(ham, psi0, times)
    inside = (np.abs(psi_t[:, slots]) ** 2).sum(axis=1)
    total = (np.abs(psi_t) ** 2).sum(axis=1)
    amps_c = to_interaction_picture(psi_t, times, params, n_a, n_b)[:, slots]

    amplitudes = np.empty((len(amps_c), 12))
    amplitudes[:, 0::2] = amps_c.real
    amplitudes[:, 1::2] = amps_c.imag
    p2 = amplitudes[:, 6] ** 2 + amplitudes[:, 7] ** 2
    return OracleResult(t=np.asarray(times, dtype=float), amplitudes=amplitudes, p2=p2,
                        norm=total, leakage=total - inside, mode=mode)


def compare(oracle: OracleResult, ode: TimeSeries) -> float:
    """Largest componentwise amplitude difference; demands identical time grids."""
    if len(oracle.t) != len(ode.t) or not np.array_equal(oracle.t, ode.t):
        raise GridMismatchError(
            f"time grids differ ({len(oracle.t)} vs {len(ode.t)} samples)"
        )
    return float(np.abs(oracle.amplitudes - ode.amplitudes).max())
