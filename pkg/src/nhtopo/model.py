"""Two-band non-Hermitian chain and its Lindblad realization.

The model lives on a 1D lattice of ``cells`` unit cells with two sublattice
sites (a, b) per cell.  Its Bloch Hamiltonian is

    H(k) = (u - t cos k) sigma_z + j sin k sigma_y - i gamma sin k sigma_x,

a two-band chain whose anti-Hermitian part is an asymmetric inter-cell
hopping of strength gamma/2.  The same physics arises as the conditional
(no-jump) evolution of a Hermitian chain coupled to a Markovian bath through
bond-local jump operators; :func:`verify_lindblad_consistency` checks that
identity at the single-particle level.

All lattice matrices use the site ordering (a_1, b_1, a_2, b_2, ..., a_L, b_L).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ComplexGapError, GammaZeroError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class BoundaryCondition(Enum):
    """Boundary condition of the finite chain."""

    PERIODIC = "periodic"
    OPEN = "open"


@dataclass(frozen=True)
class ModelParams:
    """Parameter set of the two-band chain.

    Attributes
    ----------
    u : float
        Staggered onsite energy.
    t : float
        Intra-sublattice (a-a, b-b) hopping; must be >= 0.
    j : float
        Reciprocal a-b coupling; must be > 0.
    gamma : float
        Non-Hermitian coupling; restricted to |gamma| < j.
    temperature : float
        Bath temperature, >= 0.  Zero is treated as a limit flag by the
        consumers that support it, never as a division by zero.
    cells : int
        Number of unit cells L, >= 2.
    """

    u: float
    t: float
    j: float
    gamma: float
    temperature: float = 1.0
    cells: int = 50

    def __post_init__(self):
        if not self.t >= 0.0:
            raise ValueError(f"t must be >= 0, got {self.t}")
        if not self.j > 0.0:
            raise ValueError(f"j must be > 0, got {self.j}")
        if not abs(self.gamma) < self.j:
            raise ValueError(f"|gamma| must be < j, got gamma={self.gamma}, j={self.j}")
        if not self.temperature >= 0.0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if not (isinstance(self.cells, (int, np.integer)) and self.cells >= 2):
            raise ValueError(f"cells must be an integer >= 2, got {self.cells}")

    @property
    def beta(self) -> float:
        """Inverse temperature 1/T; raises at the T = 0 limit flag."""
        if self.temperature == 0.0:
            raise ValueError("beta is undefined at temperature = 0 (zero-T limit flag)")
        return 1.0 / self.temperature

    @property
    def zero_temperature(self) -> bool:
        return self.temperature == 0.0


# ---------------------------------------------------------------------------
# momentum space
# ---------------------------------------------------------------------------

def bloch_components(params: ModelParams, k, sin_shift: float = 0.0):
    """Return the coefficient functions (d_z, d_y, d_x) of the Bloch matrix.

    ``d_x`` is the purely imaginary sigma_x coefficient ``-i gamma sin k``.
    ``sin_shift`` adds a constant to sin k in both bond terms, breaking
    reciprocity between cells.
    """
    k = np.asarray(k, dtype=float)
    s = np.sin(k) + sin_shift
    d_z = params.u - params.t * np.cos(k)
    d_y = params.j * s
    d_x = -1.0j * params.gamma * s
    return d_z, d_y, d_x


def bloch_hamiltonian(params: ModelParams, k, sin_shift: float = 0.0) -> np.ndarray:
    """Bloch Hamiltonian H(k).

    Parameters
    ----------
    params : ModelParams
    k : float or array_like
        Momentum in radians; any real value is accepted (no reduction to
        the first Brillouin zone is performed).
    sin_shift : float
        Non-reciprocal offset replacing sin k by sin k + sin_shift.

    Returns
    -------
    np.ndarray
        Complex matrix of shape (2, 2), or (..., 2, 2) for array ``k``.
    """
    d_z, d_y, d_x = bloch_components(params, k, sin_shift)
    d_z, d_y, d_x = np.broadcast_arrays(d_z, d_y, d_x)
    out = (
        np.multiply.outer(d_z, SIGMA_Z)
        + np.multiply.outer(d_y, SIGMA_Y)
        + np.multiply.outer(d_x, SIGMA_X)
    )
    return out


def band_gap(params: ModelParams, k):
    """Direct band gap Delta_k = |E_+(k) - E_-(k)| of the Bloch matrix.

    Evaluates 2 sqrt(u^2 + j^2 - g^2 + (t^2 - j^2 + g^2) cos^2 k - 2 u t cos k),
    which is real throughout the |gamma| < j regime.

    Raises
    ------
    ComplexGapError
        If the radicand is genuinely negative (only possible outside the
        parameter regime enforced by :class:`ModelParams`).
    """
    k = np.asarray(k, dtype=float)
    c = np.cos(k)
    g2 = params.gamma**2
    radicand = (
        params.u**2
        + params.j**2
        - g2
        + (params.t**2 - params.j**2 + g2) * c**2
        - 2.0 * params.u * params.t * c
    )
    scale = params.u**2 + params.t**2 + params.j**2
    if np.any(radicand < -1e-12 * max(scale, 1.0)):
        raise ComplexGapError(f"negative gap radicand (min {np.min(radicand)})")
    gap = 2.0 * np.sqrt(np.clip(radicand, 0.0, None))
    return gap if gap.ndim else float(gap)


def gap_closing_points(params: ModelParams) -> tuple[float, float]:
    """Onsite energies (u_g-, u_g+) = (-t, +t) where min_k Delta_k = 0."""
    return (-params.t, params.t)


# ---------------------------------------------------------------------------
# real space
# ---------------------------------------------------------------------------

def hopping_blocks(params: ModelParams, sin_shift: float = 0.0):
    """2x2 blocks (onsite, forward, backward) of the real-space chain.

    The forward block couples cell j to cell j+1 and is the coefficient of
    e^{-ik} in H(k); the backward block is its e^{+ik} counterpart.
    """
    u, t, j, g = params.u, params.t, params.j, params.gamma
    onsite = u * SIGMA_Z + sin_shift * (j * SIGMA_Y - 1.0j * g * SIGMA_X)
    forward = np.array(
        [[-t / 2.0, (j + g) / 2.0], [-(j - g) / 2.0, t / 2.0]], dtype=complex
    )
    backward = np.array(
        [[-t / 2.0, -(j + g) / 2.0], [(j - g) / 2.0, t / 2.0]], dtype=complex
    )
    return onsite, forward, backward


def lattice_hamiltonian(
    params: ModelParams,
    bc: BoundaryCondition = BoundaryCondition.OPEN,
    sin_shift: float = 0.0,
) -> np.ndarray:
    """Real-space single-particle Hamiltonian of the chain (2L x 2L).

    Under periodic boundaries its eigenvalue multiset equals the union of
    the Bloch eigenvalues over k = 2 pi n / L.
    """
    L = params.cells
    onsite, fwd, bwd = hopping_blocks(params, sin_shift)
    h = np.zeros((2 * L, 2 * L), dtype=complex)
    for c in range(L):
        h[2 * c : 2 * c + 2, 2 * c : 2 * c + 2] = onsite
        nxt = c + 1
        if nxt >= L:
            if bc is BoundaryCondition.OPEN:
                continue
            nxt = 0
        h[2 * c : 2 * c + 2, 2 * nxt : 2 * nxt + 2] += fwd
        h[2 * nxt : 2 * nxt + 2, 2 * c : 2 * c + 2] += bwd
    return h


def hermitian_part(h: np.ndarray) -> np.ndarray:
    """(h + h^dagger)/2."""
    return 0.5 * (h + h.conj().T)


# ---------------------------------------------------------------------------
# jump operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LindbladSet:
    """Single-particle coefficient vectors of the bond jump operators.

    Each operator annihilates the combination  a_j + i sgn(gamma) b_{j+1}
    (family 1) or  b_j + i sgn(gamma) a_{j+1}  (family 2), scaled by
    ``prefactor``.  Under open boundaries the index j runs over 0..L with
    out-of-chain amplitudes dropped, so the two single-site operators at
    each end appear unless explicitly disabled; they make the summed
    dissipator exactly proportional to the identity in its density part.

    The rate normalization ``prefactor = sqrt(|gamma|)`` is fixed by
    requiring that the no-jump generator reproduce the chain Hamiltonian,
    see :func:`verify_lindblad_consistency`.
    """

    operators: list = field(repr=False)
    prefactor: float = 0.0
    boundary_included: bool = True

    def __len__(self) -> int:
        return len(self.operators)

    def dissipator_matrix(self) -> np.ndarray:
        """Single-particle matrix sum of l^dagger l over all operators."""
        n = self.operators[0].shape[0]
        m = np.zeros((n, n), dtype=complex)
        for v in self.operators:
            m += np.outer(v.conj(), v)
        return m


def lindblad_operators(
    params: ModelParams,
    bc: BoundaryCondition = BoundaryCondition.OPEN,
    drop_boundary: bool = False,
) -> LindbladSet:
    """Bond jump operators coupling the chain to the loss channel.

    Parameters
    ----------
    params : ModelParams
        Requires gamma != 0 (the phase factor i gamma/|gamma| has no limit).
    bc : BoundaryCondition
    drop_boundary : bool
        Under open boundaries, drop the single-site operators produced by
        the j = 0 and j = L ends of the index range.

    Returns
    -------
    LindbladSet
        2L vectors (periodic) or 2(L+1) vectors (open, boundary included).

    Raises
    ------
    GammaZeroError
    """
    if params.gamma == 0.0:
        raise GammaZeroError("jump operators are undefined at gamma = 0")
    L = params.cells
    n = 2 * L
    sign = 1.0 if params.gamma > 0 else -1.0
    pref = np.sqrt(abs(params.gamma))
    phase = 1.0j * sign * pref

    def a(c):  # site index of a_c, cells counted from 0
        return 2 * c

    def b(c):
        return 2 * c + 1

    periodic = bc is BoundaryCondition.PERIODIC
    if periodic:
        cell_range = range(L)
    else:
        # bulk bonds couple cells c and c+1; the extended range adds the
        # single-site end operators
        cell_range = range(L - 1) if drop_boundary else range(-1, L + 1)

    ops = []
    for c in cell_range:
        nxt = (c + 1) % L if periodic else c + 1
        v1 = np.zeros(n, dtype=complex)
        v2 = np.zeros(n, dtype=complex)
        if 0 <= c < L:
            v1[a(c)] = pref
            v2[b(c)] = pref
        if periodic or 0 <= nxt < L:
            v1[b(nxt)] += phase
            v2[a(nxt)] += phase
        if np.any(v1):
            ops.append(v1)
        if np.any(v2):
            ops.append(v2)
    return LindbladSet(
        operators=ops,
        prefactor=pref,
        boundary_included=periodic or not drop_boundary,
    )


def verify_lindblad_consistency(
    params: ModelParams,
    bc: BoundaryCondition = BoundaryCondition.OPEN,
) -> float:
    """Residual of the no-jump consistency identity, at matrix level.

    The conditional generator of the open chain must reproduce the
    non-Hermitian Hamiltonian up to a constant imaginary shift:

        H = H_S - (i/2) sum_a l_a^dagger l_a + i |gamma| I,

    where H_S is the Hermitian part of H and l_a are the jump-operator
    coefficient vectors assembled into rank-1 matrices.  Returns the
    max-entry norm of the difference; consistency means < 1e-12.

    Raises
    ------
    GammaZeroError
    """
    lset = lindblad_operators(params, bc)
    h = lattice_hamiltonian(params, bc)
    h_s = hermitian_part(h)
    n = h.shape[0]
    generator = h_s - 0.5j * lset.dissipator_matrix() + 1.0j * abs(params.gamma) * np.eye(n)
    return float(np.max(np.abs(h - generator)))
