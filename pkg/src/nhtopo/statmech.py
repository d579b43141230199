"""Steady-state machinery for arbitrary single-particle non-Hermitian systems.

A quadratic non-Hermitian system weakly coupled to a thermal bath through
number-conserving operators C_a relaxes (when thermalizable) to the Gaussian
state e^{-beta H} T_c, where the metric operator T_c is the positive
Hermitian solution of

    conjugacy:   H T_c = T_c H^dagger
    compatibility:  C_a T_c = T_c C_a^dagger   for every coupling,

the second condition being the commutation constraint [T_c, C_a] = 0 for
Hermitian couplings.  For real spectra the conjugacy relation confines T_c
to sums of right-eigenvector dyads, turning the compatibility conditions
into a linear system on the mode weights; :func:`solve_metric` solves it.

Complex spectra are handled by projecting onto the eigenmodes of maximal
imaginary part (the only ones surviving the loss), or equivalently by
trading H for the real-spectrum surrogate H_alpha = Re H - alpha Im H at
large alpha.  :func:`theorem3_check` verifies that the two constructions
produce the same steady-state occupations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .biortho import BiorthogonalDecomposition, biorthogonal_eig, cluster_eigenvalues
from .errors import (
    ComplexSpectrumError,
    NotPositiveDefiniteError,
    NotThermalizableError,
)

NULLSPACE_TOL = 1e-10
_POSITIVITY_FLOOR = 1e-12


@dataclass(frozen=True)
class GeneralSystem:
    """Single-particle Hamiltonian with its bath-coupling operators."""

    h: np.ndarray
    couplings: list = field(default_factory=list)

    def __post_init__(self):
        h = np.asarray(self.h, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"h must be square, got shape {h.shape}")
        object.__setattr__(self, "h", h)
        cs = [np.asarray(c, dtype=complex) for c in self.couplings]
        for c in cs:
            if c.shape != h.shape:
                raise ValueError("couplings must match the Hamiltonian shape")
        object.__setattr__(self, "couplings", cs)

    @property
    def dim(self) -> int:
        return self.h.shape[0]


@dataclass(frozen=True)
class MetricSolution:
    """Metric operator with its mode weights and solver diagnostics."""

    t_c: np.ndarray
    mode_weights: np.ndarray
    basis: BiorthogonalDecomposition
    nullspace_dim: int
    residuals: dict

    @property
    def unique(self) -> bool:
        """True when the constraint nullspace is the single scaling ray."""
        return self.nullspace_dim == 1


@dataclass(frozen=True)
class ReducedSystem:
    """System projected onto the eigenmodes of maximal imaginary part."""

    projector: np.ndarray
    h_reduced: np.ndarray
    couplings_reduced: list
    retained: np.ndarray
    basis: BiorthogonalDecomposition


# ---------------------------------------------------------------------------
# spectral helpers
# ---------------------------------------------------------------------------

def imaginary_shift_normalize(h: np.ndarray, degeneracy_tol: float = 1e-8) -> np.ndarray:
    """Shift H by -i max_m Im(E_m) so the top of the spectrum is real.

    An imaginary constant leaves the normalized state evolution unchanged.

    Raises
    ------
    DefectiveError
    """
    dec = biorthogonal_eig(h, degeneracy_tol)
    shift = float(np.max(dec.eigenvalues.imag))
    return np.asarray(h, dtype=complex) - 1j * shift * np.eye(h.shape[0])


def max_im_projector(
    system, tol: float | None = None, degeneracy_tol: float = 1e-8
) -> ReducedSystem:
    """Biorthogonal projector onto the modes of maximal imaginary part.

    Parameters
    ----------
    system : GeneralSystem or np.ndarray
        Couplings, when present, are projected along with the Hamiltonian.
    tol : float, optional
        Width of the retained Im window; defaults to 1e-9 times the
        spectral radius.

    Raises
    ------
    DefectiveError
    """
    if isinstance(system, GeneralSystem):
        h, couplings = system.h, system.couplings
    else:
        h, couplings = np.asarray(system, dtype=complex), []
    dec = biorthogonal_eig(h, degeneracy_tol)
    radius = float(np.max(np.abs(dec.eigenvalues)))
    if tol is None:
        tol = 1e-9 * max(1.0, radius)
    top = float(np.max(dec.eigenvalues.imag))
    retained = np.flatnonzero(dec.eigenvalues.imag >= top - tol)
    p = dec.right[:, retained] @ dec.left[:, retained].conj().T
    return ReducedSystem(
        projector=p,
        h_reduced=p @ h @ p,
        couplings_reduced=[p @ c @ p for c in couplings],
        retained=retained,
        basis=dec,
    )


def h_alpha(h: np.ndarray, alpha: float, degeneracy_tol: float = 1e-8) -> np.ndarray:
    """Real-spectrum surrogate with eigenvalues Re(E_m) - alpha Im(E_m).

    Shares the eigenvectors of H; at large alpha its thermal state
    suppresses every mode below the maximal imaginary part.

    Raises
    ------
    DefectiveError
    """
    dec = biorthogonal_eig(h, degeneracy_tol)
    values = dec.eigenvalues.real - alpha * dec.eigenvalues.imag
    return dec.reconstruct(values.astype(complex))


# ---------------------------------------------------------------------------
# metric solver
# ---------------------------------------------------------------------------

def _hermitian_block_basis(size: int):
    """Real basis of Hermitian size x size matrices."""
    mats = []
    for p in range(size):
        m = np.zeros((size, size), dtype=complex)
        m[p, p] = 1.0
        mats.append(m)
    for p in range(size):
        for q in range(p + 1, size):
            m = np.zeros((size, size), dtype=complex)
            m[p, q] = m[q, p] = 1.0
            mats.append(m)
            m = np.zeros((size, size), dtype=complex)
            m[p, q] = -1.0j
            m[q, p] = 1.0j
            mats.append(m)
    return mats


def _solve_metric_core(values, right, couplings, cluster_tol, nullspace_tol):
    """Weights/blocks of T_c = sum_c R_c M_c R_c^dagger on a real spectrum.

    Degenerate eigenvalue clusters carry full Hermitian blocks M_c (the
    dyad parametrization is basis-dependent inside a cluster), which keeps
    the solution set complete whatever eigenvector basis the solver chose.
    Returns (t_c, per-mode weights, nullspace dimension).
    """
    n = values.size
    clusters = cluster_eigenvalues(values, cluster_tol)
    param_map = []  # (cluster index array, Hermitian basis matrix)
    is_diagonal = []
    for idx in clusters:
        basis = _hermitian_block_basis(idx.size)
        for pos, b in enumerate(basis):
            param_map.append((idx, b))
            is_diagonal.append(pos < idx.size)
    n_params = len(param_map)

    def assemble(x):
        t = np.zeros((n, n), dtype=complex)
        pos = 0
        for idx, b in param_map:
            t += x[pos] * (right[:, idx] @ b @ right[:, idx].conj().T)
            pos += 1
        return t

    if couplings:
        norm_couplings = [c / max(1.0, np.max(np.abs(c))) for c in couplings]
        cols = np.empty((2 * n * n * len(norm_couplings), n_params))
        for jcol, (idx, b) in enumerate(param_map):
            t_j = right[:, idx] @ b @ right[:, idx].conj().T
            parts = []
            for c in norm_couplings:
                defect = c @ t_j - t_j @ c.conj().T
                parts.append(np.concatenate([defect.real.ravel(), defect.imag.ravel()]))
            cols[:, jcol] = np.concatenate(parts)
        _, svals, vt = np.linalg.svd(cols)
        cutoff = nullspace_tol * max(1.0, float(svals[0])) if svals.size else np.inf
        null_dim = int(np.count_nonzero(svals <= cutoff)) + (n_params - svals.size)
        if null_dim == 0:
            raise NotThermalizableError("coupling constraints admit no metric")
        x = vt[-1]
    else:
        # no couplings: every conjugacy-compatible metric is admissible;
        # default to unit weights (T_c = R R^dagger, the identity for
        # Hermitian Hamiltonians)
        null_dim = n_params
        x = np.asarray(is_diagonal, dtype=float)

    # canonicalize the overall sign through the trace
    t_c = assemble(x)
    if np.real(np.trace(t_c)) < 0:
        x = -x
        t_c = -t_c

    # positivity block by block, and per-mode weights
    weights = np.empty(n)
    pos = 0
    for idx in clusters:
        size = idx.size
        block = np.zeros((size, size), dtype=complex)
        for b in _hermitian_block_basis(size):
            block += x[pos] * b
            pos += 1
        block_eigs = np.linalg.eigvalsh(block)
        if block_eigs[0] <= _POSITIVITY_FLOOR * max(1.0, abs(block_eigs[-1])):
            raise NotThermalizableError(
                "constraint nullspace forces non-positive mode weights"
            )
        weights[idx] = block_eigs
    return t_c, weights, null_dim


def solve_metric(
    system: GeneralSystem,
    tol: float = 1e-8,
    nullspace_tol: float = NULLSPACE_TOL,
) -> MetricSolution:
    """Solve for the metric operator of a real-spectrum system.

    Parameters
    ----------
    system : GeneralSystem
    tol : float
        Relative tolerance both for accepting the spectrum as real and
        for clustering degenerate eigenvalues.
    nullspace_tol : float
        Singular values below nullspace_tol * s_max count as zero when
        extracting the constraint nullspace.

    Returns
    -------
    MetricSolution
        Normalized to det T_c = 1.  A nullspace of dimension > 1 is
        reported through ``nullspace_dim`` (the first basis vector is
        returned in that case).

    Raises
    ------
    ComplexSpectrumError
        If the spectrum is not real within tol * spectral radius.
    NotThermalizableError
        If the nullspace is empty or forces non-positive weights.
    DefectiveError
    """
    dec = biorthogonal_eig(system.h, tol)
    radius = float(np.max(np.abs(dec.eigenvalues))) if dec.dim else 0.0
    if np.max(np.abs(dec.eigenvalues.imag)) > tol * max(1.0, radius):
        raise ComplexSpectrumError(
            "metric solver requires a real spectrum; use the max-Im reduction"
        )
    values = dec.eigenvalues.real
    t_c, weights, null_dim = _solve_metric_core(
        values, dec.right, system.couplings, tol * max(1.0, radius), nullspace_tol
    )

    # det-normalize (the overall scale is unphysical)
    _, logdet = np.linalg.slogdet(t_c)
    scale = np.exp(-logdet / system.dim)
    t_c = t_c * scale
    weights = weights * scale
    t_c = 0.5 * (t_c + t_c.conj().T)

    residuals = _metric_residuals(system, t_c)
    return MetricSolution(
        t_c=t_c,
        mode_weights=weights,
        basis=dec,
        nullspace_dim=null_dim,
        residuals=residuals,
    )


def _metric_residuals(system: GeneralSystem, t_c: np.ndarray) -> dict:
    h = system.h
    res = {
        "conjugacy": float(np.max(np.abs(h @ t_c - t_c @ h.conj().T))),
        # undaggered variant kept for audit only
        "conjugacy_undaggered": float(np.max(np.abs(h @ t_c - t_c @ h))),
    }
    if system.couplings:
        res["coupling"] = max(
            float(np.max(np.abs(c @ t_c - t_c @ c.conj().T)))
            for c in system.couplings
        )
        tau, q = np.linalg.eigh(t_c)
        log_t = (q * np.log(np.maximum(tau, np.finfo(float).tiny))) @ q.conj().T
        res["log_commutator"] = max(
            float(np.max(np.abs(log_t @ c - c @ log_t))) for c in system.couplings
        )
    return res


# ---------------------------------------------------------------------------
# occupations and effective Hamiltonian
# ---------------------------------------------------------------------------

def _mode_probabilities(values_real, w_factors, beta) -> np.ndarray:
    logw = -beta * np.asarray(values_real, dtype=float) + np.log(w_factors)
    return np.exp(logw - logsumexp(logw))


def steady_probabilities(
    h: np.ndarray, t_c: np.ndarray, beta: float, tol: float = 1e-8
) -> np.ndarray:
    """Steady-state mode occupations p_n proportional to e^{-beta E_n} W_n.

    W_n = <E_n|_L T_c |E_n>_L with self-normalized right eigenvectors and
    biorthogonal left partners; the Boltzmann form is recovered exactly
    when T_c is the identity.  Probabilities follow the sorted-eigenvalue
    order of :func:`nhtopo.biortho.biorthogonal_eig` and sum to one.

    Raises
    ------
    ComplexSpectrumError
    """
    dec = biorthogonal_eig(h, tol)
    radius = float(np.max(np.abs(dec.eigenvalues)))
    if np.max(np.abs(dec.eigenvalues.imag)) > tol * max(1.0, radius):
        raise ComplexSpectrumError("occupations require a real spectrum")
    w = np.real(np.einsum("im,ij,jm->m", dec.left.conj(), t_c, dec.left))
    if np.any(w <= 0):
        raise NotPositiveDefiniteError("metric weights <E|T_c|E> must be positive")
    return _mode_probabilities(dec.eigenvalues.real, w, beta)


def effective_from_general(h: np.ndarray, t_c: np.ndarray, beta: float) -> np.ndarray:
    """Hermitian effective Hamiltonian -log(e^{-beta H} T_c).

    Factoring S = T_c^{1/2} turns the argument into S e^{-beta H_0} S with
    H_0 = S^{-1} H S, which is Hermitian positive definite whenever T_c is
    a valid metric for H; the principal logarithm is then unambiguous.

    Raises
    ------
    NotPositiveDefiniteError
        If T_c is not positive definite, fails to Hermitianize H, or the
        logarithm argument loses positivity numerically.
    """
    h = np.asarray(h, dtype=complex)
    tau, q = np.linalg.eigh(np.asarray(t_c, dtype=complex))
    if tau[0] <= 0:
        raise NotPositiveDefiniteError("metric operator is not positive definite")
    s = (q * np.sqrt(tau)) @ q.conj().T
    s_inv = (q / np.sqrt(tau)) @ q.conj().T
    h0 = s_inv @ h @ s
    defect = float(np.max(np.abs(h0 - h0.conj().T)))
    if defect > 1e-8 * max(1.0, float(np.max(np.abs(h0)))):
        raise NotPositiveDefiniteError(
            f"metric does not Hermitianize the Hamiltonian (defect {defect:.2e})"
        )
    h0 = 0.5 * (h0 + h0.conj().T)
    lam, v = np.linalg.eigh(h0)
    b = s @ v
    m = (b * np.exp(-beta * lam)) @ b.conj().T
    mu, u_m = np.linalg.eigh(0.5 * (m + m.conj().T))
    if mu[0] <= 0:
        raise NotPositiveDefiniteError(f"log argument has eigenvalue {mu[0]:.3e} <= 0")
    h_eff = (u_m * (-np.log(mu))) @ u_m.conj().T
    return 0.5 * (h_eff + h_eff.conj().T)


# ---------------------------------------------------------------------------
# equivalence of the two complex-spectrum constructions
# ---------------------------------------------------------------------------

def theorem3_check(
    system: GeneralSystem,
    alpha: float,
    beta: float,
    tol: float | None = None,
    degeneracy_tol: float = 1e-8,
) -> float:
    """Compare the reduced-subspace and large-alpha steady states.

    Route A projects onto the maximal-Im eigenmodes, solves the metric on
    that reduced real-spectrum system, and forms its occupations.  Route B
    solves the metric for the surrogate H_alpha with the same couplings;
    the suppressed modes then carry weight of order e^{-beta alpha gap}.
    Returns max_n |p_A(n) - p_B(n)| over the retained modes.

    Raises
    ------
    DefectiveError, ComplexSpectrumError, NotThermalizableError
        Propagated from the underlying solvers.
    """
    dec = biorthogonal_eig(system.h, degeneracy_tol)
    values = dec.eigenvalues - 1j * np.max(dec.eigenvalues.imag)
    radius = float(np.max(np.abs(values)))
    if tol is None:
        tol = 1e-9 * max(1.0, radius)
    retained = np.flatnonzero(values.imag >= -tol)
    cluster_tol = degeneracy_tol * max(1.0, radius)

    # route A: reduced real-spectrum system in the retained eigenbasis
    r_s = dec.right[:, retained]
    l_s = dec.left[:, retained]
    small_couplings = [l_s.conj().T @ c @ r_s for c in system.couplings]
    e_small = values.real[retained]
    order_small = np.argsort(e_small)
    t_small, _, _ = _solve_metric_core(
        e_small[order_small],
        np.eye(retained.size, dtype=complex)[:, order_small],
        small_couplings,
        cluster_tol,
        NULLSPACE_TOL,
    )
    w_small = np.real(np.diag(t_small))
    if np.any(w_small <= 0):
        raise NotThermalizableError("reduced metric has non-positive diagonal")
    p_a = _mode_probabilities(e_small, w_small, beta)

    # route B: real-spectrum surrogate on the full space, same couplings
    e_alpha = values.real - alpha * values.imag
    order_full = np.argsort(e_alpha)
    t_full, _, _ = _solve_metric_core(
        e_alpha[order_full],
        dec.right[:, order_full],
        system.couplings,
        cluster_tol,
        NULLSPACE_TOL,
    )
    w_full = np.real(np.einsum("im,ij,jm->m", dec.left.conj(), t_full, dec.left))
    if np.any(w_full <= 0):
        raise NotThermalizableError("surrogate metric has non-positive weights")
    p_b = _mode_probabilities(e_alpha, w_full, beta)

    return float(np.max(np.abs(p_a - p_b[retained])))
