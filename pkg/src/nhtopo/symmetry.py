"""Symmetry analysis and tenfold classification of quantum-state topology.

Ordinary antiunitary/chiral relations are tested directly on Bloch families
or real-space matrices.  For non-Hermitian Hamiltonians the time-reversal
and chiral relations that constrain the *steady state* are the linearized
ones, built on the eigenvalue-conjugation map C(H) (same eigenvectors,
conjugated eigenvalues):

    linearized TRS:     T H T^{-1} = [C(H)]*
    linearized chiral:  G H G^{-1} = -[C(H)]^dagger

For real-spectrum Hamiltonians these reduce to the ordinary relations.
The triple (linearized TRS, particle-hole, linearized chiral) selects one
of ten classes, each carrying fixed invariant groups in dimensions 1-3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .biortho import biorthogonal_eig
from .errors import (
    DefectiveError,
    InconsistentReportError,
    NotSignDefiniteError,
)

ORDINARY_TOL = 1e-10
# C(H) compounds eigensolver error, so linearized checks run looser.
LINEARIZED_TOL = 1e-8

_DEFAULT_K_GRID = np.linspace(-np.pi, np.pi, 197)


@dataclass(frozen=True)
class SymmetryOp:
    """Unitary part of a (possibly antiunitary) symmetry operation."""

    unitary: np.ndarray
    antiunitary: bool = False
    momentum_action: str = "k->k"  # "k->k" or "k->-k" for Bloch families

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=complex)
        defect = np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))
        if defect > 1e-12:
            raise ValueError(f"operator is not unitary (defect {defect:.2e})")
        object.__setattr__(self, "unitary", u)


def per_cell_operator(sigma: np.ndarray, cells: int, **kwargs) -> SymmetryOp:
    """Symmetry operation acting as ``sigma`` identically in every cell."""
    return SymmetryOp(unitary=np.kron(np.eye(cells), sigma), **kwargs)


# ---------------------------------------------------------------------------
# eigenvalue conjugation
# ---------------------------------------------------------------------------

def conjugate_spectrum(
    h: np.ndarray,
    degeneracy_tol: float = 1e-8,
    perturb_defective: bool = False,
) -> np.ndarray:
    """C(H): same biorthogonal eigenvectors, complex-conjugated eigenvalues.

    Parameters
    ----------
    h : np.ndarray
        Diagonalizable square matrix.
    degeneracy_tol : float
        Rejection threshold: defective when the eigenvector condition
        number exceeds 1/degeneracy_tol.
    perturb_defective : bool
        Retry once with a fixed random Hermitian perturbation of size
        1e-10 instead of raising, treating exceptional points as a
        limiting case.

    Raises
    ------
    DefectiveError
    """
    try:
        dec = biorthogonal_eig(h, degeneracy_tol)
    except DefectiveError:
        if not perturb_defective:
            raise
        rng = np.random.default_rng(1859)
        n = h.shape[0]
        noise = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        dec = biorthogonal_eig(h + 1e-10 * (noise + noise.conj().T), degeneracy_tol)
    return dec.reconstruct(dec.eigenvalues.conj())


# ---------------------------------------------------------------------------
# relation checks
# ---------------------------------------------------------------------------

def _relation_defect(h_k, h_mk, u, u_inv, relation: str) -> np.ndarray:
    if relation == "phs":
        return u @ h_k.T @ u_inv + h_mk
    if relation == "trs":
        return u @ h_k.conj() @ u_inv - h_mk
    if relation == "cs":
        return u @ h_k.conj().T @ u_inv + h_k
    if relation == "sl":
        return u @ h_k @ u_inv + h_k
    raise ValueError(f"unknown relation {relation!r}")


def check_ordinary(
    h_family,
    op: SymmetryOp,
    relation: str,
    k_grid: np.ndarray | None = None,
    tol: float = ORDINARY_TOL,
) -> tuple[bool, float]:
    """Test an ordinary symmetry relation on a matrix or Bloch family.

    Parameters
    ----------
    h_family : np.ndarray or callable
        A single real-space matrix, or a callable k -> matrix evaluated on
        ``k_grid`` (for the antiunitary/transposing relations the partner
        momentum is -k; for a single matrix it is the matrix itself).
    op : SymmetryOp
    relation : {"phs", "trs", "cs", "sl"}
    k_grid : np.ndarray, optional
    tol : float

    Returns
    -------
    (bool, float)
        Whether the max-entry residual over the grid is below ``tol``,
        and the residual itself.
    """
    u = op.unitary
    u_inv = u.conj().T
    if callable(h_family):
        grid = _DEFAULT_K_GRID if k_grid is None else np.asarray(k_grid)
        residual = 0.0
        for k in grid:
            h_k = np.asarray(h_family(k), dtype=complex)
            h_mk = h_k if relation in ("cs", "sl") else np.asarray(
                h_family(-k), dtype=complex
            )
            residual = max(
                residual, float(np.max(np.abs(_relation_defect(h_k, h_mk, u, u_inv, relation))))
            )
    else:
        h = np.asarray(h_family, dtype=complex)
        residual = float(np.max(np.abs(_relation_defect(h, h, u, u_inv, relation))))
    return residual < tol, residual


def check_linearized(
    h: np.ndarray,
    op: SymmetryOp,
    kind: str,
    degeneracy_tol: float = 1e-8,
    tol: float = LINEARIZED_TOL,
    perturb_defective: bool = False,
) -> tuple[bool, float]:
    """Test a linearized symmetry relation on a real-space matrix.

    ``kind`` is "ltrs" (T H T^{-1} = [C(H)]*) or "lcs"
    (G H G^{-1} = -[C(H)]^dagger).  Momentum bookkeeping never enters:
    the relations are stated and tested in real space.

    Raises
    ------
    DefectiveError
        Propagated from the eigenvalue-conjugation map.
    """
    h = np.asarray(h, dtype=complex)
    c_h = conjugate_spectrum(h, degeneracy_tol, perturb_defective)
    u = op.unitary
    u_inv = u.conj().T
    if kind == "ltrs":
        defect = u @ h @ u_inv - c_h.conj()
    elif kind == "lcs":
        defect = u @ h @ u_inv + c_h.conj().T
    else:
        raise ValueError(f"unknown linearized relation {kind!r}")
    residual = float(np.max(np.abs(defect)))
    return residual < tol, residual


def operator_square(op: SymmetryOp, tol: float = 1e-10) -> int:
    """Sign of U U* for an antiunitary (or transposing) operation.

    Raises
    ------
    NotSignDefiniteError
        If U U* is not +identity or -identity within ``tol``.
    """
    u = op.unitary
    q = u @ u.conj()
    n = q.shape[0]
    for sign in (1, -1):
        if np.max(np.abs(q - sign * np.eye(n))) < tol:
            return sign
    raise NotSignDefiniteError("operator square is not proportional to +/- identity")


# ---------------------------------------------------------------------------
# classification tables
# ---------------------------------------------------------------------------

# (linearized TRS, PHS, linearized CS) -> (state class, effective-band AZ
# class, invariant groups for d = 1, 2, 3)
STATE_CLASSES = {
    (0, 0, 0): ("A", "A", ("0", "Z", "0")),
    (+1, 0, 0): ("AI*", "AI", ("0", "0", "0")),
    (-1, 0, 0): ("AII*", "AII", ("0", "Z2", "Z2")),
    (0, 0, 1): ("AIII*", "AIII", ("Z", "0", "Z")),
    (+1, +1, 1): ("BDI*", "BDI", ("Z", "0", "0")),
    (-1, -1, 1): ("CII*", "CII", ("Z", "0", "Z2")),
    (0, +1, 0): ("D", "D", ("Z2", "Z", "0")),
    (0, -1, 0): ("C", "C", ("0", "Z", "0")),
    (-1, +1, 1): ("DIII*", "DIII", ("Z2", "Z2", "Z")),
    (+1, -1, 1): ("CI*", "CI", ("0", "0", "Z")),
}


@dataclass(frozen=True)
class SymmetryReport:
    """Outcome of the ordinary and linearized symmetry checks."""

    phs: bool = False
    trs: bool = False
    cs: bool = False
    sublattice: bool = False
    ltrs: bool = False
    lcs: bool = False
    phs_square: int | None = None
    trs_square: int | None = None
    ltrs_square: int | None = None
    residuals: dict = field(default_factory=dict)

    def triple(self) -> tuple[int, int, int]:
        """(LTRS, PHS, LCS) entry with operator-square signs folded in."""
        ltrs = self.ltrs_square if self.ltrs else 0
        phs = self.phs_square if self.phs else 0
        lcs = 1 if self.lcs else 0
        return (int(ltrs or 0), int(phs or 0), int(lcs))


@dataclass(frozen=True)
class ClassLabel:
    """Symmetry class of the quantum state with its invariant groups."""

    state_class: str
    band_class_of_effective: str
    invariant_groups: tuple[str, str, str]


def classify(report: SymmetryReport) -> ClassLabel:
    """Map a symmetry report onto its tenfold state class.

    Raises
    ------
    InconsistentReportError
        If the (LTRS, PHS, LCS) triple matches no table row, e.g. both
        antiunitary symmetries present without the chiral one.
    """
    triple = report.triple()
    try:
        state, band, groups = STATE_CLASSES[triple]
    except KeyError:
        raise InconsistentReportError(
            f"symmetry triple {triple} matches no class"
        ) from None
    return ClassLabel(
        state_class=state, band_class_of_effective=band, invariant_groups=groups
    )


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

def build_report(
    h: np.ndarray,
    trs_op: SymmetryOp | None = None,
    phs_op: SymmetryOp | None = None,
    chiral_op: SymmetryOp | None = None,
    sublattice_op: SymmetryOp | None = None,
    ordinary_tol: float = ORDINARY_TOL,
    linearized_tol: float = LINEARIZED_TOL,
    degeneracy_tol: float = 1e-8,
    perturb_defective: bool = False,
) -> SymmetryReport:
    """Run all applicable checks on a real-space matrix and collect results.

    Omitted operators leave the corresponding entries false.  Operator
    squares are recorded only for relations that hold.
    """
    h = np.asarray(h, dtype=complex)
    residuals: dict[str, float] = {}
    flags = {"phs": False, "trs": False, "cs": False, "sublattice": False,
             "ltrs": False, "lcs": False}
    squares: dict[str, int | None] = {"phs": None, "trs": None, "ltrs": None}

    if phs_op is not None:
        flags["phs"], residuals["phs"] = check_ordinary(h, phs_op, "phs", tol=ordinary_tol)
        if flags["phs"]:
            squares["phs"] = operator_square(phs_op)
    if trs_op is not None:
        flags["trs"], residuals["trs"] = check_ordinary(h, trs_op, "trs", tol=ordinary_tol)
        if flags["trs"]:
            squares["trs"] = operator_square(trs_op)
        flags["ltrs"], residuals["ltrs"] = check_linearized(
            h, trs_op, "ltrs", degeneracy_tol, linearized_tol, perturb_defective
        )
        if flags["ltrs"]:
            squares["ltrs"] = operator_square(trs_op)
    if chiral_op is not None:
        flags["cs"], residuals["cs"] = check_ordinary(h, chiral_op, "cs", tol=ordinary_tol)
        flags["lcs"], residuals["lcs"] = check_linearized(
            h, chiral_op, "lcs", degeneracy_tol, linearized_tol, perturb_defective
        )
    if sublattice_op is not None:
        flags["sublattice"], residuals["sl"] = check_ordinary(
            h, sublattice_op, "sl", tol=ordinary_tol
        )

    return SymmetryReport(
        phs=flags["phs"],
        trs=flags["trs"],
        cs=flags["cs"],
        sublattice=flags["sublattice"],
        ltrs=flags["ltrs"],
        lcs=flags["lcs"],
        phs_square=squares["phs"],
        trs_square=squares["trs"],
        ltrs_square=squares["ltrs"],
        residuals=residuals,
    )


def model_symmetry_ops(cells: int) -> dict[str, SymmetryOp]:
    """Standard symmetry operations of the two-band chain on 2L sites."""
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]])
    sigma_z = np.diag([1.0, -1.0])
    return {
        "trs_op": SymmetryOp(np.eye(2 * cells), antiunitary=True,
                             momentum_action="k->-k"),
        "phs_op": per_cell_operator(sigma_x, cells, momentum_action="k->-k"),
        "chiral_op": per_cell_operator(sigma_x, cells),
        "sublattice_op": per_cell_operator(sigma_z, cells),
    }
