"""Band and quantum-state topology of 1D non-Hermitian lattice models.

The package splits into the model itself (:mod:`nhtopo.model`), the
steady-state effective Hamiltonian (:mod:`nhtopo.effective`), symmetry
analysis and tenfold classification (:mod:`nhtopo.symmetry`), winding
invariants and phase regions (:mod:`nhtopo.winding`), and the general
metric-operator machinery (:mod:`nhtopo.statmech`).  A command-line front
end lives in :mod:`nhtopo.cli`.
"""

from .biortho import BiorthogonalDecomposition, biorthogonal_eig
from .effective import (
    DensityProfile,
    EffectiveBloch,
    MetricOperator,
    SimilarityTransform,
    critical_points,
    density_profile,
    edge_accumulation,
    effective_bloch_closed_form,
    effective_bloch_via_log,
    effective_lattice,
    effective_spectrum,
    hermitianizing_transform,
    metric_operator_model,
    state_components,
)
from .errors import (
    ComplexGapError,
    ComplexSpectrumError,
    DefectiveError,
    DegenerateError,
    DegenerateFillingError,
    GammaZeroError,
    GapClosedError,
    InconsistentReportError,
    NHTopoError,
    NotChiralError,
    NotPositiveDefiniteError,
    NotSignDefiniteError,
    NotThermalizableError,
    OnBoundaryError,
    PhaseStepError,
)
from .model import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BoundaryCondition,
    LindbladSet,
    ModelParams,
    band_gap,
    bloch_hamiltonian,
    gap_closing_points,
    lattice_hamiltonian,
    lindblad_operators,
    verify_lindblad_consistency,
)
from .statmech import (
    GeneralSystem,
    MetricSolution,
    ReducedSystem,
    effective_from_general,
    h_alpha,
    imaginary_shift_normalize,
    max_im_projector,
    solve_metric,
    steady_probabilities,
    theorem3_check,
)
from .symmetry import (
    ClassLabel,
    SymmetryOp,
    SymmetryReport,
    build_report,
    check_linearized,
    check_ordinary,
    classify,
    conjugate_spectrum,
    model_symmetry_ops,
    operator_square,
    per_cell_operator,
)
from .winding import (
    PhasePoint,
    SpectrumScan,
    WindingResult,
    band_invariant,
    region,
    spectrum_scan,
    state_invariant,
    winding_number,
    winding_number_trace,
    zero_modes,
)

__version__ = "0.1.0"
