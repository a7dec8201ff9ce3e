"""Power-squeezed states, sector Jacobi matrices, and moment diagnostics."""

from .errors import JacobiRecoveryError, NumericsError, QuadratureError
from .jacobi import (
    GrowthProfile,
    InitialKind,
    OffDiagonalSequence,
    RecursionSolution,
    SectorParams,
    commutator_weight,
    growth_profile,
    hermite_identity_check,
    log_off_diagonal,
    off_diagonal,
    off_diagonal_squared,
    solve_recursion,
)
from .moments import (
    DeterminacyVerdict,
    HankelCheck,
    JacobiCoefficients,
    MomentSequence,
    Verdict,
    classify_determinacy,
    hankel_positive,
    integrate_weighted,
    moments,
    moments_to_jacobi,
)
from .polynomials import (
    gamma_abs_sq,
    hermite,
    log_gamma_complex,
    pochhammer,
    pollaczek,
    pollaczek_table,
    weight_rho,
)
from .spectra import (
    SpectrumDiagnostics,
    SpectrumReport,
    TridiagonalMatrix,
    eigenvalues_bisect,
    extension_sweep,
    nearest_distance,
    spectrum_diagnostics,
    sturm_count,
    strict_interlacing,
)
from .states import (
    DeficiencyEvidence,
    FockVector,
    SqueezeParams,
    SRReport,
    apply_power_lowering,
    apply_power_raising,
    build_power_coherent,
    build_state,
    deficiency_evidence,
    residual_check,
    sr_report,
)

__version__ = "0.1.0"

__all__ = [
    "DeficiencyEvidence",
    "DeterminacyVerdict",
    "FockVector",
    "GrowthProfile",
    "HankelCheck",
    "InitialKind",
    "JacobiCoefficients",
    "JacobiRecoveryError",
    "MomentSequence",
    "NumericsError",
    "OffDiagonalSequence",
    "QuadratureError",
    "RecursionSolution",
    "SRReport",
    "SectorParams",
    "SpectrumDiagnostics",
    "SpectrumReport",
    "SqueezeParams",
    "TridiagonalMatrix",
    "Verdict",
    "apply_power_lowering",
    "apply_power_raising",
    "build_power_coherent",
    "build_state",
    "classify_determinacy",
    "commutator_weight",
    "deficiency_evidence",
    "eigenvalues_bisect",
    "extension_sweep",
    "gamma_abs_sq",
    "growth_profile",
    "hankel_positive",
    "hermite",
    "hermite_identity_check",
    "integrate_weighted",
    "log_gamma_complex",
    "log_off_diagonal",
    "moments",
    "moments_to_jacobi",
    "nearest_distance",
    "off_diagonal",
    "off_diagonal_squared",
    "pochhammer",
    "pollaczek",
    "pollaczek_table",
    "residual_check",
    "solve_recursion",
    "spectrum_diagnostics",
    "sr_report",
    "strict_interlacing",
    "sturm_count",
    "weight_rho",
]
