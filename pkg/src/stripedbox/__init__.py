"""Spectral toolkit for a 2D rigid rectangular box with striped potentials.

The box interior carries four constant-potential stripes stacked along y
(real for a Hermitian problem, complex with the parity-conjugation symmetry
for a non-Hermitian one) and optionally a uniform field. Eigenvalues come
from a dense sine-basis matrix; independent oracles (adaptive quadrature of
the matrix elements, direct piecewise matching) validate the closed forms.
"""

from stripedbox.assembly import (
    HamiltonianMatrix,
    QuadratureError,
    assemble_by_quadrature,
    assemble_combined,
    assemble_field,
    assemble_striped,
    kinetic_diagonal,
)
from stripedbox.eigen import EigensolverError, Spectrum, fix_phase, solve_spectrum
from stripedbox.model import (
    BoxGeometry,
    SpectralBasisConfig,
    StripePotentials,
    UniformField,
    baseline_energy,
    field_is_pt_symmetric,
    is_hermitian,
    is_pt_symmetric,
    piecewise_potential,
    standard_geometry,
)
from stripedbox.pt_analysis import (
    BracketError,
    CrossoverEvent,
    ExceptionalPoint,
    PairingError,
    PhaseClassification,
    SweepResult,
    SweepSpec,
    classify_eigenvalues,
    classify_spectrum,
    conjugation_closure_delta,
    detect_crossovers,
    find_exceptional_point,
    magnitude_order,
    nonreal_mask,
    run_sweep,
)
from stripedbox.validation import (
    CrossValidationReport,
    ScanResolutionWarning,
    cross_validate,
    direct_eigenfunction,
    direct_eigenvalues,
    matching_determinant,
)
from stripedbox.wavefunction import (
    DensityGrid,
    WavefunctionField,
    density_grid,
    evaluate,
    wavefunction_from_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "BoxGeometry",
    "BracketError",
    "CrossValidationReport",
    "CrossoverEvent",
    "DensityGrid",
    "EigensolverError",
    "ExceptionalPoint",
    "HamiltonianMatrix",
    "PairingError",
    "PhaseClassification",
    "QuadratureError",
    "ScanResolutionWarning",
    "SpectralBasisConfig",
    "Spectrum",
    "StripePotentials",
    "SweepResult",
    "SweepSpec",
    "UniformField",
    "WavefunctionField",
    "assemble_by_quadrature",
    "assemble_combined",
    "assemble_field",
    "assemble_striped",
    "baseline_energy",
    "classify_eigenvalues",
    "classify_spectrum",
    "conjugation_closure_delta",
    "cross_validate",
    "density_grid",
    "detect_crossovers",
    "direct_eigenfunction",
    "direct_eigenvalues",
    "evaluate",
    "field_is_pt_symmetric",
    "find_exceptional_point",
    "fix_phase",
    "is_hermitian",
    "is_pt_symmetric",
    "kinetic_diagonal",
    "magnitude_order",
    "nonreal_mask",
    "matching_determinant",
    "piecewise_potential",
    "run_sweep",
    "solve_spectrum",
    "standard_geometry",
    "wavefunction_from_spectrum",
]
