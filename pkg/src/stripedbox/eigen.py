"""Dense complex eigensolver with deterministic ordering and gauge fixing."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from stripedbox.assembly import HamiltonianMatrix

# Backward-error acceptance bound: ||M c - E c|| <= RESIDUAL_BOUND * ||M||_F
# for every eigenpair. LAPACK's QR iteration typically lands near machine
# epsilon times the norm, so this leaves ample margin.
RESIDUAL_BOUND = 1e-8

ORDERING = "ascending real part, ties by ascending imaginary part"


class EigensolverError(RuntimeError):
    """The eigensolver failed to converge or produced out-of-tolerance pairs."""


@dataclass(frozen=True)
class Spectrum:
    """Full eigendecomposition of a HamiltonianMatrix.

    eigenvalues  -- complex energies in Rydberg, sorted per `ordering`
    coefficients -- row k holds the unit-norm expansion coefficients over the
                    y-basis for eigenvalues[k]
    residuals    -- per-pair backward errors ||M c - E c||_2
    matrix       -- the matrix that was solved (provenance)
    """

    eigenvalues: np.ndarray
    coefficients: np.ndarray
    residuals: np.ndarray
    matrix: HamiltonianMatrix
    ordering: str = ORDERING

    def __post_init__(self):
        for name in ("eigenvalues", "coefficients", "residuals"):
            arr = getattr(self, name)
            arr.setflags(write=False)

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]


def solve_spectrum(matrix: HamiltonianMatrix) -> Spectrum:
    """Solve M C = E C for all nmax eigenpairs of a dense complex matrix.

    Delegates to LAPACK's Hessenberg-reduction + shifted-QR path (zgeev).
    Eigenvalues are sorted ascending by real part with ties broken by
    imaginary part; eigenvectors are renormalized to unit Euclidean norm.
    The output is deterministic for identical input.

    Raises EigensolverError if the iteration fails to converge or any pair
    violates the backward-error bound (never returns a partial spectrum).
    """
    m = matrix.entries
    try:
        values, vectors = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(
            f"eigensolver did not converge for dim={matrix.dim} "
            f"(||M||_F = {np.linalg.norm(m):.3e}): {exc}"
        ) from exc

    order = np.lexsort((values.imag, values.real))
    values = values[order]
    vectors = vectors[:, order]
    vectors = vectors / np.linalg.norm(vectors, axis=0)

    residuals = np.linalg.norm(m @ vectors - vectors * values, axis=0)
    scale = np.linalg.norm(m)
    worst = float(residuals.max()) if residuals.size else 0.0
    if worst > RESIDUAL_BOUND * max(scale, 1.0):
        raise EigensolverError(
            f"eigenpair residual {worst:.3e} exceeds bound "
            f"{RESIDUAL_BOUND:g} * ||M||_F = {RESIDUAL_BOUND * scale:.3e}; "
            f"condition estimate {np.linalg.cond(m):.3e}"
        )

    return Spectrum(
        eigenvalues=values,
        coefficients=np.ascontiguousarray(vectors.T),
        residuals=residuals,
        matrix=matrix,
    )


def fix_phase(spectrum: Spectrum) -> Spectrum:
    """Fix the eigenvector gauge: largest-magnitude component real and positive.

    Each coefficient vector is multiplied by a unit-modulus scalar, so norms
    and densities are unchanged. Idempotent up to rounding.
    """
    coeff = np.array(spectrum.coefficients)
    for k in range(coeff.shape[0]):
        vec = coeff[k]
        pivot = vec[int(np.argmax(np.abs(vec)))]
        coeff[k] = vec * (abs(pivot) / pivot)
    return dataclasses.replace(spectrum, coefficients=coeff)
