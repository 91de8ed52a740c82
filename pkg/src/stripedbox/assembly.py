"""Truncated Hamiltonian matrices in the empty-box sine basis.

The y-basis is u_n(y) = sqrt(2/b) sin(n pi y / b), n = 1..nmax, with the x
quantum number clamped at nx0. Projecting the Schroedinger equation onto this
basis gives a dense, generally complex symmetric matrix whose entries have
closed forms for both the striped potential and the uniform field.

With boundaries (b0, b1, b2, b3, b4) = (0, b1, b/2, b3, b) and stripe values
V_1..V_4, the closed forms are

  diagonal (n' = n):
      pi^2 (nx0^2/a^2 + n^2/b^2)
      + (1/b) sum_i b_i (V_i - V_{i+1}) + V_4
      + (1/(2 pi n)) sum_i (V_{i+1} - V_i) sin(2 pi n b_i / b)

  off-diagonal (n' != n), writing d = n' - n and s = n' + n:
      (1/(pi d)) sum_i (V_i - V_{i+1}) sin(pi d b_i / b)
      + (1/(pi s)) sum_i (V_{i+1} - V_i) sin(pi s b_i / b)

where the stripe sums run over the three interior boundaries i = 1..3. The
uniform field V(y) = -alpha (y - b/2) adds nothing on the diagonal (its
overlap integrals vanish by antisymmetry) and contributes

      -(alpha b / pi^2) [1/s^2 - 1/d^2] (1 - (-1)^s)

off the diagonal, nonzero only for odd n' + n.

Matrices are stored 0-based; reports expose 1-based basis labels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from stripedbox.model import (
    BoxGeometry,
    SpectralBasisConfig,
    StripePotentials,
    UniformField,
    baseline_energy,
)

DEFAULT_QUAD_TOL = 1e-10

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


class QuadratureError(RuntimeError):
    """Adaptive integration could not reach the requested tolerance in budget."""


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Dense nmax x nmax matrix over the y-basis, with its provenance.

    Row index is n' and column index is n (both 1-based in the formulas,
    0-based in storage). Entries carry Rydberg units. The array is frozen
    after construction.
    """

    entries: np.ndarray
    geometry: BoxGeometry
    basis: SpectralBasisConfig
    potentials: StripePotentials | None = None
    field: UniformField | None = None

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"matrix must be square, got shape {entries.shape}")
        if entries.shape[0] != self.basis.nmax:
            raise ValueError(
                f"matrix dimension {entries.shape[0]} does not match nmax={self.basis.nmax}"
            )
        if not np.all(np.isfinite(entries.view(float))):
            raise ValueError("matrix entries must all be finite")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def kinetic_diagonal(geom: BoxGeometry, cfg: SpectralBasisConfig) -> np.ndarray:
    """Empty-box energies pi^2 (nx0^2/a^2 + n^2/b^2) for n = 1..nmax."""
    n = np.arange(1, cfg.nmax + 1)
    return np.array([baseline_energy(geom, cfg.nx0, int(k)) for k in n])


def _stripe_terms(geom: BoxGeometry, pot: StripePotentials):
    """Shared pieces of the striped closed forms: interior boundaries and value jumps."""
    interior = np.array([geom.b1, geom.b2, geom.b3])
    v = pot.values
    jumps = np.array([v[i] - v[i + 1] for i in range(3)], dtype=complex)  # V_i - V_{i+1}
    return interior, jumps


def assemble_striped(
    geom: BoxGeometry, pot: StripePotentials, cfg: SpectralBasisConfig
) -> HamiltonianMatrix:
    """Closed-form matrix for the striped potential plus the kinetic diagonal."""
    b = geom.b
    interior, jumps = _stripe_terms(geom, pot)
    n = np.arange(1, cfg.nmax + 1)

    rows, cols = np.meshgrid(n, n, indexing="ij")
    diff = rows - cols
    summ = rows + cols
    off = diff != 0
    d = diff[off]
    s = summ[off]

    entries = np.zeros((cfg.nmax, cfg.nmax), dtype=complex)
    off_vals = sum(jumps[i] * np.sin(np.pi * d * interior[i] / b) for i in range(3))
    off_vals = off_vals / (np.pi * d)
    off_vals = off_vals - sum(
        jumps[i] * np.sin(np.pi * s * interior[i] / b) for i in range(3)
    ) / (np.pi * s)
    entries[off] = off_vals

    diag = kinetic_diagonal(geom, cfg).astype(complex)
    diag += np.sum(interior * jumps) / b + pot.v4
    diag -= sum(jumps[i] * np.sin(2 * np.pi * n * interior[i] / b) for i in range(3)) / (
        2 * np.pi * n
    )
    np.fill_diagonal(entries, diag)

    return HamiltonianMatrix(entries, geom, cfg, potentials=pot)


def assemble_field(
    geom: BoxGeometry, field: UniformField, cfg: SpectralBasisConfig
) -> HamiltonianMatrix:
    """Closed-form matrix for the uniform field plus the kinetic diagonal."""
    n = np.arange(1, cfg.nmax + 1)
    rows, cols = np.meshgrid(n, n, indexing="ij")
    diff = rows - cols
    summ = rows + cols
    off = diff != 0
    d = diff[off]
    s = summ[off]

    entries = np.zeros((cfg.nmax, cfg.nmax), dtype=complex)
    # (1 - (-1)^s) kills even n'+n, so only odd combinations contribute.
    entries[off] = (
        -(field.alpha * geom.b / np.pi**2)
        * (1.0 / s.astype(float) ** 2 - 1.0 / d.astype(float) ** 2)
        * (1 - (-1.0) ** s)
    )
    np.fill_diagonal(entries, kinetic_diagonal(geom, cfg))

    return HamiltonianMatrix(entries, geom, cfg, field=field)


def assemble_combined(
    geom: BoxGeometry,
    pot: StripePotentials,
    field: UniformField,
    cfg: SpectralBasisConfig,
) -> HamiltonianMatrix:
    """Striped plus field matrix with the kinetic diagonal counted once."""
    striped = assemble_striped(geom, pot, cfg)
    fielded = assemble_field(geom, field, cfg)
    # Subtract the kinetic diagonal from the field matrix first: it cancels
    # exactly (same floats), leaving the purely off-diagonal field term.
    entries = striped.entries + (fielded.entries - np.diag(kinetic_diagonal(geom, cfg)))
    return HamiltonianMatrix(entries, geom, cfg, potentials=pot, field=field)


def _gauss_panel(f, lo: float, hi: float) -> complex:
    half = 0.5 * (hi - lo)
    nodes = 0.5 * (lo + hi) + half * _GL_NODES
    return half * complex(np.dot(_GL_WEIGHTS, f(nodes)))


def _adaptive_integral(f, lo: float, hi: float, tol: float, max_panels: int = 4096) -> complex:
    """Adaptive bisection with a fixed 15-point Gauss-Legendre rule per panel.

    A panel is accepted when the two-half refinement agrees with the single
    panel estimate within its share of the tolerance; otherwise it is split.
    Raises QuadratureError when the panel budget is exhausted.
    """
    total = 0.0 + 0.0j
    stack = [(lo, hi, _gauss_panel(f, lo, hi), tol)]
    panels = 0
    while stack:
        panels += 1
        if panels > max_panels:
            raise QuadratureError(
                f"adaptive quadrature exceeded {max_panels} panels on [{lo}, {hi}] "
                f"for tolerance {tol:g}"
            )
        p_lo, p_hi, coarse, p_tol = stack.pop()
        mid = 0.5 * (p_lo + p_hi)
        left = _gauss_panel(f, p_lo, mid)
        right = _gauss_panel(f, mid, p_hi)
        if abs(left + right - coarse) <= p_tol:
            total += left + right
        else:
            stack.append((p_lo, mid, left, 0.5 * p_tol))
            stack.append((mid, p_hi, right, 0.5 * p_tol))
    return total


def assemble_by_quadrature(
    geom: BoxGeometry,
    pot: StripePotentials | None,
    field: UniformField | None,
    cfg: SpectralBasisConfig,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> HamiltonianMatrix:
    """Numerical-integration oracle for the closed-form assembly.

    Each potential overlap (2/b) * integral of u_n'(y) V(y) u_n(y) is computed
    by adaptive Gauss-Legendre quadrature, integrating each stripe separately
    so every integrand is smooth (V is discontinuous exactly at the stripe
    boundaries). The kinetic diagonal is analytic. Every element is accurate
    to quad_tol.
    """
    if quad_tol <= 0:
        raise ValueError(f"quad_tol must be positive, got {quad_tol}")
    b = geom.b
    bounds = geom.boundaries
    values = pot.values if pot is not None else (0j, 0j, 0j, 0j)
    alpha = field.alpha if field is not None else 0j

    # Error budget: at most 8 integrated pieces per element (4 stripes + the
    # field over 4 panels), each to quad_tol/8.
    piece_tol = quad_tol / 8.0

    nmax = cfg.nmax
    entries = np.zeros((nmax, nmax), dtype=complex)
    for r in range(1, nmax + 1):
        for c in range(r, nmax + 1):
            val = 0.0 + 0.0j
            for i in range(4):
                v_i = values[i]
                if v_i == 0:
                    continue

                def stripe_integrand(y, v=v_i, r=r, c=c):
                    return (
                        v * (2.0 / b) * np.sin(r * np.pi * y / b) * np.sin(c * np.pi * y / b)
                    )

                val += _adaptive_integral(stripe_integrand, bounds[i], bounds[i + 1], piece_tol)
            if alpha != 0:
                for i in range(4):

                    def field_integrand(y, r=r, c=c):
                        return (
                            -alpha
                            * (2.0 / b)
                            * (y - 0.5 * b)
                            * np.sin(r * np.pi * y / b)
                            * np.sin(c * np.pi * y / b)
                        )

                    val += _adaptive_integral(field_integrand, bounds[i], bounds[i + 1], piece_tol)
            entries[r - 1, c - 1] = val
            entries[c - 1, r - 1] = val

    entries[np.diag_indices(nmax)] += kinetic_diagonal(geom, cfg)
    return HamiltonianMatrix(entries, geom, cfg, potentials=pot, field=field)
