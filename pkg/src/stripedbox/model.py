"""Domain types and symmetry predicates for the striped rectangular box.

A spinless particle is confined to the rectangle [0, a] x [0, b] by an
impenetrable wall. The interior is partitioned into four stripes of constant
potential stacked along y:

    region I   : 0   < y < b1    potential v1
    region II  : b1  < y < b/2   potential v2
    region III : b/2 < y < b3    potential v3
    region IV  : b3  < y < b     potential v4

The stripe boundaries are mirror images about the midline y = b/2, which is
always the second boundary and is derived rather than stored. Lengths are in
Bohr radii and energies in Rydberg, with hbar^2/(2*mu) = 1 Ry * a_B^2, so the
kinetic energy of the empty-box mode (n_x, n_y) is
pi^2 * (n_x^2/a^2 + n_y^2/b^2) Ry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# hbar^2 / (2 mu) in Ry * a_B^2; fixed by the unit convention above.
HBAR2_OVER_2MU = 1.0

# Stripe mirror symmetry is required exactly; this only absorbs rounding in
# user-supplied boundary values.
_MIRROR_RTOL = 1e-12

_STRUCTURAL_TOL = 1e-12


@dataclass(frozen=True)
class BoxGeometry:
    """Box side lengths and stripe boundaries (Bohr radii).

    Construction enforces 0 < b1 < b/2 < b3 < b and the mirror condition
    b3 - b/2 == b/2 - b1 (within rounding); the box is rejected otherwise.
    """

    a: float
    b: float
    b1: float
    b3: float

    def __post_init__(self):
        for name in ("a", "b", "b1", "b3"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"geometry field {name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.a <= 0 or self.b <= 0:
            raise ValueError(f"box sides must be positive, got a={self.a}, b={self.b}")
        half = 0.5 * self.b
        if not (0.0 < self.b1 < half):
            raise ValueError(f"b1 must lie strictly between 0 and b/2, got b1={self.b1}")
        if not (half < self.b3 < self.b):
            raise ValueError(f"b3 must lie strictly between b/2 and b, got b3={self.b3}")
        skew = abs((self.b3 - half) - (half - self.b1))
        if skew > _MIRROR_RTOL * self.b:
            raise ValueError(
                f"stripes must mirror about y=b/2: |(b3-b/2)-(b/2-b1)| = {skew:.3e}"
            )

    @property
    def b2(self) -> float:
        """Midline boundary y = b/2 (derived, never stored)."""
        return 0.5 * self.b

    @property
    def boundaries(self) -> tuple[float, float, float, float, float]:
        """The five y-partition points (0, b1, b/2, b3, b)."""
        return (0.0, self.b1, self.b2, self.b3, self.b)


def standard_geometry() -> BoxGeometry:
    """The reference box: a = sqrt(3), b = sqrt(2), boundaries at 0.4*b and 0.6*b."""
    b = math.sqrt(2.0)
    return BoxGeometry(a=math.sqrt(3.0), b=b, b1=0.4 * b, b3=0.6 * b)


def _as_finite_complex(value, name: str) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class StripePotentials:
    """Constant potential values in regions I..IV, in Rydberg (complex allowed)."""

    v1: complex
    v2: complex
    v3: complex
    v4: complex

    def __post_init__(self):
        for name in ("v1", "v2", "v3", "v4"):
            object.__setattr__(self, name, _as_finite_complex(getattr(self, name), name))

    @classmethod
    def zero(cls) -> "StripePotentials":
        return cls(0.0, 0.0, 0.0, 0.0)

    @property
    def values(self) -> tuple[complex, complex, complex, complex]:
        return (self.v1, self.v2, self.v3, self.v4)


@dataclass(frozen=True)
class UniformField:
    """Uniform field along y via V(y) = -alpha * (y - b/2).

    alpha carries Rydberg per Bohr radius; a pure imaginary alpha makes the
    field term non-Hermitian but compatible with the parity-conjugation
    symmetry of the stripes.
    """

    alpha: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", _as_finite_complex(self.alpha, "alpha"))

    @classmethod
    def zero(cls) -> "UniformField":
        return cls(0.0)


@dataclass(frozen=True)
class SpectralBasisConfig:
    """Basis truncation: clamped x quantum number nx0 and y-basis size nmax."""

    nx0: int = 1
    nmax: int = 50

    def __post_init__(self):
        for name in ("nx0", "nmax"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")


def baseline_energy(geom: BoxGeometry, nx: int, ny: int) -> float:
    """Empty-box eigenvalue pi^2 (nx^2/a^2 + ny^2/b^2), in Rydberg."""
    return HBAR2_OVER_2MU * math.pi**2 * (nx**2 / geom.a**2 + ny**2 / geom.b**2)


def is_pt_symmetric(pot: StripePotentials, tol: float = _STRUCTURAL_TOL) -> bool:
    """Whether the stripes satisfy the parity-conjugation condition V*(b-y) = V(y).

    With stripes mirrored about y = b/2 this reduces to v4 == conj(v1) and
    v3 == conj(v2), each within tol.
    """
    if tol < 0:
        raise ValueError(f"tol must be nonnegative, got {tol}")
    return (
        abs(pot.v4 - pot.v1.conjugate()) <= tol
        and abs(pot.v3 - pot.v2.conjugate()) <= tol
    )


def is_hermitian(
    pot: StripePotentials,
    field: UniformField | None = None,
    tol: float = _STRUCTURAL_TOL,
) -> bool:
    """Whether every potential value (and the field strength) is real within tol."""
    if tol < 0:
        raise ValueError(f"tol must be nonnegative, got {tol}")
    values = list(pot.values)
    if field is not None:
        values.append(field.alpha)
    return all(abs(v.imag) <= tol for v in values)


def field_is_pt_symmetric(field: UniformField, tol: float = _STRUCTURAL_TOL) -> bool:
    """A uniform field keeps the parity-conjugation symmetry iff alpha is pure imaginary."""
    if tol < 0:
        raise ValueError(f"tol must be nonnegative, got {tol}")
    return abs(field.alpha.real) <= tol


def piecewise_potential(geom: BoxGeometry, pot: StripePotentials, y: float) -> complex:
    """Potential value at height y (0 on the boundary set, where it is immaterial)."""
    if not 0.0 <= y <= geom.b:
        raise ValueError(f"y={y} outside [0, b]")
    _, b1, b2, b3, b = geom.boundaries
    if y < b1:
        return pot.v1
    if y < b2:
        return pot.v2
    if y < b3:
        return pot.v3
    return pot.v4
