"""Wavefunction synthesis and probability densities on grids.

A solved eigenpair gives psi(x, y) = u_nx0(x) * sum_n c_n u_n(y) inside the
box and exactly zero outside and on the wall, with
u_m(t) = sqrt(2/L) sin(m pi t / L) the normalized box modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from stripedbox.eigen import Spectrum
from stripedbox.model import BoxGeometry

_NORM_TOL = 1e-10


@dataclass(frozen=True)
class WavefunctionField:
    """Amplitude field for one eigenstate: geometry, clamped nx0, y-coefficients."""

    geometry: BoxGeometry
    nx0: int
    coefficients: np.ndarray

    def __post_init__(self):
        coeff = np.asarray(self.coefficients, dtype=complex)
        if coeff.ndim != 1 or coeff.size == 0:
            raise ValueError("coefficients must be a nonempty 1-D array")
        norm = float(np.linalg.norm(coeff))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"coefficient vector must have unit norm, got {norm!r}")
        if not isinstance(self.nx0, int) or self.nx0 < 1:
            raise ValueError(f"nx0 must be a positive integer, got {self.nx0!r}")
        coeff.setflags(write=False)
        object.__setattr__(self, "coefficients", coeff)


def wavefunction_from_spectrum(spectrum: Spectrum, level: int) -> WavefunctionField:
    """Wavefunction of the level-th eigenstate (0-based, ascending real part)."""
    if not 0 <= level < spectrum.size:
        raise IndexError(f"level {level} out of range for spectrum of size {spectrum.size}")
    matrix = spectrum.matrix
    coeff = np.array(spectrum.coefficients[level])
    coeff /= np.linalg.norm(coeff)
    return WavefunctionField(matrix.geometry, matrix.basis.nx0, coeff)


def _y_profile(wf: WavefunctionField, y: np.ndarray) -> np.ndarray:
    """sum_n c_n sqrt(2/b) sin(n pi y / b) evaluated at flat y (no boundary mask)."""
    b = wf.geometry.b
    n = np.arange(1, wf.coefficients.size + 1)
    sines = np.sin(np.outer(n, np.pi * y / b))
    return np.sqrt(2.0 / b) * (wf.coefficients @ sines)


def evaluate(wf: WavefunctionField, x, y):
    """Complex amplitude at (x, y); exactly zero outside the open box.

    Accepts scalars or broadcastable arrays. Points on the wall itself are
    outside the open box and return zero exactly.
    """
    x_arr, y_arr = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    scalar = x_arr.ndim == 0
    x_flat = np.atleast_1d(x_arr).ravel()
    y_flat = np.atleast_1d(y_arr).ravel()

    geom = wf.geometry
    inside = (x_flat > 0) & (x_flat < geom.a) & (y_flat > 0) & (y_flat < geom.b)

    out = np.zeros(x_flat.shape, dtype=complex)
    if np.any(inside):
        xs = x_flat[inside]
        ys = y_flat[inside]
        x_part = np.sqrt(2.0 / geom.a) * np.sin(wf.nx0 * np.pi * xs / geom.a)
        out[inside] = x_part * _y_profile(wf, ys)
    if scalar:
        return complex(out[0])
    return out.reshape(x_arr.shape)


@dataclass(frozen=True)
class DensityGrid:
    """|psi|^2 sampled on a uniform inclusive grid over the closed box.

    values[i, j] corresponds to (x[i], y[j]); units 1/Bohr^2. Boundary rows
    and columns are exactly zero.
    """

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        for arr in (self.x, self.y, self.values):
            arr.setflags(write=False)


def density_grid(
    wf: WavefunctionField, nx_samples: int = 201, ny_samples: int = 201
) -> DensityGrid:
    """Probability density |psi|^2 on an nx_samples x ny_samples inclusive grid."""
    if nx_samples < 2 or ny_samples < 2:
        raise ValueError("grid needs at least 2 samples per axis")
    geom = wf.geometry
    xs = np.linspace(0.0, geom.a, nx_samples)
    ys = np.linspace(0.0, geom.b, ny_samples)

    x_part = np.sqrt(2.0 / geom.a) * np.sin(wf.nx0 * np.pi * xs / geom.a)
    y_part = _y_profile(wf, ys)
    values = np.abs(np.outer(x_part, y_part)) ** 2
    # The wall is outside the open box; force the boundary to zero exactly.
    values[0, :] = 0.0
    values[-1, :] = 0.0
    values[:, 0] = 0.0
    values[:, -1] = 0.0
    return DensityGrid(x=xs, y=ys, values=values)
