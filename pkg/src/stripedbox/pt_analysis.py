"""Parameter sweeps, phase classification, and symmetry-breaking thresholds.

A configuration whose stripes satisfy the parity-conjugation condition can
hold an entirely real spectrum (unbroken phase) or develop complex
conjugate eigenvalue pairs (broken phase). Sweeping a real strength
parameter lambda that enters the potentials linearly traces the eigenvalue
trajectories and locates the exceptional points where pairs coalesce and
leave the real axis.

Two orderings coexist here. Sweep trajectories ("branches") are matched
between consecutive lambda samples by a minimal total complex-distance
assignment, so each branch is continuous in the complex plane. Threshold
designation and crossover detection instead use the per-sample ascending
magnitude ranking of eigenvalues, the labeling convention the reference
trajectories follow; a rank can hop between continuity branches when two
magnitudes cross, which is exactly the effect crossover detection reports.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from stripedbox.assembly import assemble_combined
from stripedbox.eigen import Spectrum, solve_spectrum
from stripedbox.model import (
    BoxGeometry,
    SpectralBasisConfig,
    StripePotentials,
    UniformField,
)

DEFAULT_REAL_TOL = 1e-6
DEFAULT_PAIR_TOL = 1e-8
DEFAULT_LAMBDA_TOL = 1e-3


class PairingError(RuntimeError):
    """Non-real eigenvalues could not be matched into conjugate pairs."""


class BracketError(ValueError):
    """Bisection bracket endpoints classify identically."""


def nonreal_mask(values: np.ndarray, real_tol: float = DEFAULT_REAL_TOL) -> np.ndarray:
    """True where |Im E| exceeds real_tol * max(1, |Re E|)."""
    values = np.asarray(values, dtype=complex)
    return np.abs(values.imag) > real_tol * np.maximum(1.0, np.abs(values.real))


def magnitude_order(values: np.ndarray) -> np.ndarray:
    """Permutation sorting eigenvalues by ascending |E| (ties by Re, then Im)."""
    values = np.asarray(values, dtype=complex)
    return np.lexsort((values.imag, values.real, np.abs(values)))


@dataclass(frozen=True)
class PhaseClassification:
    """Outcome of the conjugate-pair test on one spectrum.

    broken -- True when any eigenvalue sits off the real axis
    pairs  -- index pairs (i, j), i < j, of mutually conjugate eigenvalues
    """

    broken: bool
    pairs: tuple[tuple[int, int], ...] = ()

    @property
    def unbroken(self) -> bool:
        return not self.broken


def classify_eigenvalues(
    values: np.ndarray,
    real_tol: float = DEFAULT_REAL_TOL,
    pair_tol: float = DEFAULT_PAIR_TOL,
) -> PhaseClassification:
    """Classify a raw eigenvalue array as unbroken or broken with paired indices.

    All eigenvalues real (within real_tol, scaled by max(1, |Re E|)) means the
    unbroken phase. Otherwise the non-real values must admit a perfect
    matching into conjugate pairs, each match within pair_tol scaled by the
    eigenvalue magnitude; failing that, PairingError is raised (a non-PT
    input or numerical breakdown).
    """
    if real_tol <= 0:
        raise ValueError(f"real_tol must be positive, got {real_tol}")
    values = np.asarray(values, dtype=complex)
    idx = np.flatnonzero(nonreal_mask(values, real_tol))
    if idx.size == 0:
        return PhaseClassification(broken=False)
    if idx.size % 2:
        raise PairingError(
            f"odd number of non-real eigenvalues ({idx.size}); no conjugate pairing exists"
        )

    vals = values[idx]
    cost = np.abs(vals[:, None] - np.conj(vals)[None, :])
    np.fill_diagonal(cost, np.inf)
    try:
        rows, cols = linear_sum_assignment(cost)
    except ValueError as exc:
        raise PairingError(f"conjugate-pair assignment infeasible: {exc}") from exc

    partner = np.empty(idx.size, dtype=int)
    partner[rows] = cols
    pairs = []
    for i in range(idx.size):
        j = int(partner[i])
        if j == i or partner[j] != i:
            raise PairingError("conjugate matching is not an involution")
        gap = float(cost[i, j])
        if gap > pair_tol * max(1.0, abs(vals[i])):
            raise PairingError(
                f"eigenvalue {vals[i]:.6g} lacks a conjugate partner within "
                f"{pair_tol:g} (closest differs by {gap:.3e})"
            )
        if i < j:
            pairs.append((int(idx[i]), int(idx[j])))
    return PhaseClassification(broken=True, pairs=tuple(sorted(pairs)))


def classify_spectrum(
    spectrum: Spectrum, real_tol: float = DEFAULT_REAL_TOL
) -> PhaseClassification:
    """Classify a solved Spectrum; see classify_eigenvalues."""
    return classify_eigenvalues(spectrum.eigenvalues, real_tol)


def conjugation_closure_delta(values: np.ndarray) -> float:
    """Worst matching distance between the spectrum and its own conjugate.

    Zero (up to solver error) iff the eigenvalue multiset is closed under
    complex conjugation. Uses optimal assignment rather than a sort, which
    would misalign conjugate partners whose real parts differ by rounding.
    """
    values = np.asarray(values, dtype=complex)
    cost = np.abs(values[:, None] - np.conj(values)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


@dataclass(frozen=True)
class SweepSpec:
    """A linear-in-lambda family of configurations over a real interval.

    The potentials and field strength at parameter lam are
    base + slope * lam componentwise; e.g. slopes (0, 1j, -1j, 0) with zero
    base realize v2 = i*lam = conj(v3).
    """

    geometry: BoxGeometry
    basis: SpectralBasisConfig
    base_potentials: StripePotentials = field(default_factory=StripePotentials.zero)
    potential_slopes: tuple[complex, complex, complex, complex] = (0j, 0j, 0j, 0j)
    base_field: UniformField = field(default_factory=UniformField.zero)
    field_slope: complex = 0j
    lambda_start: float = 0.0
    lambda_end: float = 1.0
    steps: int = 2

    def __post_init__(self):
        if not self.lambda_start < self.lambda_end:
            raise ValueError(
                f"lambda_start must be below lambda_end, got "
                f"[{self.lambda_start}, {self.lambda_end}]"
            )
        if self.steps < 2:
            raise ValueError(f"steps must be at least 2, got {self.steps}")
        slopes = tuple(complex(s) for s in self.potential_slopes)
        if len(slopes) != 4:
            raise ValueError("potential_slopes must have exactly four entries")
        object.__setattr__(self, "potential_slopes", slopes)
        object.__setattr__(self, "field_slope", complex(self.field_slope))

    def potentials_at(self, lam: float) -> StripePotentials:
        base = self.base_potentials.values
        return StripePotentials(*(base[i] + self.potential_slopes[i] * lam for i in range(4)))

    def field_at(self, lam: float) -> UniformField:
        return UniformField(self.base_field.alpha + self.field_slope * lam)

    def solve_at(self, lam: float) -> Spectrum:
        matrix = assemble_combined(
            self.geometry, self.potentials_at(lam), self.field_at(lam), self.basis
        )
        return solve_spectrum(matrix)


@dataclass(frozen=True)
class ExceptionalPoint:
    """A detected phase transition: branches that leave or rejoin the real axis."""

    lambda_c: float
    branches: tuple[int, ...]
    kind: str  # "breaking" or "restoration"


@dataclass(frozen=True)
class SweepResult:
    """Continuity-tracked eigenvalue trajectories over the lambda grid.

    branches[i, k] is branch i at lambdas[k]; branch order is fixed by the
    eigenvalue ordering at the first sample. At every sample the branch
    values are a permutation of the raw spectrum there.
    """

    spec: SweepSpec
    lambdas: np.ndarray
    branches: np.ndarray
    classifications: tuple[PhaseClassification, ...]
    exceptional_points: tuple[ExceptionalPoint, ...]

    def __post_init__(self):
        self.lambdas.setflags(write=False)
        self.branches.setflags(write=False)


def _solve_grid(spec: SweepSpec, lams, workers: int) -> list[np.ndarray]:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            spectra = list(pool.map(spec.solve_at, lams))
    else:
        spectra = [spec.solve_at(lam) for lam in lams]
    return [s.eigenvalues for s in spectra]


def _match_next(prev: np.ndarray, nxt: np.ndarray) -> np.ndarray:
    """Permutation of nxt minimizing total |prev_i - nxt_perm(i)|."""
    cost = np.abs(prev[:, None] - nxt[None, :])
    _, cols = linear_sum_assignment(cost)
    return cols


def _continuity_violations(prev: np.ndarray, matched_next: np.ndarray) -> bool:
    """Whether any branch stepped further than its gap to the nearest other branch."""
    steps = np.abs(matched_next - prev)
    sep = np.abs(matched_next[:, None] - matched_next[None, :])
    np.fill_diagonal(sep, np.inf)
    gaps = sep.min(axis=1)
    return bool(np.any(steps > gaps))


def _count_nonreal(values: np.ndarray, real_tol: float) -> int:
    return int(nonreal_mask(values, real_tol).sum())


def _refine_transition(
    spec: SweepSpec,
    lo: float,
    hi: float,
    count_lo: int,
    count_hi: int,
    real_tol: float,
    lambda_tol: float,
) -> float:
    """Bisect the interval on the non-real eigenvalue count; midpoint fallback."""
    if count_lo == count_hi:
        return 0.5 * (lo + hi)
    while hi - lo > lambda_tol:
        mid = 0.5 * (lo + hi)
        if _count_nonreal(spec.solve_at(mid).eigenvalues, real_tol) == count_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def run_sweep(
    spec: SweepSpec,
    real_tol: float = DEFAULT_REAL_TOL,
    workers: int = 1,
    refine: bool = True,
    max_extra_samples: int = 48,
    ep_lambda_tol: float = DEFAULT_LAMBDA_TOL,
) -> SweepResult:
    """Solve the spectrum across the lambda grid and track branches.

    Branches are matched between consecutive samples by optimal assignment on
    complex distance. When a branch step exceeds its separation from every
    other branch (the signature of an imminent coalescence or a matching
    swap), midpoint samples are inserted locally, up to max_extra_samples.
    Detected real-axis departures and returns are refined by bisection to
    ep_lambda_tol and reported as exceptional points.
    """
    lams = list(np.linspace(spec.lambda_start, spec.lambda_end, spec.steps))
    values = _solve_grid(spec, lams, workers)

    if refine:
        budget = max_extra_samples
        min_step = (spec.lambda_end - spec.lambda_start) / spec.steps / 16.0
        for _ in range(4):
            if budget <= 0:
                break
            inserts = []
            for k in range(len(lams) - 1):
                if lams[k + 1] - lams[k] <= min_step:
                    continue
                perm = _match_next(values[k], values[k + 1])
                if _continuity_violations(values[k], values[k + 1][perm]):
                    inserts.append(0.5 * (lams[k] + lams[k + 1]))
            inserts = inserts[:budget]
            if not inserts:
                break
            budget -= len(inserts)
            new_values = _solve_grid(spec, inserts, workers)
            lams.extend(inserts)
            values.extend(new_values)
            order = np.argsort(lams)
            lams = [lams[i] for i in order]
            values = [values[i] for i in order]

    n = spec.basis.nmax
    n_samples = len(lams)
    branches = np.empty((n, n_samples), dtype=complex)
    branches[:, 0] = values[0]
    for k in range(n_samples - 1):
        perm = _match_next(branches[:, k], values[k + 1])
        branches[:, k + 1] = values[k + 1][perm]

    classifications = tuple(classify_eigenvalues(v, real_tol) for v in values)

    real_by_branch = ~nonreal_mask(branches, real_tol)
    events = []
    for k in range(n_samples - 1):
        breaking = np.flatnonzero(real_by_branch[:, k] & ~real_by_branch[:, k + 1])
        restoring = np.flatnonzero(~real_by_branch[:, k] & real_by_branch[:, k + 1])
        if breaking.size == 0 and restoring.size == 0:
            continue
        lam_c = _refine_transition(
            spec,
            lams[k],
            lams[k + 1],
            _count_nonreal(values[k], real_tol),
            _count_nonreal(values[k + 1], real_tol),
            real_tol,
            ep_lambda_tol,
        )
        if breaking.size:
            events.append(ExceptionalPoint(lam_c, tuple(int(i) for i in breaking), "breaking"))
        if restoring.size:
            events.append(ExceptionalPoint(lam_c, tuple(int(i) for i in restoring), "restoration"))

    return SweepResult(
        spec=spec,
        lambdas=np.asarray(lams, dtype=float),
        branches=branches,
        classifications=classifications,
        exceptional_points=tuple(events),
    )


def _pair_broken_at(
    spec: SweepSpec, lam: float, branch_pair: tuple[int, int], real_tol: float
) -> bool:
    """Whether the designated magnitude-ranked pair is simultaneously non-real.

    A conjugate pair requires both members off the real axis, so the broken
    indicator is the smaller of the two normalized |Im E|; this also flips
    correctly through a crossover, where one member of the old pair returns
    to the real axis while its rank passes to another level.
    """
    values = spec.solve_at(lam).eigenvalues
    order = magnitude_order(values)
    picked = values[order[list(branch_pair)]]
    return bool(nonreal_mask(picked, real_tol).all())


def find_exceptional_point(
    spec: SweepSpec,
    branch_pair: tuple[int, int] = (0, 1),
    bracket: tuple[float, float] | None = None,
    lambda_tol: float = DEFAULT_LAMBDA_TOL,
    real_tol: float = DEFAULT_REAL_TOL,
) -> float:
    """Bisect for the lambda at which the designated pair changes phase.

    branch_pair indexes the per-sample ascending-magnitude ranking (0 is the
    smallest |E|); (0, 1) designates the lowest pair. The bracket endpoints
    must classify differently (unbroken at one end, broken at the other),
    otherwise BracketError is raised. Returns the threshold to within
    lambda_tol.
    """
    if bracket is None:
        bracket = (spec.lambda_start, spec.lambda_end)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError(f"bracket must be increasing, got {bracket}")
    broken_lo = _pair_broken_at(spec, lo, branch_pair, real_tol)
    broken_hi = _pair_broken_at(spec, hi, branch_pair, real_tol)
    if broken_lo == broken_hi:
        raise BracketError(
            f"pair {branch_pair} classifies as "
            f"{'broken' if broken_lo else 'unbroken'} at both bracket endpoints "
            f"[{lo}, {hi}]"
        )
    while hi - lo > lambda_tol:
        mid = 0.5 * (lo + hi)
        if _pair_broken_at(spec, mid, branch_pair, real_tol) == broken_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CrossoverEvent:
    """Simultaneous return and departure from the real axis, by magnitude rank."""

    lambda_value: float
    restored: tuple[int, ...]
    broken: tuple[int, ...]


def detect_crossovers(
    result: SweepResult, real_tol: float = DEFAULT_REAL_TOL
) -> tuple[CrossoverEvent, ...]:
    """Find lambdas where one level regains reality exactly as another loses it.

    Levels are identified by their per-sample ascending-magnitude rank. A
    plain breaking (two ranks leave the real axis together) or a plain
    restoration is not a crossover; only intervals showing both directions
    at once are reported.
    """
    n_samples = result.lambdas.shape[0]
    rank_real = np.empty((result.branches.shape[0], n_samples), dtype=bool)
    for k in range(n_samples):
        col = result.branches[:, k]
        rank_real[:, k] = ~nonreal_mask(col[magnitude_order(col)], real_tol)

    events = []
    for k in range(n_samples - 1):
        restored = np.flatnonzero(~rank_real[:, k] & rank_real[:, k + 1])
        broken = np.flatnonzero(rank_real[:, k] & ~rank_real[:, k + 1])
        if restored.size and broken.size:
            events.append(
                CrossoverEvent(
                    lambda_value=0.5 * float(result.lambdas[k] + result.lambdas[k + 1]),
                    restored=tuple(int(i) for i in restored),
                    broken=tuple(int(i) for i in broken),
                )
            )
    return tuple(events)
