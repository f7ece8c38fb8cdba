"""Coverage estimation, the valid-quadratic polytope, and monotonicity classes.

Coordinates throughout are polynomial coefficients ``a = (a_1, ..., a_t)``
where ``a_l`` multiplies ``k**(l-1)`` and rank k runs 1..n.  The unit-total
constraint pins one coefficient as an affine function of the others, so
the set of valid degree-(t-1) schemes is a (t-1)-dimensional convex
polytope and the tournament-representable subset is the simplex spanned by
the images of the unit bias vectors.

``coverage_estimate`` measures the representable share of valid schemes.
The t = 2 case is the exact interval ratio (n-1)/n.  For t >= 3 it is
rejection sampling: draw the free coefficients uniformly from a bounding
box, complete the eliminated coefficient from the unit-total plane, accept
when every rank probability is nonnegative, and count how many accepted
samples have nonnegative implied biases.  The box starts from the
simplex corners inflated fourfold and doubles any coordinate whose face
the accepted samples approach (within 5% of the box width), restarting
with freshly derived sub-streams; each coordinate is capped at the
provable bound max_kappa |V_inv[l, kappa]|, beyond which the polytope
cannot reach.  Draws and constraint tests use 64-bit floats with strict
comparisons; the boundary has measure zero, so this does not bias the
estimate.

``quadratic_polytope_vertices`` is exact: the n nonnegativity constraints
restricted to the t = 3 unit-total plane are integer lines in the
(a_1, a_2) chart; all pairwise intersections are solved exactly, filtered
through a conservative float prescreen, and confirmed against every
constraint with rational arithmetic.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactnum import parse_rational, power_sum
from .selmat import build_zoo

__all__ = [
    "CoverageEstimate",
    "MonotoneBoundary",
    "PolytopeVertex",
    "QuadraticClassification",
    "classify_quadratic",
    "coverage_estimate",
    "monotonicity_boundaries",
    "quadratic_polytope_vertices",
    "tournament_simplex_corners",
]

MONOTONE_INCREASING = "monotone-increasing"
MONOTONE_DECREASING = "monotone-decreasing"
FAVOURS_MIDDLE = "favours-middle"
FAVOURS_EXTREMES = "favours-extremes"
CONSTANT = "constant"

_MAX_GROW_ROUNDS = 64
_FACE_MARGIN = 0.05
_BOX_INFLATION = 4.0


@dataclass(frozen=True)
class CoverageEstimate:
    """Share of valid degree-(t-1) schemes representable as size-t tournaments."""

    n: int
    t: int
    samples_accepted: int
    fraction: float
    stderr: float
    seed: int
    workers: int = 1


@dataclass(frozen=True)
class PolytopeVertex:
    """Extreme point of the valid-quadratic polytope.

    ``a`` is the exact coefficient triple; ``active_constraints`` names the
    two ranks whose probabilities are exactly zero there.
    """

    a: tuple[Fraction, Fraction, Fraction]
    active_constraints: tuple[int, int]


@dataclass(frozen=True)
class QuadraticClassification:
    label: str
    stationary_point: Fraction | None


@dataclass(frozen=True)
class MonotoneBoundary:
    """Locus of quadratic schemes whose parabola vertex sits at ``stationary_at``.

    In the (a_1, a_2) chart this is the line ``a_2 = slope * a_1 +
    intercept``, or the vertical line ``a_1 = a1_value`` in the degenerate
    orientation.
    """

    n: int
    stationary_at: Fraction
    vertical: bool
    a1_value: Fraction | None
    slope: Fraction | None
    intercept: Fraction | None

    def a2_for(self, a1) -> Fraction:
        if self.vertical:
            raise ValueError("boundary is vertical; a_2 is unconstrained")
        return self.slope * parse_rational(a1) + self.intercept


def tournament_simplex_corners(n: int, t: int) -> list[tuple[Fraction, ...]]:
    """Exact coefficient vectors of the pure-bias tournaments (unit vectors).

    Corner s is the polynomial equivalent of always selecting seed s; the
    representable set is the convex hull of these t points.
    """
    zoo = build_zoo(n, t)
    return [zoo.T.column(s) for s in range(1, t + 1)]


def _coefficient_caps(zoo) -> list[Fraction]:
    """Provable per-coefficient bound max_kappa |V_inv[l, kappa]| over valid schemes."""
    return [
        max(abs(zoo.V_inv.entry(l, kappa)) for kappa in range(1, zoo.t + 1))
        for l in range(1, zoo.t + 1)
    ]


def _initial_box(corners_free: np.ndarray, caps_free: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lo = corners_free.min(axis=0)
    hi = corners_free.max(axis=0)
    center = (lo + hi) / 2.0
    half = (hi - lo) / 2.0 * _BOX_INFLATION
    # Degenerate widths can only come from coincident corner coordinates;
    # fall back to a slice of the provable cap.
    half = np.where(half > 0, half, caps_free / 16.0)
    lo = np.maximum(center - half, -caps_free)
    hi = np.minimum(center + half, caps_free)
    return lo, hi


def _valid_mask_quadratic(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Nonnegativity over ranks 1..n for quadratics, via the integer minimum.

    A parabola restricted to consecutive integers attains its minimum at an
    endpoint, or at the integers bracketing the stationary point when it
    opens upward with the vertex inside the range; checking those points is
    exact for the full constraint set.
    """
    c0, c1, c2 = coeffs[:, 0], coeffs[:, 1], coeffs[:, 2]
    value_at = lambda k: c0 + k * (c1 + k * c2)
    ok = (value_at(np.float64(1)) >= 0) & (value_at(np.float64(n)) >= 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        vertex = np.where(c2 != 0, -c1 / (2 * c2), 0.0)
    interior = (c2 > 0) & (vertex > 1) & (vertex < n)
    lower = np.clip(np.floor(np.where(interior, vertex, 1.0)), 1, n - 1)
    ok &= ~interior | ((value_at(lower) >= 0) & (value_at(lower + 1) >= 0))
    return ok


def _valid_mask_general(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Nonnegativity over ranks 1..n by direct evaluation (Horner per rank)."""
    ok = np.ones(len(coeffs), dtype=bool)
    for k in range(1, n + 1):
        value = coeffs[:, -1].copy()
        for j in range(coeffs.shape[1] - 2, -1, -1):
            value *= k
            value += coeffs[:, j]
        ok &= value >= 0
    return ok


def _coverage_shard(
    n, t, eliminate, quota, lo, hi, psums, tbar_t, seed_seq
):
    """Collect ``quota`` accepted samples; return acceptance data for one shard."""
    generator = np.random.Generator(np.random.PCG64(seed_seq))
    free = [l for l in range(1, t + 1) if l != eliminate]
    if quota == 0:
        return 0, np.full(len(free), np.inf), np.full(len(free), -np.inf)
    accepted = []
    collected = 0
    drawn = 0
    while collected < quota:
        batch = int(min(1_000_000, max(4096, 8 * (quota - collected))))
        drawn += batch
        if drawn > 5e9:
            raise RuntimeError(
                f"acceptance rate for n={n}, t={t} is too low to reach "
                f"{quota} samples; try a larger accepted target or report a bug"
            )
        coeffs = np.empty((batch, t))
        for idx, l in enumerate(free):
            coeffs[:, l - 1] = generator.uniform(lo[idx], hi[idx], size=batch)
        used = sum(coeffs[:, l - 1] * psums[l - 1] for l in free)
        coeffs[:, eliminate - 1] = (1.0 - used) / psums[eliminate - 1]
        if t == 3:
            mask = _valid_mask_quadratic(coeffs, n)
        else:
            mask = _valid_mask_general(coeffs, n)
        good = coeffs[mask]
        if len(good) > quota - collected:
            good = good[: quota - collected]
        collected += len(good)
        if len(good):
            accepted.append(good)
    samples = np.concatenate(accepted) if accepted else np.empty((0, t))
    alphas = samples @ tbar_t
    representable = int(np.count_nonzero((alphas >= 0).all(axis=1)))
    free_cols = samples[:, [l - 1 for l in free]]
    return representable, free_cols.min(axis=0), free_cols.max(axis=0)


def coverage_estimate(
    n: int,
    t: int,
    target_accepted: int,
    seed: int,
    workers: int = 1,
    eliminate: int | None = None,
) -> CoverageEstimate:
    """Estimate the tournament-representable share of valid degree-(t-1) schemes.

    Exact for t = 2 (interval ratio (n-1)/n, stderr 0, no sampling).  For
    t >= 3 runs the box rejection sampler described in the module
    docstring until ``target_accepted`` valid schemes have been drawn.
    Deterministic for fixed (seed, target_accepted, workers).

    ``eliminate`` picks which coefficient the unit-total plane determines
    (default: the top one).  The measured fraction is an affine-invariant
    area ratio, so any choice estimates the same quantity.
    """
    if t < 2:
        raise ValueError(f"need tournament size >= 2, got {t}")
    if n < t:
        raise ValueError(f"need population size >= tournament size, got n = {n}, t = {t}")
    if workers < 1:
        raise ValueError(f"need at least one worker, got {workers}")
    if eliminate is None:
        eliminate = t
    if not 1 <= eliminate <= t:
        raise ValueError(f"eliminated coefficient index {eliminate} outside 1..{t}")

    if t == 2:
        ratio = Fraction(n - 1, n)
        return CoverageEstimate(
            n=n, t=t, samples_accepted=0, fraction=float(ratio), stderr=0.0,
            seed=seed, workers=workers,
        )

    if target_accepted < 1:
        raise ValueError(f"need a positive accepted target, got {target_accepted}")

    zoo = build_zoo(n, t)
    corners = np.array([[float(c) for c in col] for col in tournament_simplex_corners(n, t)])
    tbar_t = np.array(zoo.T_inv.to_floats()).T
    psums = np.array([float(power_sum(n, l)) for l in range(1, t + 1)])
    caps = np.array([float(c) for c in _coefficient_caps(zoo)])

    free = [l for l in range(1, t + 1) if l != eliminate]
    free_idx = [l - 1 for l in free]
    lo, hi = _initial_box(corners[:, free_idx], caps[free_idx])

    quotas = [
        target_accepted // workers + (1 if w < target_accepted % workers else 0)
        for w in range(workers)
    ]

    for round_index in range(_MAX_GROW_ROUNDS):
        sequences = [
            np.random.SeedSequence(seed, spawn_key=(round_index, w)) for w in range(workers)
        ]
        run = lambda pair: _coverage_shard(
            n, t, eliminate, pair[0], lo, hi, psums, tbar_t, pair[1]
        )
        jobs = list(zip(quotas, sequences))
        if workers == 1:
            results = [run(jobs[0])]
        else:
            with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(run, jobs))
        representable = sum(r[0] for r in results)
        seen_lo = np.min([r[1] for r in results], axis=0)
        seen_hi = np.max([r[2] for r in results], axis=0)

        width = hi - lo
        hugging = (seen_lo < lo + _FACE_MARGIN * width) | (seen_hi > hi - _FACE_MARGIN * width)
        growable = hugging & (width < 2 * caps[free_idx] - 1e-12)
        if not growable.any():
            fraction = representable / target_accepted
            stderr = math.sqrt(fraction * (1.0 - fraction) / target_accepted)
            return CoverageEstimate(
                n=n, t=t, samples_accepted=target_accepted, fraction=fraction,
                stderr=stderr, seed=seed, workers=workers,
            )
        center = (lo + hi) / 2.0
        half = np.where(growable, width, width / 2.0)
        lo = np.maximum(center - half, -caps[free_idx])
        hi = np.minimum(center + half, caps[free_idx])
    raise RuntimeError(
        "bounding box kept growing without covering the accepted samples; "
        "the per-coefficient cap would need to be raised"
    )


def _plane_sums(n: int) -> tuple[int, int]:
    """(sum of k, sum of k**2) over ranks 1..n."""
    return power_sum(n, 2), power_sum(n, 3)


def _constraint_lines(n: int) -> list[tuple[int, int, int]]:
    """Integer lines A*a_1 + B*a_2 + C = 0 bounding the valid quadratics.

    Constraint k demands nonnegative probability at rank k after the
    unit-total plane eliminates a_3; clearing denominators by the positive
    factor sum(k**2) leaves integer coefficients.
    """
    sum_k, sum_k2 = _plane_sums(n)
    lines = []
    for k in range(1, n + 1):
        lines.append((sum_k2 - n * k * k, k * sum_k2 - sum_k * k * k, k * k))
    return lines


def _complete_quadratic(n: int, a1: Fraction, a2: Fraction) -> Fraction:
    sum_k, sum_k2 = _plane_sums(n)
    return Fraction(1 - n * a1 - sum_k * a2, sum_k2)


def quadratic_polytope_vertices(n: int) -> list[PolytopeVertex]:
    """Exact vertices of the valid-quadratic polytope, counterclockwise.

    Intersects every pair of the n rank-nonnegativity lines in the
    (a_1, a_2) chart, keeps the intersections satisfying all n constraints
    (rational test), deduplicates coincident points, and orders the result
    counterclockwise around the centroid.  Parallel line pairs are skipped.
    A float prescreen discards far-infeasible intersections before the
    exact confirmation; its tolerance is conservative, so no true vertex
    can be lost.
    """
    if n < 3:
        raise ValueError(f"need population size >= 3, got {n}")
    lines = _constraint_lines(n)

    candidates = []  # (a1, a2, j, k) exact intersection of lines j and k
    for j in range(1, n + 1):
        aj, bj, cj = lines[j - 1]
        for k in range(j + 1, n + 1):
            ak, bk, ck = lines[k - 1]
            det = aj * bk - ak * bj
            if det == 0:
                continue
            x = Fraction(bj * ck - bk * cj, det)
            y = Fraction(cj * ak - ck * aj, det)
            candidates.append((x, y, j, k))
    if not candidates:
        return []

    # Float prescreen: reject points that clearly violate some constraint.
    pts = np.array([[float(c[0]), float(c[1])] for c in candidates])
    coeff = np.array(lines, dtype=np.float64)
    values = pts @ coeff[:, :2].T + coeff[:, 2]
    scale = np.abs(pts) @ np.abs(coeff[:, :2]).T + np.abs(coeff[:, 2])
    plausible = (values >= -1e-9 * scale).all(axis=1)

    survivors: dict[tuple[Fraction, Fraction], tuple[int, int]] = {}
    for keep, (x, y, j, k) in zip(plausible, candidates):
        if not keep or (x, y) in survivors:
            continue
        if all(a * x + b * y + c >= 0 for a, b, c in lines):
            survivors[(x, y)] = (j, k)
    if not survivors:
        return []

    points = list(survivors.items())
    cx = sum(p[0][0] for p in points) / len(points)
    cy = sum(p[0][1] for p in points) / len(points)
    points.sort(key=lambda p: math.atan2(float(p[0][1] - cy), float(p[0][0] - cx)))
    return [
        PolytopeVertex(a=(x, y, _complete_quadratic(n, x, y)), active_constraints=active)
        for (x, y), active in points
    ]


def classify_quadratic(n: int, coefficients) -> QuadraticClassification:
    """Monotonicity class of a (at most) quadratic rank scheme on ranks 1..n.

    A parabola is symmetric about its stationary point, so the scheme is
    monotone over the integer ranks exactly when the stationary point
    falls outside the open interval (1.5, n - 0.5); otherwise an upward
    parabola favours both extremes and a downward one the middle ranks.
    The stationary point is computed exactly.
    """
    if n < 2:
        raise ValueError(f"need population size >= 2, got {n}")
    coeffs = tuple(parse_rational(c) for c in coefficients)
    if len(coeffs) > 3 and any(c != 0 for c in coeffs[3:]):
        raise ValueError("classification covers degree <= 2 schemes only")
    a1, a2, a3 = (coeffs + (Fraction(0),) * 3)[:3]

    if a3 == 0:
        if a2 > 0:
            return QuadraticClassification(MONOTONE_INCREASING, None)
        if a2 < 0:
            return QuadraticClassification(MONOTONE_DECREASING, None)
        return QuadraticClassification(CONSTANT, None)

    stationary = -a2 / (2 * a3)
    if Fraction(3, 2) < stationary < n - Fraction(1, 2):
        label = FAVOURS_EXTREMES if a3 > 0 else FAVOURS_MIDDLE
        return QuadraticClassification(label, stationary)
    edge_gap = (a2 + a3 * (n + 1)) * (n - 1)  # P(n) - P(1)
    if edge_gap > 0:
        return QuadraticClassification(MONOTONE_INCREASING, stationary)
    if edge_gap < 0:
        return QuadraticClassification(MONOTONE_DECREASING, stationary)
    return QuadraticClassification(CONSTANT, stationary)


def monotonicity_boundaries(n: int) -> tuple[MonotoneBoundary, MonotoneBoundary]:
    """The two lines in the (a_1, a_2) chart where quadratics stop being monotone.

    Solving ``stationary point = c`` against the unit-total plane for
    c = 3/2 and c = n - 1/2 gives straight lines; between them schemes
    favour the middle or the extremes, outside they are monotone.
    """
    if n < 2:
        raise ValueError(f"need population size >= 2, got {n}")
    sum_k, sum_k2 = _plane_sums(n)
    out = []
    for c in (Fraction(3, 2), n - Fraction(1, 2)):
        denom = 2 * c * sum_k - sum_k2  # coefficient of a_2 in the solved equation
        if denom == 0:
            out.append(
                MonotoneBoundary(
                    n=n, stationary_at=c, vertical=True,
                    a1_value=Fraction(1, n), slope=None, intercept=None,
                )
            )
        else:
            out.append(
                MonotoneBoundary(
                    n=n, stationary_at=c, vertical=False, a1_value=None,
                    slope=(-2 * c * n) / denom, intercept=(2 * c) / denom,
                )
            )
    return tuple(out)
