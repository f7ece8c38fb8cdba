"""Selection scheme types, conversions, and validity checks.

A :class:`RankPolynomial` assigns rank k (rank 1 = fittest) the selection
probability ``sum(a[l] * k**l for l in range(len(a)))``; whether those
values form a distribution is a separate check, not a construction
invariant.  A :class:`TournamentScheme` draws t individuals uniformly with
replacement and picks the seed-s one with bias ``alpha[s-1]``; its bias
vector must be a probability vector, checked exactly on construction.

Conversions go through the exact maps of :mod:`selalg.selmat`.  A
polynomial converts to a tournament only when the implied bias vector
lands inside the probability simplex; otherwise the conversion returns a
:class:`TournamentRejection` report carrying the exact offending values.
Nothing is ever clamped or renormalized.

All types are immutable and all operations pure, so concurrent use is
safe.  Scheme files are JSON objects ``{"kind": "tournament"|"polynomial",
"n": int, "t": int (tournament only), "alpha"|"a": [entries]}`` where
entries are strings in "p/q" or decimal form (decimals convert exactly).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import RationalMatrix, mat_vec, parse_rational, power_sum
from .selmat import build_zoo

__all__ = [
    "PMFVerdict",
    "RankPolynomial",
    "SelectionPMF",
    "TournamentRejection",
    "TournamentScheme",
    "complete_top_coefficient",
    "effective_pmf_with_ties",
    "lagrange_coefficients",
    "linear_rank_bounds",
    "linear_tournament_bounds",
    "parse_scheme",
    "polynomial_to_tournament",
    "read_scheme_file",
    "scheme_pmf",
    "scheme_to_dict",
    "tournament_to_polynomial",
    "validate_pmf",
    "write_scheme_file",
]


def _rational_tuple(values) -> tuple[Fraction, ...]:
    return tuple(parse_rational(v) for v in values)


@dataclass(frozen=True)
class RankPolynomial:
    """Polynomial rank scheme: coefficient a[l] multiplies k**l (0-based l).

    The coefficient vector may describe an invalid distribution; use
    :func:`scheme_pmf` plus :func:`validate_pmf` to decide validity.
    """

    n: int
    a: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"population size must be positive, got {self.n}")
        coeffs = _rational_tuple(self.a)
        if not coeffs:
            raise ValueError("coefficient vector must not be empty")
        object.__setattr__(self, "a", coeffs)

    @property
    def degree(self) -> int:
        """Degree of the highest nonzero coefficient (0 for the zero polynomial)."""
        for i in range(len(self.a) - 1, -1, -1):
            if self.a[i] != 0:
                return i
        return 0

    def probability(self, k: int) -> Fraction:
        """Exact selection probability assigned to rank k."""
        if not 1 <= k <= self.n:
            raise ValueError(f"rank {k} outside 1..{self.n}")
        acc = Fraction(0)
        for coeff in reversed(self.a):
            acc = acc * k + coeff
        return acc


@dataclass(frozen=True)
class TournamentScheme:
    """Probabilistic tournament: bias alpha[s-1] of selecting the seed-s member."""

    n: int
    t: int
    alpha: tuple[Fraction, ...]

    def __post_init__(self):
        alpha = _rational_tuple(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if self.n < 1:
            raise ValueError(f"population size must be positive, got {self.n}")
        if self.t != len(alpha):
            raise ValueError(f"t = {self.t} but bias vector has length {len(alpha)}")
        if self.t > self.n:
            raise ValueError(f"tournament size {self.t} exceeds population size {self.n}")
        bad = [(s, a) for s, a in enumerate(alpha, start=1) if a < 0]
        if bad:
            listing = ", ".join(f"alpha_{s} = {a}" for s, a in bad)
            raise ValueError(f"negative bias entries: {listing}")
        total = sum(alpha)
        if total != 1:
            raise ValueError(f"bias entries must sum to 1, got {total}")


@dataclass(frozen=True)
class SelectionPMF:
    """Length-n probability vector over ranks; validity is checked, not assumed."""

    n: int
    pi: tuple[Fraction, ...]

    def __post_init__(self):
        pi = _rational_tuple(self.pi)
        object.__setattr__(self, "pi", pi)
        if self.n < 1:
            raise ValueError(f"population size must be positive, got {self.n}")
        if len(pi) != self.n:
            raise ValueError(f"probability vector has length {len(pi)}, expected {self.n}")

    @property
    def is_valid(self) -> bool:
        """Exact check: all entries nonnegative and summing to 1."""
        return all(p >= 0 for p in self.pi) and sum(self.pi) == 1


@dataclass(frozen=True)
class PMFVerdict:
    valid: bool
    violations: tuple[str, ...]


@dataclass(frozen=True)
class TournamentRejection:
    """Why a polynomial could not be realized as a size-t tournament.

    ``kind`` is "unnormalized" (probabilities do not sum to 1),
    "invalid-pmf" (some rank gets negative probability), or
    "not-representable" (a genuine distribution whose implied biases leave
    the simplex).  ``alpha`` holds the exact implied biases.
    """

    n: int
    t: int
    alpha: tuple[Fraction, ...]
    kind: str
    violations: tuple[str, ...]


def tournament_to_polynomial(scheme: TournamentScheme) -> RankPolynomial:
    """Exact polynomial rank scheme equivalent to the given tournament.

    The result has t coefficients (degree at most t-1); trailing zeros are
    preserved.
    """
    zoo = build_zoo(scheme.n, scheme.t)
    return RankPolynomial(scheme.n, mat_vec(zoo.T, scheme.alpha))


def polynomial_to_tournament(poly: RankPolynomial, t: int):
    """Invert a rank polynomial into a size-t tournament, if one exists.

    The coefficient vector is zero-padded up to length t; a nonzero
    coefficient beyond degree t-1 is an error (never silently truncated).
    Returns a :class:`TournamentScheme` when the implied biases form a
    probability vector, else a :class:`TournamentRejection` listing every
    violated constraint with its exact value.
    """
    if t < 1:
        raise ValueError(f"tournament size must be positive, got {t}")
    if len(poly.a) > t:
        extra = [(l, c) for l, c in enumerate(poly.a[t:], start=t) if c != 0]
        if extra:
            listing = ", ".join(f"a_{l + 1} = {c}" for l, c in extra)
            raise ValueError(
                f"polynomial has nonzero coefficients beyond degree {t - 1}: {listing}"
            )
    coeffs = (poly.a + (Fraction(0),) * t)[:t]
    zoo = build_zoo(poly.n, t)
    alpha = mat_vec(zoo.T_inv, coeffs)

    total = sum(alpha)
    negatives = [(s, a) for s, a in enumerate(alpha, start=1) if a < 0]
    if total == 1 and not negatives:
        return TournamentScheme(poly.n, t, alpha)

    violations = []
    if total != 1:
        violations.append(f"bias sum = {total}, expected 1")
        kind = "unnormalized"
    elif any(poly.probability(k) < 0 for k in range(1, poly.n + 1)):
        kind = "invalid-pmf"
    else:
        kind = "not-representable"
    violations.extend(f"alpha_{s} = {a} < 0" for s, a in negatives)
    return TournamentRejection(poly.n, t, alpha, kind, tuple(violations))


def scheme_pmf(scheme) -> SelectionPMF:
    """Exact rank-selection probabilities induced by a scheme.

    Tournaments always produce a valid distribution; polynomials produce
    whatever the coefficients evaluate to, validity reported separately.
    """
    if isinstance(scheme, TournamentScheme):
        zoo = build_zoo(scheme.n, scheme.t)
        pmf = SelectionPMF(scheme.n, mat_vec(zoo.R, scheme.alpha))
        assert pmf.is_valid
        return pmf
    if isinstance(scheme, RankPolynomial):
        return SelectionPMF(scheme.n, tuple(scheme.probability(k) for k in range(1, scheme.n + 1)))
    raise TypeError(f"expected a scheme, got {type(scheme).__name__}")


def validate_pmf(pmf: SelectionPMF, tolerance=0) -> PMFVerdict:
    """Check nonnegativity and unit total, exactly when tolerance is 0.

    A positive tolerance admits float-ingested data; violating vectors are
    reported, never repaired.
    """
    tol = parse_rational(tolerance)
    if tol < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tol}")
    violations = [
        f"pi_{k} = {p} < {-tol}" if tol else f"pi_{k} = {p} < 0"
        for k, p in enumerate(pmf.pi, start=1)
        if p < -tol
    ]
    total = sum(pmf.pi)
    if abs(total - 1) > tol:
        violations.append(f"sum = {total}, expected 1")
    return PMFVerdict(valid=not violations, violations=tuple(violations))


@dataclass(frozen=True)
class LinearRankBounds:
    """Exact slope range of valid linear rank schemes, with the normalizing intercept."""

    n: int
    slope_bound: Fraction      # valid linear schemes have |a_2| <= slope_bound
    a1_intercept: Fraction     # a_1 = a1_intercept + a1_slope * a_2
    a1_slope: Fraction

    def a1_for(self, a2) -> Fraction:
        """Intercept making the linear scheme sum to exactly 1."""
        return self.a1_intercept + self.a1_slope * parse_rational(a2)


@dataclass(frozen=True)
class LinearTournamentBounds:
    """Exact slope range reachable by size-2 tournaments, and its share of all linear schemes."""

    n: int
    slope_bound: Fraction      # size-2 tournaments have |a_2| <= slope_bound
    coverage_ratio: Fraction   # slope range over the full linear-scheme range


def linear_rank_bounds(n: int) -> LinearRankBounds:
    """Slope bound 2/(n^2 - n) and the map a_2 -> a_1 enforcing unit total."""
    if n < 2:
        raise ValueError(f"need population size >= 2, got {n}")
    return LinearRankBounds(
        n=n,
        slope_bound=Fraction(2, n * n - n),
        a1_intercept=Fraction(1, n),
        a1_slope=-Fraction(n + 1, 2),
    )


def linear_tournament_bounds(n: int) -> LinearTournamentBounds:
    """Slope bound 2/n^2 for size-2 tournaments and the ratio (n-1)/n it covers."""
    if n < 2:
        raise ValueError(f"need population size >= 2, got {n}")
    return LinearTournamentBounds(
        n=n,
        slope_bound=Fraction(2, n * n),
        coverage_ratio=Fraction(n - 1, n),
    )


def complete_top_coefficient(n: int, lower) -> Fraction:
    """Top coefficient making a degree-(t-1) scheme sum to exactly 1.

    Given the lower coefficients (a_1 .. a_{t-1}), returns the unique a_t
    with ``sum_k pi_k = 1``, using the exact rank power sums.
    """
    if n < 1:
        raise ValueError(f"population size must be positive, got {n}")
    coeffs = _rational_tuple(lower)
    t = len(coeffs) + 1
    remainder = 1 - sum(c * power_sum(n, l) for l, c in enumerate(coeffs, start=1))
    return remainder / power_sum(n, t)


def effective_pmf_with_ties(pmf: SelectionPMF, tie_groups) -> SelectionPMF:
    """Average probabilities within blocks of equal-fitness ranks.

    ``tie_groups`` must partition 1..n into consecutive blocks (ties in
    fitness can only glue neighbouring ranks).  Uniform random tie breaking
    gives every member of a block the block's average probability, which
    preserves the total exactly.
    """
    blocks = [sorted(int(r) for r in group) for group in tie_groups]
    flattened = [r for block in sorted(blocks) for r in block]
    if flattened != list(range(1, pmf.n + 1)):
        raise ValueError(f"tie groups must partition ranks 1..{pmf.n}")
    for block in blocks:
        if block != list(range(block[0], block[-1] + 1)):
            raise ValueError(f"tie group {block} is not a consecutive rank block")
    out = list(pmf.pi)
    for block in blocks:
        average = sum(pmf.pi[r - 1] for r in block) / len(block)
        for r in block:
            out[r - 1] = average
    return SelectionPMF(pmf.n, tuple(out))


def lagrange_coefficients(nodes) -> RationalMatrix:
    """Monomial coefficients of the Lagrange basis on the given integer nodes.

    Column s holds the coefficients of the basis polynomial that is 1 at
    ``nodes[s-1]`` and 0 at every other node, so the returned matrix is the
    exact inverse of the Vandermonde matrix on those nodes.
    """
    pts = [int(x) for x in nodes]
    if len(set(pts)) != len(pts):
        raise ValueError(f"nodes must be pairwise distinct, got {pts}")
    size = len(pts)
    columns = []
    for s, x_s in enumerate(pts):
        numer = [1]  # expanding product of (x - x_r), low order first
        denom = 1
        for r, x_r in enumerate(pts):
            if r == s:
                continue
            denom *= x_s - x_r
            numer = [0] + numer
            for i in range(len(numer) - 1):
                numer[i] -= x_r * numer[i + 1]
        columns.append([Fraction(c, denom) for c in numer])
    return RationalMatrix(
        [[columns[s][l] for s in range(size)] for l in range(size)]
    )


def parse_scheme(obj: dict):
    """Build a scheme from its JSON object form."""
    if not isinstance(obj, dict):
        raise ValueError("scheme must be a JSON object")
    kind = obj.get("kind")
    try:
        if kind == "tournament":
            alpha = _rational_tuple(obj["alpha"])
            return TournamentScheme(int(obj["n"]), int(obj.get("t", len(alpha))), alpha)
        if kind == "polynomial":
            return RankPolynomial(int(obj["n"]), _rational_tuple(obj["a"]))
    except KeyError as exc:
        raise ValueError(f"scheme is missing field {exc.args[0]!r}") from exc
    raise ValueError(f"unknown scheme kind {kind!r}; expected 'tournament' or 'polynomial'")


def scheme_to_dict(scheme) -> dict:
    """JSON object form of a scheme, with exact string entries."""
    if isinstance(scheme, TournamentScheme):
        return {
            "kind": "tournament",
            "n": scheme.n,
            "t": scheme.t,
            "alpha": [str(a) for a in scheme.alpha],
        }
    if isinstance(scheme, RankPolynomial):
        return {"kind": "polynomial", "n": scheme.n, "a": [str(c) for c in scheme.a]}
    raise TypeError(f"expected a scheme, got {type(scheme).__name__}")


def read_scheme_file(path):
    with open(path, encoding="utf-8") as handle:
        return parse_scheme(json.load(handle))


def write_scheme_file(path, scheme) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(scheme_to_dict(scheme), handle, indent=2)
        handle.write("\n")
