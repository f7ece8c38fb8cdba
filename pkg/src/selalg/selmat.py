"""Structured matrices linking tournament biases, polynomial coefficients, and rank PMFs.

A size-t probabilistic tournament over a population of n ranked individuals
picks the seed-s member (s-th best of the t drawn) with bias ``alpha_s``.
The probability that the selected individual has rank k is a polynomial in
k of degree at most t-1.  Both directions of that correspondence factor
into small structured matrices, each with a closed-form inverse:

* ``D``       lower-triangular all-ones accumulator; ``D_inv`` its
              first-difference inverse (1 on the diagonal, -1 below).
* ``C``       diagonal matrix of binomial counts C(t, q); ``C_inv`` its
              reciprocal.
* ``F``       lower-triangular signed binomial expansion of the factors
              (1 - x)^(t-q); ``F_inv`` the unsigned counterpart.
* ``P``       monomials in the normalized rank, P[i, p] = (i/n)^p.
* ``V``       Vandermonde matrix on the nodes 1..m, V[k, l] = k^(l-1).
* ``N``       upper-triangular change of basis with ``P_full @ F == V_full @ N @ F``
              realized through binomial differences of (k/n)^p.
* ``U_inv``   Stirling numbers of the first kind and ``L_inv`` factorial
              ratios; their product ``V_inv = U_inv @ L_inv`` inverts the
              t x t Vandermonde block.
* ``T = N @ F @ C @ D``            maps a bias vector to polynomial coefficients.
* ``T_inv = D_inv @ C_inv @ F_inv @ N_inv``  maps coefficients back to biases.
* ``H``/``G`` cumulative and per-rank order-statistic weights of the t
              uniform draws; ``R = V_full @ T`` stacks every seed's rank
              PMF as columns (n rows, t columns).

Ranks are 1-based and rank 1 is the fittest individual; seeds are 1-based
and seed 1 is the best member of a tournament.  Every public operation
speaks these 1-based conventions.

``MatrixZoo`` instances are immutable and safe to share across threads;
``build_zoo`` is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exactnum import RationalMatrix, binomial, stirling_first

__all__ = [
    "MatrixZoo",
    "build_zoo",
    "deterministic_pmf",
    "seed_rank_pmf",
]

#: Verify the inverse/product identities on every build.  Disabled when
#: Python runs with -O, mirroring an assert.
VERIFY_BUILDS = __debug__


@dataclass(frozen=True)
class MatrixZoo:
    """Every structured matrix for a fixed population size n and tournament size t.

    The t x t members are D, D_inv, C, C_inv, F, F_inv, N, N_inv, P, P_inv,
    V, V_inv, U_inv, L_inv, T, T_inv.  The n-row members are V_full, P_full,
    D_inv_n (n x n), H, G, and R (all n x t except D_inv_n).
    """

    n: int
    t: int
    D: RationalMatrix
    D_inv: RationalMatrix
    C: RationalMatrix
    C_inv: RationalMatrix
    F: RationalMatrix
    F_inv: RationalMatrix
    N: RationalMatrix
    N_inv: RationalMatrix
    P: RationalMatrix
    P_inv: RationalMatrix
    V: RationalMatrix
    V_inv: RationalMatrix
    U_inv: RationalMatrix
    L_inv: RationalMatrix
    T: RationalMatrix
    T_inv: RationalMatrix
    V_full: RationalMatrix
    P_full: RationalMatrix
    D_inv_n: RationalMatrix
    H: RationalMatrix
    G: RationalMatrix
    R: RationalMatrix

    def matrix(self, name: str) -> RationalMatrix:
        """Look up a member matrix by field name (case-insensitive)."""
        key = name.strip()
        for field in MATRIX_NAMES:
            if field.lower() == key.lower():
                return getattr(self, field)
        raise ValueError(f"unknown matrix {name!r}; choose from {', '.join(MATRIX_NAMES)}")


MATRIX_NAMES = (
    "D", "D_inv", "C", "C_inv", "F", "F_inv", "N", "N_inv",
    "P", "P_inv", "V", "V_inv", "U_inv", "L_inv", "T", "T_inv",
    "V_full", "P_full", "D_inv_n", "H", "G", "R",
)


def _lower_ones(size: int) -> RationalMatrix:
    return RationalMatrix.from_function(size, size, lambda r, s: 1 if s <= r else 0)


def _first_difference(size: int) -> RationalMatrix:
    return RationalMatrix.from_function(
        size, size, lambda k, i: 1 if i == k else (-1 if i == k - 1 else 0)
    )


def _order_weight(n: int, t: int, x: int, r: int) -> Fraction:
    """(x/n)^r * (1 - x/n)^(t-r); the chance that r of t uniform draws land at or below x."""
    p = Fraction(x, n)
    return p**r * (1 - p) ** (t - r)


def build_zoo(n: int, t: int) -> MatrixZoo:
    """Construct every structured matrix for population size n, tournament size t.

    Requires 1 <= t <= n.  With ``VERIFY_BUILDS`` enabled the product and
    inverse identities are checked exactly on construction.
    """
    if not isinstance(n, int) or not isinstance(t, int):
        raise ValueError("population and tournament sizes must be integers")
    if t < 1 or n < 1 or t > n:
        raise ValueError(f"need 1 <= t <= n, got n = {n}, t = {t}")

    inv_n = Fraction(1, n)

    D = _lower_ones(t)
    D_inv = _first_difference(t)
    C = RationalMatrix.from_function(t, t, lambda q, r: binomial(t, q) if q == r else 0)
    C_inv = RationalMatrix.from_function(
        t, t, lambda r, q: Fraction(1, binomial(t, r)) if r == q else 0
    )
    F = RationalMatrix.from_function(
        t, t, lambda p, q: (-1) ** (p - q) * binomial(t - q, t - p) if q <= p else 0
    )
    F_inv = RationalMatrix.from_function(
        t, t, lambda q, r: binomial(t - r, t - q) if r <= q else 0
    )
    N = RationalMatrix.from_function(
        t, t,
        lambda l, p: (-1) ** (p - l) * binomial(p, l - 1) * inv_n**p if l <= p else 0,
    )
    V = RationalMatrix.from_function(t, t, lambda k, l: k ** (l - 1))
    P = RationalMatrix.from_function(t, t, lambda i, p: (i * inv_n) ** p)
    U_inv = RationalMatrix.from_function(t, t, lambda l, s: stirling_first(s, l))
    L_inv = RationalMatrix.from_function(
        t, t,
        lambda s, k: Fraction((-1) ** (s - k), factorial(s - k) * factorial(k - 1))
        if k <= s
        else 0,
    )
    V_inv = U_inv @ L_inv
    P_inv = RationalMatrix.from_function(
        t, t, lambda l, k: n**l * V_inv.entry(l, k) * Fraction(1, k)
    )
    N_inv = P_inv @ D @ V
    T = N @ F @ C @ D
    T_inv = D_inv @ C_inv @ F_inv @ N_inv

    V_full = RationalMatrix.from_function(n, t, lambda k, l: k ** (l - 1))
    P_full = RationalMatrix.from_function(n, t, lambda i, p: (i * inv_n) ** p)
    D_inv_n = _first_difference(n)
    H = RationalMatrix.from_function(n, t, lambda k, q: _order_weight(n, t, k, q))
    G = RationalMatrix.from_function(
        n, t,
        lambda k, r: binomial(t, r) * (_order_weight(n, t, k, r) - _order_weight(n, t, k - 1, r)),
    )
    R = V_full @ T

    zoo = MatrixZoo(
        n=n, t=t, D=D, D_inv=D_inv, C=C, C_inv=C_inv, F=F, F_inv=F_inv,
        N=N, N_inv=N_inv, P=P, P_inv=P_inv, V=V, V_inv=V_inv,
        U_inv=U_inv, L_inv=L_inv, T=T, T_inv=T_inv,
        V_full=V_full, P_full=P_full, D_inv_n=D_inv_n, H=H, G=G, R=R,
    )
    if VERIFY_BUILDS:
        _verify_zoo(zoo)
    return zoo


def _rank_matrix_via_difference(zoo: MatrixZoo) -> RationalMatrix:
    """Seed PMF matrix built through the n x n first-difference route."""
    return zoo.D_inv_n @ zoo.P_full @ zoo.F @ zoo.C @ zoo.D


def _rank_matrix_entrywise(zoo: MatrixZoo) -> RationalMatrix:
    """Seed PMF matrix built entry by entry from the order-statistic sum."""
    return RationalMatrix.from_function(
        zoo.n, zoo.t, lambda k, s: _seed_pmf(zoo.n, zoo.t, s, k)
    )


def _verify_zoo(zoo: MatrixZoo) -> None:
    t_eye = RationalMatrix.identity(zoo.t)
    pairs = (
        (zoo.D, zoo.D_inv), (zoo.C, zoo.C_inv), (zoo.F, zoo.F_inv),
        (zoo.N, zoo.N_inv), (zoo.P, zoo.P_inv), (zoo.V, zoo.V_inv),
        (zoo.T, zoo.T_inv),
    )
    for mat, inv in pairs:
        if mat @ inv != t_eye or inv @ mat != t_eye:
            raise AssertionError(f"inverse identity failed for n={zoo.n}, t={zoo.t}")
    if zoo.G @ zoo.D != _rank_matrix_via_difference(zoo):
        raise AssertionError(f"order-weight factorization failed for n={zoo.n}, t={zoo.t}")
    if zoo.R != _rank_matrix_via_difference(zoo) or zoo.R != _rank_matrix_entrywise(zoo):
        raise AssertionError(f"rank matrix routes disagree for n={zoo.n}, t={zoo.t}")


def _seed_pmf(n: int, t: int, s: int, k: int) -> Fraction:
    """P(seed s of a size-t tournament has rank k), by the order-statistic sum."""
    total = Fraction(0)
    for r in range(s, t + 1):
        total += binomial(t, r) * (_order_weight(n, t, k, r) - _order_weight(n, t, k - 1, r))
    return total


def _seed_pmf_low_order(n: int, t: int, s: int, k: int) -> Fraction:
    """Equivalent rewriting of ``_seed_pmf`` summing the low orders r < s."""
    total = Fraction(0)
    for r in range(0, s):
        total += binomial(t, r) * (_order_weight(n, t, k - 1, r) - _order_weight(n, t, k, r))
    return total


def seed_rank_pmf(zoo: MatrixZoo, s: int, k: int) -> Fraction:
    """Exact probability that the seed-s tournament member has rank k.

    Computed by the order-statistic sum; equals column s, row k of the
    zoo's rank matrix R.
    """
    if not 1 <= s <= zoo.t:
        raise ValueError(f"seed {s} outside 1..{zoo.t}")
    if not 1 <= k <= zoo.n:
        raise ValueError(f"rank {k} outside 1..{zoo.n}")
    return _seed_pmf(zoo.n, zoo.t, s, k)


def deterministic_pmf(n: int, t: int, k: int) -> Fraction:
    """Exact probability that a winner-takes-all size-t tournament selects rank k."""
    if t < 1 or n < 1 or t > n:
        raise ValueError(f"need 1 <= t <= n, got n = {n}, t = {t}")
    if not 1 <= k <= n:
        raise ValueError(f"rank {k} outside 1..{n}")
    return (1 - Fraction(k - 1, n)) ** t - (1 - Fraction(k, n)) ** t
