"""Executable selection: samplers, a brute-force oracle, and statistical checks.

The samplers realize the exact distributions from :mod:`selalg.schemes`
with 64-bit float arithmetic for the random draws; converting an exact
bias vector to cumulative floats once costs at most one part in 2**52,
far below any statistical test threshold used here.

Determinism contract: the same seed yields the same stream within one
build of this package (the generator is numpy's PCG64 seeded through
``SeedSequence``, which also provides the spawned sub-streams used for
sharded runs).  Stream stability across numpy versions is not promised.
An :class:`Rng` is single-owner: do not share one instance between
threads; spawn children instead.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactnum import RationalMatrix
from .schemes import SelectionPMF, TournamentScheme

__all__ = [
    "BRUTE_FORCE_LIMIT",
    "EmpiricalPMF",
    "Rng",
    "brute_force_seed_pmf",
    "empirical_pmf",
    "sample_rank_winner",
    "sample_tournament_winner",
    "tv_distance",
]

#: Largest number of enumerated tournaments the oracle will attempt.
BRUTE_FORCE_LIMIT = 10**7


class Rng:
    """Seeded deterministic generator (PCG64) with spawnable sub-streams."""

    __slots__ = ("seed_sequence", "generator")

    def __init__(self, seed=None, *, _sequence=None):
        self.seed_sequence = (
            _sequence if _sequence is not None else np.random.SeedSequence(seed)
        )
        self.generator = np.random.Generator(np.random.PCG64(self.seed_sequence))

    def spawn(self, count: int) -> list["Rng"]:
        """Derive ``count`` independent child generators."""
        return [Rng(_sequence=seq) for seq in self.seed_sequence.spawn(count)]


@dataclass(frozen=True)
class EmpiricalPMF:
    """Draw counts per rank from repeated sampling."""

    n: int
    counts: tuple[int, ...]
    trials: int

    def __post_init__(self):
        if len(self.counts) != self.n:
            raise ValueError(f"expected {self.n} counts, got {len(self.counts)}")
        if sum(self.counts) != self.trials:
            raise ValueError("counts do not add up to the number of trials")

    def frequency(self, k: int) -> float:
        return self.counts[k - 1] / self.trials


@lru_cache(maxsize=256)
def _cumulative_floats(weights: tuple[Fraction, ...]) -> tuple[float, ...]:
    acc, out = 0.0, []
    for w in weights:
        acc += float(w)
        out.append(acc)
    out[-1] = 1.0
    return tuple(out)


def sample_tournament_winner(scheme: TournamentScheme, rng: Rng) -> int:
    """Play one probabilistic tournament and return the winner's rank.

    Draws t ranks uniformly with replacement (duplicates kept), sorts them
    ascending so seed 1 is the fittest member, picks a seed according to
    the bias vector, and returns that seed's rank.  O(t log t) per call.
    """
    ranks = sorted(rng.generator.integers(1, scheme.n + 1, size=scheme.t).tolist())
    cum = _cumulative_floats(scheme.alpha)
    seed_index = min(bisect_right(cum, rng.generator.random()), scheme.t - 1)
    return ranks[seed_index]


def sample_rank_winner(pmf: SelectionPMF, rng: Rng) -> int:
    """Draw a rank from an explicit PMF by inverse-CDF binary search.

    O(n) table setup amortized across calls with the same PMF, O(log n)
    per draw.
    """
    if not pmf.is_valid:
        raise ValueError("cannot sample from an invalid PMF")
    cum = _cumulative_floats(pmf.pi)
    return min(bisect_right(cum, rng.generator.random()), pmf.n - 1) + 1


def _winner_batch(scheme: TournamentScheme, size: int, generator) -> np.ndarray:
    ranks = generator.integers(1, scheme.n + 1, size=(size, scheme.t))
    ranks.sort(axis=1)
    cum = np.array(_cumulative_floats(scheme.alpha))
    seats = np.searchsorted(cum, generator.random(size), side="right")
    np.clip(seats, 0, scheme.t - 1, out=seats)
    return ranks[np.arange(size), seats]


def empirical_pmf(scheme: TournamentScheme, trials: int, seed, workers: int = 1) -> EmpiricalPMF:
    """Tally ``trials`` tournament winners; deterministic per (seed, trials, workers).

    Work is split into ``workers`` shards with independently derived
    sub-streams; counts are summed, so the result does not depend on
    scheduling, only on the worker count.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if workers < 1:
        raise ValueError(f"need at least one worker, got {workers}")
    shard_sizes = [trials // workers + (1 if w < trials % workers else 0) for w in range(workers)]
    counts = np.zeros(scheme.n + 1, dtype=np.int64)
    for child, shard in zip(Rng(seed).spawn(workers), shard_sizes):
        done = 0
        while done < shard:
            batch = min(shard - done, 1_000_000)
            winners = _winner_batch(scheme, batch, child.generator)
            counts += np.bincount(winners, minlength=scheme.n + 1)
            done += batch
    return EmpiricalPMF(scheme.n, tuple(int(c) for c in counts[1:]), trials)


def brute_force_seed_pmf(n: int, t: int) -> RationalMatrix:
    """Exact seed-rank PMFs by enumerating all n**t equiprobable tournaments.

    Returns an n x t matrix whose column s, row k is the probability that
    the seed-s (s-th best) member of a tournament has rank k.  Refuses
    jobs beyond ``BRUTE_FORCE_LIMIT`` tournaments.
    """
    if n < 1 or t < 1:
        raise ValueError(f"need positive sizes, got n = {n}, t = {t}")
    total = n**t
    if total > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"{n}**{t} = {total} tournaments exceeds the enumeration cap "
            f"{BRUTE_FORCE_LIMIT}; use a smaller n or t"
        )
    tallies = [[0] * t for _ in range(n)]
    for draw in itertools.product(range(1, n + 1), repeat=t):
        for s, rank in enumerate(sorted(draw)):
            tallies[rank - 1][s] += 1
    return RationalMatrix(
        [[Fraction(c, total) for c in row] for row in tallies]
    )


def tv_distance(empirical: EmpiricalPMF, pmf: SelectionPMF) -> float:
    """Total variation distance between empirical frequencies and an exact PMF."""
    if empirical.n != pmf.n:
        raise ValueError(f"size mismatch: counts for n = {empirical.n}, PMF for n = {pmf.n}")
    gap = sum(abs(Fraction(c, empirical.trials) - p) for c, p in zip(empirical.counts, pmf.pi))
    return float(gap / 2)
