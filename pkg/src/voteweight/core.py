"""Core election values: rankings, anonymous profiles, losses, distributions.

Alternatives are round-local integers ``0..m-1``. Positions within a ranking
are 0-based, so the most preferred alternative has position 0. All types here
are immutable values after construction; random sampling takes an explicit
caller-owned generator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateWeightsError,
    EnumerationRefusedError,
    InvalidRankingError,
    ShapeError,
)

#: Comparison tolerance for all probability/loss identities. Everything tested
#: against it is a short sum of double-precision products.
TOL = 1e-12


@dataclass(frozen=True)
class Ranking:
    """A strict linear order over alternatives {0, ..., m-1}, best first."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(len(self.order))):
            raise InvalidRankingError(
                f"order must be a permutation of 0..{len(self.order) - 1}, "
                f"got {self.order}"
            )

    @property
    def m(self) -> int:
        return len(self.order)

    @cached_property
    def positions(self) -> tuple[int, ...]:
        """positions[a] is the 0-based position of alternative a."""
        pos = [0] * len(self.order)
        for rank, a in enumerate(self.order):
            pos[a] = rank
        return tuple(pos)

    def position(self, a: int) -> int:
        return self.positions[a]

    def prefers(self, a: int, b: int) -> bool:
        """True iff a is ranked strictly above b."""
        return self.positions[a] < self.positions[b]

    @property
    def top(self) -> int:
        return self.order[0]


@lru_cache(maxsize=None)
def all_rankings(m: int) -> tuple[Ranking, ...]:
    """All m! rankings in lexicographic order; guarded against large m."""
    if m > 8:
        raise EnumerationRefusedError(f"refusing to enumerate {m}! rankings")
    return tuple(Ranking(perm) for perm in itertools.permutations(range(m)))


def make_ranking(order: Sequence[int], m: int) -> Ranking:
    """Build a ranking over m alternatives, validating the permutation."""
    if len(order) != m:
        raise InvalidRankingError(
            f"expected {m} alternatives, got {len(order)}"
        )
    return Ranking(tuple(int(a) for a in order))


@dataclass(frozen=True)
class AnonymousProfile:
    """Sparse distribution over rankings: mass[r] is the weight fraction on r.

    Support size is bounded by the number of voters; the profile is never
    materialized over all m! rankings.
    """

    mass: dict[Ranking, float]
    m: int

    def __post_init__(self) -> None:
        total = 0.0
        for ranking, frac in self.mass.items():
            if ranking.m != self.m:
                raise ShapeError(
                    f"ranking over {ranking.m} alternatives in a profile with m={self.m}"
                )
            if frac < 0:
                raise ShapeError(f"negative mass {frac} on {ranking.order}")
            total += frac
        if abs(total - 1.0) > TOL:
            raise ShapeError(f"profile mass sums to {total}, expected 1")

    def items(self) -> Iterable[tuple[Ranking, float]]:
        return self.mass.items()

    @property
    def support(self) -> Iterable[Ranking]:
        return self.mass.keys()


def unanimous(ranking: Ranking) -> AnonymousProfile:
    """The profile placing all weight on a single ranking."""
    return AnonymousProfile({ranking: 1.0}, ranking.m)


def anonymize(
    rankings: Sequence[Ranking], weights: Sequence[float] | np.ndarray
) -> AnonymousProfile:
    """Collapse a vote profile and weight vector into weight fractions.

    Identical rankings merge; the result is invariant to voter permutation
    and to positive rescaling of the weights.
    """
    w = np.asarray(weights, dtype=float)
    if len(rankings) != len(w):
        raise ShapeError(f"{len(rankings)} rankings but {len(w)} weights")
    if np.any(w < 0):
        raise DegenerateWeightsError("weights must be non-negative")
    total = float(w.sum())
    if total <= 0:
        raise DegenerateWeightsError("total weight must be positive")

    m = rankings[0].m
    mass: dict[Ranking, float] = {}
    for ranking, wi in zip(rankings, w):
        if ranking.m != m:
            raise ShapeError("all rankings in a round must share one alternative set")
        if wi == 0:
            continue
        mass[ranking] = mass.get(ranking, 0.0) + wi
    for ranking in mass:
        mass[ranking] /= total
    return AnonymousProfile(mass, m)


def validate_losses(losses: Sequence[float] | np.ndarray) -> np.ndarray:
    """Check a loss vector lies in [0,1]^m and return it as an array."""
    ell = np.asarray(losses, dtype=float)
    if ell.ndim != 1:
        raise ShapeError(f"losses must be a vector, got shape {ell.shape}")
    if np.any(ell < 0) or np.any(ell > 1):
        raise ShapeError("losses must lie in [0, 1]")
    return ell


def as_distribution(probs: Sequence[float] | np.ndarray) -> np.ndarray:
    """Validate a probability vector over alternatives."""
    p = np.asarray(probs, dtype=float)
    if np.any(p < 0):
        raise ShapeError("probabilities must be non-negative")
    if abs(float(p.sum()) - 1.0) > TOL:
        raise ShapeError(f"probabilities sum to {p.sum()}, expected 1")
    return p


def sample_index(probs: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-CDF draw from an unnormalized non-negative vector."""
    cdf = np.cumsum(probs)
    idx = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return idx if idx < len(probs) else len(probs) - 1


def sample_alternative(dist: np.ndarray, rng: np.random.Generator) -> int:
    """Draw one alternative from a probability vector."""
    return sample_index(dist, rng)


def expected_loss(rule, profile: AnonymousProfile, losses: np.ndarray) -> float:
    """Expected loss of the alternative the rule picks: f(profile) . losses."""
    ell = np.asarray(losses, dtype=float)
    if len(ell) != profile.m:
        raise ShapeError(f"{len(ell)} losses for a profile with m={profile.m}")
    return float(rule.evaluate(profile) @ ell)
