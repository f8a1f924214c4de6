"""Round generators: worst-case constructions against deterministic weighting
schemes, plus a benign i.i.d. generator for upper-bound experiments.

The worst-case generators are adaptive: they consume the weight vector the
scheme just played and only then emit the round.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import TOL, AnonymousProfile, Ranking, all_rankings, anonymize, unanimous
from .errors import (
    DegenerateWeightsError,
    HypothesisViolatedError,
    NoWitnessError,
)
from .rules import VotingRule, condorcet_winner


@dataclass(frozen=True)
class RoundChallenge:
    """One election's inputs: a ranking per voter and a loss per alternative."""

    rankings: tuple[Ranking, ...]
    losses: np.ndarray

    @property
    def m(self) -> int:
        return len(self.losses)


@dataclass(frozen=True)
class PartitionResult:
    """Split of the voters into a heavy majority block and the rest."""

    heavy: tuple[int, ...]
    light: tuple[int, ...]
    heavy_weight: float


def majority_prefix_partition(weights: Sequence[float] | np.ndarray) -> PartitionResult:
    """Shortest prefix of voters, sorted by weight descending, exceeding half
    the total weight. Weight ties break by ascending voter index."""
    w = np.asarray(weights, dtype=float)
    total = float(w.sum())
    if total <= 0:
        raise DegenerateWeightsError("total weight must be positive")
    order = sorted(range(len(w)), key=lambda i: (-w[i], i))
    heavy: list[int] = []
    acc = 0.0
    for i in order:
        heavy.append(i)
        acc += w[i]
        if acc > total / 2:
            break
    light = tuple(i for i in order if i not in set(heavy))
    # The top-j prefix of a sorted sequence carries at least j/n of the total.
    assert acc >= len(heavy) * total / len(w) - TOL
    return PartitionResult(tuple(heavy), light, acc)


def top_two_ranking(x: int, y: int, m: int) -> Ranking:
    """x first, y second, remaining alternatives in ascending id order.

    Positions past the second never matter to the constructed losses, which
    assign all remaining alternatives the same loss.
    """
    rest = [a for a in range(m) if a not in (x, y)]
    return Ranking((x, y, *rest))


@dataclass(frozen=True)
class GapPair:
    """An oriented pair (a, b) with its two head-to-head rankings.

    Oriented so that the winner's margin under `top_ba` is at least the
    winner's margin under `top_ab`.
    """

    a: int
    b: int
    top_ab: Ranking
    top_ba: Ranking


def orient_gap_pair(rule: VotingRule, m: int) -> GapPair:
    """Pick and orient the pair used by the Condorcet-split construction.

    Candidate pairs are scanned in ascending id order; after orientation the
    first pair always qualifies, so this inspects only (0, 1).
    """
    x, y = 0, 1
    t_xy = top_two_ranking(x, y, m)
    t_yx = top_two_ranking(y, x, m)
    d_xy = rule.evaluate(unanimous(t_xy))
    d_yx = rule.evaluate(unanimous(t_yx))
    gap_xy = float(d_xy[x] - d_xy[y])
    gap_yx = float(d_yx[y] - d_yx[x])
    if gap_yx >= gap_xy:
        return GapPair(x, y, t_xy, t_yx)
    return GapPair(y, x, t_yx, t_xy)


def winner_punishing_round(
    weights: Sequence[float] | np.ndarray,
    rule: VotingRule,
    witness: tuple[Ranking, Ranking],
) -> RoundChallenge:
    """Adversarial round for a deterministic rule that is not constant on
    unanimous profiles: voter 0 reports one witness ranking, everyone else the
    other, and whatever wins under the played weights gets loss 1.

    The scheme's loss is exactly 1 while at least one voter's unanimous
    outcome differs from the winner and so incurs loss 0.
    """
    if not rule.deterministic:
        raise NoWitnessError("winner punishment requires a deterministic rule")
    tau, tau_prime = witness
    n = len(weights)
    rankings = (tau,) + (tau_prime,) * (n - 1)
    dist = rule.evaluate(anonymize(rankings, weights))
    winner = int(np.argmax(dist))
    losses = np.zeros(tau.m)
    losses[winner] = 1.0
    return RoundChallenge(rankings, losses)


def condorcet_split_round(
    weights: Sequence[float] | np.ndarray,
    pair: GapPair,
    delta: float,
) -> RoundChallenge:
    """Adversarial round for a rule whose Condorcet winner leads by `delta`.

    The heavy block ranks a over b, the rest rank b over a; losses are 1 on a,
    0 on b, and 1/2 elsewhere. a is then a Condorcet winner under the played
    weights, so the rule must over-select the loss-1 alternative.
    """
    n = len(weights)
    if n < 2 * (3.0 / (2.0 * delta) + 1.0):
        raise HypothesisViolatedError(
            f"need n >= 2(3/(2 delta) + 1) = {2 * (3 / (2 * delta) + 1):.3f}, got {n}"
        )
    part = majority_prefix_partition(weights)
    heavy = set(part.heavy)
    rankings = tuple(pair.top_ab if i in heavy else pair.top_ba for i in range(n))
    m = pair.top_ab.m
    losses = np.full(m, 0.5)
    losses[pair.a] = 1.0
    losses[pair.b] = 0.0

    profile = anonymize(rankings, weights)
    assert condorcet_winner(profile) == pair.a
    # Case split on how far the heavy block overshoots half the total weight.
    total = float(np.asarray(weights, dtype=float).sum())
    if part.heavy_weight >= (0.5 + delta / 3.0) * total:
        assert len(part.heavy) <= 3.0 / (2.0 * delta) + 1.0 + TOL
    else:
        assert len(part.heavy) < n * (0.5 + delta / 3.0) + TOL
    return RoundChallenge(rankings, losses)


def iid_random_round(n: int, m: int, rng: np.random.Generator) -> RoundChallenge:
    """Uniform random rankings and i.i.d. uniform [0,1] losses."""
    if m <= 8:
        # draw indices into the cached catalog instead of building fresh
        # Ranking objects; this dominates long-horizon episode cost otherwise
        catalog = all_rankings(m)
        idx = rng.integers(0, len(catalog), size=n)
        rankings = tuple(catalog[i] for i in idx)
    else:
        rankings = tuple(
            Ranking(tuple(int(a) for a in rng.permutation(m))) for _ in range(n)
        )
    return RoundChallenge(rankings, rng.random(m))


# ---------------------------------------------------------------------------
# Fuzzing helpers shared by the verification suites and tests


def random_profile(
    m: int, rng: np.random.Generator, support: int = 5
) -> AnonymousProfile:
    """Random sparse profile: `support` random rankings with random weights."""
    rankings = [
        Ranking(tuple(int(a) for a in rng.permutation(m))) for _ in range(support)
    ]
    weights = rng.random(support) + 1e-3
    return anonymize(rankings, weights)


def random_distribution(n: int, rng: np.random.Generator) -> np.ndarray:
    p = rng.random(n) + 1e-3
    return p / p.sum()
