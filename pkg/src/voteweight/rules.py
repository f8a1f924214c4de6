"""Anonymous voting rules: positional scoring, Copeland, unilaterals, duples,
and mixtures, in deterministic and randomized forms.

Every rule maps an :class:`~voteweight.core.AnonymousProfile` to a probability
vector over alternatives. Deterministic rules return a point mass and break
score ties by smallest alternative id.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import TOL, AnonymousProfile, Ranking, unanimous
from .errors import (
    ConfigError,
    EnumerationRefusedError,
    InvalidPairError,
    ShapeError,
)

# ---------------------------------------------------------------------------
# Score vectors


def plurality_scores(m: int) -> np.ndarray:
    return np.array([1.0] + [0.0] * (m - 1))


def veto_scores(m: int) -> np.ndarray:
    return np.array([1.0] * (m - 1) + [0.0])


def borda_scores(m: int) -> np.ndarray:
    return np.arange(m - 1, -1, -1, dtype=float)


_SCORE_FAMILIES: dict[str, Callable[[int], np.ndarray]] = {
    "plurality": plurality_scores,
    "veto": veto_scores,
    "borda": borda_scores,
}


def validate_scores(s: Sequence[float] | np.ndarray) -> np.ndarray:
    """Check s1 >= s2 >= ... >= sm >= 0 with s1 > 0."""
    vec = np.asarray(s, dtype=float)
    if vec.ndim != 1 or len(vec) < 1:
        raise ShapeError("score vector must be a non-empty 1-d sequence")
    if np.any(np.diff(vec) > 0):
        raise ShapeError("scores must be non-increasing")
    if vec[-1] < 0:
        raise ShapeError("scores must be non-negative")
    if vec[0] <= 0:
        raise ShapeError("top score must be positive")
    return vec


# ---------------------------------------------------------------------------
# Score computations


def positional_scores(profile: AnonymousProfile, s: np.ndarray) -> np.ndarray:
    """Per-alternative score: sum over rankings of mass * score-of-position."""
    if len(s) != profile.m:
        raise ShapeError(f"{len(s)} scores for a profile with m={profile.m}")
    scores = np.zeros(profile.m)
    for ranking, frac in profile.items():
        scores[list(ranking.order)] += frac * s
    return scores


def pairwise_weight(profile: AnonymousProfile, a: int, b: int) -> float:
    """Total profile mass of rankings placing a strictly above b."""
    if a == b:
        raise InvalidPairError(f"pairwise weight needs distinct alternatives, got {a}")
    return sum(frac for ranking, frac in profile.items() if ranking.prefers(a, b))


def _pairwise_matrix(profile: AnonymousProfile) -> np.ndarray:
    """P[a, b] = mass preferring a over b (diagonal zero)."""
    m = profile.m
    mat = np.zeros((m, m))
    for ranking, frac in profile.items():
        pos = np.array(ranking.positions)
        mat += frac * (pos[:, None] < pos[None, :])
    return mat


def copeland_scores(profile: AnonymousProfile) -> np.ndarray:
    """Pairwise wins plus half a point per exact pairwise tie."""
    mat = _pairwise_matrix(profile)
    m = profile.m
    scores = np.zeros(m)
    for a in range(m):
        for b in range(m):
            if a == b:
                continue
            if mat[a, b] > 0.5:
                scores[a] += 1.0
            elif mat[a, b] == 0.5:
                scores[a] += 0.5
    return scores


def condorcet_winner(profile: AnonymousProfile) -> Optional[int]:
    """The alternative strictly beating all others pairwise, if any."""
    mat = _pairwise_matrix(profile)
    for a in range(profile.m):
        if all(mat[a, b] > 0.5 for b in range(profile.m) if b != a):
            return a
    return None


def _point_mass(index: int, m: int) -> np.ndarray:
    out = np.zeros(m)
    out[index] = 1.0
    return out


# ---------------------------------------------------------------------------
# Rules


class VotingRule:
    """Base class; subclasses implement :meth:`evaluate`."""

    deterministic: bool = False

    def evaluate(self, profile: AnonymousProfile) -> np.ndarray:
        raise NotImplementedError

    def is_distribution_over_unilaterals(self) -> bool:
        """True when the rule decomposes across voters' individual rankings.

        For such rules evaluating the profile built from the voter
        distribution coincides with averaging the rule over single-voter
        profiles, which is what makes a deterministic weighting scheme
        possible.
        """
        return False


class _Positional(VotingRule):
    def __init__(self, scores: Sequence[float] | np.ndarray | str):
        if isinstance(scores, str):
            if scores not in _SCORE_FAMILIES:
                raise ConfigError(f"unknown score family {scores!r}")
            self._family: Optional[str] = scores
            self._scores: Optional[np.ndarray] = None
        else:
            self._family = None
            self._scores = validate_scores(scores)

    def score_vector(self, m: int) -> np.ndarray:
        if self._family is not None:
            return _SCORE_FAMILIES[self._family](m)
        if len(self._scores) != m:
            raise ShapeError(
                f"rule fixed to {len(self._scores)} alternatives, profile has {m}"
            )
        return self._scores

    def __repr__(self) -> str:
        tag = self._family if self._family is not None else list(self._scores)
        return f"{type(self).__name__}({tag})"


class DeterministicPositional(_Positional):
    """Point mass on the highest positional score, smallest id on ties."""

    deterministic = True

    def evaluate(self, profile: AnonymousProfile) -> np.ndarray:
        scores = positional_scores(profile, self.score_vector(profile.m))
        return _point_mass(int(np.argmax(scores)), profile.m)


class RandomizedPositional(_Positional):
    """Each alternative wins with probability proportional to its score."""

    def evaluate(self, profile: AnonymousProfile) -> np.ndarray:
        s = self.score_vector(profile.m)
        # The normalizer is the constant ||s||_1, not the realized score sum.
        return positional_scores(profile, s) / float(s.sum())

    def is_distribution_over_unilaterals(self) -> bool:
        return True


class DeterministicCopeland(VotingRule):
    """Point mass on the highest Copeland score, smallest id on ties."""

    deterministic = True

    def evaluate(self, profile: AnonymousProfile) -> np.ndarray:
        return _point_mass(int(np.argmax(copeland_scores(profile))), profile.m)


class RandomizedCopeland(VotingRule):
    """Each alternative wins with probability proportional to its Copeland score."""

    def evaluate(self, profile: AnonymousProfile) -> np.ndarray:
        m = profile.m
        return copeland_scores(profile) / (m * (m - 1) / 2)


class Unilateral(VotingRule):
    """Pick a ranking with its profile mass and apply a fixed selector to it."""

    def __init__(self, selector: Callable[[Ranking], int], name: str = "unilateral"):
        self.selector = selector
        self.name = name

    def evaluate(self, profile: AnonymousProfile) -> np.ndarray:
        probs = np.zeros(profile.m)
        for ranking, frac in profile.items():
            probs[self.selector(ranking)] += frac
        return probs

    def is_distribution_over_unilaterals(self) -> bool:
        return True

    def __repr__(self) -> str:
        return f"Unilateral({self.name})"


def position_selector(k: int) -> Callable[[Ranking], int]:
    """Selector returning the alternative ranked at 0-based position k."""
    return lambda ranking: ranking.order[k]


class Duple(VotingRule):
    """Award the pairwise majority winner among {a, b}; split 50/50 on a tie."""

    def __init__(self, a: int, b: int):
        if a == b:
            raise InvalidPairError(f"duple needs distinct alternatives, got {a}")
        self.a = a
        self.b = b

    def evaluate(self, profile: AnonymousProfile) -> np.ndarray:
        probs = np.zeros(profile.m)
        w = pairwise_weight(profile, self.a, self.b)
        if w > 0.5:
            probs[self.a] = 1.0
        elif w < 0.5:
            probs[self.b] = 1.0
        else:
            probs[self.a] = probs[self.b] = 0.5
        return probs

    def __repr__(self) -> str:
        return f"Duple({self.a}, {self.b})"


class Mixture(VotingRule):
    """Probability-weighted average of component rules."""

    def __init__(self, components: Sequence[tuple[VotingRule, float]]):
        total = sum(q for _, q in components)
        if abs(total - 1.0) > TOL or any(q < 0 for _, q in components):
            raise ShapeError(f"mixture probabilities must sum to 1, got {total}")
        self.components = list(components)

    def evaluate(self, profile: AnonymousProfile) -> np.ndarray:
        out = np.zeros(profile.m)
        for rule, q in self.components:
            out += q * rule.evaluate(profile)
        return out

    def is_distribution_over_unilaterals(self) -> bool:
        return all(rule.is_distribution_over_unilaterals() for rule, _ in self.components)


class ConstantUniform(VotingRule):
    """Ignore the profile entirely and return the uniform distribution."""

    def evaluate(self, profile: AnonymousProfile) -> np.ndarray:
        return np.full(profile.m, 1.0 / profile.m)

    def is_distribution_over_unilaterals(self) -> bool:
        # A constant rule is a mixture of constant-selector unilaterals.
        return True


# ---------------------------------------------------------------------------
# Structural helpers


def duple_mixture_copeland(m: int) -> Mixture:
    """Uniform mixture over all C(m,2) duples; equals randomized Copeland."""
    pairs = list(itertools.combinations(range(m), 2))
    return Mixture([(Duple(a, b), 1.0 / len(pairs)) for a, b in pairs])


def unilateral_mixture_positional(s: Sequence[float] | np.ndarray) -> Mixture:
    """Position-selector unilaterals weighted by s; equals randomized positional."""
    vec = validate_scores(s)
    total = float(vec.sum())
    return Mixture(
        [
            (Unilateral(position_selector(k), name=f"position_{k}"), float(vec[k]) / total)
            for k in range(len(vec))
        ]
    )


def unanimity_witness(rule: VotingRule, m: int) -> Optional[tuple[Ranking, Ranking]]:
    """Two rankings whose unanimous profiles get different outcomes, if any.

    Enumerates all m! unanimous profiles, so m is capped at 8. Returns None
    when the rule is constant on unanimous profiles.
    """
    if m > 8:
        raise EnumerationRefusedError(f"refusing to enumerate {m}! rankings")
    first: Optional[Ranking] = None
    base: Optional[np.ndarray] = None
    for perm in itertools.permutations(range(m)):
        ranking = Ranking(perm)
        dist = rule.evaluate(unanimous(ranking))
        if first is None:
            first, base = ranking, dist
        elif np.max(np.abs(dist - base)) > TOL:
            return first, ranking
    return None


# ---------------------------------------------------------------------------
# Config grammar


def rule_from_spec(spec: dict) -> VotingRule:
    """Build a rule from its config form, e.g. {"kind": "randomized_positional",
    "scores": [2, 1, 0]}. Score vectors may also be named families
    ("plurality", "veto", "borda"), which adapt to the round's m."""
    try:
        kind = spec["kind"]
    except (TypeError, KeyError):
        raise ConfigError(f"rule spec must be an object with a 'kind', got {spec!r}")
    if kind == "deterministic_positional":
        return DeterministicPositional(spec["scores"])
    if kind == "randomized_positional":
        return RandomizedPositional(spec["scores"])
    if kind == "deterministic_copeland":
        return DeterministicCopeland()
    if kind == "randomized_copeland":
        return RandomizedCopeland()
    if kind == "constant_uniform":
        return ConstantUniform()
    if kind == "duple":
        return Duple(int(spec["a"]), int(spec["b"]))
    if kind == "unilateral":
        return Unilateral(position_selector(int(spec["position"])),
                          name=f"position_{spec['position']}")
    raise ConfigError(f"unknown rule kind {kind!r}")


# ---------------------------------------------------------------------------
# Per-voter evaluation cache


def unanimous_distribution(
    rule: VotingRule,
    ranking: Ranking,
    cache: Optional[dict] = None,
) -> np.ndarray:
    """f applied to the unanimous profile on `ranking`, optionally memoized.

    The cache key includes only the ranking, so a cache must never be shared
    across rules or across rounds with different alternative sets.
    """
    if cache is None:
        return rule.evaluate(unanimous(ranking))
    dist = cache.get(ranking.order)
    if dist is None:
        dist = rule.evaluate(unanimous(ranking))
        cache[ranking.order] = dist
    return dist


def per_voter_losses(
    rule: VotingRule,
    rankings: Sequence[Ranking],
    losses: np.ndarray,
    cache: Optional[dict] = None,
) -> np.ndarray:
    """Loss each voter's ranking would incur if it carried all the weight."""
    dists = np.array([unanimous_distribution(rule, r, cache) for r in rankings])
    return dists @ np.asarray(losses, dtype=float)
