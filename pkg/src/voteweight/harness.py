"""Episode orchestration: run T rounds of scheme vs. round source, record
exact expected losses, and compute regret against the best voter in hindsight.

Expected losses are computed in closed form from the rule's output
distribution; sampling is used only for the winner that is actually fed back
in partial-information mode (and recorded for replay checks).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .adversaries import (
    GapPair,
    RoundChallenge,
    condorcet_split_round,
    iid_random_round,
    orient_gap_pair,
    winner_punishing_round,
)
from .core import Ranking, anonymize, make_ranking, sample_alternative, validate_losses
from .errors import ConfigError, NoWitnessError
from .rules import (
    RandomizedCopeland,
    VotingRule,
    per_voter_losses,
    unanimity_witness,
    unanimous_distribution,
)
from .schemes import (
    SchemeConfig,
    SchemeState,
    act,
    full_info_update,
    initial_state,
    partial_info_update,
    voter_distribution,
)


@dataclass(frozen=True)
class RoundRecord:
    t: int
    challenge: RoundChallenge
    weights: np.ndarray
    winner: int
    scheme_expected_loss: float
    per_voter_loss: np.ndarray


@dataclass(frozen=True)
class Trace:
    records: tuple[RoundRecord, ...]
    config: dict
    seed: int


# ---------------------------------------------------------------------------
# Round sources


class WinnerPunishingSource:
    """Adaptive worst case for deterministic rules (config token: "thm3")."""

    def __init__(self, rule: VotingRule, m: int):
        witness = unanimity_witness(rule, m)
        if witness is None:
            raise NoWitnessError("rule is constant on unanimous profiles")
        self.rule = rule
        self.witness = witness

    def emit(self, t: int, weights: np.ndarray, rng: np.random.Generator) -> RoundChallenge:
        return winner_punishing_round(weights, self.rule, self.witness)


class CondorcetSplitSource:
    """Adaptive worst case for Condorcet-leaning rules (config token: "thm5").

    `delta` is the rule's guaranteed Condorcet-winner selection gap. Built-in
    values: 2/(m(m-1)) for randomized Copeland and 1 for deterministic rules;
    any other rule needs an explicit delta.
    """

    def __init__(self, rule: VotingRule, m: int, delta: Optional[float] = None):
        if delta is None:
            if isinstance(rule, RandomizedCopeland):
                delta = 2.0 / (m * (m - 1))
            elif rule.deterministic:
                delta = 1.0
            else:
                raise ConfigError("no built-in gap for this rule; supply delta")
        self.rule = rule
        self.delta = delta
        self.pair: GapPair = orient_gap_pair(rule, m)

    def emit(self, t: int, weights: np.ndarray, rng: np.random.Generator) -> RoundChallenge:
        return condorcet_split_round(weights, self.pair, self.delta)


class IIDRandomSource:
    """Benign environment: uniform rankings, uniform losses."""

    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m

    def emit(self, t: int, weights: np.ndarray, rng: np.random.Generator) -> RoundChallenge:
        return iid_random_round(self.n, self.m, rng)


class FileSource:
    """Pre-recorded rounds from a JSON Lines file.

    Each line is {"rankings": [[ids], ...], "losses": [reals]}; the number of
    alternatives is inferred per line and may vary across rounds.
    """

    def __init__(self, path: str):
        self.rounds: list[RoundChallenge] = []
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    losses = validate_losses(obj["losses"])
                    m = len(losses)
                    rankings = tuple(make_ranking(r, m) for r in obj["rankings"])
                except (KeyError, TypeError, ValueError) as exc:
                    raise ConfigError(f"{path}:{lineno}: bad round: {exc}") from exc
                self.rounds.append(RoundChallenge(rankings, losses))
        if not self.rounds:
            raise ConfigError(f"{path}: no rounds")

    def emit(self, t: int, weights: np.ndarray, rng: np.random.Generator) -> RoundChallenge:
        if t > len(self.rounds):
            raise ConfigError(
                f"sequence file has {len(self.rounds)} rounds, round {t} requested"
            )
        return self.rounds[t - 1]


# ---------------------------------------------------------------------------
# Episode loop


def run_episode(
    scheme: SchemeConfig,
    rule: VotingRule,
    source,
    T: int,
    feedback: str = "full",
    seed: int = 0,
) -> Trace:
    """Play T rounds: scheme emits weights, source emits the round, a winner
    is sampled, and feedback is routed per mode."""
    if feedback not in ("full", "partial"):
        raise ConfigError(f"unknown feedback mode {feedback!r}")
    if feedback == "partial" and scheme.kind in ("full_info", "deterministic_unilateral"):
        raise ConfigError(
            f"scheme kind {scheme.kind!r} has no partial-information update"
        )
    rng = np.random.default_rng(seed)
    state = initial_state(scheme)
    dist_cache: dict = {}
    records: list[RoundRecord] = []
    warned = False

    for t in range(1, T + 1):
        probs = voter_distribution(state, scheme)
        weights, chosen = act(state, scheme, rng, probs=probs)
        if (
            scheme.kind == "deterministic_unilateral"
            and not rule.is_distribution_over_unilaterals()
            and not warned
        ):
            warnings.warn(
                "deterministic weights with a rule that does not decompose "
                "across voters: the round-for-round equivalence guarantee is void",
                stacklevel=2,
            )
            warned = True
        challenge = source.emit(t, weights, rng)
        if len(challenge.rankings) != scheme.n:
            raise ConfigError(
                f"round {t} has {len(challenge.rankings)} rankings for n={scheme.n}"
            )
        losses = challenge.losses
        voter_loss = per_voter_losses(rule, challenge.rankings, losses, dist_cache)

        if scheme.kind in ("full_info", "partial_info"):
            scheme_dist = unanimous_distribution(rule, challenge.rankings[chosen], dist_cache)
            scheme_loss = float(voter_loss[chosen])
        elif scheme.kind == "constant":
            scheme_dist = unanimous_distribution(rule, challenge.rankings[0], dist_cache)
            scheme_loss = float(voter_loss[0])
        else:  # deterministic_unilateral
            scheme_dist = rule.evaluate(anonymize(challenge.rankings, weights))
            scheme_loss = float(scheme_dist @ losses)

        winner = sample_alternative(scheme_dist, rng)
        records.append(
            RoundRecord(t, challenge, weights, winner, scheme_loss, voter_loss)
        )

        if scheme.kind in ("full_info", "deterministic_unilateral"):
            state = full_info_update(
                state, scheme, challenge.rankings, losses, rule, increments=voter_loss
            )
        elif scheme.kind == "partial_info":
            state = partial_info_update(
                state, scheme, chosen, float(losses[winner]), probs
            )
        # constant: no update, by design

    config_echo = {
        "scheme": scheme.kind,
        "n": scheme.n,
        "T": T,
        "eta": scheme.learning_rate,
        "feedback": feedback,
        "rule": repr(rule),
    }
    return Trace(tuple(records), config_echo, seed)


# ---------------------------------------------------------------------------
# Benchmarks and aggregation


def voter_totals(trace: Trace) -> np.ndarray:
    return np.sum([r.per_voter_loss for r in trace.records], axis=0)


def best_voter(trace: Trace) -> tuple[int, float]:
    """Exact minimizer of cumulative per-voter loss; ties go to the smallest index."""
    totals = voter_totals(trace)
    idx = int(np.argmin(totals))
    return idx, float(totals[idx])


def regret(trace: Trace) -> float:
    """Cumulative scheme expected loss minus the best voter's cumulative loss."""
    total = sum(r.scheme_expected_loss for r in trace.records)
    _, best = best_voter(trace)
    return total - best


def monte_carlo_regret(
    episode_fn: Callable[[int], Trace], trials: int, base_seed: int = 0
) -> tuple[float, float]:
    """Mean and standard error of regret over trials seeded base, base+1, ..."""
    if trials < 1:
        raise ConfigError("need at least one trial")
    values = np.array([regret(episode_fn(base_seed + k)) for k in range(trials)])
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return mean, stderr


def oracle_expected_round_loss(
    rule: VotingRule,
    rankings: Sequence[Ranking],
    losses: np.ndarray,
    probs: np.ndarray,
) -> float:
    """Closed-form expected loss of sampling a voter from `probs` and applying
    the rule to that voter's unanimous profile."""
    return float(probs @ per_voter_losses(rule, rankings, losses))
