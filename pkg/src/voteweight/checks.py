"""Verification suites behind the `verify` CLI command.

Each check compares an implementation path against an independent route:
closed-form identities against direct evaluation, Monte Carlo estimates
against exact expectations, and adversary accounting against the quantities
the constructions guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .adversaries import majority_prefix_partition, random_distribution, random_profile
from .core import TOL, Ranking, anonymize, unanimous
from .errors import EstimatorUndefinedError
from .harness import (
    CondorcetSplitSource,
    WinnerPunishingSource,
    best_voter,
    regret,
    run_episode,
)
from .rules import (
    RandomizedCopeland,
    RandomizedPositional,
    condorcet_winner,
    copeland_scores,
    duple_mixture_copeland,
    positional_scores,
    unilateral_mixture_positional,
    validate_scores,
)
from .schemes import SchemeConfig, SchemeState, partial_info_update

SUITES = ("identities", "estimators", "adversaries", "all")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name, passed, detail)


def _random_votes(n: int, m: int, rng: np.random.Generator) -> list[Ranking]:
    return [Ranking(tuple(int(a) for a in rng.permutation(m))) for _ in range(n)]


# ---------------------------------------------------------------------------
# identities


def check_single_voter_decomposition(seed: int, profiles: int) -> CheckResult:
    """Averaging the rule over single-voter profiles must equal evaluating the
    profile built from the voter distribution, for score-based randomized rules."""
    rng = np.random.default_rng(seed)
    n, m = 6, 4
    worst = 0.0
    for name in ("plurality", "veto", "borda"):
        rule = RandomizedPositional(name)
        for _ in range(profiles):
            votes = _random_votes(n, m, rng)
            p = random_distribution(n, rng)
            mixed = rule.evaluate(anonymize(votes, p))
            averaged = sum(
                p[i] * rule.evaluate(unanimous(votes[i])) for i in range(n)
            )
            worst = max(worst, float(np.max(np.abs(mixed - averaged))))
    return _result(
        "single_voter_decomposition", worst <= TOL, f"max deviation {worst:.3e}"
    )


def check_duple_decomposition(seed: int, profiles: int) -> CheckResult:
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    for _ in range(profiles):
        m = int(rng.integers(3, 6))
        profile = random_profile(m, rng)
        dev = np.max(
            np.abs(
                RandomizedCopeland().evaluate(profile)
                - duple_mixture_copeland(m).evaluate(profile)
            )
        )
        worst = max(worst, float(dev))
    return _result("duple_decomposition", worst <= TOL, f"max deviation {worst:.3e}")


def check_unilateral_decomposition(seed: int, profiles: int) -> CheckResult:
    rng = np.random.default_rng(seed + 2)
    worst = 0.0
    for _ in range(profiles):
        m = int(rng.integers(3, 6))
        s = validate_scores(np.sort(rng.random(m))[::-1] + np.array([1.0] + [0.0] * (m - 1)))
        profile = random_profile(m, rng)
        dev = np.max(
            np.abs(
                RandomizedPositional(s).evaluate(profile)
                - unilateral_mixture_positional(s).evaluate(profile)
            )
        )
        worst = max(worst, float(dev))
    return _result(
        "unilateral_decomposition", worst <= TOL, f"max deviation {worst:.3e}"
    )


def check_score_conservation(seed: int, profiles: int) -> CheckResult:
    rng = np.random.default_rng(seed + 3)
    worst = 0.0
    for _ in range(profiles):
        m = int(rng.integers(2, 7))
        profile = random_profile(m, rng)
        s = np.sort(rng.random(m))[::-1] + np.array([1.0] + [0.0] * (m - 1))
        worst = max(
            worst,
            abs(float(positional_scores(profile, s).sum()) - float(s.sum())),
            abs(float(copeland_scores(profile).sum()) - m * (m - 1) / 2),
        )
    return _result("score_conservation", worst <= TOL, f"max deviation {worst:.3e}")


def check_condorcet_gap(seed: int, profiles: int) -> CheckResult:
    """Wherever a Condorcet winner exists, randomized Copeland must select it
    with a lead of at least 2/(m(m-1)) over every other alternative."""
    rng = np.random.default_rng(seed + 4)
    rule = RandomizedCopeland()
    found = 0
    worst_slack = math.inf
    while found < profiles:
        m = int(rng.integers(3, 6))
        profile = random_profile(m, rng)
        winner = condorcet_winner(profile)
        if winner is None:
            continue
        found += 1
        dist = rule.evaluate(profile)
        others = np.delete(dist, winner)
        slack = float(dist[winner] - others.max()) - 2.0 / (m * (m - 1))
        worst_slack = min(worst_slack, slack)
    return _result(
        "condorcet_gap",
        worst_slack >= -TOL,
        f"{found} Condorcet instances, worst slack {worst_slack:.3e}",
    )


# ---------------------------------------------------------------------------
# estimators


def estimator_monte_carlo(
    seed: int, samples: int, n: int = 5, m: int = 3
) -> dict[str, float]:
    """Draw (voter, winner) pairs at a fixed round and aggregate the
    importance-weighted loss estimates.

    Returns the sample means/standard errors of sum_i p_i * est_i and of
    sum_i p_i * est_i^2, along with the exact expected round loss.
    """
    rng = np.random.default_rng(seed)
    rule = RandomizedPositional("borda")
    votes = _random_votes(n, m, rng)
    ell = rng.random(m)
    p = random_distribution(n, rng)

    dists = np.array([rule.evaluate(unanimous(v)) for v in votes])
    exact = float(p @ (dists @ ell))

    voters = rng.choice(n, size=samples, p=p)
    u = rng.random(samples)
    cdfs = np.cumsum(dists, axis=1)
    winners = (cdfs[voters] < u[:, None]).sum(axis=1)

    # sum_i p_i * est_i collapses to the winner's observed loss; the second
    # moment collapses to that loss squared over the selection probability.
    first = ell[winners]
    second = ell[winners] ** 2 / p[voters]
    return {
        "mean": float(first.mean()),
        "stderr": float(first.std(ddof=1) / math.sqrt(samples)),
        "second_moment": float(second.mean()),
        "second_stderr": float(second.std(ddof=1) / math.sqrt(samples)),
        "exact": exact,
        "n": n,
    }


def check_estimator_mean(seed: int, samples: int = 10**5) -> CheckResult:
    stats = estimator_monte_carlo(seed + 10, samples)
    err = abs(stats["mean"] - stats["exact"])
    bound = 3 * stats["stderr"]
    return _result(
        "estimator_mean",
        err <= bound,
        f"|{stats['mean']:.6f} - {stats['exact']:.6f}| = {err:.2e} vs 3se {bound:.2e}",
    )


def check_estimator_second_moment(seed: int, samples: int = 10**5) -> CheckResult:
    stats = estimator_monte_carlo(seed + 11, samples)
    bound = stats["n"] + 3 * stats["second_stderr"]
    return _result(
        "estimator_second_moment",
        stats["second_moment"] <= bound,
        f"{stats['second_moment']:.4f} <= {bound:.4f}",
    )


def check_estimator_error_path(seed: int) -> CheckResult:
    """A zero selection probability must surface as an explicit error."""
    config = SchemeConfig("partial_info", n=3, horizon=10)
    state = SchemeState(np.zeros(3), 0)
    try:
        partial_info_update(state, config, chosen=1, observed_loss=0.5,
                            probs=np.array([0.5, 0.0, 0.5]))
    except EstimatorUndefinedError:
        return _result("estimator_error_path", True, "zero probability rejected")
    return _result("estimator_error_path", False, "zero probability was accepted")


# ---------------------------------------------------------------------------
# adversaries


def check_winner_punishing(seed: int) -> CheckResult:
    from .rules import DeterministicPositional

    n, T = 4, 200
    rule = DeterministicPositional("plurality")
    scheme = SchemeConfig("constant", n=n, horizon=T)
    trace = run_episode(scheme, rule, WinnerPunishingSource(rule, 3), T, seed=seed)
    losses_one = all(r.scheme_expected_loss == 1.0 for r in trace.records)
    _, best = best_voter(trace)
    ok = losses_one and best <= (n - 1) * T / n and regret(trace) >= T / n
    return _result(
        "winner_punishing_accounting",
        ok,
        f"regret {regret(trace):.1f} >= {T / n:.1f}, best voter {best:.1f}",
    )


def check_prefix_bound(seed: int, profiles: int) -> CheckResult:
    """Heavy-block weight must be at least its share of a uniform split."""
    rng = np.random.default_rng(seed + 20)
    worst = math.inf
    for _ in range(profiles):
        n = int(rng.integers(2, 30))
        w = rng.random(n) * 10
        part = majority_prefix_partition(w)
        worst = min(worst, part.heavy_weight - len(part.heavy) * float(w.sum()) / n)
    return _result("majority_prefix_bound", worst >= -TOL, f"worst slack {worst:.3e}")


def check_condorcet_split(seed: int) -> CheckResult:
    import warnings as _warnings

    n, m, T = 11, 3, 200
    rule = RandomizedCopeland()
    delta = 2.0 / (m * (m - 1))
    scheme = SchemeConfig("deterministic_unilateral", n=n, horizon=T)
    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore")
        trace = run_episode(
            scheme, rule, CondorcetSplitSource(rule, m, delta), T, seed=seed
        )
    worst_gap = min(
        r.scheme_expected_loss - float(r.per_voter_loss.mean()) for r in trace.records
    )
    ok = worst_gap >= delta / 6 - TOL and regret(trace) >= T * delta / 6 - TOL
    return _result(
        "condorcet_split_gap",
        ok,
        f"worst per-round gap {worst_gap:.5f} >= {delta / 6:.5f}, "
        f"regret {regret(trace):.1f}",
    )


# ---------------------------------------------------------------------------
# suite dispatch


def run_suite(name: str, seed: int = 0, profiles: int = 100) -> list[CheckResult]:
    identities = [
        check_single_voter_decomposition,
        check_duple_decomposition,
        check_unilateral_decomposition,
        check_score_conservation,
        check_condorcet_gap,
    ]
    results: list[CheckResult] = []
    if name in ("identities", "all"):
        results.extend(fn(seed, profiles) for fn in identities)
    if name in ("estimators", "all"):
        results.append(check_estimator_mean(seed))
        results.append(check_estimator_second_moment(seed))
        results.append(check_estimator_error_path(seed))
    if name in ("adversaries", "all"):
        results.append(check_winner_punishing(seed))
        results.append(check_prefix_bound(seed, profiles))
        results.append(check_condorcet_split(seed))
    if not results:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    return results
