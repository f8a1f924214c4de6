"""Batch front-end: run simulations from JSON configs and verification suites.

Exit codes: 0 success, 1 usage/config error, 2 check failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from .checks import SUITES, run_suite
from .errors import VoteWeightError
from .harness import (
    CondorcetSplitSource,
    FileSource,
    IIDRandomSource,
    Trace,
    WinnerPunishingSource,
    regret,
    run_episode,
    voter_totals,
)
from .rules import rule_from_spec
from .schemes import SchemeConfig


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _build_source(spec: dict, rule, n: int, m: int):
    kind = spec.get("kind")
    if kind == "thm3":
        return WinnerPunishingSource(rule, m)
    if kind == "thm5":
        return CondorcetSplitSource(rule, m, spec.get("delta"))
    if kind == "iid_random":
        return IIDRandomSource(n, m)
    if kind == "file":
        path = spec.get("path")
        if not path or not os.path.exists(path):
            raise VoteWeightError(f"sequence file not found: {path!r}")
        return FileSource(path)
    raise VoteWeightError(f"unknown source kind {kind!r}")


def _write_trace_csv(path: str, trace: Trace) -> None:
    cumulative_scheme = 0.0
    running_voter = np.zeros(len(trace.records[0].per_voter_loss))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "round",
                "scheme_expected_loss",
                "cumulative_scheme_loss",
                "best_voter_cumulative_loss_so_far",
                "cumulative_regret",
            ]
        )
        for record in trace.records:
            cumulative_scheme += record.scheme_expected_loss
            running_voter = running_voter + record.per_voter_loss
            best = float(running_voter.min())
            writer.writerow(
                [
                    record.t,
                    _fmt(record.scheme_expected_loss),
                    _fmt(cumulative_scheme),
                    _fmt(best),
                    _fmt(cumulative_scheme - best),
                ]
            )


def cmd_simulate(config_path: str, out_dir: Optional[str]) -> int:
    try:
        with open(config_path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config {config_path}: {exc}", file=sys.stderr)
        return 1

    try:
        n = int(cfg["n"])
        m = int(cfg["m"])
        T = int(cfg["T"])
        feedback = cfg.get("feedback", "full")
        seed = int(cfg.get("seed", 0))
        trials = int(cfg.get("trials", 1))
        rule = rule_from_spec(cfg["rule"])
        scheme_spec = cfg.get("scheme", {})
        scheme = SchemeConfig(
            kind=scheme_spec.get("kind", "full_info"),
            n=n,
            horizon=T,
            eta=scheme_spec.get("eta"),
        )
        source_spec = cfg["source"]
        destination = out_dir or cfg.get("out_dir", ".")

        def episode(trial_seed: int) -> Trace:
            # Adaptive sources are stateless between rounds, but a fresh one
            # per trial keeps any future stateful source honest.
            source = _build_source(source_spec, rule, n, m)
            return run_episode(scheme, rule, source, T, feedback=feedback, seed=trial_seed)

        # Validate everything, including the source, before touching outputs.
        _build_source(source_spec, rule, n, m)
        traces = [episode(seed + k) for k in range(trials)]
    except (KeyError, TypeError, ValueError, VoteWeightError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    regrets = [regret(tr) for tr in traces]
    mean = float(np.mean(regrets))
    stderr = (
        float(np.std(regrets, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    )
    if feedback == "partial":
        bound = math.sqrt(2.0 * T * n * math.log(n)) if n > 1 else 0.0
    else:
        bound = math.sqrt(2.0 * T * math.log(n)) if n > 1 else 0.0

    os.makedirs(destination, exist_ok=True)
    trace_path = os.path.join(destination, cfg.get("trace_csv", "trace.csv"))
    summary_path = os.path.join(destination, cfg.get("summary_json", "summary.json"))
    _write_trace_csv(trace_path, traces[0])
    summary = {
        "final_regret": float(_fmt(regrets[0])),
        "regret_bound": float(_fmt(bound)),
        "mean_regret": float(_fmt(mean)),
        "stderr_regret": float(_fmt(stderr)),
        "trials": trials,
        "seed": seed,
        "best_voter_cumulative_loss": float(_fmt(float(voter_totals(traces[0]).min()))),
        "config": cfg,
    }
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {trace_path} and {summary_path}")
    print(f"final regret {_fmt(regrets[0])}, mean over {trials} trials "
          f"{_fmt(mean)} +/- {_fmt(stderr)} (bound {_fmt(bound)})")
    return 0


def cmd_verify(suite: str, seed: int, profiles: int) -> int:
    try:
        results = run_suite(suite, seed=seed, profiles=profiles)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name}: {res.detail}")
        failed += not res.passed
    if failed:
        print(f"{failed} of {len(results)} checks failed", file=sys.stderr)
        return 2
    print(f"all {len(results)} checks passed")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="voteweight",
        description="Repeated weighted voting under no-regret learning.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run episodes from a JSON config")
    p_sim.add_argument("--config", required=True, help="path to the JSON config")
    p_sim.add_argument("--out-dir", default=None, help="output directory override")

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("--suite", required=True, choices=SUITES)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--profiles", type=int, default=100)

    args = parser.parse_args(argv)
    if args.command == "simulate":
        return cmd_simulate(args.config, args.out_dir)
    return cmd_verify(args.suite, args.seed, args.profiles)


if __name__ == "__main__":
    sys.exit(main())
