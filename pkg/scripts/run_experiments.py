#!/usr/bin/env python3
"""Reproduce the headline Monte Carlo certification experiments.

Two runs per format family:
  * perturbation runs around the reference frame, which land in the open
    set of rank > p tensors whenever the real-divisor count is below p;
  * global runs on i.i.d. Gaussian tensors, where both RANK_P and
    RANK_GT_P verdicts appear with positive frequency.

Usage:
    python scripts/run_experiments.py [--trials 50] [--global-trials 200] [--seed 0]
"""

import argparse
import time

from semitall import certifier, polyfactor, tensorcore


def show(tag, stats, alpha=None):
    fr = {k: f"{stats.fraction(k):6.1%}" for k in sorted(stats.counts)}
    extra = f"  alpha={alpha}" if alpha is not None else ""
    print(f"{tag:<28} trials={stats.trials:<4} {fr}  mean dim U = {stats.mean_dim_u:.2f}{extra}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--global-trials", type=int, default=200)
    ap.add_argument("--eps", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("== perturbations of the reference frame ==")
    for m, n in [(3, 3), (3, 5), (4, 4)]:
        fmt = tensorcore.Format(m, n)
        t0 = time.perf_counter()
        stats = certifier.perturb_experiment(fmt, args.eps, args.trials, seed=args.seed)
        show(f"perturb ({m},{n}) eps={args.eps:g}", stats, alpha=polyfactor.alpha_closed(m, n))
        print(f"{'':<28} [{time.perf_counter() - t0:.1f}s]")

    print("\n== Gaussian tensors ==")
    for m, n in [(3, 3), (3, 4)]:
        fmt = tensorcore.Format(m, n)
        t0 = time.perf_counter()
        stats = certifier.global_experiment(fmt, args.global_trials, seed=args.seed)
        show(f"global ({m},{n})", stats)
        print(f"{'':<28} [{time.perf_counter() - t0:.1f}s]")


if __name__ == "__main__":
    main()
