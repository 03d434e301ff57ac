#!/usr/bin/env python3
"""Print the typical-rank verdict table at the critical format.

Usage:
    python scripts/run_table.py [--m-max 9] [--n-max 40] [--csv]
"""

import argparse

from semitall import classifier


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=9)
    ap.add_argument("--n-max", type=int, default=40)
    ap.add_argument("--csv", action="store_true")
    args = ap.parse_args()

    rows = classifier.theorem_table(args.m_max, args.n_max)
    if args.csv:
        print("m,n,p,alpha,bit_disjoint,verdict,reasons")
        for v in rows:
            print(f"{v.m},{v.n},{v.p},{v.alpha},{v.bit_disjoint},{v.kind},{';'.join(v.reasons)}")
        return

    print(f"{'m':>3} {'n':>3} {'p':>5} {'alpha':>7} {'bitdis':>6}  verdict  reasons")
    for v in rows:
        ranks = "{" + ",".join(str(r) for r in v.ranks) + "}" if v.ranks else "?"
        print(
            f"{v.m:>3} {v.n:>3} {v.p:>5} {v.alpha if v.alpha is not None else '-':>7} "
            f"{str(v.bit_disjoint):>6}  {v.kind:<8} {','.join(v.reasons) or '-':<30} trank={ranks}"
        )
    n_plural = sum(v.kind == classifier.PLURAL for v in rows)
    print(f"\n{len(rows)} formats, {n_plural} decided PLURAL")


if __name__ == "__main__":
    main()
