"""Command-line surface: semitall-rank <subcommand> [flags].

Subcommands: alpha, divisors, classify, table, solve, certify,
experiment (perturb|global), selftest.  JSON is the canonical output
(floats at 17 significant digits); CSV is available for table only.
Reports echo every seed and tolerance needed to reproduce them; rerunning
with the printed flags yields byte-identical output apart from the
elapsed_s timing field.

Exit codes: 0 success, 1 domain/usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import acceptance, certifier, classifier, jsonio, polyfactor, solver, tensorcore
from .errors import ChartViolationError, DegenerateStartError, ResourceLimitError


@dataclass
class RunConfig:
    command: str
    m: int | None = None
    n: int | None = None
    p: int | None = None
    eps: float | None = None
    trials: int | None = None
    seed: int = 0
    tol: float | None = None
    jobs: int = 1
    input: str | None = None
    output: str | None = None
    format: str = "json"
    mode: str | None = None

    def params(self) -> dict:
        d = asdict(self)
        d.pop("command")
        d.pop("output")
        d.pop("format")
        return {k: v for k, v in d.items() if v is not None}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="semitall-rank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, mode_choices=None):
        p = sub.add_parser(name, help=help_)
        if mode_choices:
            p.add_argument("mode", choices=mode_choices)
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--eps", type=float)
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--input", type=str)
        p.add_argument("--output", type=str)
        p.add_argument("--format", choices=["json", "csv", "plain"], default="json")
        return p

    add("alpha", "count the real monic degree-(m-1) divisors of y^(m+n-2)+1")
    add("divisors", "list those divisors and their variety points")
    add("classify", "typical-rank verdict for one format (p defaults to the critical value)")
    add("table", "verdict table over all 3 <= m <= n up to the given bounds")
    add("solve", "track all start paths to a target tensor (file, or a seeded perturbation)")
    add("certify", "rank-p certificate for an n x p x m tensor file")
    add("experiment", "seeded Monte Carlo certification experiments", mode_choices=["perturb", "global"])
    add("selftest", "run the acceptance criteria and report pass/fail per criterion")
    return parser


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [x for x in names if getattr(cfg, x) is None]
    if missing:
        raise ValueError(f"{cfg.command} requires {', '.join('--' + x for x in missing)}")


def _solution_doc(s: solver.Solution) -> dict:
    return {
        "a": [complex(v) for v in s.a],
        "b": [complex(v) for v in s.b],
        "residual": s.residual,
        "is_real": bool(s.is_real),
        "source": list(s.source) if isinstance(s.source, tuple) else s.source,
        "path_index": s.path_index,
    }


def _cmd_alpha(cfg: RunConfig):
    _require(cfg, "m", "n")
    a = polyfactor.alpha_closed(cfg.m, cfg.n)
    p = (cfg.m - 1) * (cfg.n - 1) + 1
    return {"m": cfg.m, "n": cfg.n, "u": cfg.m + cfg.n - 2, "alpha": a, "p": p, "alpha_lt_p": a < p}, 0


def _cmd_divisors(cfg: RunConfig):
    _require(cfg, "m", "n")
    u, d = cfg.m + cfg.n - 2, cfg.m - 1
    divisors = polyfactor.real_divisors(u, d)
    docs = []
    for h in divisors:
        docs.append({
            "coefficients_low_to_high": [float(c.real) for c in h.coeffs],
            "variety_point": polyfactor.divisor_to_point(h, cfg.m),
        })
    return {"m": cfg.m, "n": cfg.n, "u": u, "degree": d, "count": len(divisors), "divisors": docs}, 0


def _cmd_classify(cfg: RunConfig):
    _require(cfg, "m", "n")
    p = cfg.p if cfg.p is not None else (cfg.m - 1) * (cfg.n - 1) + 1
    v = classifier.classify(cfg.m, cfg.n, p)
    return _verdict_doc(v), 0


def _verdict_doc(v: classifier.Verdict) -> dict:
    return {
        "m": v.m, "n": v.n, "p": v.p,
        "verdict": v.kind,
        "typical_ranks": list(v.ranks),
        "reasons": list(v.reasons),
        "grank": v.grank,
        "alpha": v.alpha,
        "bit_disjoint": v.bit_disjoint,
    }


def _cmd_table(cfg: RunConfig):
    _require(cfg, "m", "n")
    rows = classifier.theorem_table(cfg.m, cfg.n)
    return {"m_max": cfg.m, "n_max": cfg.n, "rows": [_verdict_doc(v) for v in rows]}, 0


def _cmd_solve(cfg: RunConfig):
    if cfg.input:
        target = tensorcore.load_tensor(cfg.input)
        u, n, m = target.shape
        fmt = tensorcore.Format(m, n)
        if u != fmt.u:
            raise ValueError(f"target tensor shape {target.shape} has u = {u}, expected {fmt.u}")
    else:
        _require(cfg, "m", "n")
        frame = tensorcore.make_start_frame(cfg.m, cfg.n)
        if cfg.eps:
            rng = np.random.default_rng(cfg.seed)
            target = tensorcore.Tensor3(frame.Aprime.data + cfg.eps * rng.standard_normal(frame.Aprime.shape))
        else:
            target = frame.Aprime
    opts = solver.TrackOptions()
    if cfg.tol:
        opts.corrector_tol = cfg.tol
    report = solver.solve_all(target, opts, seed=cfg.seed, jobs=cfg.jobs)
    doc = {
        "m": report.m, "n": report.n,
        "n_paths": report.n_paths,
        "real_count": report.real_count,
        "gamma": report.gamma,
        "chart_b": report.chart_b,
        "solutions": [_solution_doc(s) for s in report.solutions],
        "failures": [{"index": f.index, "reason": f.reason, "detail": f.detail} for f in report.failures],
    }
    return doc, (0 if report.complete else 2)


def _cmd_certify(cfg: RunConfig):
    _require(cfg, "input")
    T = tensorcore.load_tensor(cfg.input)
    opts = certifier.CertifyOptions(seed=cfg.seed, jobs=cfg.jobs)
    if cfg.tol:
        opts.span_tol = cfg.tol
    cert = certifier.certify(T, opts)
    doc = {
        "verdict": cert.verdict,
        "m": cert.m, "n": cert.n, "p": cert.p,
        "dim_u": cert.dim_u,
        "real_points": cert.real_points,
        "n_paths": cert.n_paths,
        "paths_failed": cert.paths_failed,
        "tolerances": cert.tolerances,
        "notes": cert.notes,
        "psi_matrix": cert.psi_matrix,
    }
    return doc, (0 if cert.verdict != certifier.INCONCLUSIVE else 2)


def _cmd_experiment(cfg: RunConfig):
    _require(cfg, "m", "n", "trials")
    fmt = tensorcore.Format(cfg.m, cfg.n)
    opts = certifier.CertifyOptions(jobs=cfg.jobs)
    if cfg.tol:
        opts.span_tol = cfg.tol
    if cfg.mode == "perturb":
        _require(cfg, "eps")
        stats = certifier.perturb_experiment(fmt, cfg.eps, cfg.trials, seed=cfg.seed, opts=opts)
    else:
        stats = certifier.global_experiment(fmt, cfg.trials, seed=cfg.seed, opts=opts)
    doc = {
        "mode": cfg.mode,
        "m": stats.m, "n": stats.n,
        "trials": stats.trials,
        "eps": stats.eps,
        "counts": stats.counts,
        "fractions": {k: stats.fraction(k) for k in stats.counts},
        "mean_dim_u": stats.mean_dim_u,
    }
    return doc, 0


def _cmd_selftest(cfg: RunConfig):
    results = acceptance.run_acceptance(span_tol=cfg.tol)
    for r in results:
        print(r.line(), flush=True)
    doc = {
        "criteria": [
            {"index": r.index, "name": r.name, "passed": r.passed, "detail": r.detail,
             "elapsed_s": r.seconds}
            for r in results
        ],
        "passed": all(r.passed for r in results),
    }
    return doc, (0 if doc["passed"] else 2)


_HANDLERS = {
    "alpha": _cmd_alpha,
    "divisors": _cmd_divisors,
    "classify": _cmd_classify,
    "table": _cmd_table,
    "solve": _cmd_solve,
    "certify": _cmd_certify,
    "experiment": _cmd_experiment,
    "selftest": _cmd_selftest,
}


def _table_csv(doc: dict) -> str:
    return jsonio.dump_csv(doc["rows"])


def dispatch(argv: list[str]) -> tuple[int, str]:
    """Parse argv, run one subcommand, and render its report.

    Returns (exit code, rendered report text).
    """
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        m=args.m, n=args.n, p=args.p,
        eps=args.eps, trials=args.trials,
        seed=args.seed, tol=args.tol, jobs=args.jobs,
        input=args.input, output=args.output, format=args.format,
        mode=getattr(args, "mode", None),
    )
    start = time.perf_counter()
    try:
        result, code = _HANDLERS[cfg.command](cfg)
    except (ValueError, ResourceLimitError, FileNotFoundError) as exc:
        return 1, f"error: {exc}\n"
    except (ChartViolationError, DegenerateStartError) as exc:
        return 2, f"error: {type(exc).__name__}: {exc}\n"
    report = {
        "command": cfg.command,
        "params": cfg.params(),
        "result": result,
        "elapsed_s": time.perf_counter() - start,
    }
    if cfg.format == "csv":
        if cfg.command != "table":
            return 1, "error: csv output is only available for table\n"
        text = _table_csv(result)
    elif cfg.format == "plain":
        text = jsonio.dump_plain(report)
    else:
        text = jsonio.dumps(report)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
        return code, ""
    return code, text


def main(argv: list[str] | None = None) -> None:
    code, text = dispatch(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    raise SystemExit(code)


if __name__ == "__main__":
    main()
