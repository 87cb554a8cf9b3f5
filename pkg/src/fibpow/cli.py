"""Command-line front end: ``python3 -m fibpow {bound,search,verify,linform}``.

Exit codes: 0 ok, 1 verification failure, 2 config error, 3 undecided at the
precision cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from fibpow import __version__
from fibpow import bound_pipeline as bp
from fibpow.linforms import run_batch
from fibpow.matveev import STEP_CONSTANT
from fibpow.precision import DEFAULT_PRECISION, PRECISION_CAP
from fibpow.search import census_check, enumerate_exhaustive, enumerate_solutions
from fibpow.verify import VerifyConfig, resolve, run_suites

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_UNDECIDED = 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    k_range: tuple = (1, 1)
    delta: Fraction = Fraction(1, 2)
    method: str = "iteration"
    max_n: int = 60
    precision: int = DEFAULT_PRECISION
    precision_cap: int = PRECISION_CAP
    out: Optional[str] = None
    format: str = "human"
    only: list = field(default_factory=list)
    oracle: bool = False
    timestamp: bool = True
    max_x: int = 100_000
    full: bool = False
    workers: int = 1
    checkpoint: Optional[str] = None
    step_constant: int = STEP_CONSTANT
    input: Optional[str] = None

    def __post_init__(self) -> None:
        if self.command not in ("bound", "search", "verify", "linform"):
            raise ConfigError(f"unknown command {self.command!r}")
        lo, hi = self.k_range
        if lo < 1 or hi < lo:
            raise ConfigError(f"bad k range {lo}..{hi}; need 1 <= k_lo <= k_hi")
        if not 0 < self.delta < 1:
            raise ConfigError("delta must lie in (0, 1)")
        if self.method not in ("iteration", "lemma10", "both"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.max_n < 0:
            raise ConfigError("max-n must be >= 0")
        if self.precision < 16 or self.precision_cap < self.precision:
            raise ConfigError("need 16 <= precision <= precision-cap")
        if self.format not in ("json", "csv", "human"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.max_x < 0:
            raise ConfigError("max-x must be >= 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.only:
            try:
                resolve(self.only)
            except KeyError as exc:
                raise ConfigError(f"unknown verify suite {exc.args[0]!r}") from None


def parse_k(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise ConfigError(f"bad --k value {text!r}; use 3 or 1..3") from None


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad rational {text!r}") from None


def read_config_file(path: str) -> dict:
    """key = value lines; '#' starts a comment. Keys use the long flag names."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


# argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags take precedence")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "human"))
    common.add_argument("--precision", type=int, help="starting precision in bits")
    common.add_argument("--precision-cap", type=int, help="give up (exit 3) beyond this many bits")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp header")
    common.add_argument("--workers", type=int)

    parser = argparse.ArgumentParser(prog="fibpow", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fibpow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="concrete upper bound on n for Hamming weight k")
    p.add_argument("--k", help="k or k_lo..k_hi (default 1)")
    p.add_argument("--method", choices=("iteration", "lemma10", "both"))
    p.add_argument("--delta", help="rational in (0, 1) for the closed-form bound (default 1/2)")
    p.add_argument("--full", action="store_true", help="print n_bound in full in human output")
    p.add_argument("--step-constant", type=int, help="override C (fault injection)")

    p = sub.add_parser("search", parents=[common], help="brute-force search for F_n + F_m = y^a")
    p.add_argument("--max-n", type=int)
    p.add_argument("--oracle", action="store_true", help="cross-check against exhaustive enumeration")
    p.add_argument("--checkpoint", help="resume file for long runs")

    p = sub.add_parser("verify", parents=[common], help="run the invariant battery")
    p.add_argument("--only", action="append", help="suite name; repeatable")
    p.add_argument("--max-x", type=int, help="range of the Lucas mod 5 check")
    p.add_argument("--max-n", type=int)
    p.add_argument("--step-constant", type=int, help="override C (fault injection)")

    p = sub.add_parser("linform", parents=[common], help="evaluate linear forms for JSON-lines instances")
    p.add_argument("input", nargs="?", default="-", help="JSON lines file, '-' for stdin")
    return parser


_DEFAULT_MAX_N = {"search": 60, "verify": 200}


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = vars(args)
    file_values = read_config_file(args.config) if args.config else {}

    def pick(name, default=None, conv=lambda v: v):
        v = values.get(name)
        if v is not None and v is not False:
            return v
        if name in file_values:
            return conv(file_values[name])
        return default

    def as_bool(v):
        return str(v).lower() in ("1", "true", "yes", "on")

    try:
        return RunConfig(
            command=args.command,
            k_range=parse_k(pick("k", "1")),
            delta=parse_fraction(pick("delta", "1/2")),
            method=pick("method", "iteration"),
            max_n=int(pick("max_n", _DEFAULT_MAX_N.get(args.command, 60))),
            precision=int(pick("precision", DEFAULT_PRECISION)),
            precision_cap=int(pick("precision_cap", PRECISION_CAP)),
            out=pick("out"),
            format=pick("format", "json" if args.command == "linform" else "human"),
            only=list(values.get("only") or (file_values["only"].split(",") if "only" in file_values else [])),
            oracle=bool(pick("oracle", False, as_bool)),
            timestamp=not pick("no_timestamp", False, as_bool),
            max_x=int(pick("max_x", 100_000)),
            full=bool(pick("full", False, as_bool)),
            workers=int(pick("workers", 1)),
            checkpoint=pick("checkpoint"),
            step_constant=int(pick("step_constant", STEP_CONSTANT)),
            input=values.get("input"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


# commands -----------------------------------------------------------------------


def bound_record(fb: bp.FinalBound, k: int, C: Fraction) -> dict:
    ineq = fb.inequality
    chosen = bp.max_over_paths(k, C)
    return {
        "k": k,
        "method": fb.method,
        "delta": None if fb.delta is None else str(fb.delta),
        "per_l0": bp.per_l0_table(k, C),
        "chosen_max": {"c": chosen.c_str(), "c_log10": chosen.c_log10(), "x": chosen.x},
        "final_inequality": {"c_final": ineq.c_str(), "c_log10": ineq.c_log10(), "x_final": ineq.x},
        "n_bound": None if fb.n_bound is None else str(fb.n_bound),
        "log10_n_bound": fb.log10_n_bound,
        "log_ya_bound": fb.log_ya_bound.to_str(20),
        "iterations": fb.iterations,
        "tight": fb.tight,
        "lemma10_branch": (
            bp.lemma10_log_bound(ineq.c, ineq.x, fb.delta)[1] if fb.delta is not None else None
        ),
    }


def cmd_bound(cfg: RunConfig) -> tuple[int, dict]:
    C = Fraction(cfg.step_constant)
    methods = ("iteration", "lemma10") if cfg.method == "both" else (cfg.method,)
    jobs = [(k, m) for k in range(cfg.k_range[0], cfg.k_range[1] + 1) for m in methods]

    def run(job):
        k, m = job
        return bound_record(bp.finish(k, m, cfg.delta, C), k, C)

    try:
        if cfg.workers > 1:
            with ThreadPoolExecutor(cfg.workers) as pool:
                records = list(pool.map(run, jobs))
        else:
            records = [run(j) for j in jobs]
    except ArithmeticError as exc:
        return EXIT_UNDECIDED, {"command": "bound", "error": str(exc)}
    return EXIT_OK, {"command": "bound", "step_constant": str(cfg.step_constant), "records": records}


def cmd_search(cfg: RunConfig) -> tuple[int, dict]:
    sols = enumerate_solutions(cfg.max_n, workers=cfg.workers, checkpoint=cfg.checkpoint)
    report = {"command": "search", "max_n": cfg.max_n, "solutions": [s.record() for s in sols]}
    code = EXIT_OK
    if cfg.oracle:
        same = enumerate_exhaustive(cfg.max_n) == sols
        report["oracle_agrees"] = same
        if not same:
            code = EXIT_FAIL
    if cfg.max_n >= bp.LUCA_PATEL_LIMIT:
        rep = census_check(cfg.max_n, solutions=sols)
        report["census"] = {
            "counts_at_max_n": rep.counts,
            "conventions_matching_18": rep.matching if cfg.max_n == 60 else None,
            "parity_ok": rep.parity_ok,
            "kebli_ok": rep.kebli_ok,
        }
        if cfg.max_n != 60:
            upto60 = [s for s in sols if s.n <= 60]
            report["census"]["conventions_matching_18"] = census_check(60, solutions=upto60).matching
        if not (rep.parity_ok and rep.kebli_ok):
            code = EXIT_FAIL
    return code, report


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    vcfg = VerifyConfig(max_x=cfg.max_x, max_n=cfg.max_n, step_constant=cfg.step_constant, precision=cfg.precision)
    results = run_suites(vcfg, cfg.only or None)
    failed = [r for r in results if not r.passed]
    report = {
        "command": "verify",
        "suites": [r.to_json() for r in results],
        "failed": [f"{r.name}: {r.ref}" for r in failed],
    }
    return (EXIT_FAIL if failed else EXIT_OK), report


def cmd_linform(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.input in (None, "-"):
        lines = sys.stdin.read().splitlines()
    else:
        lines = Path(cfg.input).read_text().splitlines()
    try:
        records = list(run_batch(lines, cfg.precision, cfg.precision_cap))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad instance: {exc}") from None
    code = EXIT_OK
    if any(r["verdict"] == "violated" for r in records):
        code = EXIT_FAIL
    elif any(r["verdict"] == "undecided" for r in records):
        code = EXIT_UNDECIDED
    return code, {"command": "linform", "records": records}


COMMANDS = {"bound": cmd_bound, "search": cmd_search, "verify": cmd_verify, "linform": cmd_linform}


# rendering ----------------------------------------------------------------------


def _human(report: dict, cfg: RunConfig) -> str:
    out = io.StringIO()
    cmd = report["command"]
    if "error" in report:
        print(f"error: {report['error']}", file=out)
    elif cmd == "bound":
        for r in report["records"]:
            head = f"k={r['k']}  method={r['method']}"
            if r["delta"] is not None:
                head += f"  delta={r['delta']}  branch={r['lemma10_branch']}"
            print(head, file=out)
            print(f"  log10(n_bound) = {r['log10_n_bound']:.6f}", file=out)
            fi = r["final_inequality"]
            print(f"  n < c (log n)^{fi['x_final']},  log10 c = {fi['c_log10']:.4f}", file=out)
            print(f"  log(y^a) < {r['log_ya_bound']}", file=out)
            for row in r["per_l0"]:
                l0 = "-" if row["l0"] is None else row["l0"]
                print(f"    {row['case']}  l0={l0}  x={row['x']}  log10 c={row['c_log10']:.4f}", file=out)
            if cfg.full and r["n_bound"] is not None:
                print(f"  n_bound = {r['n_bound']}", file=out)
    elif cmd == "search":
        print(f"{'n':>4} {'m':>4} {'y':>8} {'a':>3}  value", file=out)
        for s in report["solutions"]:
            print(f"{s['n']:>4} {s['m']:>4} {s['y']:>8} {s['a']:>3}  {s['value']}", file=out)
        print(f"{len(report['solutions'])} solutions with n <= {report['max_n']}", file=out)
        if "oracle_agrees" in report:
            print(f"exhaustive oracle agrees: {report['oracle_agrees']}", file=out)
        census = report.get("census")
        if census:
            for label, count in census["counts_at_max_n"].items():
                print(f"  convention {label}: {count}", file=out)
            print(f"  conventions giving 18 for n <= 60: {census['conventions_matching_18']}", file=out)
            print(f"  parity ok: {census['parity_ok']}  kebli ok: {census['kebli_ok']}", file=out)
    elif cmd == "verify":
        for s in report["suites"]:
            mark = "PASS" if s["passed"] else "FAIL"
            line = f"{mark} {s['suite']:<18} [{s['ref']}] checked={s['checked']}"
            if s["detail"]:
                line += f"  {s['detail']}"
            print(line, file=out)
    else:
        for r in report["records"]:
            print(json.dumps(r, sort_keys=True), file=out)
    return out.getvalue()


def _csv(report: dict) -> str:
    out = io.StringIO()
    cmd = report["command"]
    if cmd == "search":
        rows = report["solutions"]
    elif cmd == "verify":
        rows = report["suites"]
    elif cmd == "bound":
        rows = [
            {key: r[key] for key in ("k", "method", "delta", "log10_n_bound", "n_bound", "log_ya_bound")}
            for r in report.get("records", [])
        ]
    else:
        rows = report.get("records", [])
    if rows:
        writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in row.items()})
    return out.getvalue()


def render(report: dict, cfg: RunConfig) -> str:
    stamp = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    if cfg.format == "json":
        doc = {"version": __version__, **report}
        if cfg.timestamp:
            doc = {"generated": stamp, **doc}
        return json.dumps(doc, indent=2) + "\n"
    body = _csv(report) if cfg.format == "csv" else _human(report, cfg)
    if cfg.timestamp:
        body = f"# fibpow {__version__} generated {stamp}\n" + body
    return body


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except (ConfigError, OSError) as exc:
        print(f"fibpow: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        code, report = COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"fibpow: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = render(report, cfg)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
