"""Command-line surface: reproducible, scriptable access to every computation.

Exit codes
    0  success (certifications positive, scans clean)
    1  clean run whose result is a zero count / no witness
    2  validation error (bad arguments or inputs)
    3  certification failure (mismatch against expectations, negative bound)
    4  missing data (insufficient c_theta table, unreadable data file)

Output is either human-readable text or a single JSON document
(``--format structured``) with the fully resolved configuration echoed in
both cases.  The default c_theta table path may be set with the
``PRIMESQF_CTHETA`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import mpmath as mp

from . import analytic, arith, counting, search, sieve
from .search import Parity

EXIT_OK = 0
EXIT_ZERO = 1
EXIT_VALIDATION = 2
EXIT_CERT_FAIL = 3
EXIT_MISSING = 4

ENV_CTHETA = "PRIMESQF_CTHETA"

# Even-parity exception sets for the first six primorials, used as the
# built-in expectation by the table1 command.
TABLE1_EXPECTED = {
    2: (2, 4),
    6: (2, 4, 6),
    30: (2, 4, 6, 8),
    210: (2, 4, 6, 8, 10, 12),
    2310: (2, 4, 6, 8, 10, 12, 14),
    30030: (2, 4, 6, 8, 10, 12, 14, 16, 18),
}


@dataclass
class RunConfig:
    command: str
    parameters: dict
    output_format: str = "text"
    ctheta_path: str | None = None
    threads: int = 1
    checkpoint_path: str | None = None

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "parameters": dict(sorted(self.parameters.items())),
            "output_format": self.output_format,
            "ctheta_path": self.ctheta_path,
            "threads": self.threads,
            "checkpoint_path": self.checkpoint_path,
        }


class _Output:
    """Collects result fields; renders text lines or one JSON document."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.lines: list[str] = []
        self.result: dict = {}

    def emit(self, text: str, **fields) -> None:
        self.lines.append(text)
        self.result.update(fields)

    def render(self) -> str:
        if self.config.output_format == "structured":
            return json.dumps({"config": self.config.to_json(), "result": self.result}, indent=2)
        header = "# config: " + json.dumps(self.config.to_json(), separators=(",", ":"))
        return "\n".join([header] + self.lines)


def _big_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    return int(value)


def _load_table(path: str | None) -> analytic.CThetaTable:
    if path:
        return analytic.load_ctheta(path)
    return analytic.bundled_table()


def _parity(value: str) -> Parity:
    return Parity.EVEN_ONLY if value == "even" else Parity.ALL


# ---------------------------------------------------------------------------
# commands

def cmd_count(args, config: RunConfig, out: _Output) -> int:
    if args.l > 1:
        wc = counting.R_k_l(args.n, args.k, args.l)
    elif args.exclude_one:
        wc = counting.R_bar_k(args.n, args.k)
    else:
        wc = counting.R_k(args.n, args.k)
    witnesses = counting.enumerate_representations(
        args.n, args.k, args.exclude_one, 10, l=args.l
    )
    out.emit(f"value = {wc.value!r}", value=wc.value)
    out.emit(f"terms = {wc.terms}", terms=wc.terms)
    out.emit(
        "witnesses (p, eta): " + (", ".join(f"({r.p}, {r.eta})" for r in witnesses) or "none"),
        witnesses=[[r.p, r.eta] for r in witnesses],
    )
    return EXIT_OK if wc.terms > 0 else EXIT_ZERO


def cmd_table1(args, config: RunConfig, out: _Output) -> int:
    ok = True
    rows = []
    for k, expected in TABLE1_EXPECTED.items():
        rep = search.exception_set(k, args.limit, Parity.EVEN_ONLY)
        match = rep.exceptions == expected
        ok = ok and match
        rows.append({"k": k, "computed": list(rep.exceptions), "expected": list(expected), "match": match})
        out.emit(
            f"k = {k:>6}: S_k = {{{', '.join(map(str, rep.exceptions))}}}  "
            f"[{'ok' if match else 'MISMATCH, expected ' + str(list(expected))}]"
        )
    out.result["rows"] = rows
    out.result["all_match"] = ok
    out.emit("all primorial exception sets match" if ok else "MISMATCH against expected table")
    return EXIT_OK if ok else EXIT_CERT_FAIL


def cmd_exceptions(args, config: RunConfig, out: _Output) -> int:
    rep = search.exception_set(args.k, args.limit, _parity(args.parity))
    out.result.update(rep.to_json())
    out.emit(f"k = {rep.k}, parity = {rep.parity.value}, limit = {rep.scan_limit}")
    out.emit(f"exceptions = {{{', '.join(map(str, rep.exceptions))}}}")
    out.emit(f"largest = {rep.largest()}")
    out.emit(f"elapsed = {rep.elapsed:.3f}s")
    return EXIT_OK


def cmd_bound(args, config: RunConfig, out: _Output) -> int:
    table = _load_table(config.ctheta_path)
    params = analytic.BoundParams(C=args.C, N=args.N)
    parity = args.parity or ("even" if args.k % 2 == 0 else "odd")
    if parity == "even":
        rep = analytic.even_lower_bound(args.n, args.k, params, table)
    else:
        rep = analytic.odd_lower_bound(args.n, args.k, params, table)
    out.result.update(rep.to_json())
    out.emit(f"main term           = {mp.nstr(rep.main_term, 17)}")
    out.emit(f"c_theta penalty     = {mp.nstr(rep.ctheta_sum, 17)}"
             + ("  (partial: table missing moduli)" if rep.missing_moduli else ""))
    out.emit(f"tail penalty        = {mp.nstr(rep.tail_sum, 17)}")
    out.emit(f"large-modulus term  = {mp.nstr(rep.sigma3_sum, 17)}")
    out.emit(f"log(k)/n            = {mp.nstr(rep.log_k_over_n, 17)}")
    out.emit(f"log(n)/n            = {mp.nstr(rep.log_n_over_n, 17)}")
    if rep.missing_moduli:
        shown = ", ".join(map(str, rep.missing_moduli[:12]))
        more = "" if len(rep.missing_moduli) <= 12 else f" (+{len(rep.missing_moduli) - 12} more)"
        out.emit(f"missing c_theta moduli: {shown}{more}")
    else:
        out.emit(f"lower bound         = {mp.nstr(rep.value, 17)}")
    out.emit(f"certifies positivity: {rep.verdict}")
    out.emit(f"note: {rep.data_note}")
    if rep.verdict == "yes":
        return EXIT_OK
    return EXIT_MISSING if rep.verdict == "insufficient-table" else EXIT_CERT_FAIL


def cmd_verify(args, config: RunConfig, out: _Output) -> int:
    rep = search.verify_range(
        args.lo,
        args.hi,
        window_size=args.window,
        workers=config.threads,
        checkpoint=config.checkpoint_path,
        interval_size=args.interval_size,
    )
    out.result.update(rep.to_json())
    out.emit(f"range = [{rep.lo}, {rep.hi}], window = {rep.window_size}, intervals = {rep.intervals}")
    out.emit(f"resumed intervals = {rep.resumed_intervals}")
    out.emit(f"failures = {len(rep.failures)}"
             + (f": {', '.join(map(str, rep.failures[:20]))}" if rep.failures else ""))
    out.emit(f"elapsed = {rep.elapsed:.3f}s")
    return EXIT_OK if not rep.failures else EXIT_CERT_FAIL


def cmd_triples(args, config: RunConfig, out: _Output) -> int:
    window = search._window_below(args.n, args.window)
    if not window:
        raise ValueError(f"no primes below n = {args.n}")
    flo = max(1, args.n - window[0])
    fhi = args.n - window[-1]
    sqf = sieve.sieve_squarefree(flo, fhi, max_span=fhi - flo + 1)
    witness = search.find_triple(args.n, window, sqf)
    if witness is None:
        out.emit("no triple found in the window", witness=None)
        return EXIT_ZERO
    out.result["witness"] = witness.to_json()
    for r in witness.reps:
        out.emit(f"{witness.n} = {r.p} + {r.eta}")
    gcds = [math.gcd(a.eta, b.eta) for a, b in
            ((witness.reps[0], witness.reps[1]), (witness.reps[0], witness.reps[2]), (witness.reps[1], witness.reps[2]))]
    out.emit(f"pairwise eta gcds = {gcds}", pairwise_gcds=gcds)
    return EXIT_OK


def cmd_chen_bound(args, config: RunConfig, out: _Output) -> int:
    rep = analytic.chen_factor_bound()
    out.result.update(rep.to_json())
    out.emit(f"theta(13)            = {mp.nstr(rep.theta_13, 17)}")
    out.emit(f"e^36                 = {mp.nstr(rep.e36, 17)}")
    out.emit(f"prime upper bound    = {mp.nstr(rep.prime_upper, 17)}")
    out.emit(f"factor-count bound   = {rep.value}")
    out.emit(f"e^33                 = {mp.nstr(rep.e33, 17)}")
    out.emit(f"bound < e^33: {'yes' if rep.value < rep.e33 else 'NO'}")
    return EXIT_OK if rep.value < rep.e33 else EXIT_CERT_FAIL


def cmd_selftest(args, config: RunConfig, out: _Output) -> int:
    ok = True

    def suite(name, passed, detail=""):
        nonlocal ok
        ok = ok and passed
        out.emit(f"[{'PASS' if passed else 'FAIL'}] {name}" + (f" ({detail})" if detail else ""))
        out.result.setdefault("suites", []).append({"name": name, "passed": passed, "detail": detail})

    # sieve vs arith pointwise
    import random

    rng = random.Random(20210901)
    mob = sieve.sieve_mobius(1, 20000, max_span=20001).to_array()
    pts = [rng.randrange(1, 20001) for _ in range(1000)]
    agree = all(int(mob[x - 1]) == arith.mobius(x) for x in pts)
    suite("sieve/arith pointwise agreement", agree, "1000 samples <= 2e4")

    # decomposition oracle equivalence, reduced sweep
    worst = 0.0
    for n in range(3, 401):
        for k in (1, 2, 3, 6, 10, 15, 30):
            a = counting.R_k(n, k)
            b = counting.R_k_decomposed(n, k)
            worst = max(worst, abs(a.value - b.value) / (1 + a.value))
    suite("decomposition oracle equivalence", worst <= 1e-9, f"n <= 400, worst rel dev {worst:.2e}")

    # primorial exception sets
    limit = 10**4 if args.quick else 10**5
    t1_ok = all(
        search.exception_set(k, limit, Parity.EVEN_ONLY).exceptions == expected
        for k, expected in TABLE1_EXPECTED.items()
    )
    suite("primorial exception sets", t1_ok, f"limit {limit}")

    # named exceptions
    named_ok = (
        counting.R_bar_k(38, 24738).terms == 0
        and counting.R_bar_k(35, 33).terms == 0
        and counting.R_bar_k(38, 12369).terms == 0
        and counting.R_bar_k(40, 24738).terms > 0
        and counting.R_bar_k(36, 33).terms > 0
    )
    suite("named exceptions", named_ok)

    # constants
    enc = analytic.artin_constant(10)
    r1, r2 = analytic.zeta_ratio_routes()
    cst_ok = enc.contains(mp.mpf("0.3739558136")) and abs(r1 - r2) <= mp.mpf("1e-12") * r1
    suite("constants", cst_ok)

    out.emit("selftest: all suites passed" if ok else "selftest: FAILURES present")
    return EXIT_OK if ok else EXIT_CERT_FAIL


# ---------------------------------------------------------------------------
# parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primesqf",
        description="prime + squarefree representation counts, bounds and scans",
    )
    parser.add_argument("--format", choices=("text", "structured"), default="text",
                        help="output format (structured = one JSON document)")
    parser.add_argument("--ctheta", default=None,
                        help=f"c_theta data file (default: ${ENV_CTHETA} or bundled m=1 rows)")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for verify")
    parser.add_argument("--checkpoint", default=None, help="checkpoint journal path for verify")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="evaluate a representation count")
    p.add_argument("--n", type=_big_int, required=True)
    p.add_argument("--k", type=_big_int, default=1)
    p.add_argument("--l", type=_big_int, default=1, help="require l | eta")
    p.add_argument("--exclude-one", action="store_true", help="drop the eta = 1 representation")
    p.set_defaults(handler=cmd_count)

    p = sub.add_parser("table1", help="recompute the primorial exception sets and diff")
    p.add_argument("--limit", type=_big_int, default=10**5)
    p.set_defaults(handler=cmd_table1)

    p = sub.add_parser("exceptions", help="scan an exception set")
    p.add_argument("--k", type=_big_int, required=True)
    p.add_argument("--limit", type=_big_int, required=True)
    p.add_argument("--parity", choices=("even", "all"), default="even")
    p.set_defaults(handler=cmd_exceptions)

    p = sub.add_parser("bound", help="evaluate the certified lower bound for Rbar_k(n)/n")
    p.add_argument("--n", type=_big_int, required=True)
    p.add_argument("--k", type=_big_int, required=True)
    p.add_argument("--C", type=float, default=0.2)
    p.add_argument("--N", type=_big_int, default=10**5)
    p.add_argument("--parity", choices=("even", "odd"), default=None,
                   help="default: inferred from the parity of k")
    p.set_defaults(handler=cmd_bound)

    p = sub.add_parser("verify", help="triple-representation scan over a range")
    p.add_argument("--lo", type=_big_int, required=True)
    p.add_argument("--hi", type=_big_int, required=True)
    p.add_argument("--window", type=int, default=100)
    p.add_argument("--interval-size", type=_big_int, default=search.DEFAULT_INTERVAL_SIZE)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("triples", help="find one pairwise-near-coprime triple for n")
    p.add_argument("--n", type=_big_int, required=True)
    p.add_argument("--window", type=int, default=100)
    p.set_defaults(handler=cmd_triples)

    p = sub.add_parser("chen-bound", help="prime-factor-count bound against e^33")
    p.set_defaults(handler=cmd_chen_bound)

    p = sub.add_parser("selftest", help="run the built-in verification suites")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(handler=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in {"handler", "format", "ctheta", "threads", "checkpoint", "command"}
    }
    config = RunConfig(
        command=args.command,
        parameters=params,
        output_format=args.format,
        ctheta_path=args.ctheta or os.environ.get(ENV_CTHETA),
        threads=args.threads,
        checkpoint_path=args.checkpoint,
    )
    out = _Output(config)
    try:
        code = args.handler(args, config, out)
    except (analytic.CThetaParseError, analytic.CThetaMissingError, FileNotFoundError) as exc:
        print(out.render(), file=sys.stdout)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (ValueError, OverflowError, search.CheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(out.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
