"""Command-line entry point. Every subcommand reads JSON (stdin or flag) and writes JSON.

Exit codes: 0 success, 1 a ``verify`` suite found a counterexample,
2 validation error (bad flags, malformed JSON, bad payload), 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence, TextIO

from . import combinat, cumulants, multivar, oracle, polyfam, sampling, sheppard, umbral
from .kernel import CapExceeded, Poly, ValidationError, as_rational, format_rational

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_CAP = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so ``run`` owns the exit code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


# --------------------------------------------------------------------------
# serialization helpers


def _text(v: Any) -> str:
    if isinstance(v, (int, Fraction)):
        return format_rational(Fraction(v))
    return str(v)


def _encode(v: Any) -> Any:
    if isinstance(v, Poly):
        return v.to_json()
    if isinstance(v, umbral.MultiMomentTable):
        return v.to_json()
    if isinstance(v, (umbral.MomentSeq, cumulants.CumulantSeq)):
        return v.to_json()
    if isinstance(v, dict):
        return {(k if isinstance(k, str) else ",".join(map(str, k))): _encode(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, float):
        return round(v, 6)
    return _text(v)


def _pretty(payload: Any) -> str:
    if isinstance(payload, dict) and payload and all(isinstance(v, str) for v in payload.values()):
        width = max(len(k) for k in payload)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in payload.items())
    if isinstance(payload, list) and all(isinstance(v, str) for v in payload):
        return "\n".join(f"[{i}] {v}" for i, v in enumerate(payload))
    if isinstance(payload, dict) and "rows" in payload:
        rows = payload["rows"]
        if not rows:
            return "(no rows)"
        cols = list(rows[0])
        table = [cols] + [[str(r[c]) for c in cols] for r in rows]
        widths = [max(len(row[j]) for row in table) for j in range(len(cols))]
        return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in table)
    return json.dumps(payload, indent=2)


def _read_json(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {what}: {exc.msg}") from None


def _load_arg(value: str, what: str) -> Any:
    """A flag value is either inline JSON or the path of a JSON file."""
    stripped = value.strip()
    if stripped[:1] in "[{\"" or stripped.lstrip("-").replace("/", "").isdigit():
        return _read_json(stripped, what)
    path = Path(value)
    if not path.is_file():
        raise ValidationError(f"{what}: no such file {value!r}")
    return _read_json(path.read_text(), what)


def _stdin_json(stdin: TextIO, what: str = "stdin") -> Any:
    return _read_json(stdin.read(), what)


def _rational_list(payload: Any, what: str) -> list[Fraction]:
    if not isinstance(payload, list) or not payload:
        raise ValidationError(f"{what} must be a non-empty JSON array of rationals")
    return [as_rational(x) for x in payload]


def _moment_list(payload: Any, what: str) -> list[Fraction]:
    vals = _rational_list(payload, what)
    if vals[0] != 1:
        raise ValidationError(f"{what} must start with a_0 = 1")
    return vals


def _table(payload: Any, what: str) -> umbral.MultiMomentTable:
    if isinstance(payload, list):
        return umbral.MultiMomentTable.from_moment_seq(umbral.MomentSeq(tuple(_moment_list(payload, what))))
    if not isinstance(payload, dict):
        raise ValidationError(f"{what} must be a JSON array or an object keyed by multi-indices")
    return umbral.MultiMomentTable.from_json(payload)


def _index(text: str, what: str) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValidationError(f"{what} must be comma-separated integers") from None
    if any(x < 0 for x in out):
        raise ValidationError(f"{what} entries must be non-negative")
    return out


def _truncate(vals: list[Fraction], order: int | None) -> list[Fraction]:
    if order is None:
        return vals
    if order < 0 or order > len(vals) - 1:
        raise ValidationError(f"--order {order} is outside the input's range 0..{len(vals) - 1}")
    return vals[: order + 1]


# --------------------------------------------------------------------------
# subcommands


def cmd_convert(args: argparse.Namespace, stdin: TextIO) -> Any:
    src, dst = args.src, args.to
    payload = _stdin_json(stdin)
    if src == dst:
        raise ValidationError("--from and --to must differ")
    if src == "cumulants":
        vals = _rational_list(payload, "cumulant array")
        if args.order is not None:
            if args.order > len(vals):
                raise ValidationError(f"--order {args.order} exceeds the {len(vals)} cumulants given")
            vals = vals[: args.order]
        moments = cumulants.cumulants_to_moments(vals, args.kind)
        if dst == "moments":
            return moments
        src_vals = list(moments.moments)
    elif src == "factorial":
        fact = _truncate(_moment_list(payload, "factorial moments"), args.order)
        moments = umbral.raw_from_factorial(fact)
        if dst == "moments":
            return moments
        src_vals = list(moments.moments)
    else:
        src_vals = _truncate(_moment_list(payload, "moment array"), args.order)
    if dst == "cumulants":
        return cumulants.moments_to_cumulants(src_vals, args.kind)
    if dst == "factorial":
        return list(umbral.factorial_moments(src_vals))
    return umbral.MomentSeq(tuple(src_vals))


def cmd_kstat(args: argparse.Namespace, stdin: TextIO) -> Any:
    if args.order < 1:
        raise ValidationError("--order must be >= 1")
    return sampling.k_statistic(args.order)


def cmd_polykay(args: argparse.Namespace, stdin: TextIO) -> Any:
    return sampling.polykay(_index(args.indices, "--indices"))


def cmd_sheppard(args: argparse.Namespace, stdin: TextIO) -> Any:
    payload = _stdin_json(stdin)
    if args.multivariate:
        spec = _load_arg(args.multivariate, "--multivariate")
        if not isinstance(spec, dict) or "widths" not in spec or "order" not in spec:
            raise ValidationError("multivariate config needs 'widths' and 'order'")
        config = sheppard.SheppardConfig(tuple(spec["widths"]), tuple(spec["groups"]) if spec.get("groups") else None)
        if not isinstance(payload, dict):
            raise ValidationError("multivariate grouped moments must be an object keyed by multi-indices")
        order = spec["order"]
        if isinstance(order, str):
            order = _index(order, "order")
        return sheppard.sheppard_multivariate(umbral.MultiMomentTable.from_json(payload), config, order)
    if args.h is None:
        raise ValidationError("--h is required")
    grouped = _moment_list(payload, "grouped moments")
    order = len(grouped) - 1 if args.order is None else args.order
    if args.m is not None:
        out = sheppard.sheppard_discrete(grouped, args.h, args.m, order)
    else:
        out = sheppard.sheppard_correct(grouped, args.h, order)
    return out


def cmd_tsh(args: argparse.Namespace, stdin: TextIO) -> Any:
    alpha = _moment_list(_load_arg(args.alpha, "--alpha") if args.alpha else _stdin_json(stdin), "base moments")
    if args.i < 0:
        raise ValidationError("--i must be >= 0")
    return polyfam.tsh_polynomial(alpha, args.i, time=args.time)


def cmd_poly(args: argparse.Namespace, stdin: TextIO) -> Any:
    if args.family in ("bernoulli", "euler"):
        return polyfam.appell_bernoulli_euler(args.family, args.k)
    if args.family == "touchard":
        return polyfam.exponential_polynomial(args.k)
    if args.family == "kailath-segall":
        return polyfam.kailath_segall(args.k)
    kwargs: dict[str, Any] = {}
    for name in ("s", "lam", "p", "a"):
        if getattr(args, name) is not None:
            kwargs[name] = getattr(args, name)
    if args.family == "levy_sheffer":
        if not args.alpha or not args.gamma:
            raise ValidationError("levy_sheffer needs --alpha and --gamma")
        kwargs["alpha"] = _moment_list(_load_arg(args.alpha, "--alpha"), "alpha")
        kwargs["gamma"] = _rational_list(_load_arg(args.gamma, "--gamma"), "gamma")
    return polyfam.family(polyfam.FamilySpec(args.family, **kwargs), args.k)


def cmd_mv_cumulants(args: argparse.Namespace, stdin: TextIO) -> Any:
    table = _table(_stdin_json(stdin), "moment table")
    order = table.order if args.order is None else args.order
    return multivar.multivariate_cumulants(table, order, inverse=args.inverse)


def cmd_mv_hermite(args: argparse.Namespace, stdin: TextIO) -> Any:
    sigma = _load_arg(args.sigma, "--sigma")
    if not isinstance(sigma, list) or not all(isinstance(r, list) for r in sigma):
        raise ValidationError("--sigma must be a JSON matrix")
    spec = multivar.CovarianceSpec(tuple(tuple(r) for r in sigma))
    return multivar.multivariate_hermite(_index(args.index, "--index"), spec, args.variant, t=args.t)


def cmd_compose(args: argparse.Namespace, stdin: TextIO) -> Any:
    payload = _stdin_json(stdin)
    if not isinstance(payload, dict):
        raise ValidationError("compose expects an object with 'outer' and 'inner' (or 'inners')")
    if args.op == "inverse":
        if "inner" not in payload:
            raise ValidationError("inverse needs 'inner'")
        alpha = _moment_list(payload["inner"], "inner")
        return umbral.compositional_inverse(alpha, args.order or len(alpha) - 1)
    if "outer" not in payload or not ("inner" in payload or "inners" in payload):
        raise ValidationError("compose expects 'outer' and 'inner' (or 'inners')")
    outer, inner = payload["outer"], payload.get("inner", payload.get("inners"))
    if args.op == "dot":
        g, a = _moment_list(outer, "outer"), _moment_list(inner, "inner")
        order = args.order if args.order is not None else min(len(g), len(a)) - 1
        return umbral.dot_umbra(g, a, order)
    if isinstance(outer, list) and isinstance(inner, list) and (not inner or not isinstance(inner[0], (list, dict))):
        g, a = _moment_list(outer, "outer"), _moment_list(inner, "inner")
        order = args.order if args.order is not None else min(len(g), len(a)) - 1
        return umbral.composition_umbra(g, a, order)
    out_t = _table(outer, "outer")
    inners = [_table(x, "inner") for x in inner] if isinstance(inner, list) and inner and isinstance(inner[0], (list, dict)) else _table(inner, "inner")
    first = inners[0] if isinstance(inners, list) else inners
    order = args.order if args.order is not None else min([out_t.order] + [t.order for t in (inners if isinstance(inners, list) else [inners])])
    return {idx: multivar.multivariate_composition(out_t, inners, idx) for idx in umbral.multi_indices(first.dim, order)}


def cmd_levy(args: argparse.Namespace, stdin: TextIO) -> Any:
    nu: list[Fraction]
    if args.nu:
        nu = _moment_list(_load_arg(args.nu, "--nu"), "nu")
    else:
        nu = [Fraction(1)] + [Fraction(0)] * args.order
    return umbral.levy_moments(args.c0, args.s, nu, args.t, args.order)


_COUNTERS: dict[str, Callable[[argparse.Namespace], Any]] = {
    "partitions": lambda a: [list(p.parts) for p in combinat.integer_partitions(a.n)],
    "set-partitions": lambda a: [list(map(list, p)) for p in combinat.set_partitions(a.n)],
    "noncrossing": lambda a: [list(map(list, p)) for p in combinat.lattice_partitions("noncrossing", a.n)],
    "interval": lambda a: [list(map(list, p)) for p in combinat.lattice_partitions("interval", a.n)],
    "multi-index": lambda a: [[list(c) for c in p.columns] for p in combinat.multi_index_partitions(_index(a.index or str(a.n), "--index"))],
    "parking": lambda a: [list(p) for p in combinat.parking_functions(a.n)],
}


def cmd_combinat(args: argparse.Namespace, stdin: TextIO) -> Any:
    if args.kind in _COUNTERS:
        items = _COUNTERS[args.kind](args)
        out: dict[str, Any] = {"kind": args.kind, "count": len(items)}
        if args.list:
            out["items"] = items
        return out
    k = args.k
    if args.kind in ("stirling1", "stirling2"):
        if k is None:
            raise ValidationError(f"{args.kind} needs --k")
        return {"kind": args.kind, "value": combinat.named_numbers(args.kind, args.n, k)}
    return {"kind": args.kind, "value": combinat.named_numbers(args.kind, args.n)}


def _random_moments(rng: random.Random, order: int) -> list[Fraction]:
    return [Fraction(1)] + [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(order)]


def cmd_verify(args: argparse.Namespace, stdin: TextIO) -> Any:
    rng = random.Random(args.seed)
    checked = 0
    failure: dict[str, Any] | None = None
    n = args.max_order
    if args.suite == "cumulants":
        for trial in range(args.trials):
            a = _random_moments(rng, n)
            for kind in ("classical", "boolean", "free"):
                fast = cumulants.moments_to_cumulants(a, kind)
                for i in range(1, n + 1):
                    checked += 1
                    slow = oracle.cumulants_via_lattice(a, kind, i)
                    if fast[i] != slow:
                        failure = {"kind": kind, "order": i, "moments": a, "fast": fast[i], "oracle": slow}
                        break
                if failure:
                    break
            if failure:
                break
    elif args.suite == "kstats":
        for i in range(1, n + 1):
            checked += 1
            fast, slow = sampling.k_statistic(i), oracle.naive_kstatistic(i)
            if fast != slow:
                failure = {"order": i, "fast": fast, "oracle": slow}
                break
    else:
        for trial in range(args.trials):
            k, d = rng.randint(1, 3), rng.randint(1, 3)

            def rnd(idx: tuple[int, ...]) -> Fraction:
                return Fraction(1) if not any(idx) else Fraction(rng.randint(-5, 5), rng.randint(1, 4))

            outer = umbral.MultiMomentTable.from_function(k, n, rnd)
            inners = [umbral.MultiMomentTable.from_function(d, n, rnd) for _ in range(k)]
            ref = oracle.multivariate_series_compose(outer, inners, n)
            for idx, v in ref.items():
                checked += 1
                got = multivar.multivariate_composition(outer, inners, idx)
                if got != v:
                    failure = {"k": k, "d": d, "index": list(idx), "fast": got, "oracle": v}
                    break
            if failure:
                break
    return {"suite": args.suite, "max_order": n, "checked": checked, "passed": failure is None, "counterexample": failure}


_BENCH_KSTAT_ROWS = (5, 7, 9, 11, 14, 16, 18, 20)
_BENCH_POLYKAY_ROWS = ((3, 2), (4, 4), (5, 3), (7, 5), (7, 7), (9, 9), (10, 8), (4, 4, 4))


def _timed(fn: Callable[[], Poly]) -> tuple[float, int]:
    start = time.perf_counter()
    poly = fn()
    return time.perf_counter() - start, len(poly.terms)


def cmd_bench(args: argparse.Namespace, stdin: TextIO) -> Any:
    rows: list[dict[str, Any]] = []
    if args.suite in ("kstat", "all"):
        orders = sorted({o for o in _BENCH_KSTAT_ROWS if o <= args.max_order} | {args.max_order})
        for o in orders:
            secs, terms = _timed(lambda: sampling.k_statistic(o))
            rows.append({"statistic": f"k_{o}", "seconds": round(secs, 4), "terms": terms})
    if args.suite in ("polykay", "all"):
        for idx in _BENCH_POLYKAY_ROWS:
            if sum(idx) > args.max_order:
                continue
            secs, terms = _timed(lambda: sampling.polykay(idx))
            rows.append({"statistic": "k_" + ",".join(map(str, idx)), "seconds": round(secs, 4), "terms": terms})
    return {"suite": args.suite, "rows": rows}


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "pretty"), default="json")

    p = _Parser(prog="momentforge", description="Exact moments, cumulants and polynomial families.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("convert", parents=[common], help="moments <-> cumulants / factorial moments")
    c.add_argument("--from", dest="src", choices=("moments", "cumulants", "factorial"), default="moments")
    c.add_argument("--to", choices=("moments", "cumulants", "factorial"), required=True)
    c.add_argument("--kind", default="classical", help="classical, boolean, free or abel:M")
    c.add_argument("--order", type=int)
    c.set_defaults(func=cmd_convert)

    c = sub.add_parser("kstat", parents=[common], help="k-statistic in power sums")
    c.add_argument("--order", type=int, required=True)
    c.set_defaults(func=cmd_kstat)

    c = sub.add_parser("polykay", parents=[common], help="polykay in power sums")
    c.add_argument("--indices", required=True)
    c.set_defaults(func=cmd_polykay)

    c = sub.add_parser("sheppard", parents=[common], help="correct grouped moments")
    c.add_argument("--h")
    c.add_argument("--order", type=int)
    c.add_argument("--m")
    c.add_argument("--multivariate", help="JSON (inline or file) with widths, optional groups, order")
    c.set_defaults(func=cmd_sheppard)

    c = sub.add_parser("tsh", parents=[common], help="time-space harmonic polynomial of a base umbra")
    c.add_argument("--alpha", help="moment array (inline JSON or file); stdin if omitted")
    c.add_argument("--i", type=int, required=True)
    c.add_argument("--time", default="t")
    c.set_defaults(func=cmd_tsh)

    c = sub.add_parser("poly", parents=[common], help="named polynomial families")
    c.add_argument("--family", required=True, choices=polyfam.FAMILIES + ("bernoulli", "euler", "touchard", "kailath-segall"))
    c.add_argument("--k", type=int, required=True)
    for name in ("s", "lam", "p", "a"):
        c.add_argument(f"--{name}")
    c.add_argument("--alpha")
    c.add_argument("--gamma")
    c.set_defaults(func=cmd_poly)

    c = sub.add_parser("mv-cumulants", parents=[common], help="joint cumulants of a moment table")
    c.add_argument("--order", type=int)
    c.add_argument("--inverse", action="store_true", help="cumulants -> moments")
    c.set_defaults(func=cmd_mv_cumulants)

    c = sub.add_parser("mv-hermite", parents=[common], help="multivariate Hermite polynomial")
    c.add_argument("--sigma", required=True)
    c.add_argument("--index", required=True)
    c.add_argument("--variant", choices=("H~", "H"), default="H~")
    c.add_argument("--t", default="1")
    c.set_defaults(func=cmd_mv_hermite)

    c = sub.add_parser("compose", parents=[common], help="composition, dot product or compositional inverse")
    c.add_argument("--op", choices=("composition", "dot", "inverse"), default="composition")
    c.add_argument("--order", type=int)
    c.set_defaults(func=cmd_compose)

    c = sub.add_parser("levy", parents=[common], help="moments of a Levy process")
    c.add_argument("--c0", default="0")
    c.add_argument("--s", default="0")
    c.add_argument("--t", default="t")
    c.add_argument("--nu", help="compensated jump moments (inline JSON or file)")
    c.add_argument("--order", type=int, required=True)
    c.set_defaults(func=cmd_levy)

    c = sub.add_parser("combinat", parents=[common], help="enumeration counts (debugging)")
    c.add_argument("--kind", required=True, choices=tuple(_COUNTERS) + ("stirling1", "stirling2", "bell", "bernoulli", "euler", "catalan"))
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int)
    c.add_argument("--index")
    c.add_argument("--list", action="store_true")
    c.set_defaults(func=cmd_combinat)

    c = sub.add_parser("verify", parents=[common], help="oracle-vs-fast comparisons")
    c.add_argument("--suite", choices=("cumulants", "kstats", "faa"), required=True)
    c.add_argument("--max-order", type=int, required=True)
    c.add_argument("--trials", type=int, default=5)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("bench", parents=[common], help="timing table for k-statistics and polykays")
    c.add_argument("--suite", choices=("kstat", "polykay", "all"), default="all")
    c.add_argument("--max-order", type=int, required=True)
    c.set_defaults(func=cmd_bench)
    return p


def run(argv: Sequence[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        payload = _encode(args.func(args, stdin))
    except _UsageError as exc:
        print(f"momentforge: error: {exc}", file=stderr)
        return EXIT_INVALID
    except CapExceeded as exc:
        print(f"momentforge: cap exceeded: {exc}", file=stderr)
        return EXIT_CAP
    except (ValidationError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        print(f"momentforge: invalid input: {exc}", file=stderr)
        return EXIT_INVALID
    if args.format == "pretty":
        stdout.write(_pretty(payload) + "\n")
    else:
        stdout.write(json.dumps(payload) + "\n")
    if args.command == "verify" and not payload["passed"]:
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
