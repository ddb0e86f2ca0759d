"""Command-line front end: ``markovspec <subcommand> [options]``.

Global options may also be set through environment variables named
MARKOVSPEC_PRECISION, MARKOVSPEC_DEPTH, MARKOVSPEC_TOL, MARKOVSPEC_FORMAT,
MARKOVSPEC_WORKERS and MARKOVSPEC_SEED.  Command-line flags win.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from . import box, cantor, repro, spectrum, words
from .contfrac import ContinuedFraction, convergents, expand, parse_cf
from .exact import Interval, QuadraticSurd, to_decimal

ENV_PREFIX = "MARKOVSPEC_"
PHI = QuadraticSurd(1, 1, 2, 5)

Number = Union[Fraction, QuadraticSurd]


class CliError(Exception):
    """Failure reported as a structured error with a nonzero exit code."""

    def __init__(self, kind: str, message: str, code: int = 1):
        super().__init__(message)
        self.kind, self.message, self.code = kind, message, code


# number literals

def parse_number(text: str) -> Union[Number, ContinuedFraction]:
    """Integers, "p/q", decimals, surd expressions such as "(p+q*sqrt(d))/r"
    or "sqrt(6)*2/5+2/5", CF literals "[a0; a1, (b1, b2)^w]", "e" and "phi"."""
    src = text.strip()
    if src == "e":
        return spectrum.euler_cf()
    if src in ("phi", "φ"):
        return PHI
    if src.startswith("["):
        try:
            return parse_cf(src)
        except ValueError as exc:
            raise CliError("literal", f"malformed continued fraction {text!r}: {exc}", 2) from exc
    try:
        tree = ast.parse(src, mode="eval")
        return _eval_node(tree.body, src)
    except CliError:
        raise
    except (SyntaxError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise CliError("literal", f"malformed number literal {text!r}: {exc}", 2) from exc


def _eval_node(node: ast.AST, src: str):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return Fraction(ast.get_source_segment(src, node) or repr(node.value))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, src)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        x, y = _eval_node(node.left, src), _eval_node(node.right, src)
        if isinstance(node.op, ast.Add):
            return _collapse(x + y)
        if isinstance(node.op, ast.Sub):
            return _collapse(x - y)
        if isinstance(node.op, ast.Mult):
            return _collapse(x * y)
        if isinstance(node.op, ast.Div):
            return _collapse(x / y)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(y, Fraction) and y.denominator == 1):
                raise ValueError("exponents must be integers")
            return _collapse(x ** int(y))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1:
        arg = _eval_node(node.args[0], src)
        if not isinstance(arg, Fraction) or arg < 0:
            raise ValueError("sqrt takes a non-negative rational")
        # sqrt(n/m) = sqrt(n m) / m
        return _collapse(QuadraticSurd.make(0, 1, arg.denominator, arg.numerator * arg.denominator))
    raise ValueError(f"unsupported syntax {ast.dump(node)}")


def _collapse(x):
    return Fraction(x) if isinstance(x, int) else x


def parse_window(text: str) -> Interval:
    parts = text.split(",")
    if len(parts) != 2:
        raise CliError("literal", f"window must be 'lo,hi', got {text!r}", 2)
    lo, hi = (parse_number(p) for p in parts)
    if not all(isinstance(v, Fraction) for v in (lo, hi)) or not lo < hi:
        raise CliError("literal", f"window needs rational lo < hi, got {text!r}", 2)
    return Interval(lo, hi)


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise CliError("literal", f"expected comma-separated integers, got {text!r}", 2) from exc


# configuration

@dataclass(frozen=True)
class RunConfig:
    precision_digits: int = 50
    depth: int = 1000
    tolerance: float = 1e-3
    output_format: str = "json"
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.precision_digits < 10:
            raise CliError("config", "precision must be >= 10", 2)
        if self.depth < 1:
            raise CliError("config", "depth must be >= 1", 2)
        if not self.tolerance > 0:
            raise CliError("config", "tolerance must be > 0", 2)
        if self.output_format not in ("json", "csv"):
            raise CliError("config", "format must be json or csv", 2)
        if self.workers < 1:
            raise CliError("config", "workers must be >= 1", 2)


def _env(name: str, default):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    try:
        return type(default)(raw)
    except ValueError as exc:
        raise CliError("config", f"bad value {raw!r} for {ENV_PREFIX}{name.upper()}", 2) from exc


# serialization

def exact_json(x, digits: int) -> dict:
    if isinstance(x, Interval):
        return {"interval": [str(x.lo), str(x.hi)], "decimal": to_decimal(x.mid, min(digits, 30))[0]}
    if isinstance(x, int):
        x = Fraction(x)
    return {"exact": str(x), "decimal": to_decimal(x, digits)[0]}


@dataclass
class Report:
    payload: dict
    rows: Optional[list[dict]] = None  # tabular view for --format csv

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2, sort_keys=True, default=str) + "\n"
        rows = self.rows if self.rows is not None else [
            {"key": k, "value": json.dumps(v, sort_keys=True, default=str) if isinstance(v, (dict, list)) else v}
            for k, v in sorted(self.payload.items())
        ]
        buf = io.StringIO()
        if rows:
            out = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            out.writeheader()
            out.writerows(rows)
        return buf.getvalue()


def _as_alpha(value):
    if isinstance(value, ContinuedFraction):
        return value
    return expand(value)


def _cf_text(cf: ContinuedFraction, depth: int) -> str:
    if not cf.is_stream:
        return str(cf)
    ds = cf.digits(min(depth, 60))
    return f"[{ds[0]}; {', '.join(map(str, ds[1:]))}, ...]"


# subcommands

def cmd_cf_expand(args, cfg: RunConfig) -> Report:
    cf = _as_alpha(parse_number(args.x))
    out = {"input": args.x, "cf": _cf_text(cf, cfg.depth), "kind": cf.kind}
    if cf.is_periodic:
        out["prefix"], out["period"] = list(cf.prefix), list(cf.period)
    return Report(out)


def cmd_cf_eval(args, cfg: RunConfig) -> Report:
    cf = _as_alpha(parse_number(args.cf))
    value = cf.value() if not cf.is_stream else cf.enclosure(cfg.depth)
    return Report({"cf": _cf_text(cf, cfg.depth), "value": exact_json(value, cfg.precision_digits)})


def cmd_convergents(args, cfg: RunConfig) -> Report:
    cf = _as_alpha(parse_number(args.x))
    convs = convergents(cf, cfg.depth)
    rows = [{"n": c.index, "p": c.p, "q": c.q} for c in convs]
    return Report({"convergents": rows}, rows)


def cmd_approx_seq(args, cfg: RunConfig) -> Report:
    terms = spectrum.approx_sequence(parse_number(args.x), cfg.depth)
    digits = min(cfg.precision_digits, 30)
    rows = [
        {
            "n": t.n,
            "value": to_decimal(t.enclosure.mid, digits)[0],
            "next_digit": t.next_digit,
            "bracket_holds": t.bracket_holds(),
        }
        for t in terms
    ]
    return Report({"terms": rows}, rows)


def cmd_quad_accum(args, cfg: RunConfig) -> Report:
    report = spectrum.quad_accumulation_set(parse_number(args.x), max(60, min(cfg.depth, 400)))
    payload = report.to_dict(cfg.precision_digits)
    payload["points"] = [exact_json(x, cfg.precision_digits) for x in report.points]
    return Report(payload, [{"point": p["exact"], "decimal": p["decimal"]} for p in payload["points"]])


def cmd_markov(args, cfg: RunConfig) -> Report:
    mu = spectrum.markov_constant(parse_number(args.x), args.mode, cfg.depth)
    if args.mode == "exact":
        return Report({"mode": "exact", "markov_constant": exact_json(mu, cfg.precision_digits)})
    return Report({
        "mode": "numeric",
        "estimate": mu.estimate,
        "lower": str(mu.lower),
        "upper": str(mu.upper),
        "range": [mu.start, mu.depth],
    })


def cmd_secondary(args, cfg: RunConfig) -> Report:
    term = spectrum.secondary_convergent_terms(parse_number(args.x), args.n, args.a)
    return Report({"n": term.n, "a": term.a, "k": term.k, "m": term.m,
                   "value": exact_json(term.value, cfg.precision_digits)})


def cmd_legendre(args, cfg: RunConfig) -> Report:
    hits = spectrum.legendre_filter(parse_number(args.x), args.qmax)
    rows = [{"p": h.numerator, "q": h.denominator} for h in hits]
    return Report({"q_max": args.qmax, "hits": rows}, rows)


def cmd_euler(args, cfg: RunConfig) -> Report:
    e = spectrum.euler_cf()
    floats = spectrum.float_terms(e, cfg.depth)
    rows = [{"n": n, "digit": e.digit(n), "term": repr(v)} for n, v in enumerate(floats)]
    return Report({"digits": e.digits(min(cfg.depth, 60)), "terms": rows}, rows)


def cmd_word_gen(args, cfg: RunConfig) -> Report:
    gen = words.WordGenerator(args.kind)
    letters = gen.prefix(args.length)
    return Report({"kind": gen.kind.value, "letters": letters},
                  [{"i": i + 1, "letter": a} for i, a in enumerate(letters)])


def cmd_word_scan(args, cfg: RunConfig) -> Report:
    alpha = words.word_to_alpha(words.WordGenerator(args.kind))
    targets = [parse_number(t) for t in args.targets.split(",")]
    hits = words.target_hit_scan(
        alpha, targets, cfg.depth, cfg.tolerance,
        multipliers=parse_int_list(args.multipliers), secondary=args.secondary, with_convergents=args.pairs,
    )
    rows = []
    for h in hits:
        row = h.to_dict()
        row["within_tol"] = h.distance < Fraction(cfg.tolerance)
        rows.append(row)
    return Report({"kind": args.kind, "depth": cfg.depth, "hits": rows}, rows)


def _spec(args) -> cantor.CantorSpec:
    return cantor.CantorSpec(parse_int_list(args.alphabet))


def cmd_cantor_extrema(args, cfg: RunConfig) -> Report:
    lo, hi = cantor.extrema(_spec(args))
    return Report({"min": exact_json(lo, cfg.precision_digits), "max": exact_json(hi, cfg.precision_digits)})


def cmd_cantor_sum(args, cfg: RunConfig) -> Report:
    spec = _spec(args)
    s = cantor.sumset_interval(spec)
    out = {
        "lo": exact_json(s.lo, cfg.precision_digits),
        "hi": exact_json(s.hi, cfg.precision_digits),
        "filled": s.filled,
    }
    if args.gap_depth is not None:
        out["gap_measure"] = {str(n): cantor.sumset_gap_measure(spec, n) for n in range(args.gap_depth + 1)}
    return Report(out)


def cmd_hausdorff(args, cfg: RunConfig) -> Report:
    spec = _spec(args)
    out = cantor.hausdorff_bounds(spec, cfg.precision_digits).to_dict()
    if args.cover_depth:
        est = cantor.ifs_cover(spec, args.cover_depth)
        out["cover"] = {
            "depth": est.depth,
            "intervals": est.interval_count,
            "max_length": float(est.max_interval_length),
            "length_bound": float(est.length_bound),
            "bound_holds": est.bound_holds,
        }
    return Report(out)


def cmd_box_eigen(args, cfg: RunConfig) -> Report:
    a, b = parse_number(args.a), parse_number(args.b)
    if isinstance(a, ContinuedFraction) or isinstance(b, ContinuedFraction):
        raise CliError("literal", "side lengths must be rational or surds", 2)
    evs = box.eigenvalues(a, b, args.kmax, args.mmax)
    if cfg.output_format == "csv":
        return Report({}, list(csv.DictReader(io.StringIO(box.eigenvalues_csv(evs)))))
    return Report({"eigenvalues": [{"k": e.k, "m": e.m, "coeff_of_pi2": str(e.coeff)} for e in evs]})


def cmd_box_scan(args, cfg: RunConfig) -> Report:
    alpha = parse_number(args.alpha)
    window = parse_window(args.window)
    hits = box.singular_scan(alpha, window, args.mmax, exhaustive=args.exhaustive, workers=cfg.workers)
    digits = min(cfg.precision_digits, 30)
    rows = [
        {"k": h.k, "m": h.m,
         "value": to_decimal(h.value.mid if isinstance(h.value, Interval) else h.value, digits)[0]}
        for h in hits
    ]
    return Report({"alpha": args.alpha, "window": [str(window.lo), str(window.hi)],
                   "m_max": args.mmax, "count": len(rows), "hits": rows}, rows)


def cmd_pu_spectrum(args, cfg: RunConfig) -> Report:
    spec = box.pu_spectrum(parse_number(args.omega_x), parse_number(args.omega_y), args.nmax, args.mmax)
    return Report(json.loads(box.pu_summary_json(spec)))


def cmd_repro(args, cfg: RunConfig) -> Report:
    try:
        results = repro.run(args.name, cfg.seed)
    except KeyError as exc:
        raise CliError("usage", exc.args[0], 2) from exc
    for r in results:
        for line in r.lines():
            print(line, file=args.stderr)
    payload = results[0].to_dict() if len(results) == 1 else {"results": [r.to_dict() for r in results]}
    rows = [{"criterion": r.criterion, "name": r.name, "verdict": "PASS" if r.passed else "FAIL"} for r in results]
    rep = Report(payload, rows)
    rep.failed = any(not r.passed for r in results)
    return rep


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="markovspec", description="Approximation spectra of real numbers.")
    _add_globals(parser, defaults=True)
    # the same flags after the subcommand; SUPPRESS keeps earlier values when absent
    common = _Parser(add_help=False)
    _add_globals(common, defaults=False)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name: str, fn: Callable, help: str, *positional: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, parents=[common])
        for arg in positional:
            p.add_argument(arg)
        p.set_defaults(func=fn)
        return p

    add("cf-expand", cmd_cf_expand, "continued fraction of a number", "x")
    add("cf-eval", cmd_cf_eval, "value of a continued fraction literal", "cf")
    add("convergents", cmd_convergents, "convergents p_N/q_N up to --depth", "x")
    add("approx-seq", cmd_approx_seq, "terms q_N^2 (p_N/q_N - alpha)", "x")
    add("quad-accum", cmd_quad_accum, "exact accumulation points (quadratic alpha)", "x")
    p = add("markov", cmd_markov, "Markov constant", "x")
    p.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    p = add("secondary", cmd_secondary, "secondary-convergent term", "x")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p = add("legendre", cmd_legendre, "all p/q with |alpha - p/q| < 1/(2q^2)", "x")
    p.add_argument("--qmax", type=int, default=500)
    add("euler", cmd_euler, "digits and terms of e")
    kinds = [k.value for k in words.WordKind]
    p = add("word-gen", cmd_word_gen, "prefix of a constructed word")
    p.add_argument("kind", choices=kinds)
    p.add_argument("--length", type=int, default=100)
    p = add("word-scan", cmd_word_scan, "terms closest to targets")
    p.add_argument("kind", choices=kinds)
    p.add_argument("--targets", required=True, help="comma-separated number literals")
    p.add_argument("--multipliers", default="1")
    p.add_argument("--secondary", action="store_true")
    p.add_argument("--pairs", action="store_true", help="report the integer pair (k, m)")
    for name, fn, help in (
        ("cantor-extrema", cmd_cantor_extrema, "min and max of F_0(A)"),
        ("cantor-sum", cmd_cantor_sum, "the interval [2 min, 2 max] and uncovered length"),
        ("hausdorff", cmd_hausdorff, "dimension bounds for F_0(A) + F_0(A)"),
    ):
        p = add(name, fn, help)
        p.add_argument("--alphabet", default="4,5")
    sub.choices["cantor-sum"].add_argument("--gap-depth", type=int)
    sub.choices["hausdorff"].add_argument("--cover-depth", type=int, default=0)
    p = add("box-eigen", cmd_box_eigen, "rectangle eigenvalues as multiples of pi^2")
    p.add_argument("--a", default="1")
    p.add_argument("--b", default="1")
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--mmax", type=int, default=3)
    p = add("box-scan", cmd_box_scan, "values m^2 (k/m - alpha) in a window")
    p.add_argument("--alpha", required=True)
    p.add_argument("--window", required=True, help="lo,hi")
    p.add_argument("--mmax", type=int, default=1000)
    p.add_argument("--exhaustive", action="store_true")
    p = add("pu-spectrum", cmd_pu_spectrum, "Pais-Uhlenbeck energy grid statistics")
    p.add_argument("--omega-x", required=True)
    p.add_argument("--omega-y", required=True)
    p.add_argument("--nmax", type=int, default=200)
    p.add_argument("--mmax", type=int, default=200)
    p = add("repro", cmd_repro, "run a reproduction script (or 'all')")
    p.add_argument("name", help=", ".join(["all", *repro.SCRIPTS]))
    p.add_argument("--strict", action="store_true", help="exit 3 when a check fails")
    return parser


def _add_globals(parser: argparse.ArgumentParser, defaults: bool) -> None:
    def dflt(name, value):
        return _env(name, value) if defaults else argparse.SUPPRESS

    parser.add_argument("--precision", type=int, default=dflt("precision", 50), help="decimal digits (>= 10)")
    parser.add_argument("--depth", type=int, default=dflt("depth", 1000), help="number of terms / digits")
    parser.add_argument("--tol", type=float, default=dflt("tol", 1e-3))
    parser.add_argument("--format", choices=("json", "csv"), default=dflt("format", "json"))
    parser.add_argument("--workers", type=int, default=dflt("workers", 1))
    parser.add_argument("--seed", type=int, default=dflt("seed", 0))


def _glue_values(argv: Sequence[str]) -> list[str]:
    """Turn "--window -0.01,0.01" into "--window=-0.01,0.01" so argparse
    does not read the negative value as an option."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        elif len(tok) > 1 and tok[0] == "-" and not (tok[1].isalpha() or tok[1] == "-"):
            # a negative literal such as "-(1+sqrt(5))/2"; the blank is stripped by the parser
            out.append(" " + tok)
        else:
            out.append(tok)
    return out


_VALUE_FLAGS = {"--window", "--targets", "--alpha", "--a", "--b", "--omega-x", "--omega-y"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message, 2)


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)  # convergent numerators outgrow the default limit
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        argv = list(sys.argv[1:] if argv is None else argv)
        args = build_parser().parse_args(_glue_values(argv))
        cfg = RunConfig(args.precision, args.depth, args.tol, args.format, args.seed, args.workers)
        args.stderr = stderr
        report = args.func(args, cfg)
        stdout.write(report.render(cfg.output_format))
        if getattr(args, "strict", False) and getattr(report, "failed", False):
            return 3
        return 0
    except CliError as exc:
        _emit_error(stderr, exc.kind, exc.message)
        return exc.code
    except (ValueError, ArithmeticError, AssertionError, MemoryError, TypeError) as exc:
        _emit_error(stderr, type(exc).__name__, str(exc))
        return 1


def _emit_error(stream, kind: str, message: str) -> None:
    stream.write(json.dumps({"error": {"kind": kind, "message": message}}, sort_keys=True) + "\n")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
