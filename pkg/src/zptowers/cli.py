"""Command-line interface: tower files in, deterministic JSON reports and plots out.

Exit codes: 0 success, 2 a theorem's prediction was falsified, 1 usage or
operational error (schema violation, budget exceeded, precision shortfall).
"""

import argparse
import json
import os
import random
import sys

import jsonschema

from .arith import GlobalParams
from .lfun import BudgetExceeded, CharSpec, PrecisionShortfall, TameSpec, l_function
from .polygon import PrecisionError, agreement_intervals, dominates, newton_polygon, truncate_below
from .render import ascii_plot, slope_csv, svg_plot
from .report import build_report, sweep_report
from .tower import INFINITY, TowerSpec, asw_reduce, hodge_polygon, point_label, ram_breaks, twisted_hodge_polygon

DEFAULT_BUDGET = 5_000_000

_POINT = {"oneOf": [{"type": "string", "pattern": "^(inf|[0-9]+)$"},
                    {"type": "integer", "minimum": 0},
                    {"type": "array", "items": {"type": "integer"}}]}
_COEFF = {"oneOf": [{"type": "integer"}, {"type": "array", "items": {"type": "integer"}, "minItems": 1}]}

TOWER_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["schema", "p", "precision", "curve", "f"],
    "properties": {
        "schema": {"const": 1},
        "p": {"type": "integer", "minimum": 2},
        "a": {"type": "integer", "minimum": 1},
        "precision": {"type": "integer", "minimum": 1},
        "curve": {
            "type": "object",
            "required": ["S"],
            "properties": {"S": {"type": "array", "items": _POINT, "minItems": 1}},
        },
        "f": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "patternProperties": {"^[1-9][0-9]*$": _COEFF},
                "additionalProperties": False,
            },
        },
        "beta_constant": _COEFF,
        "psi": {
            "type": "object",
            "required": ["factors", "order"],
            "properties": {
                "factors": {"type": "array",
                            "items": {"type": "array", "items": [_POINT, {"type": "integer"}],
                                      "minItems": 2, "maxItems": 2}},
                "order": {"type": "integer", "minimum": 1},
            },
        },
        "declared": {
            "type": "object",
            "properties": {
                "genus": {"type": "integer", "minimum": 0},
                "ordinary": {"type": "boolean"},
                "ordinary_tame": {"type": "boolean"},
            },
        },
    },
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: usage error: {message}\n")


# ---------------------------------------------------------------- tower files

def _point(desc, params):
    F = params.field(1)
    if desc == "inf":
        return INFINITY
    if isinstance(desc, str):
        desc = int(desc)
    if isinstance(desc, list):
        if len(desc) > params.a or any(not 0 <= c < params.p for c in desc):
            raise UsageError(f"point {desc} is not an element of F_{params.q}")
        return F(desc)
    if not 0 <= desc < params.q:
        raise UsageError(f"point code {desc} is not an element of F_{params.q}")
    return F.from_code(desc)


def _coeff(value, R, where):
    vals = [value] if isinstance(value, int) else list(value)
    if len(vals) > R.n:
        raise UsageError(f"{where}: coefficient has more than {R.n} entries")
    if any(abs(v) >= R.mod for v in vals):
        raise UsageError(f"{where}: coefficient does not fit precision p^{R.N}")
    return R(vals)


def load_tower(doc):
    """Validate a TowerFile document; return (ReducedForm, TameSpec or None)."""
    try:
        jsonschema.validate(doc, TOWER_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise UsageError(f"schema violation: {exc.message}") from exc
    p, a, N = doc["p"], doc.get("a", 1), doc["precision"]
    try:
        params = GlobalParams(p, a)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    R = params.unram(1, N)
    points = [_point(d, params) for d in doc["curve"]["S"]]
    labels = [point_label(P) for P in points]
    if len(set(labels)) != len(labels):
        raise UsageError("points of S must be distinct")
    by_label = dict(zip(labels, points))
    local = {}
    for key, table in doc["f"].items():
        label = point_label(_point(key, params))
        if label not in by_label:
            raise UsageError(f"f is given at {key}, which is not in S")
        local[by_label[label]] = {int(k): _coeff(v, R, f"f[{key}][{k}]") for k, v in table.items()}
    const = _coeff(doc["beta_constant"], R, "beta_constant") if "beta_constant" in doc else None
    decl = doc.get("declared", {})
    spec = TowerSpec(params, tuple(points), local, N, const,
                     decl.get("genus", 0), decl.get("ordinary", True), decl.get("ordinary_tame", True))
    red = asw_reduce(spec)
    psi = None
    if "psi" in doc:
        factors = tuple((_point(pt, params), e) for pt, e in doc["psi"]["factors"])
        if any(P == INFINITY for P, _ in factors):
            raise UsageError("ψ factors must be finite points; ∞ is implied by the degree")
        psi = TameSpec(factors, doc["psi"]["order"])
        psi.validate(params)
    return red, psi


def read_tower(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read tower file: {exc}") from exc
    return load_tower(doc)


def reduced_tower_file(red, psi=None):
    """A TowerFile for the standard form (re-ingestible), with the digit data attached."""
    doc = {
        "schema": 1,
        "p": red.p,
        "a": red.params.a,
        "precision": red.precision,
        "curve": {"S": [point_label(P) for P in red.points]},
        "f": {point_label(P): {str(k): list(c.c) for k, c in sorted(red.local.get(P, {}).items())}
              for P in red.points},
    }
    if red.const_c:
        doc["beta_constant"] = list(red.constant().c)
    if psi is not None:
        doc["psi"] = {"factors": [[point_label(P), e] for P, e in psi.factors], "order": psi.order}
    spec = red.spec
    doc["declared"] = {"genus": spec.genus, "ordinary": spec.ordinary, "ordinary_tame": spec.ordinary_tame}
    doc["reduced"] = red.to_json()
    return doc


# ---------------------------------------------------------------- flags

def parse_char(text):
    try:
        kind, _, value = text.partition(":")
        if kind == "m":
            return CharSpec.finite(int(value))
        if kind == "equichar":
            return CharSpec.equichar(int(value))
    except ValueError as exc:
        raise UsageError(f"bad character {text!r}: {exc}") from exc
    raise UsageError(f"bad character {text!r}; use m:<level> or equichar:<M>")


def parse_levels(text):
    lo, _, hi = text.partition("-")
    try:
        lo, hi = int(lo), int(hi or lo)
    except ValueError as exc:
        raise UsageError(f"bad level range {text!r}") from exc
    if lo < 1 or hi < lo:
        raise UsageError(f"bad level range {text!r}")
    return list(range(lo, hi + 1))


def _dump(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _check_genus(red):
    if red.spec.genus:
        raise UsageError("L-functions are computed on P¹ only; declared genus must be 0")


# ---------------------------------------------------------------- commands

def cmd_reduce(args, out):
    red, psi = read_tower(args.file)
    out.write(_dump(reduced_tower_file(red, psi)) + "\n")
    return 0


def cmd_ram(args, out):
    red, _ = read_tower(args.file)
    out.write(_dump(ram_breaks(red, args.depth).to_json()) + "\n")
    return 0


def cmd_hodge(args, out):
    red, psi = read_tower(args.file)
    ram = ram_breaks(red)
    g = red.spec.genus
    if args.twisted:
        if psi is None:
            raise UsageError("--twisted needs a psi entry in the tower file")
        eps = {P: psi.eps(P, red.p) for P in ram.points}
        hp = twisted_hodge_polygon(ram, eps, g)
    else:
        hp = hodge_polygon(ram, g)
    char = parse_char(args.char) if args.char else CharSpec.finite(1)
    if char.kind != "finite":
        raise UsageError("hodge truncates at e_χ; pass m:<level>")
    e = red.p ** (char.m - 1) * (red.p - 1)
    poly = hp.truncate_below(e)
    doc = {"hodge": hp.to_json(), "truncation": e, "slopes_below_e": [str(s) for s in poly.slopes()],
           "vertices": poly.to_json()}
    if args.json:
        out.write(_dump(doc) + "\n")
    else:
        out.write(ascii_plot(poly, poly) + "\n")
        out.write("HP slopes below e: " + " ".join(doc["slopes_below_e"]) + "\n")
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(svg_plot(poly, poly))
    return 0


def cmd_lfun(args, out):
    red, psi = read_tower(args.file)
    _check_genus(red)
    char = parse_char(args.char)
    if args.twisted:
        if psi is None:
            raise UsageError("--twisted needs a psi entry in the tower file")
        if char.kind != "finite":
            raise UsageError("tame twists need a finite character")
        char = CharSpec.finite(char.m, psi)
    ls = l_function(red, char, D=args.order, budget=args.budget, workers=args.workers)
    out.write(_dump(ls.to_json()) + "\n")
    return 0


def cmd_newton(args, out):
    red, _ = read_tower(args.file)
    _check_genus(red)
    char = parse_char(args.char)
    ls = l_function(red, char, D=args.order, budget=args.budget, workers=args.workers)
    np_ = newton_polygon(ls)
    ram = ram_breaks(red)
    hp_full = hodge_polygon(ram, red.spec.genus)
    if char.kind == "finite":
        e = red.p ** (char.m - 1) * (red.p - 1)
        np_, hp = truncate_below(np_, e), hp_full.truncate_below(e)
    else:
        hp = hp_full.first(int(np_.length))
    iv = agreement_intervals(np_, hp) if not np_.is_empty() and not hp.is_empty() else []
    dom = dominates(np_, hp) if not np_.is_empty() and not hp.is_empty() else True
    doc = {"character": char.describe(), "np_vertices": np_.to_json(), "hp_vertices": hp.to_json(),
           "np_slopes": [str(s) for s in np_.slopes()], "hp_slopes": [str(s) for s in hp.slopes()],
           "dominance": dom, "agreement_intervals": [[str(a), str(b)] for a, b in iv],
           "equal": np_ == hp}
    if args.json:
        out.write(_dump(doc) + "\n")
    else:
        out.write(ascii_plot(np_, hp, iv) + "\n")
        out.write("NP slopes: " + " ".join(doc["np_slopes"]) + "\n")
        out.write("HP slopes: " + " ".join(doc["hp_slopes"]) + "\n")
        out.write(f"dominance: {dom}  equal: {doc['equal']}\n")
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(svg_plot(np_, hp, iv))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(slope_csv(np_, hp))
    return 0 if dom else 2


def cmd_verify(args, out):
    red, psi = read_tower(args.file)
    _check_genus(red)
    if args.char:
        chars = [parse_char(c) for c in args.char]
    else:
        chars = [CharSpec.finite(m) for m in parse_levels(args.levels)]
    report, status = build_report(red, chars, psi=psi, D=args.order, budget=args.budget, workers=args.workers)
    out.write(_dump(report) + "\n")
    return status


def cmd_sweep(args, out):
    red, _ = read_tower(args.file)
    _check_genus(red)
    levels = list(range(1, args.max_level + 1))
    report, status = sweep_report(red, levels, D=args.order, budget=args.budget, workers=args.workers)
    out.write(_dump(report) + "\n")
    return status


def cmd_corpus(args, out):
    """Seeded random tower files (for property-test corpora)."""
    from .corpus import random_spec

    rng = random.Random(args.seed)
    docs = []
    for _ in range(args.count):
        spec = random_spec(rng, args.p, args.a, max_pole=args.max_pole, precision=args.precision)
        docs.append(reduced_tower_file(asw_reduce(spec)))
    out.write(_dump(docs) + "\n")
    return 0


# ---------------------------------------------------------------- entry point

def build_parser():
    parser = _Parser(prog="zptowers", description="Exact Newton-vs-Hodge experiments for Zp-towers on P^1 - S.")
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum number of enumerated points (sum of q^k, k <= D)")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker threads (default: ZPTOWERS_WORKERS or all cores)")
    parser.add_argument("--seed", type=int, default=0, help="seed for corpus generation")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reduce", help="standard form as a tower file")
    p.add_argument("file")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("ram", help="ramification breaks, delta, m0 and d")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=None, help="number of breaks (default precision + 1)")
    p.set_defaults(func=cmd_ram)

    p = sub.add_parser("hodge", help="Hodge polygon below e")
    p.add_argument("file")
    p.add_argument("--char", default=None)
    p.add_argument("--twisted", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_hodge)

    p = sub.add_parser("lfun", help="exact truncated L-function")
    p.add_argument("file")
    p.add_argument("--char", required=True)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--twisted", action="store_true")
    p.set_defaults(func=cmd_lfun)

    p = sub.add_parser("newton", help="Newton polygon against the Hodge polygon")
    p.add_argument("file")
    p.add_argument("--char", required=True)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--svg", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("verify", help="theorem verdicts over a level range")
    p.add_argument("file")
    p.add_argument("--levels", default="1-2")
    p.add_argument("--char", action="append", default=None)
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="levels m = 1..M with discrepancy trend and stability fit")
    p.add_argument("file")
    p.add_argument("--max-level", type=int, default=2)
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("corpus", help="seeded random tower files")
    p.add_argument("-p", type=int, default=3)
    p.add_argument("-a", type=int, default=1)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--max-pole", type=int, default=5)
    p.add_argument("--precision", type=int, default=3)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    if args.workers is not None:
        os.environ["ZPTOWERS_WORKERS"] = str(args.workers)
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: estimated cost {exc.estimate} > budget {exc.budget}\n")
        return 1
    except (PrecisionShortfall, PrecisionError) as exc:
        sys.stderr.write(f"precision shortfall: {exc}\n")
        return 1
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
