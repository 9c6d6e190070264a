"""Command line front end and the polynomial text format.

Grammar::

    expr    := [sign] term (sign term)*
    term    := coeff [['*'] factors] | factors
    coeff   := INT ['/' INT]
    factors := factor ('*' factor)*
    factor  := 'x' INT ['^' INT]

Every subcommand prints one JSON document.  Exit status is 0 on success,
1 on a domain error and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .almansi import almansi_decompose, h_harmonic_decompose
from .coxeter import build_named, from_json, validate
from .dunkl import DunklContext, dunkl_apply, dunkl_laplacian, is_h_harmonic, polyharmonic_order
from .errors import DunklError, InvalidRootSystem, PolynomialSyntaxError, UnknownVariable
from .liouville import classify
from .polycore import Polynomial
from .sphereint import DEFAULT_SAMPLES, DEFAULT_SEED, PiRational, SphericalIntegrator, m1, mean_value_check

SCHEMA_VERSION = 1


# -- parsing ---------------------------------------------------------------


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, *expected):
        self._skip()
        raise PolynomialSyntaxError(len(self.text[: self.pos].encode()), expected, self.text)

    def integer(self):
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("integer")
        return int(self.text[start : self.pos])

    def factor(self):
        if self.peek() != "x":
            self.fail("variable")
        self.pos += 1
        if not self.text[self.pos : self.pos + 1].isdigit():
            self.fail("integer")
        index = self.integer()
        exp = 1
        if self.peek() == "^":
            self.pos += 1
            exp = self.integer()
        return index, exp

    def factors(self, mono):
        while True:
            i, e = self.factor()
            mono[i] = mono.get(i, 0) + e
            if self.peek() == "*":
                self.pos += 1
                continue
            return mono

    def term(self):
        ch = self.peek()
        coeff = Fraction(1)
        mono = {}
        if ch.isdigit():
            coeff = Fraction(self.integer())
            if self.peek() == "/":
                self.pos += 1
                den = self.integer()
                if den == 0:
                    self.pos -= 1
                    self.fail("nonzero denominator")
                coeff /= den
            nxt = self.peek()
            if nxt == "*":
                self.pos += 1
                self.factors(mono)
            elif nxt == "x":
                self.factors(mono)
        elif ch == "x":
            self.factors(mono)
        else:
            self.fail("integer", "variable")
        return coeff, mono

    def expr(self):
        terms = []
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            c, mono = self.term()
            terms.append((sign * c, mono))
            ch = self.peek()
            if ch == "":
                return terms
            if ch not in "+-":
                self.fail("'+'", "'-'", "'*'", "end of input")
            sign = -1 if ch == "-" else 1
            self.pos += 1


def parse_polynomial(text, n=None):
    """Parse ``text`` into a :class:`Polynomial` in ``n`` variables.

    If ``n`` is omitted the largest variable index is used.

    >>> str(parse_polynomial("3*x1^2*x2 - 1/2*x3"))
    '3*x1^2*x2 - 1/2*x3'
    """
    terms = _Parser(text).expr()
    top = max((i for _, m in terms for i in m), default=1)
    low = min((i for _, m in terms for i in m), default=1)
    if low < 1:
        raise UnknownVariable("variables are numbered from x1")
    if n is None:
        n = top
    if top > n:
        raise UnknownVariable(f"x{top} is not a variable in dimension {n}")
    out = {}
    for c, m in terms:
        mono = [0] * n
        for i, e in m.items():
            mono[i - 1] += e
        mono = tuple(mono)
        out[mono] = out.get(mono, 0) + c
    return Polynomial(n, out)


# -- JSON encoding -----------------------------------------------------------


def encode_scalar(v):
    if isinstance(v, PiRational):
        return {"exact": str(v), "float": float(v)}
    if isinstance(v, Fraction):
        return {"exact": str(v), "float": float(v)}
    return {"float": float(v)}


def encode_polynomial(p):
    terms = []
    for mono, c in p.sorted_terms():
        if isinstance(c, Fraction):
            terms.append({"exps": list(mono), "num": c.numerator, "den": c.denominator})
        else:
            terms.append({"exps": list(mono), "num": float(c), "den": 1})
    return {"dimension": p.n, "terms": terms, "text": str(p)}


def decode_polynomial(obj):
    n = obj.get("dimension") or len(obj["terms"][0]["exps"])
    terms = {}
    for t in obj["terms"]:
        num, den = t["num"], t["den"]
        c = Fraction(num, den) if isinstance(num, int) else float(num) / den
        terms[tuple(t["exps"])] = c
    return Polynomial(n, terms)


# -- command line ------------------------------------------------------------


def _kappa_list(text):
    return [Fraction(k.strip()) for k in text.split(",") if k.strip()]


def _radii(text):
    return [Fraction(r.strip()) for r in text.split(",") if r.strip()]


def _grid(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid is r_min,r_max,count")
    lo, hi, k = float(parts[0]), float(parts[1]), int(parts[2])
    if k < 2 or lo <= 0 or hi <= lo:
        raise argparse.ArgumentTypeError("need 0 < r_min < r_max and count >= 2")
    ratio = (hi / lo) ** (1 / (k - 1))
    return tuple(lo * ratio**i for i in range(k))


def _env_seed():
    raw = os.environ.get("DUNKL_SEED")
    return int(raw) if raw else DEFAULT_SEED


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("root system")
    g.add_argument("--family", choices=["Z2", "A", "B", "D", "I2"])
    g.add_argument("--dim", type=int, help="ambient dimension (Z2, A, B, D)")
    g.add_argument("--m", type=int, help="dihedral order parameter for I2")
    g.add_argument("--kappa", type=_kappa_list, help="comma separated multiplicities, e.g. 1/2,1/2")
    g.add_argument("--roots-json", help="custom root system JSON file")
    g.add_argument("--unchecked-kappa", action="store_true", help="allow negative multiplicities")
    src = common.add_mutually_exclusive_group()
    src.add_argument("--poly", help="polynomial text, e.g. '3*x1^2*x2 - 1/2*x3'")
    src.add_argument("--poly-file", help="file holding the polynomial text")
    common.add_argument("--seed", type=int, default=None, help="Monte Carlo seed (env DUNKL_SEED)")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--mode", choices=["auto", "exact", "numeric"], default="auto")
    common.add_argument("--output", help="also write the JSON document to this path")

    parser = argparse.ArgumentParser(prog="dunklpoly", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("apply", parents=[common], help="Dunkl operator D_j f")
    p.add_argument("--j", type=int, required=True, help="coordinate index, 1-based")
    sub.add_parser("laplacian", parents=[common], help="Dunkl Laplacian of f")
    p = sub.add_parser("harmonic", parents=[common], help="h-harmonicity and polyharmonic order")
    p.add_argument("--max-p", type=int)
    sub.add_parser("hdecomp", parents=[common], help="h-harmonic decomposition of a homogeneous f")
    p = sub.add_parser("almansi", parents=[common], help="Almansi decomposition")
    p.add_argument("--p", type=int)
    sub.add_parser("mean", parents=[common], help="mean value property check")
    p = sub.add_parser("m1", parents=[common], help="M_1(r, f) at the given radii")
    p.add_argument("--radii", type=_radii, required=True)
    p = sub.add_parser("classify", parents=[common], help="Liouville degree classification")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--grid", type=_grid, default=None, help="r_min,r_max,count (geometric)")
    sub.add_parser("validate", parents=[common], help="root system axioms report")
    return parser


def _system(args, check=True):
    if args.roots_json:
        with open(args.roots_json) as fh:
            data = json.load(fh)
        if args.unchecked_kappa:
            data["unchecked_kappa"] = True
        return from_json(data, check=check)
    if not args.family:
        raise _Usage("give --family or --roots-json")
    if args.family == "I2":
        if args.m is None:
            raise _Usage("I2 needs --m")
        param = args.m
    else:
        if args.dim is None:
            raise _Usage(f"{args.family} needs --dim")
        param = args.dim
    kappa = args.kappa if args.kappa is not None else Fraction(0)
    if isinstance(kappa, list) and len(kappa) == 1:
        kappa = kappa[0]
    return build_named(args.family, param, kappa, args.unchecked_kappa, check=check)


class _Usage(Exception):
    pass


def _poly(args, n):
    if args.poly is not None:
        text = args.poly
    elif args.poly_file is not None:
        with open(args.poly_file) as fh:
            text = fh.read()
    else:
        raise _Usage("give --poly or --poly-file")
    return parse_polynomial(text, n)


def _execute(args):
    doc = {"command": args.command}
    if args.command == "validate":
        ws = _system(args, check=False)
        report = validate(ws)
        doc["system"] = ws.name
        doc["report"] = report.to_dict()
        return doc, (0 if report.passed else 1)

    ws = _system(args)
    ctx = DunklContext(ws)
    doc["system"] = ws.name
    doc["gamma"] = encode_scalar(ws.gamma)
    if ws.unchecked_kappa and any(k < 0 for k in ws.kappa.values()):
        doc["warnings"] = [
            "negative kappa: results assume kappa in the regular parameter set, which is not checked"
        ]
    f = _poly(args, ws.n)
    doc["input"] = encode_polynomial(f)
    seed = args.seed if args.seed is not None else _env_seed()

    if args.command == "apply":
        if not 1 <= args.j <= ws.n:
            raise _Usage(f"--j must lie in 1..{ws.n}")
        doc["result"] = encode_polynomial(dunkl_apply(ctx, args.j - 1, f))
    elif args.command == "laplacian":
        doc["result"] = encode_polynomial(dunkl_laplacian(ctx, f))
    elif args.command == "harmonic":
        doc["h_harmonic"] = is_h_harmonic(ctx, f)
        doc["polyharmonic_order"] = polyharmonic_order(ctx, f, args.max_p)
    elif args.command == "hdecomp":
        dec = h_harmonic_decompose(ctx, f)
        doc["degree"] = dec.degree
        doc["parts"] = [{"j": j, "h": encode_polynomial(h)} for j, h in dec.parts]
    elif args.command == "almansi":
        p = args.p if args.p is not None else polyharmonic_order(ctx, f)
        dec = almansi_decompose(ctx, f, p)
        doc["p"] = p
        doc["phi"] = [encode_polynomial(phi) for phi in dec.phi]
    elif args.command == "mean":
        intg = SphericalIntegrator(ws, args.mode, samples=args.samples, seed=seed)
        doc["mean_value"] = mean_value_check(intg, f, ctx).to_dict()
        doc["c"] = encode_scalar(intg.constant().value)
    elif args.command == "m1":
        intg = SphericalIntegrator(ws, args.mode, samples=args.samples, seed=seed)
        rows = []
        for r in args.radii:
            res = m1(intg, r, f)
            rows.append({"r": str(r), "value": encode_scalar(res.value), "error": res.error, "method": res.method})
        doc["m1"] = rows
    elif args.command == "classify":
        intg = SphericalIntegrator(ws, args.mode, samples=args.samples, seed=seed)
        kwargs = {"grid": args.grid} if args.grid else {}
        report = classify(ctx, intg, f, args.p, args.s, **kwargs)
        doc["report"] = report.to_dict()
        doc["verdict"] = report.verdict
        doc["settings"] = {"seed": seed, "samples": args.samples, "mode": intg.mode}
    return doc, 0


def _emit(doc, args, out):
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    text = json.dumps(doc, sort_keys=True, indent=2)
    print(text, file=out)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text + "\n")


def run(argv=None, out=None):
    """Run the command line interface; returns the exit status."""
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, status = _execute(args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"dunklpoly: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"dunklpoly: error: {exc}", file=sys.stderr)
        return 2
    except DunklError as exc:
        err = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, PolynomialSyntaxError):
            err["offset"] = exc.offset
            err["expected"] = list(exc.expected)
        _emit({"command": args.command, "error": err}, args, out)
        return 1
    _emit(doc, args, out)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
