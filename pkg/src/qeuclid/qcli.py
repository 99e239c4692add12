"""Command-line interface: expression parsing, one-shot computations, and
verification-suite running with deterministic reports.

Grammar for expressions (whitespace-insensitive)::

    expr   := term (('+' | '-' | '−') term)*
    term   := unary (('*' | '·' | '/') unary | unary)*   # juxtaposition = product
    unary  := ('+' | '-' | '−') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := 'xp' | 'x3' | 'xm' | 't' | 'q' | 'I' | INT | '(' expr ')'

'·'/'*' denote the commutative representative product; negative powers are
accepted only on invertible scalar constants (q and nonzero numbers).
Division requires a nonzero scalar constant divisor.  Syntax errors report
the byte offset and the set of expected tokens.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .qcoeff import QScalar, QS_I, QS_ONE
from .qpoly import SpacePoly, classical_t_derivative, render_poly
from .qcalculus import act_left, act_left_hatted, act_right, act_right_bar
from .qstar import star, conjugate


class CliSyntaxError(ValueError):
    """A parse failure carrying the byte offset and expected-token set."""

    def __init__(self, offset: int, expected, found: str):
        self.offset = offset
        self.expected = sorted(expected)
        self.found = found
        super().__init__(
            f"syntax error at byte {offset}: expected one of "
            f"{{{', '.join(self.expected)}}}, found {found!r}"
        )


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>xp|x3|xm|t|q|I)|(?P<int>\d+)"
    r"|(?P<op>[+*/^()·]|−|-))"
)

_ATOM_STARTS = ("xp", "x3", "xm", "t", "q", "I", "integer", "'('")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items = []  # (kind, value, byte offset)
        pos = 0
        blob = text
        while pos < len(blob):
            m = _TOKEN_RE.match(blob, pos)
            if m is None or m.end() == m.start():
                stripped = blob[pos:].lstrip()
                if not stripped:
                    break
                bad_at = pos + (len(blob[pos:]) - len(stripped))
                raise CliSyntaxError(_boff(blob, bad_at), _ATOM_STARTS, stripped[0])
            if m.group("name"):
                self.items.append(("name", m.group("name"), _boff(blob, m.start("name"))))
            elif m.group("int"):
                self.items.append(("int", m.group("int"), _boff(blob, m.start("int"))))
            else:
                op = m.group("op")
                if op == "−":
                    op = "-"
                if op == "·":
                    op = "*"
                self.items.append(("op", op, _boff(blob, m.start("op"))))
            pos = m.end()
        self.items.append(("end", "", _boff(blob, len(blob))))
        self.i = 0

    def peek(self):
        return self.items[self.i]

    def next(self):
        tok = self.items[self.i]
        self.i += 1
        return tok


def _boff(text: str, char_index: int) -> int:
    return len(text[:char_index].encode())


_ATOMS = {
    "xp": SpacePoly.coordinate(0),
    "x3": SpacePoly.coordinate(1),
    "xm": SpacePoly.coordinate(2),
    "t": SpacePoly.monomial((0, 0, 0, 1), QS_ONE),
    "q": SpacePoly.constant(QScalar.q_power(1)),
    "I": SpacePoly.constant(QS_I),
}


def _as_scalar(p: SpacePoly):
    """The QScalar value of a constant polynomial, or None."""
    if p.is_zero():
        return None
    if set(p.terms) != {(0, 0, 0, 0)}:
        return None
    return p.terms[(0, 0, 0, 0)]


class _Parser:
    def __init__(self, text: str):
        self.toks = _Tokens(text)

    def parse(self) -> SpacePoly:
        val = self._expr()
        kind, v, off = self.toks.peek()
        if kind != "end":
            raise CliSyntaxError(off, {"'+'", "'-'", "'*'", "'^'", "end of input"}, v)
        return val

    def _expr(self) -> SpacePoly:
        val = self._term()
        while True:
            kind, v, _ = self.toks.peek()
            if kind == "op" and v in "+-":
                self.toks.next()
                rhs = self._term()
                val = val + rhs if v == "+" else val - rhs
            else:
                return val

    def _term(self) -> SpacePoly:
        val = self._unary()
        while True:
            kind, v, off = self.toks.peek()
            if kind == "op" and v in "*/":
                self.toks.next()
                rhs = self._unary()
                if v == "*":
                    val = val * rhs
                else:
                    c = _as_scalar(rhs)
                    if c is None or c.is_zero():
                        raise CliSyntaxError(
                            off, {"nonzero scalar constant divisor"}, "/")
                    val = val.scale(QS_ONE / c)
            elif kind in ("name", "int") or (kind == "op" and v == "("):
                # juxtaposition, e.g. "2q^3" or "(1 + I)q^2"
                val = val * self._unary()
            else:
                return val

    def _unary(self) -> SpacePoly:
        kind, v, _ = self.toks.peek()
        if kind == "op" and v in "+-":
            self.toks.next()
            val = self._unary()
            return val if v == "+" else -val
        return self._power()

    def _power(self) -> SpacePoly:
        base = self._atom()
        kind, v, _ = self.toks.peek()
        if not (kind == "op" and v == "^"):
            return base
        self.toks.next()
        sign = 1
        kind, v, off = self.toks.peek()
        if kind == "op" and v == "-":
            sign = -1
            self.toks.next()
            kind, v, off = self.toks.peek()
        if kind != "int":
            raise CliSyntaxError(off, {"integer exponent"}, v)
        self.toks.next()
        n = sign * int(v)
        if n >= 0:
            return base ** n
        c = _as_scalar(base)
        if c is None or c.is_zero():
            raise CliSyntaxError(
                off, {"non-negative integer (negative powers of "
                      "coordinates unsupported)"}, v)
        return SpacePoly.constant(c ** n)

    def _atom(self) -> SpacePoly:
        kind, v, off = self.toks.next()
        if kind == "name":
            return _ATOMS[v]
        if kind == "int":
            return SpacePoly.constant(QScalar.from_int(int(v)))
        if kind == "op" and v == "(":
            val = self._expr()
            kind, v, off = self.toks.next()
            if not (kind == "op" and v == ")"):
                raise CliSyntaxError(off, {"')'"}, v)
            return val
        raise CliSyntaxError(off, _ATOM_STARTS, v)


def parse(text: str) -> SpacePoly:
    """Parse an expression into its commutative representative."""
    return _Parser(text).parse()


def render(f: SpacePoly) -> str:
    return render_poly(f)


_INDEX = {"p": 0, "3": 1, "m": 2}


def _deriv(f: SpacePoly, index: str, hatted: bool, kind: str) -> SpacePoly:
    if index == "0":
        return classical_t_derivative(f)
    a = _INDEX[index]
    if kind == "left":
        fn = act_left_hatted if hatted else act_left
        return fn(a, f, upper=False)
    fn = act_right_bar if hatted else act_right
    return fn(f, a, upper=False)


def _suite_runners():
    # imported lazily so one-shot commands stay fast
    from .qstar import star_suite
    from .qcalculus import calculus_suite
    from .qgreens import greens_suite
    from .qphysics import (
        energy_suite, gauge_suite, momentum_suite, probability_suite,
    )
    from .qoperator import (
        angular_momentum_suite, heisenberg_equation_suite, lorentz_sector_suite,
    )

    def seeded(fn, accepts=("seed", "samples", "max_degree", "e_order")):
        def run(opts):
            kwargs = {k: v for k, v in opts.items() if v is not None and k in accepts}
            return fn(**kwargs)
        return run

    return {
        "star": seeded(star_suite, ("seed", "samples", "max_degree")),
        "calculus": seeded(calculus_suite, ("seed", "samples", "max_degree")),
        "greens": seeded(greens_suite),
        "probability": seeded(probability_suite, ("seed", "samples", "max_degree")),
        "momentum": seeded(momentum_suite, ("seed", "samples", "max_degree")),
        "energy": seeded(energy_suite, ("seed", "samples", "max_degree")),
        "gauge": seeded(gauge_suite),
        "heisenberg": seeded(heisenberg_equation_suite, ()),
        "angular": seeded(angular_momentum_suite, ("max_degree",)),
        "lorentz": seeded(lorentz_sector_suite, ()),
    }


SUITES = ("star", "calculus", "greens", "probability", "momentum", "energy",
          "gauge", "heisenberg", "angular", "lorentz")


def _build_argparser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="qeuclid",
        description="Exact calculus on the three-dimensional q-deformed "
                    "Euclidean space.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("star", help="star product of two expressions")
    p.add_argument("lhs")
    p.add_argument("rhs")

    p = sub.add_parser("deriv", help="apply a derivative action")
    p.add_argument("--index", choices=("p", "3", "m", "0"), required=True)
    p.add_argument("--hatted", choices=("yes", "no"), default="no")
    p.add_argument("--kind", choices=("left", "right"), default="left")
    p.add_argument("expr")

    p = sub.add_parser("conj", help="conjugate an expression")
    p.add_argument("expr")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITES + ("all",), required=True)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--e-order", type=int, default=None)
    p.add_argument("--seed", type=int,
                   default=int(os.environ.get("QEUCLID_SEED", "0")))
    p.add_argument("--format", choices=("text", "json"), default="text")
    return top


def emit_report(report, fmt: str) -> str:
    return report.to_json() if fmt == "json" else report.to_text()


def run_command(argv) -> int:
    try:
        args = _build_argparser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "star":
            print(render(star(parse(args.lhs), parse(args.rhs))))
            return 0
        if args.command == "deriv":
            print(render(_deriv(parse(args.expr), args.index,
                                args.hatted == "yes", args.kind)))
            return 0
        if args.command == "conj":
            print(render(conjugate(parse(args.expr))))
            return 0
    except CliSyntaxError as err:
        print(str(err), file=sys.stderr)
        return 2

    runners = _suite_runners()
    opts = {"seed": args.seed, "samples": args.samples,
            "max_degree": args.max_degree, "e_order": args.e_order}
    names = SUITES if args.suite == "all" else (args.suite,)
    reports = [runners[n](opts) for n in names]
    if args.format == "json":
        if len(reports) == 1:
            print(reports[0].to_json())
        else:
            print(json.dumps([r.to_dict() for r in reports], indent=2))
    else:
        for r in reports:
            print(r.to_text())
    return 0 if all(r.all_pass for r in reports) else 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
