"""Sparse commutative polynomials in (x+, x3, x-, t) with QScalar coefficients.

These are the normal-ordered representatives of quantum-space elements:
the exponent tuple (np, n3, nm, n0) stands for (x+)^np (x3)^n3 (x-)^nm t^n0.
Momentum-space functions use the same container with p-coordinates.
"""

from __future__ import annotations

from .qcoeff import QScalar, QS_ONE, QS_ZERO, q_number


# coordinate indices; the spatial order (+, 3, -) is used everywhere
XP, X3, XM, T = 0, 1, 2, 3
COORD_NAMES = ("xp", "x3", "xm", "t")
SPATIAL = (XP, X3, XM)


class SpacePoly:
    """Polynomial as dict {(np, n3, nm, n0): QScalar}, zero coefficients removed."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        object.__setattr__(self, "terms", terms if terms is not None else {})

    def __setattr__(self, name, value):
        raise AttributeError("SpacePoly is immutable")

    @staticmethod
    def from_dict(d):
        return SpacePoly({e: c for e, c in d.items() if not c.is_zero()})

    @staticmethod
    def monomial(exps, coef=QS_ONE):
        if coef.is_zero():
            return SpacePoly({})
        return SpacePoly({tuple(exps): coef})

    @staticmethod
    def constant(coef: QScalar):
        return SpacePoly.monomial((0, 0, 0, 0), coef)

    @staticmethod
    def coordinate(var: int):
        e = [0, 0, 0, 0]
        e[var] = 1
        return SpacePoly.monomial(e)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, QS_ZERO) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return SpacePoly(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, QS_ZERO) - c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return SpacePoly(out)

    def __neg__(self):
        return SpacePoly({e: -c for e, c in self.terms.items()})

    def scale(self, c: QScalar):
        if c.is_zero():
            return SpacePoly({})
        return SpacePoly({e: x * c for e, x in self.terms.items()})

    def __mul__(self, other):
        """Commutative (pointwise representative) product."""
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                s = out.get(e, QS_ZERO) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return SpacePoly(out)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = SpacePoly.constant(QS_ONE)
        for _ in range(n):
            out = out * self
        return out

    def map_coefficients(self, fn):
        return SpacePoly.from_dict({e: fn(c) for e, c in self.terms.items()})

    def spatial_degree(self):
        return max((e[0] + e[1] + e[2] for e in self.terms), default=0)

    def max_exponent(self, var: int):
        return max((e[var] for e in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, SpacePoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((e, c.key()) for e, c in self.terms.items())))

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"SpacePoly({{{', '.join(f'{e}: {c}' for e, c in self.terms.items())}}})"


# the momentum-space container is structurally identical
MomentumPoly = SpacePoly


class Graded:
    """SpacePoly-valued polynomial in commuting formal parameters.

    Grades are exponent triples (e, mu, s) for the charge e, the inverse-mass
    weight mu = 1/(2m) and a spare direction s used for first-order
    directional derivatives.  The formal parameters commute with everything
    and are inert under conjugation and all derivative actions.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        object.__setattr__(self, "terms", terms if terms is not None else {})

    def __setattr__(self, name, value):
        raise AttributeError("Graded is immutable")

    @staticmethod
    def wrap(p: SpacePoly, e=0, mu=0, s=0):
        if p.is_zero():
            return Graded({})
        return Graded({(e, mu, s): p})

    def __add__(self, other):
        out = dict(self.terms)
        for g, p in other.terms.items():
            s = out.get(g)
            s = p if s is None else s + p
            if s.is_zero():
                out.pop(g, None)
            else:
                out[g] = s
        return Graded(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Graded({g: -p for g, p in self.terms.items()})

    def scale(self, c: "QScalar"):
        if c.is_zero():
            return Graded({})
        return Graded({g: p.scale(c) for g, p in self.terms.items()})

    def shift(self, e=0, mu=0, s=0):
        return Graded({(g[0] + e, g[1] + mu, g[2] + s): p for g, p in self.terms.items()})

    def map(self, fn):
        """Apply a linear SpacePoly -> SpacePoly map componentwise."""
        out = {}
        for g, p in self.terms.items():
            r = fn(p)
            if not r.is_zero():
                prev = out.get(g)
                out[g] = r if prev is None else prev + r
        return Graded(out)

    def bilinear(self, other, fn):
        """Lift a bilinear SpacePoly map (e.g. the star product) to grades."""
        out = {}
        for g1, p1 in self.terms.items():
            for g2, p2 in other.terms.items():
                r = fn(p1, p2)
                if r.is_zero():
                    continue
                g = (g1[0] + g2[0], g1[1] + g2[1], g1[2] + g2[2])
                prev = out.get(g)
                s = r if prev is None else prev + r
                if s.is_zero():
                    out.pop(g, None)
                else:
                    out[g] = s
        return Graded(out)

    def truncate_e(self, e_max: int):
        return Graded({g: p for g, p in self.terms.items() if g[0] <= e_max})

    def component(self, e=0, mu=0, s=0) -> SpacePoly:
        return self.terms.get((e, mu, s), ZERO_POLY)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Graded):
            return NotImplemented
        return self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for g in sorted(self.terms):
            pre = "".join(
                f"{n}^{k}·" for n, k in zip(("e", "mu", "s"), g) if k
            )
            bits.append(f"{pre}({render_poly(self.terms[g])})")
        return " + ".join(bits)

ZERO_POLY = SpacePoly({})
ONE_POLY = SpacePoly.constant(QS_ONE)


def dilate(f: SpacePoly, var: int, power: int) -> SpacePoly:
    """Substitute var -> q^power * var (exact coefficient reweighting)."""
    if power == 0:
        return f
    return SpacePoly(
        {e: c * QScalar.q_power(power * e[var]) for e, c in f.terms.items()}
    )


def grading_degree(exps, var: int) -> int:
    """Exponent count seen by the grading operator n_var."""
    return exps[var]


def jackson_derivative(f: SpacePoly, var: int, base: int) -> SpacePoly:
    """D_{q^base, var}: monomial rule v^n -> [[n]]_{q^base} v^(n-1)."""
    out = {}
    for e, c in f.terms.items():
        n = e[var]
        if n == 0:
            continue
        e2 = list(e)
        e2[var] = n - 1
        e2 = tuple(e2)
        s = out.get(e2, QS_ZERO) + c * q_number(n, base)
        if s.is_zero():
            out.pop(e2, None)
        else:
            out[e2] = s
    return SpacePoly(out)


def jackson_antiderivative(f: SpacePoly, var: int, base: int) -> SpacePoly:
    """D^{-1}_{q^base, var}: v^n -> v^(n+1) / [[n+1]]_{q^base}."""
    out = {}
    for e, c in f.terms.items():
        n = e[var]
        e2 = list(e)
        e2[var] = n + 1
        e2 = tuple(e2)
        s = out.get(e2, QS_ZERO) + c / q_number(n + 1, base)
        if s.is_zero():
            out.pop(e2, None)
        else:
            out[e2] = s
    return SpacePoly(out)


def classical_t_derivative(f: SpacePoly) -> SpacePoly:
    """Ordinary d/dt; the time direction is undeformed."""
    out = {}
    for e, c in f.terms.items():
        n = e[T]
        if n == 0:
            continue
        e2 = (e[0], e[1], e[2], n - 1)
        s = out.get(e2, QS_ZERO) + c * QScalar.from_int(n)
        if s.is_zero():
            out.pop(e2, None)
        else:
            out[e2] = s
    return SpacePoly(out)


def eval_coordinate(f: SpacePoly, var: int, value: QScalar) -> SpacePoly:
    """Substitute var = value (a scalar); result lives in the remaining variables."""
    out = {}
    for e, c in f.terms.items():
        e2 = list(e)
        e2[var] = 0
        e2 = tuple(e2)
        s = out.get(e2, QS_ZERO) + c * value ** e[var]
        if s.is_zero():
            out.pop(e2, None)
        else:
            out[e2] = s
    return SpacePoly(out)


def finite_window_jackson_integral(
    f: SpacePoly, var: int, base: int, upper: QScalar, steps: int
) -> SpacePoly:
    """Partial Jackson sum (q^b - 1) u * sum_{j=1..steps} q^{-b j} f|_{var = q^{-b j} u}.

    Applied to a Jackson derivative D_{q^base,var} F it telescopes to
    F|_{var=u} - F|_{var=q^{-base*steps} u}.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    qb = QScalar.q_power(base)
    acc = SpacePoly({})
    for j in range(1, steps + 1):
        w = QScalar.q_power(-base * j)
        acc = acc + eval_coordinate(f, var, w * upper).scale(w)
    return acc.scale((qb - QS_ONE) * upper)


# --- canonical rendering ---


def _coef_strings(c: QScalar):
    s = str(c)
    if s.startswith("-") and not s.startswith("-I") and "−" not in s and " + " not in s:
        return "-", s[1:]
    if s.startswith("-I"):
        return "-", s[1:]
    return "+", s


def _render_monomial(e) -> str:
    parts = []
    for var in (XP, X3, XM, T):
        n = e[var]
        if n == 0:
            continue
        parts.append(COORD_NAMES[var] if n == 1 else f"{COORD_NAMES[var]}^{n}")
    return "·".join(parts)


def render_poly(f: SpacePoly) -> str:
    """Canonical text: lexicographically descending exponents, '·' products."""
    if f.is_zero():
        return "0"
    parts = []
    for e in sorted(f.terms, reverse=True):
        c = f.terms[e]
        sign, cs = _coef_strings(c)
        mono = _render_monomial(e)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            if " " in cs or "/" in cs:
                cs = f"({cs})"
            body = f"{cs}·{mono}"
        if not parts:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append((" + " if sign == "+" else " − ") + body)
    return "".join(parts)
