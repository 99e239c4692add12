"""Exact scalar arithmetic over the fraction field of Laurent polynomials in q.

Coefficients are Gaussian rationals, so every scalar appearing in the
deformed calculus (q-numbers, q-factorials, lambda = q - q^-1, factors of i)
is represented exactly.  Equality of canonical forms is the only notion of
"zero residual" used anywhere in the package.
"""

from __future__ import annotations

from fractions import Fraction


class PoleAtValueError(ArithmeticError):
    """Raised when a scalar is evaluated at a numeric q that is a pole."""


class GaussianRational:
    """A complex number a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other):
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __eq__(self, other):
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return render_gaussian(self)


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)
GR_I = GaussianRational(0, 1)


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def render_gaussian(c: GaussianRational) -> str:
    if c.im == 0:
        return _frac_str(c.re)
    if c.re == 0:
        if c.im == 1:
            return "I"
        if c.im == -1:
            return "-I"
        return f"{_frac_str(c.im)}I"
    im = c.im
    sep = " + " if im > 0 else " − "
    mag = "I" if abs(im) == 1 else f"{_frac_str(abs(im))}I"
    return f"({_frac_str(c.re)}{sep}{mag})"


class LaurentPoly:
    """Sparse Laurent polynomial in q with GaussianRational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: dict exponent -> GaussianRational, zeros already removed
        object.__setattr__(self, "terms", terms if terms is not None else {})

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @staticmethod
    def from_dict(d):
        return LaurentPoly({e: c for e, c in d.items() if not c.is_zero()})

    @staticmethod
    def constant(c: GaussianRational):
        return LaurentPoly({} if c.is_zero() else {0: c})

    @staticmethod
    def q_power(k: int):
        return LaurentPoly({k: GR_ONE})

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {0: GR_ONE}

    def min_exp(self):
        return min(self.terms)

    def max_exp(self):
        return max(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, GR_ZERO) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return LaurentPoly(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, GR_ZERO) - c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return LaurentPoly(out)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = out.get(e, GR_ZERO) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return LaurentPoly(out)

    def shift(self, k: int):
        if k == 0:
            return self
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def scale(self, c: GaussianRational):
        if c.is_zero():
            return LaurentPoly({})
        return LaurentPoly({e: x * c for e, x in self.terms.items()})

    def conjugate(self):
        return LaurentPoly({e: c.conjugate() for e, c in self.terms.items()})

    def substitute_q_power(self, p: int):
        """Map q -> q^p (p nonzero integer)."""
        return LaurentPoly({e * p: c for e, c in self.terms.items()})

    def eval(self, value: GaussianRational) -> GaussianRational:
        if self.is_zero():
            return GR_ZERO
        acc = GR_ZERO
        for e, c in self.terms.items():
            if e >= 0:
                p = _gr_pow(value, e)
            else:
                if value.is_zero():
                    raise PoleAtValueError("negative q-power evaluated at 0")
                p = GR_ONE / _gr_pow(value, -e)
            acc = acc + c * p
        return acc

    def key(self):
        return tuple(sorted((e, c.re, c.im) for e, c in self.terms.items()))

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return render_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({self.terms!r})"


def _gr_pow(c: GaussianRational, n: int) -> GaussianRational:
    out = GR_ONE
    base = c
    while n:
        if n & 1:
            out = out * base
        base = base * base
        n >>= 1
    return out


def render_laurent(p: LaurentPoly) -> str:
    """Canonical text: terms by descending q-exponent, spaced binary minus."""
    if p.is_zero():
        return "0"
    parts = []
    for e in sorted(p.terms, reverse=True):
        c = p.terms[e]
        sign = ""
        # pull an overall sign out of purely real / purely imaginary coefficients
        if c.im == 0 and c.re < 0:
            sign, c = "-", -c
        elif c.re == 0 and c.im < 0:
            sign, c = "-", -c
        if e == 0:
            body = render_gaussian(c)
        else:
            qs = "q" if e == 1 else f"q^{e}"
            body = qs if c == GR_ONE else f"{render_gaussian(c)}{qs}"
        if not parts:
            parts.append(sign + body)
        elif sign:
            parts.append(f" − {body}")
        else:
            parts.append(f" + {body}")
    return "".join(parts)


# --- dense polynomial helpers (exponents >= 0) used for gcd reduction ---


def _to_dense(p: LaurentPoly):
    deg = p.max_exp()
    out = [GR_ZERO] * (deg + 1)
    for e, c in p.terms.items():
        out[e] = c
    return out


def _dense_trim(a):
    while a and a[-1].is_zero():
        a.pop()
    return a


def _dense_divmod(a, b):
    a = list(a)
    q = [GR_ZERO] * max(0, len(a) - len(b) + 1)
    inv = GR_ONE / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1] * inv
        if f.is_zero():
            continue
        q[i] = f
        for j, bc in enumerate(b):
            a[i + j] = a[i + j] - f * bc
    return q, _dense_trim(a)

def _dense_gcd(a, b):
    a, b = list(a), list(b)
    while b:
        _, r = _dense_divmod(a, b)
        a, b = b, r
    # make monic
    inv = GR_ONE / a[-1]
    return [c * inv for c in a]


class QScalar:
    """Element of the fraction field GR(q), kept in canonical form.

    Canonical form: numerator and denominator share no polynomial factor,
    the denominator is an ordinary polynomial with nonzero constant term,
    and its lowest-degree coefficient is 1 (so in particular has positive
    real part); any leftover q-power unit lives in the numerator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly = None, _canonical=False):
        if den is None:
            den = LaurentPoly({0: GR_ONE})
        if not _canonical:
            num, den = _canonicalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("QScalar is immutable")

    # -- constructors --

    @staticmethod
    def from_int(n: int):
        return QScalar(LaurentPoly.constant(GaussianRational(n)), _canonical=True)

    @staticmethod
    def from_fraction(f) -> "QScalar":
        return QScalar(LaurentPoly.constant(GaussianRational(Fraction(f))), _canonical=True)

    @staticmethod
    def from_gaussian(c: GaussianRational):
        return QScalar(LaurentPoly.constant(c), _canonical=True)

    @staticmethod
    def q_power(k: int):
        return QScalar(LaurentPoly.q_power(k), _canonical=True)

    # -- arithmetic --

    def __add__(self, other):
        if self.den is other.den or self.den == other.den:
            return QScalar(self.num + other.num, self.den)
        return QScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        if self.den is other.den or self.den == other.den:
            return QScalar(self.num - other.num, self.den)
        return QScalar(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self):
        return QScalar(-self.num, self.den, _canonical=True)

    def __mul__(self, other):
        return QScalar(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero QScalar")
        return QScalar(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int):
        if n < 0:
            return QS_ONE / self.__pow__(-n)
        out = QS_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        """Complex conjugation; q is treated as real."""
        return QScalar(self.num.conjugate(), self.den.conjugate())

    def substitute_q_power(self, p: int):
        return QScalar(self.num.substitute_q_power(p), self.den.substitute_q_power(p))

    def is_zero(self):
        return self.num.is_zero()

    def eval_at_q(self, value) -> GaussianRational:
        if not isinstance(value, GaussianRational):
            value = GaussianRational(Fraction(value))
        d = self.den.eval(value)
        if d.is_zero():
            raise PoleAtValueError(f"denominator vanishes at q = {value}")
        return self.num.eval(value) / d

    def key(self):
        return (self.num.key(), self.den.key())

    def __eq__(self, other):
        if not isinstance(other, QScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"QScalar({self.num.terms!r}, {self.den.terms!r})"

    def __str__(self):
        if self.den.is_one():
            return render_laurent(self.num)
        n = render_laurent(self.num)
        d = render_laurent(self.den)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1:
            d = f"({d})"
        return f"{n}/{d}"


def _canonicalize(num: LaurentPoly, den: LaurentPoly):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return LaurentPoly({}), LaurentPoly({0: GR_ONE})
    # shift the denominator to an ordinary polynomial with nonzero constant term
    dshift = den.min_exp()
    den = den.shift(-dshift)
    num = num.shift(-dshift)
    if len(den.terms) == 1:
        c = den.terms[0]
        return num.scale(GR_ONE / c), LaurentPoly({0: GR_ONE})
    # strip the numerator's q-power unit before taking the gcd
    nshift = num.min_exp()
    num = num.shift(-nshift)
    g = _dense_gcd(_to_dense(num), _to_dense(den))
    if len(g) > 1:
        nq, _ = _dense_divmod(_to_dense(num), g)
        dq, _ = _dense_divmod(_to_dense(den), g)
        num = LaurentPoly({e: c for e, c in enumerate(nq) if not c.is_zero()})
        den = LaurentPoly({e: c for e, c in enumerate(dq) if not c.is_zero()})
    # denominator normalization: lowest-degree coefficient becomes 1
    c = den.terms[den.min_exp()]
    if c != GR_ONE:
        inv = GR_ONE / c
        num = num.scale(inv)
        den = den.scale(inv)
    return num.shift(nshift), den


QS_ZERO = QScalar.from_int(0)
QS_ONE = QScalar.from_int(1)
QS_I = QScalar.from_gaussian(GR_I)
QS_MINUS_ONE = QScalar.from_int(-1)


_Q_NUMBER_CACHE: dict = {}


def q_number(a: int, base: int = 1) -> QScalar:
    """Symmetric-free q-number [[a]] = (1 - q^(a*base)) / (1 - q^base).

    For a >= 0 this is the geometric sum 1 + q^base + ... + q^(base*(a-1)).
    """
    if base == 0:
        raise ValueError("q-number base exponent must be nonzero")
    key = (a, base)
    got = _Q_NUMBER_CACHE.get(key)
    if got is not None:
        return got
    if a >= 0:
        out = QScalar(LaurentPoly({base * j: GR_ONE for j in range(a)}), _canonical=True)
    else:
        one = LaurentPoly({0: GR_ONE})
        out = QScalar(one - LaurentPoly.q_power(a * base), one - LaurentPoly.q_power(base))
    _Q_NUMBER_CACHE[key] = out
    return out


def q_factorial(n: int, base: int = 1) -> QScalar:
    """[[n]]! = [[1]] [[2]] ... [[n]] in base q^base."""
    if n < 0:
        raise ValueError("q-factorial of negative integer")
    out = QS_ONE
    for j in range(2, n + 1):
        out = out * q_number(j, base)
    return out


def lambda_scalar() -> QScalar:
    """lambda = q - q^-1."""
    return QScalar(LaurentPoly({1: GR_ONE, -1: -GR_ONE}), _canonical=True)
