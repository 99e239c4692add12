"""Star product and normal-ordering calculus on commutative representatives.

W maps t^n0 (x+)^np (x3)^n3 (x-)^nm to the normal-ordered word
X0^n0 (X+)^np (X3)^n3 (X-)^nm of the coordinate algebra

    X3 X+ = q^2 X+ X3,   X3 X- = q^-2 X- X3,
    X- X+ = X+ X- + (q - q^-1) X3 X3,        X0 central.

star() is the closed combinatorial formula for W^-1(W(f) W(g)); the word
rewriting in nc_normal_order()/normal_order_oracle() is an independent
implementation of the same product used as its oracle.
"""

from __future__ import annotations

from .qcoeff import QScalar, QS_ONE, QS_ZERO, q_number, q_factorial, lambda_scalar
from .qpoly import SpacePoly, XP, X3, XM, T


def star(f: SpacePoly, g: SpacePoly) -> SpacePoly:
    """Closed-formula star product.

    f * g = sum_k lambda^k (x3)^{2k} / [[k]]_{q^4}!
            q^{2(n3 n'+ + n- n'3)} D^k_{q^4,x-} f  D^k_{q^4,x'+} g |_{x'->x}
    """
    lam = lambda_scalar()
    out = {}
    for ea, ca in f.terms.items():
        ap, a3, am, a0 = ea
        for eb, cb in g.terms.items():
            bp, b3, bm, b0 = eb
            base = ca * cb
            fall_a = QS_ONE  # [[am]] [[am-1]] ... in base q^4
            fall_b = QS_ONE
            lam_k = QS_ONE
            for k in range(min(am, bp) + 1):
                if k > 0:
                    fall_a = fall_a * q_number(am - k + 1, 4)
                    fall_b = fall_b * q_number(bp - k + 1, 4)
                    lam_k = lam_k * lam
                w = QScalar.q_power(2 * (a3 * (bp - k) + (am - k) * b3))
                coef = base * lam_k * fall_a * fall_b * w / q_factorial(k, 4)
                e = (ap + bp - k, a3 + b3 + 2 * k, am + bm - k, a0 + b0)
                s = out.get(e, QS_ZERO) + coef
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
    return SpacePoly(out)


def star_many(*polys: SpacePoly) -> SpacePoly:
    out = None
    for p in polys:
        out = p if out is None else star(out, p)
    return out


# --- independent word-rewriting oracle ---

# generator symbols in words: XP, X3, XM, T (module-level ints from qpoly)

_STANDARD_ORDER = {XP: 0, X3: 1, XM: 2, T: 3}
_REVERSED_ORDER = {XM: 0, X3: 1, XP: 2, T: 3}


def _swap_standard(a, b):
    """Rewrite the out-of-order pair (a, b) -> list of (coef, pair)."""
    lam = lambda_scalar()
    if (a, b) == (X3, XP):
        return [(QScalar.q_power(2), (XP, X3))]
    if (a, b) == (XM, X3):
        return [(QScalar.q_power(2), (X3, XM))]
    if (a, b) == (XM, XP):
        return [(QS_ONE, (XP, XM)), (lam, (X3, X3))]
    # T is central
    return [(QS_ONE, (b, a))]


def _swap_reversed(a, b):
    lam = lambda_scalar()
    if (a, b) == (XP, X3):
        return [(QScalar.q_power(-2), (X3, XP))]
    if (a, b) == (X3, XM):
        return [(QScalar.q_power(-2), (XM, X3))]
    if (a, b) == (XP, XM):
        return [(QS_ONE, (XM, XP)), (-lam, (X3, X3))]
    return [(QS_ONE, (b, a))]


def _nc_reduce(terms, order, swap):
    """Normal order a dict {word tuple: coef} with respect to a generator order."""
    out = {}
    work = list(terms.items())
    while work:
        word, coef = work.pop()
        if coef.is_zero():
            continue
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if order[a] > order[b]:
                for w, rep in swap(a, b):
                    work.append((word[:i] + rep + word[i + 2 :], coef * w))
                break
        else:
            s = out.get(word, QS_ZERO) + coef
            if s.is_zero():
                out.pop(word, None)
            else:
                out[word] = s
    return out


def _word_of(exps, order_vars):
    w = []
    for v in order_vars:
        w.extend([v] * exps[v])
    return tuple(w)


def _read_off(words) -> SpacePoly:
    out = {}
    for word, coef in words.items():
        e = [0, 0, 0, 0]
        for v in word:
            e[v] += 1
        e = tuple(e)
        s = out.get(e, QS_ZERO) + coef
        if s.is_zero():
            out.pop(e, None)
        else:
            out[e] = s
    return SpacePoly(out)


def normal_order_oracle(f: SpacePoly, g: SpacePoly) -> SpacePoly:
    """W^-1(W(f) W(g)) via explicit word rewriting; oracle for star()."""
    words = {}
    for ea, ca in f.terms.items():
        wa = _word_of(ea, (XP, X3, XM, T))
        for eb, cb in g.terms.items():
            w = wa + _word_of(eb, (XP, X3, XM, T))
            c = words.get(w, QS_ZERO) + ca * cb
            if c.is_zero():
                words.pop(w, None)
            else:
                words[w] = c
    return _read_off(_nc_reduce(words, _STANDARD_ORDER, _swap_standard))


def reorder_to_tilde(f: SpacePoly) -> SpacePoly:
    """Representative with respect to the reversed ordering:
    returns f~ with W~(f~) = W(f), where W~ orders words as X0 X- X3 X+."""
    words = {_word_of(e, (XP, X3, XM, T)): c for e, c in f.terms.items()}
    return _read_off(_nc_reduce(words, _REVERSED_ORDER, _swap_reversed))


def reorder_from_tilde(f: SpacePoly) -> SpacePoly:
    """Inverse of reorder_to_tilde."""
    words = {_word_of(e, (XM, X3, XP, T)): c for e, c in f.terms.items()}
    return _read_off(_nc_reduce(words, _STANDARD_ORDER, _swap_standard))


def conjugate(f: SpacePoly) -> SpacePoly:
    """Quantum-space conjugation on representatives:
    exchanges the +/- exponents with a (-q)^(n- - n+) weight and conjugates
    coefficients; an anti-homomorphism with respect to the star product."""
    out = {}
    for e, c in f.terms.items():
        ap, a3, am, a0 = e
        k = ap - am
        w = QScalar.q_power(k) if k % 2 == 0 else -QScalar.q_power(k)
        e2 = (am, a3, ap, a0)
        s = out.get(e2, QS_ZERO) + c.conjugate() * w
        if s.is_zero():
            out.pop(e2, None)
        else:
            out[e2] = s
    return SpacePoly(out)


def star_suite(seed: int = 0, samples: int = 200, max_degree: int = 3):
    """Coordinate relations, the normal-ordering oracle, associativity, and
    the conjugation involution/anti-homomorphism."""
    from .qcoeff import QScalar, QS_ONE, lambda_scalar
    from .qreport import Rng, VerificationReport, random_poly
    from .qpoly import render_poly

    rng = Rng(seed)
    rep = VerificationReport(
        "star", seed, {"samples": samples, "max_degree": max_degree}
    )
    xp = SpacePoly.coordinate(0)
    x3 = SpacePoly.coordinate(1)
    xm = SpacePoly.coordinate(2)
    t = SpacePoly.monomial((0, 0, 0, 1), QS_ONE)
    q2 = QScalar.q_power(2)
    rep.add(
        "x3 * x+ = q^2 x+ x3",
        star(x3, xp) - (xp * x3).scale(q2),
    )
    rep.add(
        "x- * x3 = q^2 x3 x-",
        star(xm, x3) - (x3 * xm).scale(q2),
    )
    rep.add(
        "x- * x+ = x+ x- + lambda x3^2",
        star(xm, xp) - (xp * xm) - (x3 * x3).scale(lambda_scalar()),
    )
    for x, nm in ((xp, "x+"), (x3, "x3"), (xm, "x-")):
        rep.add(f"t central: t * {nm} = {nm} * t", star(t, x) - star(x, t))
    rep.add("conjugate(x+) = -q x-", conjugate(xp) + xm.scale(QScalar.q_power(1)))
    rep.add("conjugate(t) = t", conjugate(t) - t)
    for i in range(samples):
        f = random_poly(rng, max_degree)
        g = random_poly(rng, max_degree)
        rep.add(
            f"oracle {i}: f = {render_poly(f)}; g = {render_poly(g)}",
            star(f, g) - normal_order_oracle(f, g),
        )
        rep.add(
            f"conjugation {i}: involution and anti-homomorphism",
            (conjugate(conjugate(f)) - f)
            + (conjugate(star(f, g)) - star(conjugate(g), conjugate(f))),
        )
    for i in range(max(samples // 2, 100)):
        f = random_poly(rng, 2)
        g = random_poly(rng, 2)
        h = random_poly(rng, 2)
        rep.add(
            f"associativity {i}",
            star(star(f, g), h) - star(f, star(g, h)),
        )
    return rep
