"""Derivative actions on quantum-space representatives.

Two covariant differential calculi act on the space algebra:

* the unhatted calculus, Leibniz rule  d_B X^A = delta^A_B + q^4 R^{AC}_{BD} X^D d_C,
  with left action ">" given by Jackson-type operators on normal-ordered
  representatives and right action "<|bar" defined through conjugation;
* the hatted calculus, Leibniz rule  dh_B X^A = delta^A_B + q^-4 (R^-1)^{AC}_{BD} X^D dh_C,
  whose operator representation refers to the reversed ordering; its left
  action ">bar" and right action "<|" are the conjugates of the first pair.

extract_l_action() commutes a single derivative through a normal-ordered word
and splits off the braiding (L-matrix) part; it doubles as an independent
oracle for the closed-form actions and provides the right L-action through
the inverse antipode (an exact linear solve on each degree block).
"""

from __future__ import annotations

from .qcoeff import QScalar, QS_ONE, QS_ZERO, lambda_scalar
from .qpoly import (
    SpacePoly, XP, X3, XM, T, dilate, jackson_derivative,
    jackson_antiderivative, classical_t_derivative,
)
from .qstar import _nc_reduce, _read_off, _word_of, _STANDARD_ORDER, \
    _REVERSED_ORDER, _swap_standard, _swap_reversed, star, conjugate
from .qtensor import INDICES, metric_lower, metric_upper, rmatrix_data, pair

TIME = "t"

# action kinds
LEFT = "left_unhatted"            # d >  f
RIGHT_BAR = "right_unhatted_bar"  # f <|bar d
LEFT_BAR = "left_hatted_bar"      # dh >bar f
RIGHT = "right_hatted"            # f <| dh

_LAM = None


def _lam():
    global _LAM
    if _LAM is None:
        _LAM = lambda_scalar()
    return _LAM


class DerivLabel:
    """A derivative generator: spatial index 0/1/2 or TIME, variance, calculus."""

    __slots__ = ("index", "upper", "hatted")

    def __init__(self, index, upper=False, hatted=False):
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "hatted", hatted)

    def __setattr__(self, *a):
        raise AttributeError("DerivLabel is immutable")

    def __repr__(self):
        name = "d" + ("h" if self.hatted else "")
        pos = "^" if self.upper else "_"
        return f"{name}{pos}{self.index}"


# --- closed-form left actions (lower index) ---


def _left_lower(index, f: SpacePoly) -> SpacePoly:
    if index == TIME:
        return classical_t_derivative(f)
    if index == XP:
        return jackson_derivative(f, XP, 4)
    if index == X3:
        return jackson_derivative(dilate(f, XP, 2), X3, 2)
    if index == XM:
        first = jackson_derivative(dilate(f, X3, 2), XM, 4)
        second = SpacePoly.coordinate(XP) * jackson_derivative(
            jackson_derivative(f, X3, 2), X3, 2
        )
        return first + second.scale(_lam())
    raise ValueError(f"bad derivative index {index!r}")


def _left_lower_hatted(index, f: SpacePoly) -> SpacePoly:
    if index == TIME:
        return classical_t_derivative(f)
    if index == XM:
        return jackson_derivative(f, XM, -4)
    if index == X3:
        return jackson_derivative(dilate(f, XM, -2), X3, -2)
    if index == XP:
        first = jackson_derivative(dilate(f, X3, -2), XP, -4)
        second = SpacePoly.coordinate(XM) * jackson_derivative(
            jackson_derivative(f, X3, -2), X3, -2
        )
        return first - second.scale(_lam())
    raise ValueError(f"bad derivative index {index!r}")


def _raise_combo(index, action):
    """Apply an upper-index derivative via d^A = g^{AB} d_B."""
    gu = metric_upper()
    def run(f):
        acc = SpacePoly({})
        for b in INDICES:
            c = gu[index][b]
            if not c.is_zero():
                acc = acc + action(b, f).scale(c)
        return acc
    return run


def act(label: DerivLabel, kind: str, f: SpacePoly) -> SpacePoly:
    """Apply one of the four module actions of a derivative generator."""
    if kind == LEFT:
        if label.hatted:
            raise ValueError("unhatted action on a hatted label")
        base = _left_lower
    elif kind == LEFT_BAR:
        if not label.hatted and label.index != TIME:
            raise ValueError("hatted action on an unhatted label")
        base = _left_lower_hatted
    elif kind == RIGHT_BAR:
        # f <|bar d_i = -conj(d^i > conj(f))
        flipped = DerivLabel(label.index, not label.upper, label.hatted)
        return -conjugate(act(flipped, LEFT, conjugate(f)))
    elif kind == RIGHT:
        # f <| dh_i = -conj(dh^i >bar conj(f))
        flipped = DerivLabel(label.index, not label.upper, label.hatted)
        return -conjugate(act(flipped, LEFT_BAR, conjugate(f)))
    else:
        raise ValueError(f"unknown action kind {kind!r}")
    if label.index == TIME or not label.upper:
        return base(label.index, f)
    return _raise_combo(label.index, base)(f)


def act_left(index, f, upper=False):
    return act(DerivLabel(index, upper=upper), LEFT, f)


def act_left_hatted(index, f, upper=False):
    return act(DerivLabel(index, upper=upper, hatted=True), LEFT_BAR, f)


def act_right_bar(f, index, upper=False):
    return act(DerivLabel(index, upper=upper), RIGHT_BAR, f)


def act_right(f, index, upper=False):
    return act(DerivLabel(index, upper=upper, hatted=True), RIGHT, f)


# --- Leibniz-rule word engine ---

_extract_cache = {}


def _commute_through(exps, b_index, hatted: bool):
    """Push one lower-index derivative from the left through the ordered word
    of the monomial `exps`; returns (derivative-free SpacePoly,
    {lower index C: SpacePoly coefficient of d_C})."""
    key = (tuple(exps), b_index, hatted)
    got = _extract_cache.get(key)
    if got is not None:
        return got
    data = rmatrix_data()
    rmat = data.rhat_inv if hatted else data.rhat
    weight = QScalar.q_power(-4 if hatted else 4)
    order_vars = (XM, X3, XP, T) if hatted else (XP, X3, XM, T)
    word = _word_of(exps, order_vars)

    free_words = {}
    dwords = {c: {} for c in INDICES}
    dwords[TIME] = {}
    # work items: (coefficient, consumed-prefix tuple, derivative index, rest)
    work = [(QS_ONE, (), b_index, word)]
    while work:
        coef, left, d, rest = work.pop()
        if not rest:
            bucket = dwords[d]
            bucket[left] = bucket.get(left, QS_ZERO) + coef
            continue
        v, tail = rest[0], rest[1:]
        if d == TIME:
            if v == T:
                # d_0 X^0 = 1 + X^0 d_0
                nw = left + tail
                free_words[nw] = free_words.get(nw, QS_ZERO) + coef
            work.append((coef, left + (v,), d, tail))
            continue
        if v == T:
            work.append((coef, left + (v,), d, tail))
            continue
        # spatial derivative meets spatial coordinate
        if v == d:
            nw = left + tail
            free_words[nw] = free_words.get(nw, QS_ZERO) + coef
        for c in INDICES:
            for dd in INDICES:
                w = rmat[pair(v, c)][pair(d, dd)]
                if w.is_zero():
                    continue
                work.append((coef * weight * w, left + (dd,), c, tail))

    order = _REVERSED_ORDER if hatted else _STANDARD_ORDER
    swap = _swap_reversed if hatted else _swap_standard
    free = _read_off(_nc_reduce(free_words, order, swap))
    dparts = {}
    for c, words in dwords.items():
        if words:
            p = _read_off(_nc_reduce(words, order, swap))
            if not p.is_zero():
                dparts[c] = p
    out = (free, dparts)
    _extract_cache[key] = out
    return out


def leibniz_action(label: DerivLabel, f: SpacePoly) -> SpacePoly:
    """Derivative-free part of commuting the derivative through the word:
    an independent route to the left action, used as its oracle."""
    gu = metric_upper()
    acc = SpacePoly({})
    indices = [(label.index, QS_ONE)]
    if label.upper and label.index != TIME:
        indices = [(b, gu[label.index][b]) for b in INDICES if not gu[label.index][b].is_zero()]
    for e, c in f.terms.items():
        for b, w in indices:
            free, _ = _commute_through(e, b, label.hatted)
            acc = acc + free.scale(c * w)
    return acc


def extract_l_action(a_upper: int, u: SpacePoly, hatted=False):
    """Split d^A W(u) = W(d^A > u) + sum_B W((L)^A_B > u) d^B.

    Returns (SpacePoly d^A > u, dict {B: (L)^A_B > u}) with B a lower pair
    slot for the upper-index d^B, i.e. the braiding coefficients of the
    Leibniz rule in the conventions of the left L-matrix.
    """
    gu = metric_upper()
    gl = metric_lower()
    free_acc = SpacePoly({})
    l_acc = {b: SpacePoly({}) for b in INDICES}
    for e, coef in u.terms.items():
        for eidx in INDICES:
            ge = gu[a_upper][eidx]
            if ge.is_zero():
                continue
            free, dparts = _commute_through(e, eidx, hatted)
            free_acc = free_acc + free.scale(coef * ge)
            for c, p in dparts.items():
                if c == TIME:
                    continue
                # d_C = g_CB d^B
                for b in INDICES:
                    gc = gl[c][b]
                    if not gc.is_zero():
                        l_acc[b] = l_acc[b] + p.scale(coef * ge * gc)
    return free_acc, l_acc


def l_action(a_upper: int, b_upper: int, u: SpacePoly, hatted=False) -> SpacePoly:
    """(L)^A_B > u (left braiding action)."""
    return extract_l_action(a_upper, u, hatted)[1][b_upper]


# --- right L-action via the inverse antipode ---


def _spatial_basis(d: int):
    out = []
    for np_ in range(d, -1, -1):
        for n3 in range(d - np_, -1, -1):
            out.append((np_, n3, d - np_ - n3, 0))
    return out


_right_l_cache = {}


def _right_l_solver(d: int, hatted: bool):
    """LU-style inverse of the block matrix S[(B,i),(C,j)] = coefficient of
    basis monomial i in (L)^C_B > basis monomial j, for spatial degree d."""
    key = (d, hatted)
    got = _right_l_cache.get(key)
    if got is not None:
        return got
    basis = _spatial_basis(d)
    n = len(basis)
    idx = {e: i for i, e in enumerate(basis)}
    size = 3 * n
    s = [[QS_ZERO for _ in range(size)] for _ in range(size)]
    for j, e in enumerate(basis):
        u = SpacePoly.monomial(e)
        for c in INDICES:
            _, lparts = extract_l_action(c, u, hatted)
            for b in INDICES:
                p = lparts[b]
                for e2, coef in p.terms.items():
                    s[n * b + idx[e2]][n * c + j] = coef
    inv = _mat_inverse(s)
    out = (basis, idx, inv)
    _right_l_cache[key] = out
    return out


def _mat_inverse(m):
    n = len(m)
    a = [row[:] + [QS_ONE if i == j else QS_ZERO for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise ArithmeticError("singular L-action block; cannot invert antipode")
        a[col], a[piv] = a[piv], a[col]
        inv = QS_ONE / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if f.is_zero():
                continue
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def right_l_all(psi: SpacePoly, hatted=False):
    """psi <| (L)^A_C for all A, C: the inverse-antipode action, obtained by
    solving sum_C (L)^C_B > chi^A_C = delta^A_B psi on each degree block."""
    out = [[SpacePoly({}) for _ in INDICES] for _ in INDICES]
    pieces = {}
    for e, c in psi.terms.items():
        key = (e[0] + e[1] + e[2], e[3])
        pieces.setdefault(key, {})[e] = c
    for (d, n0), terms in pieces.items():
        basis, idx, inv = _right_l_solver(d, hatted)
        n = len(basis)
        vec = [QS_ZERO] * n
        for e, c in terms.items():
            vec[idx[(e[0], e[1], e[2], 0)]] = c
        for a in INDICES:
            # rhs[(B,i)] = delta^A_B psi_i ; chi = inv @ rhs
            for cidx in INDICES:
                res = {}
                for j in range(n):
                    acc = QS_ZERO
                    row = n * cidx + j
                    for i in range(n):
                        x = inv[row][n * a + i]
                        if not x.is_zero() and not vec[i].is_zero():
                            acc = acc + x * vec[i]
                    if not acc.is_zero():
                        e = basis[j]
                        res[(e[0], e[1], e[2], n0)] = acc
                if res:
                    out[a][cidx] = out[a][cidx] + SpacePoly(res)
    return out


def right_l_action(psi: SpacePoly, a_upper: int, c_upper: int, hatted=False) -> SpacePoly:
    return right_l_all(psi, hatted)[a_upper][c_upper]


# --- Leibniz (plain triangle-left) right actions ---
#
# Moving a derivative leftward through a word with the inverted Leibniz rule
# yields a second right action; it is the one appearing in the partial
# integration moves and in all current densities.  The conjugation-defined
# action of RIGHT_BAR / RIGHT coincides with the leftward move through the
# *other* presentation of the same calculus, so the two do not agree.

_right_rule_cache = {}
_right_move_cache = {}


def _right_rule(hatted: bool):
    """Inverse rewrite X^D d_C -> sum Minv (d_B X^A - delta_coef delta^A_B)."""
    got = _right_rule_cache.get(hatted)
    if got is not None:
        return got
    data = rmatrix_data()
    rmat = data.rhat_inv if hatted else data.rhat
    w = QScalar.q_power(-4 if hatted else 4)
    m = [[QS_ZERO for _ in range(9)] for _ in range(9)]
    for a in INDICES:
        for b in INDICES:
            for c in INDICES:
                for d in INDICES:
                    m[pair(b, a)][pair(d, c)] = w * rmat[pair(a, c)][pair(b, d)]
    inv = _mat_inverse(m)
    _right_rule_cache[hatted] = inv
    return inv


def _commute_right(exps, b_index, hatted: bool) -> SpacePoly:
    """Derivative-free part of W(monomial) d_B with d moved to the left."""
    key = (tuple(exps), b_index, hatted)
    got = _right_move_cache.get(key)
    if got is not None:
        return got
    inv = _right_rule(hatted)
    order_vars = (XM, X3, XP, T) if hatted else (XP, X3, XM, T)
    word = _word_of(exps, order_vars)
    pure = {}
    work = [(QS_ONE, word, len(word), b_index)]
    while work:
        coef, w, pos, d = work.pop()
        if pos == 0:
            continue  # derivative reached the far left: right counit is zero
        v = w[pos - 1]
        if v == T:
            if d == TIME:
                pw = w[:pos - 1] + w[pos:]
                pure[pw] = pure.get(pw, QS_ZERO) - coef
            work.append((coef, w, pos - 1, d))
            continue
        if d == TIME:
            work.append((coef, w, pos - 1, d))
            continue
        for bb in INDICES:
            for aa in INDICES:
                x = inv[pair(v, d)][pair(bb, aa)]
                if x.is_zero():
                    continue
                work.append((coef * x, w[:pos - 1] + (aa,) + w[pos:], pos - 1, bb))
                if aa == bb:
                    pw = w[:pos - 1] + w[pos:]
                    pure[pw] = pure.get(pw, QS_ZERO) - coef * x
    order = _REVERSED_ORDER if hatted else _STANDARD_ORDER
    swap = _swap_reversed if hatted else _swap_standard
    out = _read_off(_nc_reduce(pure, order, swap))
    _right_move_cache[key] = out
    return out


def right_leibniz(f: SpacePoly, index, upper=False, hatted=False) -> SpacePoly:
    """f <| d_index (plain right action; f <|bar dh_index for hatted=True)."""
    if index == TIME or not upper:
        indices = [(index, QS_ONE)]
    else:
        gu = metric_upper()
        indices = [(b, gu[index][b]) for b in INDICES if not gu[index][b].is_zero()]
    acc = SpacePoly({})
    for e, c in f.terms.items():
        for b, w in indices:
            acc = acc + _commute_right(e, b, hatted).scale(c * w)
    return acc


def antipode_cross_check(f: SpacePoly, a_upper: int) -> SpacePoly:
    """Residual of d^A > f + sum_B ((L)^A_B > f) <| d^B (must vanish)."""
    res = act_left(a_upper, f, upper=True)
    for b in INDICES:
        lb = l_action(a_upper, b, f)
        res = res + right_leibniz(lb, b, upper=True)
    return res


# --- inverse derivatives and the scaling operator ---


def inverse_derivative(index, f: SpacePoly) -> SpacePoly:
    """(d_index)^-1 > f; a left inverse of the closed-form left action."""
    if index == XP:
        return jackson_antiderivative(f, XP, 4)
    if index == X3:
        return jackson_antiderivative(dilate(f, XP, -2), X3, 2)
    if index == XM:
        xp = SpacePoly.coordinate(XP)
        acc = SpacePoly({})
        kmax = f.max_exponent(X3) // 2
        for k in range(kmax + 1):
            term = jackson_antiderivative(dilate(f, X3, -2 * (k + 1)), XM, 4)
            for _ in range(k):
                term = (xp * jackson_antiderivative(
                    jackson_derivative(jackson_derivative(term, X3, 2), X3, 2), XM, 4
                )).scale(-_lam())
            acc = acc + term.scale(QScalar.q_power(2 * k * (k + 1)))
        return acc
    raise ValueError(f"bad derivative index {index!r}")


def scaling_lambda(f: SpacePoly, half_power: int = 2) -> SpacePoly:
    """Apply Lambda^(half_power/2): coefficients gain q^(2*half_power*degree).

    half_power=2 is the full scaling operator (Lambda > x^A = q^4 x^A);
    half_power=1 is its square root as used by the angular momentum sector.
    """
    return SpacePoly({
        e: c * QScalar.q_power(2 * half_power * (e[0] + e[1] + e[2]))
        for e, c in f.terms.items()
    })


def calculus_suite(seed: int = 0, samples: int = 100, max_degree: int = 3):
    """Closed-form Jackson actions against the Leibniz-rule commutation,
    the derivative-copy algebra relations, conjugation covariance, and the
    antipode cross-checks."""
    from .qreport import Rng, VerificationReport, random_poly
    from .qstar import conjugate

    rng = Rng(seed)
    rep = VerificationReport(
        "calculus", seed, {"samples": samples, "max_degree": max_degree}
    )
    monos = []
    for n in range(6):
        for i in range(n + 1):
            for j in range(n - i + 1):
                monos.append((i, j, n - i - j, 0))
    for a in INDICES:
        acc = SpacePoly({})
        for m in monos:
            f = SpacePoly.monomial(m, QS_ONE)
            acc = acc + (
                act_left(a, f, upper=False)
                - leibniz_action(DerivLabel(a, upper=False), f)
            )
        rep.add(
            f"closed-form action = Leibniz commutation, d_{a}, monomials deg <= 5",
            acc,
        )
    # the derivative copies close on quadratic relations of their own:
    # lower-index actions mirror the coordinate relations with q^-2, the
    # upper-index ones reproduce them with q^2
    lam = _lam()
    basisf = [SpacePoly.monomial(m, QS_ONE) for m in monos if sum(m[:3]) <= 4]

    def dd(a, b, f, upper):
        return act_left(a, act_left(b, f, upper=upper), upper=upper)

    for upper, p2, tag in ((False, -2, "lower"), (True, 2, "upper")):
        qp = QScalar.q_power(p2)
        acc1 = SpacePoly({})
        acc2 = SpacePoly({})
        acc3 = SpacePoly({})
        for f in basisf:
            acc1 = acc1 + dd(1, 0, f, upper) - dd(0, 1, f, upper).scale(qp)
            acc2 = acc2 + dd(2, 1, f, upper) - dd(1, 2, f, upper).scale(qp)
            if upper:
                acc3 = acc3 + dd(2, 0, f, upper) - dd(0, 2, f, upper) \
                    - dd(1, 1, f, upper).scale(lam)
            else:
                acc3 = acc3 + dd(0, 2, f, upper) - dd(2, 0, f, upper) \
                    - dd(1, 1, f, upper).scale(lam)
        rep.add(f"d3 d+ = q^{p2} d+ d3 ({tag} index), monomials deg <= 4", acc1)
        rep.add(f"d- d3 = q^{p2} d3 d- ({tag} index), monomials deg <= 4", acc2)
        rep.add(
            f"d+/d- exchange with lambda d3^2 ({tag} index), monomials deg <= 4",
            acc3,
        )
    for i in range(samples):
        f = random_poly(rng, max_degree)
        acc = SpacePoly({})
        for a in INDICES:
            acc = acc + antipode_cross_check(f, a)
            for upper in (False, True):
                acc = acc + (
                    conjugate(act_left(a, f, upper=upper))
                    + act_right_bar(conjugate(f), a, upper=not upper)
                )
        rep.add(f"antipode + conjugation covariance, case {i}", acc)
    return rep
