"""Independent classical (undeformed) implementation used as the q = 1 oracle.

Everything here is coded directly from the classical Schroedinger theory on
flat 3-space in the +/3/- coordinate basis, using plain commutative
polynomial arithmetic over Gaussian rationals built on ``fractions.Fraction``.
It never calls into the package's q-deformed arithmetic; the package results
are mapped into this representation by evaluating every coefficient at q = 1.
"""

from __future__ import annotations

from fractions import Fraction

# a polynomial is a dict {(n_plus, n_3, n_minus, n_t): (re, im)} with
# Fraction entries and no explicit zeros

ZERO = {}


def _cadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cneg(a):
    return (-a[0], -a[1])


def _cconj(a):
    return (a[0], -a[1])


C_ONE = (Fraction(1), Fraction(0))
C_I = (Fraction(0), Fraction(1))
C_MINUS_I = (Fraction(0), Fraction(-1))
C_HALF = (Fraction(1, 2), Fraction(0))


def padd(f, g):
    out = dict(f)
    for e, c in g.items():
        s = _cadd(out.get(e, (Fraction(0), Fraction(0))), c)
        if s == (0, 0):
            out.pop(e, None)
        else:
            out[e] = s
    return out


def pneg(f):
    return {e: _cneg(c) for e, c in f.items()}


def psub(f, g):
    return padd(f, pneg(g))


def pscale(f, c):
    if c == (0, 0):
        return {}
    return {e: _cmul(x, c) for e, x in f.items()}


def pmul(f, g):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            s = _cadd(out.get(e, (Fraction(0), Fraction(0))), _cmul(c1, c2))
            if s == (0, 0):
                out.pop(e, None)
            else:
                out[e] = s
    return out


def pconj(f):
    """Classical conjugation: x+ -> -x-, x- -> -x+, x3 and t fixed, i -> -i."""
    out = {}
    for (a, b, c, d), coef in f.items():
        sgn = -1 if (a + c) % 2 else 1
        cc = _cconj(coef)
        if sgn < 0:
            cc = _cneg(cc)
        out[(c, b, a, d)] = cc
    return out


def deriv(f, var):
    """Plain partial derivative with respect to coordinate var (0,1,2) or t (3)."""
    out = {}
    for e, c in f.items():
        n = e[var]
        if n == 0:
            continue
        e2 = list(e)
        e2[var] = n - 1
        out[tuple(e2)] = _cmul(c, (Fraction(n), Fraction(0)))
    return out


# classical metric in the +/3/- basis: g_{+-} = g_{-+} = -1, g_33 = 1;
# the inverse has the same entries
G_LOWER = ((Fraction(0), Fraction(0), Fraction(-1)),
           (Fraction(0), Fraction(1), Fraction(0)),
           (Fraction(-1), Fraction(0), Fraction(0)))


def d_lower(f, a):
    return deriv(f, a)


def d_upper(f, a):
    out = {}
    for b in range(3):
        w = G_LOWER[a][b]
        if w:
            out = padd(out, pscale(deriv(f, b), (w, Fraction(0))))
    return out


def laplacian(f):
    acc = {}
    for a in range(3):
        for b in range(3):
            w = G_LOWER[a][b]
            if w:
                acc = padd(acc, pscale(d_upper(d_upper(f, b), a), (w, Fraction(0))))
    return acc


def d_t(f):
    return deriv(f, 3)


# --- classical densities (free / scalar potential; A = 0) ------------------
# psi plays the role of the conjugated wave function psi_L*, phi of psi_R.
# The inverse-mass weight 1/(2m) is carried by the caller as the grading;
# the polynomials below are its coefficients.

def rho(psi, phi):
    return pmul(psi, phi)


def current(psi, phi):
    """j_A = -i (psi d_A phi - (d_A psi) phi); one entry per lower index."""
    out = []
    for a in range(3):
        t = psub(pmul(psi, d_lower(phi, a)), pmul(d_lower(psi, a), phi))
        out.append(pscale(t, C_MINUS_I))
    return out


def momentum_density(psi, phi):
    """i^C = 1/(2i) (psi d^C phi - (d^C psi) phi)."""
    out = []
    half_over_i = (Fraction(0), Fraction(-1, 2))  # 1/(2i) = -i/2
    for c in range(3):
        t = psub(pmul(psi, d_upper(phi, c)), pmul(d_upper(psi, c), phi))
        out.append(pscale(t, half_over_i))
    return out


def stress_tensor(psi, phi):
    """T_BA = -1/2 [ -d_B psi d_A phi + psi d_B d_A phi
                     + d_B d_A psi phi - d_A psi d_B phi ]."""
    rows = []
    minus_half = (Fraction(-1, 2), Fraction(0))
    for b in range(3):
        row = []
        for a in range(3):
            t = pneg(pmul(d_lower(psi, b), d_lower(phi, a)))
            t = padd(t, pmul(psi, d_lower(d_lower(phi, a), b)))
            t = padd(t, pmul(d_lower(d_lower(psi, a), b), phi))
            t = psub(t, pmul(d_lower(psi, a), d_lower(phi, b)))
            row.append(pscale(t, minus_half))
        rows.append(row)
    return rows


def energy_density(psi, phi, v=ZERO):
    """kinetic part d^A psi d_A phi (weight 1/(2m)) and potential psi V phi."""
    kin = {}
    for a in range(3):
        kin = padd(kin, pmul(d_upper(psi, a), d_lower(phi, a)))
    pot = pmul(pmul(psi, v), phi)
    return kin, pot


def energy_current(psi, phi, v=ZERO):
    """S_C: the 1/(2m) part i(d_C psi V phi - psi V d_C phi) and the
    1/(2m)^2 part i sum_A (d_C d^A psi d_A phi - d^A psi d_C d_A phi)."""
    out = []
    for c in range(3):
        mu1 = psub(pmul(pmul(d_lower(psi, c), v), phi),
                   pmul(pmul(psi, v), d_lower(phi, c)))
        mu2 = {}
        for a in range(3):
            mu2 = padd(mu2, pmul(d_lower(d_upper(psi, a), c), d_lower(phi, a)))
            mu2 = psub(mu2, pmul(d_upper(psi, a), d_lower(d_lower(phi, a), c)))
        out.append((pscale(mu1, C_I), pscale(mu2, C_I)))
    return out


def green_sides(psi, phi, form):
    """lhs and rhs of the classical Green identity in divergence form."""
    lhs = psub(pmul(laplacian(psi), phi), pmul(psi, laplacian(phi)))
    rhs = {}
    for c in range(3):
        inner = psub(pmul(psi, d_lower(phi, c)), pmul(d_lower(psi, c), phi))
        rhs = psub(rhs, d_upper(inner, c))
    return lhs, rhs
