"""Partial-integration moves and q-deformed Green's theorems.

All identities are verified as exact polynomial statements: each function
returns the residual (left side minus right side), which must be identically
zero.  The plain right action (right_leibniz) is the one appearing here; the
conjugation-defined action belongs to the conjugated set of identities.
"""

from __future__ import annotations

from .qcoeff import QScalar, QS_I, QS_ONE
from .qpoly import SpacePoly, Graded
from .qstar import star
from .qcalculus import act_left, l_action, right_l_all, right_leibniz
from .qtensor import INDICES, metric_lower, pair, rmatrix_data


class BraidingPreconditionError(ValueError):
    """A gauge potential failed the multiplet-braiding precondition."""

    def __init__(self, c, d, e, residual):
        self.indices = (c, d, e)
        self.residual = residual
        super().__init__(
            f"gauge potential violates braiding precondition at (C={c}, D={d}, E={e})"
        )


def braiding_residuals(gauge):
    """Residuals of L^C_E > A^D = q^-4 (Rhat^-1)^{CD}_{GE} A^G for all C, D, E.

    A potential whose components all give zero braids with functions exactly
    like the partial derivatives do, which is what the covariant Green's
    theorem needs beyond first order in the charge.
    """
    rd = rmatrix_data()
    w = QScalar.q_power(-4)
    out = []
    for c in INDICES:
        for e in INDICES:
            for d in INDICES:
                res = l_action(c, e, gauge[d])
                for g_idx in INDICES:
                    entry = rd.rhat_inv[pair(c, d)][pair(g_idx, e)]
                    if not entry.is_zero():
                        res = res - gauge[g_idx].scale(w * entry)
                out.append(((c, d, e), res))
    return out


class GreenResidual:
    """Both sides of one exact identity check."""

    __slots__ = ("name", "lhs", "rhs")

    def __init__(self, name, lhs, rhs):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "lhs", lhs)
        object.__setattr__(self, "rhs", rhs)

    def __setattr__(self, *a):
        raise AttributeError("GreenResidual is immutable")

    @property
    def residual(self):
        return self.lhs - self.rhs

    @property
    def passed(self):
        return self.residual.is_zero()

    def __repr__(self):
        return f"GreenResidual({self.name!r}, passed={self.passed})"


def right_laplacian(psi: SpacePoly) -> SpacePoly:
    """psi <| d^A d_A."""
    gl = metric_lower()
    acc = SpacePoly({})
    for a in INDICES:
        pa = right_leibniz(psi, a, upper=True)
        for b in INDICES:
            if not gl[a][b].is_zero():
                acc = acc + right_leibniz(pa, b, upper=True).scale(gl[a][b])
    return acc


def left_laplacian(phi: SpacePoly) -> SpacePoly:
    """d^A d_A > phi."""
    gl = metric_lower()
    acc = SpacePoly({})
    for a in INDICES:
        for b in INDICES:
            if not gl[a][b].is_zero():
                acc = acc + act_left(a, act_left(b, phi, upper=True), upper=True).scale(gl[a][b])
    return acc


def leibniz_move_left(psi: SpacePoly, phi: SpacePoly, a_upper: int) -> GreenResidual:
    """psi * (d^A > phi) = d^B > [(psi <| L^A_B) * phi] + (psi <| d^A) * phi."""
    rl = right_l_all(psi)
    lhs = star(psi, act_left(a_upper, phi, upper=True))
    rhs = star(right_leibniz(psi, a_upper, upper=True), phi)
    for b in INDICES:
        rhs = rhs + act_left(b, star(rl[a_upper][b], phi), upper=True)
    return GreenResidual(f"leibniz_move_left[{a_upper}]", lhs, rhs)


def leibniz_move_right(psi: SpacePoly, phi: SpacePoly, a_upper: int) -> GreenResidual:
    """(psi <| d^A) * phi = [psi * (L^A_B > phi)] <| d^B + psi * (d^A > phi)."""
    lhs = star(right_leibniz(psi, a_upper, upper=True), phi)
    rhs = star(psi, act_left(a_upper, phi, upper=True))
    for b in INDICES:
        rhs = rhs + right_leibniz(star(psi, l_action(a_upper, b, phi)), b, upper=True)
    return GreenResidual(f"leibniz_move_right[{a_upper}]", lhs, rhs)


def green_identity(psi: SpacePoly, phi: SpacePoly, form: int = 0) -> GreenResidual:
    """Residual of the q-deformed Green's theorem.

    form 0:  psi <| d^A d_A * phi - psi * d^A d_A > phi
             = -d^C > [ q^-2 (psi <| L^A_C d^B) * phi
                        + (psi <| L^A_C) * (d^B > phi) ] g_AB
    form 1:  same left side
             = g_AB [ (psi <| d^A) * (L^B_C > phi)
                      + q^2 psi * (d^A L^B_C > phi) ] <| d^C
    """
    gl = metric_lower()
    lhs = star(right_laplacian(psi), phi) - star(psi, left_laplacian(phi))
    if form == 0:
        rl = right_l_all(psi)
        rhs = SpacePoly({})
        for c in INDICES:
            inner = SpacePoly({})
            for a in INDICES:
                for b in INDICES:
                    g = gl[a][b]
                    if g.is_zero():
                        continue
                    inner = inner + star(
                        right_leibniz(rl[a][c], b, upper=True), phi
                    ).scale(QScalar.q_power(-2) * g)
                    inner = inner + star(rl[a][c], act_left(b, phi, upper=True)).scale(g)
            rhs = rhs - act_left(c, inner, upper=True)
        return GreenResidual("green_identity[divergence form]", lhs, rhs)
    if form == 1:
        rhs = SpacePoly({})
        for c in INDICES:
            inner = SpacePoly({})
            for a in INDICES:
                for b in INDICES:
                    g = gl[a][b]
                    if g.is_zero():
                        continue
                    lphi = l_action(b, c, phi)
                    inner = inner + star(right_leibniz(psi, a, upper=True), lphi).scale(g)
                    inner = inner + star(psi, act_left(a, lphi, upper=True)).scale(
                        QScalar.q_power(2) * g
                    )
            rhs = rhs + right_leibniz(inner, c, upper=True)
        return GreenResidual("green_identity[right form]", lhs, rhs)
    raise ValueError("form must be 0 or 1")


# --- covariant (minimally coupled) versions, graded by charge order ---


def covariant_left(c_upper: int, f: Graded, gauge) -> Graded:
    """D^C > f = d^C > f - i e A^C * f (A enters with one unit of charge)."""
    out = f.map(lambda p: act_left(c_upper, p, upper=True))
    a = gauge[c_upper]
    out = out - Graded.wrap(a, e=1).bilinear(f, star).scale(QS_I)
    return out


def covariant_right(f: Graded, c_upper: int, gauge) -> Graded:
    """f <| D^C = f <| d^C - i f * A^C e."""
    out = f.map(lambda p: right_leibniz(p, c_upper, upper=True))
    a = gauge[c_upper]
    out = out - f.bilinear(Graded.wrap(a, e=1), star).scale(QS_I)
    return out


def graded_right_l(f: Graded):
    """Lift the inverse-antipode L-action to graded arguments."""
    out = [[Graded({}) for _ in INDICES] for _ in INDICES]
    for g, p in f.terms.items():
        rl = right_l_all(p)
        for a in INDICES:
            for c in INDICES:
                out[a][c] = out[a][c] + Graded({g: rl[a][c]} if not rl[a][c].is_zero() else {})
    return out


def covariant_move(psi: SpacePoly, phi: SpacePoly, gauge, e_order: int = 1) -> list:
    """psi * D^B > phi - psi <| D^B * phi = d^C > [(psi <| L^B_C) * phi]
    = -[psi * (L^B_C > phi)] <| d^C ; holds for any gauge potential."""
    out = []
    gpsi = Graded.wrap(psi)
    gphi = Graded.wrap(phi)
    rl = right_l_all(psi)
    for b in INDICES:
        lhs = gpsi.bilinear(covariant_left(b, gphi, gauge), star) - covariant_right(
            gpsi, b, gauge
        ).bilinear(gphi, star)
        rhs1 = Graded({})
        rhs2 = Graded({})
        for c in INDICES:
            rhs1 = rhs1 + Graded.wrap(act_left(c, star(rl[b][c], phi), upper=True))
            rhs2 = rhs2 - Graded.wrap(
                right_leibniz(star(psi, l_action(b, c, phi)), c, upper=True)
            )
        out.append(GreenResidual(f"covariant_move[{b}] divergence form",
                                 lhs.truncate_e(e_order), rhs1.truncate_e(e_order)))
        out.append(GreenResidual(f"covariant_move[{b}] right form",
                                 lhs.truncate_e(e_order), rhs2.truncate_e(e_order)))
    return out


def covariant_right_laplacian(psi: Graded, gauge) -> Graded:
    gl = metric_lower()
    acc = Graded({})
    for c in INDICES:
        pc = covariant_right(psi, c, gauge)
        for b in INDICES:
            if not gl[c][b].is_zero():
                acc = acc + covariant_right(pc, b, gauge).scale(gl[c][b])
    return acc


def covariant_left_laplacian(phi: Graded, gauge) -> Graded:
    gl = metric_lower()
    acc = Graded({})
    for c in INDICES:
        for b in INDICES:
            if not gl[c][b].is_zero():
                acc = acc + covariant_left(c, covariant_left(b, phi, gauge), gauge).scale(gl[c][b])
    return acc


def green_identity_covariant(
    psi: SpacePoly, phi: SpacePoly, gauge, e_order: int = 1, form: int = 0
) -> GreenResidual:
    """Minimally coupled Green's theorem, truncated at charge order e_order.

    Unlike the uncoupled version this needs the braiding precondition on the
    gauge potential (the Leibniz splitting must hold for D^C as well), so for
    generic potentials the residual is nonzero at first order in e.
    """
    if e_order >= 1:
        for (c, d, e), res in braiding_residuals(gauge):
            if not res.is_zero():
                raise BraidingPreconditionError(c, d, e, res)
    gl = metric_lower()
    gpsi = Graded.wrap(psi)
    gphi = Graded.wrap(phi)
    lhs = covariant_right_laplacian(gpsi, gauge).bilinear(gphi, star) - gpsi.bilinear(
        covariant_left_laplacian(gphi, gauge), star
    )
    if form == 0:
        rl = graded_right_l(gpsi)
        rhs = Graded({})
        for f_idx in INDICES:
            inner = Graded({})
            for b in INDICES:
                for c in INDICES:
                    g = gl[b][c]
                    if g.is_zero():
                        continue
                    lpart = rl[b][f_idx]
                    inner = inner + covariant_right(lpart, c, gauge).bilinear(
                        gphi, star
                    ).scale(QScalar.q_power(-2) * g)
                    inner = inner + lpart.bilinear(
                        covariant_left(c, gphi, gauge), star
                    ).scale(g)
            rhs = rhs - inner.map(lambda p: act_left(f_idx, p, upper=True))
    elif form == 1:
        rhs = Graded({})
        for f_idx in INDICES:
            inner = Graded({})
            for b in INDICES:
                for c in INDICES:
                    g = gl[b][c]
                    if g.is_zero():
                        continue
                    lphi = Graded.wrap(l_action(c, f_idx, phi))
                    inner = inner + covariant_right(gpsi, b, gauge).bilinear(lphi, star).scale(g)
                    inner = inner + gpsi.bilinear(
                        covariant_left(b, lphi, gauge), star
                    ).scale(QScalar.q_power(2) * g)
            rhs = rhs + inner.map(lambda p: right_leibniz(p, f_idx, upper=True))
    else:
        raise ValueError("form must be 0 or 1")
    return GreenResidual(
        f"green_identity_covariant[form {form}]",
        lhs.truncate_e(e_order),
        rhs.truncate_e(e_order),
    )


def greens_suite(seed: int = 0, samples: int = 100, max_degree: int = 3,
                 e_order: int = 2):
    """Both q-Green's theorems, the partial-integration moves, and the
    covariant identity on the admissible gauge family."""
    from .qreport import Rng, VerificationReport, random_poly
    from .qpoly import render_poly

    rng = Rng(seed)
    rep = VerificationReport(
        "greens", seed,
        {"samples": samples, "max_degree": max_degree, "e_order": e_order},
    )
    for i in range(samples):
        psi = random_poly(rng, max_degree)
        phi = random_poly(rng, max_degree)
        r0 = green_identity(psi, phi, form=0)
        r1 = green_identity(psi, phi, form=1)
        rep.add(
            f"forms 0+1, case {i}: psi = {render_poly(psi)}; phi = {render_poly(phi)}",
            r0.residual + r1.residual,
        )
        if i < samples // 4:
            acc = SpacePoly({})
            for a in INDICES:
                acc = acc + leibniz_move_left(psi, phi, a).residual
                acc = acc + leibniz_move_right(psi, phi, a).residual
            rep.add(f"partial-integration moves, case {i}", acc)
    zero = [SpacePoly({})] * 3
    for i in range(5):
        psi = random_poly(rng, max_degree)
        phi = random_poly(rng, max_degree)
        res = green_identity_covariant(psi, phi, zero, e_order=e_order)
        rep.add(
            f"covariant identity, admissible family member (A = 0), case {i}",
            res.residual if hasattr(res, "residual") else res,
        )
    try:
        green_identity_covariant(
            SpacePoly.coordinate(0), SpacePoly.coordinate(2),
            [SpacePoly.coordinate(1), SpacePoly({}), SpacePoly({})],
            e_order=e_order,
        )
        rep.add("generic A rejected by the braiding precondition",
                "unexpectedly accepted")
    except BraidingPreconditionError as err:
        rep.add("generic A rejected by the braiding precondition", "0",
                note=f"witness indices {err.indices}")
    return rep
