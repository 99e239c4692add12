"""Metric, epsilon tensor and R-matrix data for the deformed Euclidean 3-space.

Index order is (+, 3, -) -> (0, 1, 2) everywhere; a pair (A, B) flattens to
3*A + B.  The braiding matrix is constructed from its projector decomposition
R = P_S + q^-6 P_T - q^-4 P_A rather than transcribed entry by entry, so the
epsilon-contraction and Yang-Baxter identities act as independent checks.
"""

from __future__ import annotations

from .qcoeff import QScalar, QS_ONE, QS_ZERO, lambda_scalar

PLUS, THREE, MINUS = 0, 1, 2
INDICES = (PLUS, THREE, MINUS)
INDEX_NAMES = ("+", "3", "-")


def _q(k: int) -> QScalar:
    return QScalar.q_power(k)


def metric_lower():
    """g_AB: nonzero entries g_{+-} = -q, g_{33} = 1, g_{-+} = -q^-1."""
    g = [[QS_ZERO for _ in INDICES] for _ in INDICES]
    g[PLUS][MINUS] = -_q(1)
    g[THREE][THREE] = QS_ONE
    g[MINUS][PLUS] = -_q(-1)
    return g


def metric_upper():
    """g^AB has the same entries as g_AB."""
    return metric_lower()


def eps_lower():
    """epsilon_ABC (all lower indices)."""
    lam = lambda_scalar()
    e = {}
    e[(PLUS, THREE, MINUS)] = -_q(-2)
    e[(PLUS, MINUS, THREE)] = QS_ONE
    e[(THREE, PLUS, MINUS)] = QS_ONE
    e[(THREE, MINUS, PLUS)] = -QS_ONE
    e[(MINUS, PLUS, THREE)] = -QS_ONE
    e[(MINUS, THREE, PLUS)] = _q(2)
    e[(THREE, THREE, THREE)] = -lam
    return e


def eps_upper():
    """epsilon^ABC (all upper indices)."""
    lam = lambda_scalar()
    e = {}
    e[(MINUS, THREE, PLUS)] = -_q(-2)
    e[(THREE, MINUS, PLUS)] = QS_ONE
    e[(MINUS, PLUS, THREE)] = QS_ONE
    e[(PLUS, MINUS, THREE)] = -QS_ONE
    e[(THREE, PLUS, MINUS)] = -QS_ONE
    e[(PLUS, THREE, MINUS)] = _q(2)
    e[(THREE, THREE, THREE)] = -lam
    return e


def eps_get(e, a, b, c) -> QScalar:
    return e.get((a, b, c), QS_ZERO)


def pair(a: int, b: int) -> int:
    return 3 * a + b


def unpair(i: int):
    return divmod(i, 3)


# --- small exact matrix helpers (lists of lists of QScalar) ---


def mat_zero(n):
    return [[QS_ZERO for _ in range(n)] for _ in range(n)]


def mat_identity(n):
    m = mat_zero(n)
    for i in range(n):
        m[i][i] = QS_ONE
    return m


def mat_mul(a, b):
    n = len(a)
    out = mat_zero(n)
    for i in range(n):
        ai = a[i]
        for k in range(n):
            c = ai[k]
            if c.is_zero():
                continue
            bk = b[k]
            row = out[i]
            for j in range(n):
                if not bk[j].is_zero():
                    row[j] = row[j] + c * bk[j]
    return out

def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c: QScalar):
    return [[x * c for x in row] for row in a]


def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_is_zero(a):
    return all(x.is_zero() for row in a for x in row)


class RMatrixData:
    """Projector decomposition and braiding matrices, built once and cached.

    Attributes are 9x9 matrices indexed by flattened pairs: m[pair(A,B)][pair(C,D)]
    is the component with upper pair (A,B) and lower pair (C,D).
    """

    def __init__(self):
        gl = metric_lower()
        gu = metric_upper()
        self.g_lower = gl
        self.g_upper = gu
        self.e_lower = eps_lower()
        self.e_upper = eps_upper()

        # trace part: g^AB g_CD / (g^EF g_EF)
        nu = QS_ZERO
        for a in INDICES:
            for b in INDICES:
                nu = nu + gu[a][b] * gl[a][b]
        self.metric_trace = nu  # q^2 + 1 + q^-2
        pt = mat_zero(9)
        for a in INDICES:
            for b in INDICES:
                for c in INDICES:
                    for d in INDICES:
                        pt[pair(a, b)][pair(c, d)] = gu[a][b] * gl[c][d] / nu
        self.p_trace = pt

        # antisymmetric part from the epsilon tensor, normalized by idempotence
        m = mat_zero(9)
        for a in INDICES:
            for b in INDICES:
                for c in INDICES:
                    for d in INDICES:
                        acc = QS_ZERO
                        for f in INDICES:
                            acc = acc + eps_get(self.e_upper, a, b, f) * eps_get(
                                self.e_lower, d, c, f
                            )
                        m[pair(a, b)][pair(c, d)] = acc
        m2 = mat_mul(m, m)
        norm = None
        for i in range(9):
            for j in range(9):
                if not m[i][j].is_zero():
                    norm = m2[i][j] / m[i][j]
                    break
            if norm is not None:
                break
        if norm is None or not mat_eq(m2, mat_scale(m, norm)):
            raise ArithmeticError("epsilon contraction is not proportional to a projector")
        self.p_antisym = mat_scale(m, QS_ONE / norm)

        self.p_sym = mat_sub(
            mat_sub(mat_identity(9), self.p_trace), self.p_antisym
        )

        self.rhat = mat_add(
            mat_sub(self.p_sym, mat_scale(self.p_antisym, _q(-4))),
            mat_scale(self.p_trace, _q(-6)),
        )
        self.rhat_inv = mat_add(
            mat_sub(self.p_sym, mat_scale(self.p_antisym, _q(4))),
            mat_scale(self.p_trace, _q(6)),
        )


_DATA = None


def rmatrix_data() -> RMatrixData:
    global _DATA
    if _DATA is None:
        _DATA = RMatrixData()
    return _DATA


def build_projectors():
    d = rmatrix_data()
    return d.p_sym, d.p_trace, d.p_antisym


def build_rhat():
    d = rmatrix_data()
    return d.rhat, d.rhat_inv


def rhat_entry(a, c, b, d) -> QScalar:
    """R^{AC}_{BD} with the spec's index placement."""
    return rmatrix_data().rhat[pair(a, c)][pair(b, d)]


def rhat_inv_entry(a, c, b, d) -> QScalar:
    return rmatrix_data().rhat_inv[pair(a, c)][pair(b, d)]


def lower_index(components) -> list:
    """v_A = g_AB v^B for a 3-component object of arbitrary summable type."""
    g = metric_lower()
    out = []
    for a in INDICES:
        acc = None
        for b in INDICES:
            if g[a][b].is_zero():
                continue
            piece = _scale_component(components[b], g[a][b])
            acc = piece if acc is None else acc + piece
        out.append(acc)
    return out


def raise_index(components) -> list:
    """v^A = g^AB v_B."""
    g = metric_upper()
    out = []
    for a in INDICES:
        acc = None
        for b in INDICES:
            if g[a][b].is_zero():
                continue
            piece = _scale_component(components[b], g[a][b])
            acc = piece if acc is None else acc + piece
        out.append(acc)
    return out


def _scale_component(x, c: QScalar):
    if isinstance(x, QScalar):
        return x * c
    return x.scale(c)


def act_on_slots_12(m):
    """Lift a 9x9 pair matrix to the 27-dim triple space, acting on slots (1,2)."""
    out = [[QS_ZERO for _ in range(27)] for _ in range(27)]
    for a in INDICES:
        for b in INDICES:
            for c in INDICES:
                row = 9 * a + 3 * b + c
                for a2 in INDICES:
                    for b2 in INDICES:
                        w = m[pair(a, b)][pair(a2, b2)]
                        if not w.is_zero():
                            out[row][9 * a2 + 3 * b2 + c] = (
                                out[row][9 * a2 + 3 * b2 + c] + w
                            )
    return out


def act_on_slots_23(m):
    """Lift a 9x9 pair matrix to the 27-dim triple space, acting on slots (2,3)."""
    out = [[QS_ZERO for _ in range(27)] for _ in range(27)]
    for a in INDICES:
        for b in INDICES:
            for c in INDICES:
                row = 9 * a + 3 * b + c
                for b2 in INDICES:
                    for c2 in INDICES:
                        w = m[pair(b, c)][pair(b2, c2)]
                        if not w.is_zero():
                            out[row][9 * a + 3 * b2 + c2] = (
                                out[row][9 * a + 3 * b2 + c2] + w
                            )
    return out
