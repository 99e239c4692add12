"""Verification reports and the seeded case generator.

Every identity suite returns a VerificationReport: a list of cases, each
carrying a canonical text rendering of its inputs, the residual (which must
be the zero polynomial for the case to pass) and a pass flag.  Reports with
the same seed and parameters serialize to byte-identical JSON.

Random inputs come from a 64-bit linear congruential generator with the
documented constants

    state' = (6364136223846793005 * state + 1442695040888963407) mod 2^64

so that case streams are reproducible across implementations.  Coefficients
are small Gaussian rationals with numerators in [-3, 3] and denominators in
[1, 3]; exponent tuples are bounded by the requested degree.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .qcoeff import GaussianRational, QScalar
from .qpoly import SpacePoly, render_poly

_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_LCG_MASK = (1 << 64) - 1


class Rng:
    """Deterministic 64-bit linear congruential generator."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _LCG_MASK

    def next_u64(self) -> int:
        self.state = (_LCG_MULT * self.state + _LCG_INC) & _LCG_MASK
        return self.state

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] (top 32 bits, modulo reduced)."""
        span = hi - lo + 1
        return lo + (self.next_u64() >> 32) % span

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]


def random_gaussian(rng: Rng) -> GaussianRational:
    num_re = rng.randint(-3, 3)
    num_im = rng.randint(-3, 3)
    den = rng.randint(1, 3)
    return GaussianRational(Fraction(num_re, den), Fraction(num_im, den))


def random_coefficient(rng: Rng) -> QScalar:
    """Small Gaussian rational times a small power of q."""
    c = QScalar.from_gaussian(random_gaussian(rng))
    return c * QScalar.q_power(rng.randint(-2, 2))


def random_poly(rng: Rng, max_degree: int, n_terms: int = 3,
                max_t: int = 0) -> SpacePoly:
    """Random polynomial with bounded total spatial degree."""
    acc = SpacePoly({})
    for _ in range(n_terms):
        d = rng.randint(0, max_degree)
        np_ = rng.randint(0, d)
        n3 = rng.randint(0, d - np_)
        nm = d - np_ - n3
        n0 = rng.randint(0, max_t) if max_t else 0
        acc = acc + SpacePoly.monomial((np_, n3, nm, n0), random_coefficient(rng))
    return acc


class Case:
    """One verified identity instance."""

    __slots__ = ("inputs", "residual", "passed", "note")

    def __init__(self, inputs: str, residual: str, passed: bool, note: str = ""):
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "residual", residual)
        object.__setattr__(self, "passed", passed)
        object.__setattr__(self, "note", note)

    def __setattr__(self, *a):
        raise AttributeError("Case is immutable")

    def to_dict(self):
        d = {"inputs": self.inputs, "residual": self.residual, "pass": self.passed}
        if self.note:
            d["note"] = self.note
        return d


class VerificationReport:
    """Machine-readable outcome of an identity suite."""

    __slots__ = ("suite", "seed", "params", "cases")

    def __init__(self, suite: str, seed: int = 0, params=None):
        object.__setattr__(self, "suite", suite)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "params", dict(params or {}))
        object.__setattr__(self, "cases", [])

    def __setattr__(self, *a):
        raise AttributeError("VerificationReport fields are immutable")

    def add(self, inputs: str, residual, note: str = ""):
        """Record a case; residual may be a SpacePoly, Graded, OpElement or str."""
        if isinstance(residual, str):
            text, ok = residual, residual in ("0", "")
        elif isinstance(residual, SpacePoly):
            text, ok = render_poly(residual), residual.is_zero()
        else:
            ok = residual.is_zero()
            text = "0" if ok else str(residual)
        self.cases.append(Case(inputs, text if text else "0", ok, note))

    def add_case(self, case: Case):
        self.cases.append(case)

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.cases)

    def summary(self) -> dict:
        n = len(self.cases)
        p = sum(1 for c in self.cases if c.passed)
        return {"total": n, "passed": p, "failed": n - p, "all_pass": p == n}

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "params": {k: self.params[k] for k in sorted(self.params)},
            "cases": [c.to_dict() for c in self.cases],
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [f"suite {self.suite} (seed {self.seed})"]
        for c in self.cases:
            mark = "pass" if c.passed else "FAIL"
            line = f"  [{mark}] {c.inputs}"
            if not c.passed:
                line += f"  residual: {c.residual}"
            if c.note:
                line += f"  ({c.note})"
            lines.append(line)
        s = self.summary()
        lines.append(f"  {s['passed']}/{s['total']} passed")
        return "\n".join(lines)
