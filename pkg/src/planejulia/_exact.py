"""Exact endpoint expressions A(c) + B(c)*s, where s = (1 + sqrt(1 - 4c)) / 2.

s satisfies s*s = s - c, so sums and products of such expressions stay in
the same form with rational polynomial coefficients.  Region edges built
from c, 1 + c and the two fixed-point abscissas are all of this shape, which
lets edge-tight inclusions cancel symbolically instead of numerically.

Signs over an interval of c are decided by outward-rounded interval
evaluation with bisection in c.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import _interval as iv

Poly = tuple  # ascending Fraction coefficients, no trailing zeros


def _trim(p) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return _trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def _pneg(p: Poly) -> Poly:
    return tuple(-a for a in p)


def _pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


_C_POLY: Poly = (Fraction(0), Fraction(1))


class Sym:
    """A(c) + B(c)*s with exact rational polynomial coefficients."""

    __slots__ = ("a", "b", "_hash", "_ia", "_ib")

    def __init__(self, a: Poly = (), b: Poly = ()):
        self.a = _trim(Fraction(v) for v in a)
        self.b = _trim(Fraction(v) for v in b)
        self._hash = hash((self.a, self.b))
        self._ia = tuple(iv.from_fraction(q) for q in self.a)
        self._ib = tuple(iv.from_fraction(q) for q in self.b)

    @classmethod
    def const(cls, v) -> "Sym":
        return cls((Fraction(v),))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Sym) and self.a == other.a and self.b == other.b

    def __repr__(self):
        return f"Sym({[str(v) for v in self.a]}, {[str(v) for v in self.b]})"

    @property
    def is_zero(self) -> bool:
        return not self.a and not self.b

    def __add__(self, other):
        other = _lift(other)
        return Sym(_padd(self.a, other.a), _padd(self.b, other.b))

    __radd__ = __add__

    def __neg__(self):
        return Sym(_pneg(self.a), _pneg(self.b))

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        bb = _pmul(self.b, other.b)
        a = _padd(_pmul(self.a, other.a), _pneg(_pmul(_C_POLY, bb)))
        b = _padd(_padd(_pmul(self.a, other.b), _pmul(self.b, other.a)), bb)
        return Sym(a, b)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def value(self, c: float) -> float:
        """Plain float evaluation (not rigorous)."""
        s = (1.0 + (1.0 - 4.0 * c) ** 0.5) / 2.0
        return _horner_float(self.a, c) + _horner_float(self.b, c) * s

    def enclose(self, c_lo: float, c_hi: float) -> tuple[float, float]:
        return _enclose(self, c_lo, c_hi)


def _lift(v) -> Sym:
    if isinstance(v, Sym):
        return v
    return Sym.const(v)


def _horner_float(p: Poly, c: float) -> float:
    out = 0.0
    for a in reversed(p):
        out = out * c + float(a)
    return out


def _horner(coeffs, cint):
    out = (0.0, 0.0)
    for k in reversed(coeffs):
        out = iv.add(iv.mul(out, cint), k)
    return out


@lru_cache(maxsize=4096)
def _s_enclosure(c_lo: float, c_hi: float):
    disc = iv.sub((1.0, 1.0), iv.mul((4.0, 4.0), (c_lo, c_hi)))
    root = iv.sqrt(disc)
    half = iv.mul(iv.add((1.0, 1.0), root), (0.5, 0.5))
    return half


def _enclose(e: Sym, c_lo: float, c_hi: float):
    cint = (c_lo, c_hi)
    a = _horner(e._ia, cint) if e._ia else (0.0, 0.0)
    if not e._ib:
        return a
    b = _horner(e._ib, cint)
    return iv.add(a, iv.mul(b, _s_enclosure(c_lo, c_hi)))


ZERO = Sym()
ONE = Sym.const(1)
C = Sym((0, 1))
S = Sym((), (1,))  # larger fixed-point abscissa
S_SMALL = ONE - S  # smaller fixed-point abscissa, equal to c / s

SIGN_SPLIT_DEPTH = 10


@lru_cache(maxsize=1 << 18)
def nonneg(e: Sym, c_lo: float, c_hi: float, strict: bool = False, depth: int = 0):
    """True if e >= 0 (or > 0) on [c_lo, c_hi], False if provably violated
    somewhere, None if undecided within the bisection budget."""
    if e.is_zero:
        return not strict
    lo, hi = _enclose(e, c_lo, c_hi)
    if lo > 0 or (lo >= 0 and not strict):
        return True
    if hi < 0 or (strict and hi <= 0):
        return False
    mid = 0.5 * c_lo + 0.5 * c_hi
    mlo, mhi = _enclose(e, mid, mid)
    if mhi < 0 or (strict and mhi <= 0):
        return False
    if depth >= SIGN_SPLIT_DEPTH or not (c_lo < mid < c_hi):
        return None
    left = nonneg(e, c_lo, mid, strict, depth + 1)
    if left is False:
        return False
    right = nonneg(e, mid, c_hi, strict, depth + 1)
    if right is False:
        return False
    if left and right:
        return True
    return None


INF = float("inf")


def is_inf(v) -> bool:
    return isinstance(v, float)


def le(a, b, c_lo: float, c_hi: float):
    """Decide a <= b for all c in the interval; endpoints may be +-inf floats."""
    if is_inf(a) or is_inf(b):
        if (is_inf(a) and a < 0) or (is_inf(b) and b > 0):
            return True
        if is_inf(a) and is_inf(b):
            return a <= b
        return False
    return nonneg(b - a, c_lo, c_hi)


def sign_class(e, c_lo: float, c_hi: float):
    """'+' if e >= 0, '-' if e <= 0, '0' if identically zero, None otherwise."""
    if is_inf(e):
        return "+" if e > 0 else "-"
    if e.is_zero:
        return "0"
    if nonneg(e, c_lo, c_hi):
        return "+"
    if nonneg(-e, c_lo, c_hi):
        return "-"
    return None


def strict_sign(e, c_lo: float, c_hi: float):
    if is_inf(e):
        return 1 if e > 0 else -1
    if e.is_zero:
        return 0
    if nonneg(e, c_lo, c_hi, True):
        return 1
    if nonneg(-e, c_lo, c_hi, True):
        return -1
    return None


def times(a, b, c_lo: float, c_hi: float):
    """Product of extended endpoints; None when an infinite factor meets an
    expression of undetermined sign."""
    if not is_inf(a) and not is_inf(b):
        return a * b
    if is_inf(a) and is_inf(b):
        return INF if (a > 0) == (b > 0) else -INF
    inf, fin = (a, b) if is_inf(a) else (b, a)
    sg = strict_sign(fin, c_lo, c_hi)
    if sg is None:
        return None
    if sg == 0:
        return ZERO
    return inf if sg > 0 else -inf


def plus(a, b):
    if is_inf(a):
        return a
    if is_inf(b):
        return b
    return a + b


def enclose_end(v, c_lo: float, c_hi: float):
    if is_inf(v):
        return (v, v)
    return _enclose(v, c_lo, c_hi)
