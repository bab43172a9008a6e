"""Moebius conjugation to the palindromic normal form z^n P(z)/P*(z).

For a quadratic p(z) = z^2 - c the change of variables tau(z) = (z+s)/(z-s),
s = sqrt(c), sends the two roots to 0 and infinity and sends infinity to 1.
Conjugating a root-finding operator by tau yields (for the methods treated
here) a rational map of the shape

    O(z) = s0 * z^n * (a_k + a_{k-1} z + ... + a_1 z^{k-1} + z^k)
                    / (1 + a_1 z + ... + a_{k-1} z^{k-1} + a_k z^k)

with global sign s0 = +-1: numerator and denominator carry mirrored
coefficient sequences, which is equivalent to the map commuting with
iota(z) = 1/z.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import (DegenerateMobius, NotFixingOneZeroInfinity,
                     NotPalindromic, ZeroC)
from .poly import (INF, Polynomial, RationalMap, is_inf, poly_roots, rat_eval,
                   rat_make, _substitute)

MIRROR_REL = 1e-9        # palindromicity tolerance on mirrored coefficients
SYMMETRY_REL = 1e-9      # sampled-identity tolerance for symmetry checks
_CHECK_SEED = 0xA5C0FFEE


@dataclass(frozen=True)
class Mobius:
    """Fractional linear map (a z + b) / (c z + d) with ad - bc != 0."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if scale == 0 or abs(det) <= 1e-14 * scale * scale:
            raise DegenerateMobius("matrix determinant vanishes")

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1)

    @classmethod
    def iota(cls) -> "Mobius":
        """z -> 1/z."""
        return cls(0, 1, 1, 0)

    @classmethod
    def negation(cls) -> "Mobius":
        """z -> -z."""
        return cls(-1, 0, 0, 1)

    def __call__(self, z):
        if is_inf(z):
            if self.c == 0:
                return INF
            return self.a / self.c
        z = complex(z)
        den = self.c * z + self.d
        num = self.a * z + self.b
        if den == 0:
            return INF if num != 0 else INF
        return num / den

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "Mobius") -> "Mobius":
        """self after other (matrix product)."""
        return Mobius(self.a * other.a + self.b * other.c,
                      self.a * other.b + self.b * other.d,
                      self.c * other.a + self.d * other.c,
                      self.c * other.b + self.d * other.d)


def standard_tau(c: complex) -> Mobius:
    """The conjugacy (z + sqrt(c)) / (z - sqrt(c)), principal square root.

    Sends sqrt(c) to infinity, -sqrt(c) to 0, and infinity to 1.
    """
    if c == 0:
        raise ZeroC("the polynomial z^d - c needs c != 0")
    s = cmath.sqrt(c)
    return Mobius(1.0, s, 1.0, -s)


def mobius_conjugate(R: RationalMap, M: Mobius) -> RationalMap:
    """M o R o M^-1, computed on homogeneous representatives throughout.

    Working projectively avoids evaluating anything at the intermediate
    infinities that M deliberately creates.
    """
    inv = M.inverse()
    # R(M^-1(z)) with M^-1(z) = (inv.a z + inv.b)/(inv.c z + inv.d)
    A = Polynomial((inv.b, inv.a))
    B = Polynomial((inv.d, inv.c))
    m = max(R.num.degree, R.den.degree, 0)
    num_s = _substitute(R.num, A, B, m)
    den_s = _substitute(R.den, A, B, m)
    return rat_make(M.a * num_s + M.b * den_s, M.c * num_s + M.d * den_s)


# --------------------------------------------------------------------------
# normal form
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorForm:
    """Palindromic normal form sign * z^n * P(z) / P*(z).

    ``a`` holds a_1..a_k (so P(z) = a_k + a_{k-1} z + ... + a_1 z^{k-1} + z^k
    and P* has the reversed coefficients); ``roots`` are the k roots of P.
    ``degenerate`` marks the collapse case: either the coefficient sum
    1 + a_1 + ... + a_k vanishes (P has the root 1, which cancels against
    the denominator) or the map already carries the residual sign -1 of
    that cancellation.
    """

    n: int
    k: int
    a: tuple = ()
    roots: tuple = ()
    sign: int = 1
    degenerate: bool = False

    def p_coeffs(self) -> Polynomial:
        """P ascending: a_k, a_{k-1}, ..., a_1, 1."""
        return Polynomial(tuple(reversed(self.a)) + (1.0,))

    def p_hat_coeffs(self) -> Polynomial:
        """P* ascending: 1, a_1, ..., a_k."""
        return Polynomial((1.0,) + tuple(self.a))

    def reconstruct(self) -> RationalMap:
        num = (self.sign * self.p_coeffs()).shift(self.n)
        return rat_make(num, self.p_hat_coeffs())

    def reconstruct_from_roots(self) -> RationalMap:
        """The product form z^n * prod (z - r_i)/(1 - r_i z)."""
        num = Polynomial.from_roots(self.roots, lead=self.sign)
        den = Polynomial.one()
        for r in self.roots:
            den = den * Polynomial((1.0, -r))
        return rat_make(num.shift(self.n), den)

    def coefficient_sum(self) -> complex:
        return 1.0 + complex(sum(self.a))


def make_form(n: int, a, sign: int = 1) -> OperatorForm:
    """Build an OperatorForm from n and the coefficient list a_1..a_k."""
    a = tuple(complex(v) for v in a)
    k = len(a)
    if k and a[-1] == 0:
        raise ValueError("a_k must be nonzero (drop trailing zeros instead)")
    roots = poly_roots(Polynomial(tuple(reversed(a)) + (1.0,))) if k else ()
    total = abs(1.0 + sum(a))
    scale = 1.0 + max((abs(v) for v in a), default=0.0)
    degenerate = sign == -1 or total <= 1e-10 * scale
    return OperatorForm(n=n, k=k, a=a, roots=roots, sign=sign,
                        degenerate=degenerate)


def extract_normal_form(R: RationalMap) -> OperatorForm:
    """Read (n, k, a, sign) off a reduced map, verifying the mirror property.

    Raises NotFixingOneZeroInfinity when the map does not have the required
    structure at 0/1/infinity, and NotPalindromic when the coefficient mirror
    fails beyond tolerance.
    """
    num, den = R.num, R.den
    if num.is_zero():
        raise NotFixingOneZeroInfinity("the zero map does not fix infinity")

    def significant(coeffs):
        # degrees judged at the mirror tolerance, so coefficient junk below
        # it cannot inflate the reported (n, k)
        mags = np.abs(coeffs)
        keep = mags > MIRROR_REL * mags.max()
        if not keep.any():
            return coeffs[:0]
        return coeffs[: np.nonzero(keep)[0][-1] + 1]

    nc = significant(num.coeffs)
    top = np.abs(nc).max()
    n = 0
    while n < nc.size and abs(nc[n]) <= MIRROR_REL * top:
        n += 1
    if n < 1:
        raise NotFixingOneZeroInfinity("0 is not a fixed point (no z^n factor)")
    q = nc[n:]
    k = q.size - 1
    dc = significant(den.coeffs)
    if dc.size - 1 != k:
        raise NotFixingOneZeroInfinity(
            f"infinity is not fixed with local degree {n} "
            f"(numerator co-degree {k}, denominator degree {dc.size - 1})")
    if abs(dc[0]) <= MIRROR_REL * np.abs(dc).max():
        raise NotFixingOneZeroInfinity("denominator vanishes at 0")
    q = q / dc[0]
    dc = dc / dc[0]
    # sign from the leading numerator coefficient (mirror partner of den[0])
    s = q[-1]
    if abs(s - 1.0) <= MIRROR_REL:
        sign = 1
    elif abs(s + 1.0) <= MIRROR_REL:
        sign = -1
    else:
        raise NotPalindromic(f"leading coefficient {s} is not +-1")
    mirror = sign * dc[::-1]
    scale = np.abs(dc).max()
    if not np.all(np.abs(q - mirror) <= MIRROR_REL * scale):
        worst = float(np.max(np.abs(q - mirror)))
        raise NotPalindromic(f"mirror defect {worst:.3e} exceeds tolerance")
    a = tuple(complex(v) for v in dc[1:])
    if k >= 1 and abs(a[-1]) <= MIRROR_REL * scale:
        raise NotPalindromic("a_k vanishes; the form has lower k")
    roots = poly_roots(Polynomial(tuple(reversed(a)) + (1.0,))) if k else ()
    if k:
        # Vieta guard: a_1 = -sum r_i must hold for the computed roots
        if abs(sum(roots) + a[0]) > 1e-8 * (1.0 + abs(a[0])):
            raise NotPalindromic("root/coefficient consistency check failed")
    total = abs(1.0 + sum(a))
    degenerate = sign == -1 or total <= 1e-10 * (1.0 + max(
        (abs(v) for v in a), default=0.0))
    return OperatorForm(n=n, k=k, a=a, roots=roots, sign=sign,
                        degenerate=degenerate)


# --------------------------------------------------------------------------
# sampled symmetry checks
# --------------------------------------------------------------------------


def _sample_points(R: RationalMap, trials: int, rng) -> list:
    """Random points avoiding zeros and poles of R (and the origin)."""
    pts = []
    attempts = 0
    while len(pts) < trials and attempts < 50 * trials + 100:
        attempts += 1
        z = complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))
        if abs(z) < 0.1:
            continue
        v = rat_eval(R, z)
        if is_inf(v) or abs(v) < 1e-6 or abs(v) > 1e6:
            continue
        pts.append(z)
    return pts


def check_iota_symmetry(R: RationalMap, trials: int = 20) -> bool:
    """Sampled test of iota o R o iota = R, i.e. R(1/z) = 1/R(z)."""
    rng = np.random.default_rng(_CHECK_SEED)
    for z in _sample_points(R, trials, rng):
        v = rat_eval(R, z)
        w = rat_eval(R, 1.0 / z)
        if is_inf(w):
            return False
        if abs(w - 1.0 / v) > SYMMETRY_REL * (1.0 + abs(1.0 / v)):
            return False
    return True


def check_lambda_odd(R: RationalMap, d: int, trials: int = 50) -> bool:
    """Sampled test of R(lam z) = lam R(z) for all d-th roots of unity lam."""
    rng = np.random.default_rng(_CHECK_SEED + d)
    lams = [cmath.exp(2j * cmath.pi * j / d) for j in range(1, d)]
    for z in _sample_points(R, trials, rng):
        v = rat_eval(R, z)
        for lam in lams:
            w = rat_eval(R, lam * z)
            if is_inf(w):
                return False
            if abs(w - lam * v) > SYMMETRY_REL * (1.0 + abs(v)):
                return False
    return True
