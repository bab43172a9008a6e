"""Dense complex polynomials and rational maps on the Riemann sphere.

Coefficients are stored ascending (index j holds the z**j coefficient), the
zero polynomial is the empty coefficient list, and every map is reduced at
construction time: common roots of numerator and denominator are cancelled,
and the denominator is normalised so its first significant coefficient is 1.

The point at infinity is represented by the module-level sentinel ``INF``.
"""

from __future__ import annotations

import numbers
from typing import Iterable, Sequence

import numpy as np

from .errors import NoConvergence, ZeroDenominator, ZeroPolynomial

# Relative threshold below which trailing coefficients are considered zero.
TRIM_REL = 1e-12
# Relative tolerance for matching a numerator root against a denominator root.
CANCEL_REL = 1e-9
# Residual tolerance |p(r)| / (1 + |r|)**deg for the simultaneous root solver.
ROOT_RESIDUAL_TOL = 1e-12
ABERTH_MAX_SWEEPS = 200
# Fixed seed: root finding (and everything downstream, e.g. rendered images)
# must be reproducible run to run.
_ABERTH_SEED = 0x0DD5EED


class _Infinity:
    """Singleton for the point at infinity on the Riemann sphere."""

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "INF"


INF = _Infinity()


def is_inf(value) -> bool:
    return value is INF


def _as_array(coeffs) -> np.ndarray:
    arr = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError("coefficients must form a one-dimensional sequence")
    return arr


def _trim(arr: np.ndarray) -> np.ndarray:
    """Drop trailing coefficients that are negligible next to the largest one."""
    if arr.size == 0:
        return arr
    mags = np.abs(arr)
    top = mags.max()
    if top == 0.0:
        return arr[:0]
    keep = arr.size
    while keep > 0 and mags[keep - 1] <= TRIM_REL * top:
        keep -= 1
    return arr[:keep]


class Polynomial:
    """Immutable dense polynomial with complex coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] = ()):
        c = _trim(_as_array(coeffs))
        c.setflags(write=False)
        self._c = c

    # -- basic structure ----------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return self._c.size - 1

    def is_zero(self) -> bool:
        return self._c.size == 0

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((1.0,))

    @classmethod
    def identity(cls) -> "Polynomial":
        return cls((0.0, 1.0))

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "Polynomial":
        acc = np.array([lead], dtype=np.complex128)
        for r in roots:
            acc = np.convolve(acc, np.array([-r, 1.0], dtype=np.complex128))
        return cls(acc)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, z):
        if is_inf(z):
            if self.is_zero():
                return 0.0 + 0.0j
            return INF if self.degree >= 1 else complex(self._c[0])
        if self.is_zero():
            if isinstance(z, np.ndarray):
                return np.zeros_like(z, dtype=np.complex128)
            return 0.0 + 0.0j
        if isinstance(z, np.ndarray):
            acc = np.full(z.shape, self._c[-1], dtype=np.complex128)
            for k in range(self._c.size - 2, -1, -1):
                acc = acc * z + self._c[k]
            return acc
        acc = complex(self._c[-1])
        zz = complex(z)
        for k in range(self._c.size - 2, -1, -1):
            acc = acc * zz + self._c[k]
        return acc

    # -- calculus and arithmetic ----------------------------------------------

    def derivative(self) -> "Polynomial":
        if self._c.size <= 1:
            return Polynomial.zero()
        return Polynomial(self._c[1:] * np.arange(1, self._c.size))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self._c, other._c
        if a.size < b.size:
            a, b = b, a
        out = a.copy()
        out[: b.size] += b
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self._c)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero() or other.is_zero():
                return Polynomial.zero()
            return Polynomial(np.convolve(self._c, other._c))
        if isinstance(other, numbers.Number):
            return Polynomial(self._c * complex(other))
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, k: int) -> "Polynomial":
        """Multiply by z**k."""
        if self.is_zero() or k == 0:
            return self if k == 0 else Polynomial(self._c)
        return Polynomial(np.concatenate([np.zeros(k, dtype=np.complex128), self._c]))

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """self(inner(z)) by Horner over the inner polynomial."""
        if self.is_zero():
            return Polynomial.zero()
        acc = Polynomial((self._c[-1],))
        for k in range(self._c.size - 2, -1, -1):
            acc = acc * inner + Polynomial((self._c[k],))
        return acc

    def deflate(self, root: complex) -> "Polynomial":
        """Divide out a linear factor (z - root), discarding the remainder."""
        if self.degree < 1:
            raise ValueError("cannot deflate a constant polynomial")
        desc = self._c[::-1]
        out = np.empty(desc.size - 1, dtype=np.complex128)
        acc = desc[0]
        out[0] = acc
        for i in range(1, desc.size - 1):
            acc = desc[i] + root * acc
            out[i] = acc
        return Polynomial(out[::-1])

    def monic(self) -> "Polynomial":
        if self.is_zero():
            raise ZeroPolynomial("the zero polynomial has no monic form")
        return Polynomial(self._c / self._c[-1])

    def leading(self) -> complex:
        if self.is_zero():
            return 0.0 + 0.0j
        return complex(self._c[-1])

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"Polynomial({list(self._c)!r})"


def poly_eval(p: Polynomial, z):
    return p(z)


def poly_roots(p: Polynomial,
               tol: float = ROOT_RESIDUAL_TOL,
               max_sweeps: int = ABERTH_MAX_SWEEPS) -> tuple[complex, ...]:
    """All complex roots (with multiplicity) via the Aberth-Ehrlich iteration.

    Roots are returned sorted by (real, imag) so the output is a stable
    function of the coefficients alone.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot extract roots of the zero polynomial")
    deg = p.degree
    if deg == 0:
        return ()
    a = p.coeffs / p.coeffs[-1]  # monic
    if deg == 1:
        return (complex(-a[0]),)

    # Strip exact trailing zero coefficients first: those give exact roots at 0
    # and would otherwise slow the simultaneous iteration down.
    lead_zero = 0
    while lead_zero < deg and a[lead_zero] == 0:
        lead_zero += 1
    zeros_at_origin = (0.0 + 0.0j,) * lead_zero
    if lead_zero:
        a = a[lead_zero:]
        deg -= lead_zero
        if deg == 0:
            return zeros_at_origin
        if deg == 1:
            return tuple(sorted(zeros_at_origin + (complex(-a[0]),),
                                key=lambda r: (r.real, r.imag)))

    cauchy = 1.0 + float(np.max(np.abs(a[:-1])))
    rng = np.random.default_rng(_ABERTH_SEED)
    angles = 2.0 * np.pi * (np.arange(deg) + rng.uniform(0.2, 0.8, deg)) / deg + 0.7
    z = 0.65 * cauchy * np.exp(1j * angles)

    dcoeffs = a[1:] * np.arange(1, deg + 1)
    bound = 4.0 * cauchy

    def pval(x):
        acc = np.full(x.shape, a[-1], dtype=np.complex128)
        for k in range(deg - 1, -1, -1):
            acc = acc * x + a[k]
        return acc

    def dval(x):
        acc = np.full(x.shape, dcoeffs[-1], dtype=np.complex128)
        for k in range(deg - 2, -1, -1):
            acc = acc * x + dcoeffs[k]
        return acc

    amag = np.abs(a)

    def good(x, px):
        """Residual acceptance relative to the evaluation magnitude
        sum |a_j| |x|^j, which is the backward-error scale: a root passes at
        the stated tolerance, or at the rounding floor of evaluating p when
        that floor is the larger of the two."""
        growth = np.full(x.shape, amag[-1])
        xm = np.abs(x)
        for k in range(deg - 1, -1, -1):
            growth = growth * xm + amag[k]
        floor = 8.0 * (deg + 1) * np.finfo(float).eps
        # the 1e-300 clamp keeps denormal-range scales satisfiable at all
        return np.abs(px) <= np.maximum(np.maximum(tol, floor) * growth,
                                        1e-300)

    converged = False
    for _ in range(max_sweeps):
        pv = pval(z)
        active = ~good(z, pv)
        if not active.any():
            converged = True
            break
        dv = dval(z)
        dv = np.where(dv == 0, 1e-300, dv)
        w = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = (1.0 / diff).sum(axis=1)
        denom = 1.0 - w * s
        denom = np.where(denom == 0, 1e-300, denom)
        step = np.where(active, w / denom, 0.0)
        z = z - step
        # keep runaway iterates within the root bound
        far = np.abs(z) > bound
        if far.any():
            z[far] = bound * z[far] / np.abs(z[far])
        if np.max(np.abs(step)) <= 1e-16 * (1.0 + np.max(np.abs(z))):
            # Early exit on stagnation, but only once residuals pass: steps
            # below this absolute floor can still make progress toward roots
            # of much smaller magnitude, so a failed check keeps sweeping.
            if bool(good(z, pval(z)).all()):
                converged = True
                break
    else:
        converged = bool(good(z, pval(z)).all())
    if not converged:
        raise NoConvergence(
            f"root iteration did not reach residual {tol:g} in {max_sweeps} sweeps "
            f"(degree {deg + lead_zero})")
    out = zeros_at_origin + tuple(complex(v) for v in z)
    return tuple(sorted(out, key=lambda r: (r.real, r.imag)))


# --------------------------------------------------------------------------
# rational maps
# --------------------------------------------------------------------------


class RationalMap:
    """Reduced quotient of two polynomials.

    Use :func:`rat_make` to build one; the constructor assumes the arguments
    are already reduced and normalised.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        self.num = num
        self.den = den

    def __call__(self, z):
        return rat_eval(self, z)

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree <= 0

    def derivative(self) -> "RationalMap":
        return rat_derivative(self)

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"RationalMap({list(self.num.coeffs)!r}, {list(self.den.coeffs)!r})"


def identity_map() -> RationalMap:
    return RationalMap(Polynomial.identity(), Polynomial.one())


def constant_map(value: complex) -> RationalMap:
    return RationalMap(Polynomial((value,)), Polynomial.one())


def poly_map(p: Polynomial) -> RationalMap:
    return RationalMap(p, Polynomial.one())


def _clusters(p: Polynomial, roots: Sequence[complex]):
    """Group nearby root estimates and polish each group's center.

    A root of multiplicity m comes back from the solver as a scatter of m
    estimates around the true value (the float coefficients split it into m
    simple roots).  The cluster center is a simple, well-conditioned root of
    the (m-1)-th derivative, so a few plain Newton steps on that derivative
    pin it down to near machine precision; matching numerator/denominator
    factors then agree far inside the cancellation tolerance.
    """
    groups: list[list[complex]] = []
    for r in roots:
        joined = None
        for g in groups:
            if any(abs(r - s) <= 1e-4 * (1.0 + abs(r)) for s in g):
                if joined is None:
                    g.append(r)
                    joined = g
                else:
                    joined.extend(g)
                    g.clear()
        if joined is None:
            groups.append([r])
    derivs = [p]
    out = []
    for g in groups:
        if not g:
            continue
        m = len(g)
        x = sum(g) / m
        while len(derivs) <= m:
            derivs.append(derivs[-1].derivative())
        q, dq = derivs[m - 1], derivs[m]
        for _ in range(40):
            dv = dq(x)
            if dv == 0:
                break
            step = q(x) / dv
            x -= step
            if abs(step) <= 1e-14 * (1.0 + abs(x)):
                break
        if abs(x - sum(g) / m) > 10.0 * (1e-4 * (1.0 + abs(x))):
            # polishing escaped the cluster; fall back to the raw mean
            x = sum(g) / m
        out.append((x, m))
    return out


def _match_common_roots(p_num: Polynomial, rn: Sequence[complex],
                        p_den: Polynomial, rd: Sequence[complex]):
    """Pair polished numerator clusters with denominator clusters.

    Returns (num_value, den_value, count) triples; count copies of the
    linear factor are removed from each side.
    """
    cn = _clusters(p_num, rn)
    cd = list(_clusters(p_den, rd))
    triples = []
    for r, mn in cn:
        best, best_dist = -1, np.inf
        for j, (s, _) in enumerate(cd):
            dist = abs(r - s)
            if dist < best_dist:
                best, best_dist = j, dist
        if best >= 0 and best_dist <= CANCEL_REL * (1.0 + abs(r)):
            s, md = cd.pop(best)
            triples.append((r, s, min(mn, md)))
    return triples


def rat_make(num: Polynomial, den: Polynomial) -> RationalMap:
    """Reduce and normalise num/den into a RationalMap.

    Common roots are matched within a relative tolerance and divided out of
    each polynomial separately (each by its own root value, which keeps the
    deflation well conditioned).  The denominator is then scaled so its first
    significant coefficient equals 1.
    """
    if den.is_zero():
        raise ZeroDenominator("denominator is the zero polynomial")
    if num.is_zero():
        return RationalMap(Polynomial.zero(), Polynomial.one())

    if num.degree >= 1 and den.degree >= 1:
        try:
            rn = poly_roots(num)
            rd = poly_roots(den)
        except NoConvergence:
            # Leave the quotient unreduced rather than fail the whole
            # construction; un-cancelled common factors only cost degree.
            rn = rd = ()
        triples = _match_common_roots(num, rn, den, rd)
        for r, s, count in triples:
            for _ in range(count):
                if num.degree < 1 or den.degree < 1:
                    break
                num = num.deflate(r)
                den = den.deflate(s)
        if triples and num.is_zero():
            return RationalMap(Polynomial.zero(), Polynomial.one())

    dc = den.coeffs
    mags = np.abs(dc)
    significant = np.nonzero(mags > TRIM_REL * mags.max())[0]
    pivot = dc[significant[0]] if significant.size else dc[np.argmax(mags)]
    return RationalMap(Polynomial(num.coeffs / pivot), Polynomial(dc / pivot))


def rat_eval(R: RationalMap, z):
    """Evaluate on the extended plane; returns INF at poles and handles z=INF."""
    if is_inf(z):
        dn, dd = R.num.degree, R.den.degree
        if R.num.is_zero():
            return 0.0 + 0.0j
        if dn > dd:
            return INF
        if dn < dd:
            return 0.0 + 0.0j
        return complex(R.num.leading() / R.den.leading())
    if isinstance(z, np.ndarray):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return R.num(z) / R.den(z)
    nv = R.num(complex(z))
    dv = R.den(complex(z))
    if dv == 0:
        if nv == 0:
            # Should not survive reduction; fall back to one l'Hopital round.
            nv = R.num.derivative()(complex(z))
            dv = R.den.derivative()(complex(z))
            if dv == 0:
                return INF
            return nv / dv
        return INF
    return nv / dv


def _substitute(p: Polynomial, A: Polynomial, B: Polynomial, m: int) -> Polynomial:
    """sum_i p_i * A**i * B**(m-i), the homogenised substitution z -> A/B."""
    out = Polynomial.zero()
    apow = Polynomial.one()
    bpows = [Polynomial.one()]
    for _ in range(m):
        bpows.append(bpows[-1] * B)
    c = p.coeffs
    for i in range(c.size):
        if c[i] != 0:
            out = out + complex(c[i]) * (apow * bpows[m - i])
        if i < c.size - 1:
            apow = apow * A
    return out


def rat_combine(op: str, R1: RationalMap, R2: RationalMap) -> RationalMap:
    n1, d1, n2, d2 = R1.num, R1.den, R2.num, R2.den
    if op == "add":
        return rat_make(n1 * d2 + n2 * d1, d1 * d2)
    if op == "sub":
        return rat_make(n1 * d2 - n2 * d1, d1 * d2)
    if op == "mul":
        return rat_make(n1 * n2, d1 * d2)
    if op == "div":
        if R2.is_zero():
            raise ZeroDenominator("division by the zero map")
        return rat_make(n1 * d2, d1 * n2)
    if op == "compose":
        m = max(n1.degree, d1.degree, 0)
        return rat_make(_substitute(n1, n2, d2, m), _substitute(d1, n2, d2, m))
    raise ValueError(f"unknown operation {op!r}")


def rat_derivative(R: RationalMap) -> RationalMap:
    n, d = R.num, R.den
    return rat_make(n.derivative() * d - n * d.derivative(), d * d)


def maps_close(R1: RationalMap, R2: RationalMap, rel: float = 1e-9) -> bool:
    """Coefficient-wise comparison of two reduced maps up to joint scaling."""
    a, b = R1.num.coeffs, R2.num.coeffs
    c, d = R1.den.coeffs, R2.den.coeffs
    if a.size != b.size or c.size != d.size:
        return False
    scale = max(np.abs(b).max(initial=0.0), np.abs(d).max(initial=0.0), 1.0)
    return bool(np.all(np.abs(a - b) <= rel * scale)
                and np.all(np.abs(c - d) <= rel * scale))
