"""Fixed points, critical points, multipliers, and classification reports.

Conventions for normal-form operators: 0 and infinity are the superattracting
images of the two roots being sought, so any other fixed point is "strange"
and any critical point outside {0, infinity} is "free".  Free critical points
of a map commuting with iota(z) = 1/z come in pairs kappa, 1/kappa.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (NotACycle, PoleAtMinusOne, PoleAtOne)
from .poly import (INF, Polynomial, RationalMap, _clusters, is_inf,
                   poly_roots, rat_combine, rat_derivative, rat_eval)

SUPERATTRACTING_TOL = 1e-10
INDIFFERENCE_BAND = 1e-8
FIXED_RESIDUAL = 1e-8
PAIR_TOL = 1e-6


@dataclass(frozen=True)
class FixedPointRecord:
    point: object            # complex or INF
    multiplier: complex
    cls: str                 # attracting | superattracting | repelling |
    #                          indifferent | parabolic-candidate
    strange: bool


@dataclass(frozen=True)
class CriticalPointRecord:
    point: object            # complex or INF
    multiplicity: int
    free: bool
    partner: Optional[object] = None


def classify_multiplier(lam: complex) -> str:
    mag = abs(lam)
    if mag <= SUPERATTRACTING_TOL:
        return "superattracting"
    if abs(mag - 1.0) <= INDIFFERENCE_BAND:
        for q in range(1, 17):
            if abs(lam ** q - 1.0) <= 1e-6:
                return "parabolic-candidate"
        return "indifferent"
    return "attracting" if mag < 1.0 else "repelling"


def _iota_map() -> RationalMap:
    return RationalMap(Polynomial.one(), Polynomial.identity())


def _chart_factor(R: RationalMap, src, dst) -> complex:
    """Derivative of R at src in charts adapted to src/dst being infinite."""
    if not is_inf(src) and not is_inf(dst):
        return complex(rat_eval(rat_derivative(R), src))
    if not is_inf(src) and is_inf(dst):
        flipped = RationalMap(R.den, R.num)  # 1/R
        return complex(rat_eval(rat_derivative(flipped), src))
    if is_inf(src) and not is_inf(dst):
        hooked = rat_combine("compose", R, _iota_map())  # R(1/w)
        return complex(rat_eval(rat_derivative(hooked), 0.0))
    hooked = rat_combine("compose", R, _iota_map())
    flipped = RationalMap(hooked.den, hooked.num)        # 1/R(1/w)
    return complex(rat_eval(rat_derivative(flipped), 0.0))


def multiplier_at(R: RationalMap, point) -> complex:
    """Multiplier of a fixed point, computed in the chart w = 1/z at infinity."""
    return _chart_factor(R, point, point)


def fixed_points(R: RationalMap) -> list:
    """All fixed points with multipliers and classes; one record per point."""
    g = R.num - Polynomial.identity() * R.den
    records = []
    fixes_inf = R.num.degree > R.den.degree
    if not g.is_zero() and g.degree >= 1:
        roots = poly_roots(g)
        for point, _m in _clusters(g, roots):
            lam = multiplier_at(R, point)
            records.append(FixedPointRecord(
                point=complex(point), multiplier=lam,
                cls=classify_multiplier(lam),
                strange=abs(point) > 1e-12))
    if fixes_inf:
        lam = multiplier_at(R, INF)
        records.append(FixedPointRecord(
            point=INF, multiplier=lam, cls=classify_multiplier(lam),
            strange=False))
    return records


def _local_valency_at_inf(R: RationalMap) -> int:
    """Local degree of R at infinity (in the chart w = 1/z)."""
    gap = R.num.degree - R.den.degree
    if gap >= 1:
        return gap
    hooked = rat_combine("compose", R, _iota_map())  # R(1/w), w near 0
    value = rat_eval(hooked, 0.0)
    if is_inf(value):
        flipped = RationalMap(hooked.den, hooked.num)
        shifted = flipped.num
    else:
        shifted = hooked.num - Polynomial((complex(value),)) * hooked.den
    order = 0
    c = shifted.coeffs
    scale = np.abs(c).max() if c.size else 0.0
    while order < c.size and abs(c[order]) <= 1e-9 * scale:
        order += 1
    return max(order, 1)


def critical_points(R: RationalMap) -> list:
    """Zeros of R' with multiplicity, plus infinity when it is critical.

    Free critical points (outside {0, infinity}) are matched with their
    iota partners 1/kappa when present.
    """
    D = rat_derivative(R)
    records = []
    finite: list[tuple[complex, int]] = []
    if not D.num.is_zero() and D.num.degree >= 1:
        c = D.num.coeffs
        scale = float(np.abs(c).max())
        lead_zero = 0
        while lead_zero < c.size - 1 and abs(c[lead_zero]) <= 1e-12 * scale:
            lead_zero += 1
        if lead_zero:
            finite.append((0.0 + 0.0j, lead_zero))
        rest = Polynomial(c[lead_zero:])
        # a multiple critical point parked at +1 or -1 (common in the
        # palindromic shape) scatters badly under the root solver, so
        # divide those factors out analytically first
        for anchor in (1.0, -1.0):
            mult = 0
            while rest.degree >= 1:
                tot = float(np.abs(rest.coeffs).sum())
                if abs(rest(anchor)) > 1e-8 * tot:
                    break
                rest = rest.deflate(anchor)
                mult += 1
            if mult:
                finite.append((complex(anchor), mult))
        if rest.degree >= 1:
            finite.extend(_clusters(rest, poly_roots(rest)))
    val_inf = _local_valency_at_inf(R)
    points = [p for p, _ in finite]
    for point, mult in finite:
        free = abs(point) > 1e-12
        partner = None
        if free:
            inv = 1.0 / point
            for q in points:
                if abs(q - inv) <= PAIR_TOL * (1.0 + abs(inv)):
                    partner = complex(q)
                    break
            if partner is None and val_inf >= 2 and abs(inv) < 1e-9:
                partner = INF
        records.append(CriticalPointRecord(
            point=complex(point), multiplicity=int(mult), free=free,
            partner=partner))
    if val_inf >= 2:
        records.append(CriticalPointRecord(
            point=INF, multiplicity=val_inf - 1, free=False, partner=None))
    return records


def free_critical_points(R: RationalMap) -> list:
    return [r for r in critical_points(R) if r.free]


def _step(R: RationalMap, point):
    if is_inf(point):
        hooked = rat_combine("compose", R, _iota_map())
        return rat_eval(hooked, 0.0)
    return rat_eval(R, point)


def multiplier_of_cycle(R: RationalMap, cycle: Sequence) -> complex:
    """Product of chart derivatives along an R-invariant cycle."""
    pts = list(cycle)
    if not pts:
        raise NotACycle("empty cycle")
    for i, z in enumerate(pts):
        nxt = pts[(i + 1) % len(pts)]
        value = _step(R, z)
        if is_inf(nxt):
            if not is_inf(value):
                raise NotACycle(f"point {z} maps to {value}, expected INF")
        else:
            if is_inf(value):
                raise NotACycle(f"point {z} maps to INF, expected {nxt}")
            if abs(value - nxt) > FIXED_RESIDUAL * (1.0 + abs(nxt)):
                raise NotACycle(f"point {z} maps to {value}, expected {nxt}")
    lam = 1.0 + 0.0j
    for i, z in enumerate(pts):
        lam *= _chart_factor(R, z, pts[(i + 1) % len(pts)])
    return lam


# --------------------------------------------------------------------------
# coefficient/root sum identities
# --------------------------------------------------------------------------


def moebius_sum(P: Polynomial, sign: str) -> complex:
    """Closed form of sum (1 + s r_i)/(1 - s r_i) over the roots of P, s=+-1.

    For the monic P = a_k + a_{k-1} z + ... + a_1 z^{k-1} + z^k the sign +
    value is k - 2(a_1 + 2 a_2 + ... + k a_k)/(1 + a_1 + ... + a_k) and the
    sign - value alternates the coefficients.  Pole errors are raised when
    the respective denominator (P at +-1 up to a sign) vanishes.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    c = P.coeffs
    if c.size == 0:
        raise ValueError("zero polynomial")
    k = c.size - 1
    lead = c[-1]
    a = {j: complex(c[k - j] / lead) for j in range(1, k + 1)}
    scale = 1.0 + max((abs(v) for v in a.values()), default=0.0)
    if sign == "+":
        den = 1.0 + sum(a.values())
        if abs(den) <= 1e-12 * scale:
            raise PoleAtOne("coefficient sum vanishes (root at 1)")
        num = sum(j * a[j] for j in a)
        return complex(k - 2.0 * num / den)
    den = 1.0 + sum(((-1.0) ** j) * a[j] for j in a)
    if abs(den) <= 1e-12 * scale:
        raise PoleAtMinusOne("alternating coefficient sum vanishes (root at -1)")
    num = sum(((-1.0) ** j) * j * a[j] for j in a)
    return complex(k - 2.0 * num / den)


def multiplier_at_one_closed(form) -> complex:
    """O'(1) for a normal form, via the coefficient sum identity."""
    P = form.p_coeffs()
    return complex(form.n + moebius_sum(P, "+"))


def multiplier_at_minus_one_closed(form) -> complex:
    """O'(-1) for a normal form with n+k odd, via the sign - identity."""
    P = form.p_coeffs()
    parity = (-1.0) ** (form.n + form.k - 1)
    return complex(parity * (form.n + moebius_sum(P, "-")))


# --------------------------------------------------------------------------
# operator reports
# --------------------------------------------------------------------------


def classify_operator(form) -> dict:
    """Structural report of a normal form: parities, the status of -1 and
    of the degenerate collapse, and every strange fixed point with class."""
    R = form.reconstruct()
    parity_odd = (form.n + form.k) % 2 == 1
    report = {
        "n": form.n,
        "k": form.k,
        "sign": form.sign,
        "degenerate": form.degenerate,
        "order_at_roots": form.n,
        "parity": "odd" if parity_odd else "even",
    }
    if form.sign == -1:
        # reduced collapse: 1 maps to -1
        if parity_odd:
            report["minus_one"] = "on a 2-cycle with z=1"
            report["one"] = "on a 2-cycle with z=-1"
            try:
                report["cycle_multiplier"] = multiplier_of_cycle(
                    R, [1.0 + 0.0j, -1.0 + 0.0j])
            except NotACycle:
                report["cycle_multiplier"] = None
        else:
            report["minus_one"] = "fixed"
            report["one"] = "preimage of z=-1"
    else:
        report["one"] = "fixed"
        report["minus_one"] = "fixed" if parity_odd else "preimage of z=1"
    records = fixed_points(R)
    report["fixed_points"] = records
    report["strange_fixed_points"] = [r for r in records if r.strange]
    return report
