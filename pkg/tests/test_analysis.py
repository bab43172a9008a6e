import numpy as np
import pytest

from ndyn.analysis import (classify_multiplier, classify_operator,
                           critical_points, fixed_points,
                           free_critical_points, moebius_sum, multiplier_at,
                           multiplier_at_minus_one_closed,
                           multiplier_at_one_closed, multiplier_of_cycle)
from ndyn.builder import conjugated_form
from ndyn.conjugate import make_form
from ndyn.errors import NotACycle, PoleAtOne
from ndyn.poly import INF, Polynomial, is_inf


def _by_point(records, z, tol=1e-6):
    if is_inf(z):
        hits = [r for r in records if is_inf(r.point)]
    else:
        hits = [r for r in records if not is_inf(r.point)
                and abs(r.point - z) <= tol]
    assert len(hits) == 1, f"no unique record at {z}"
    return hits[0]


def test_fixed_points_of_the_shifted_cube():
    # z^3 (z+2) / (1+2z): fixed at 0, 1, infinity, and the golden pair
    form = make_form(3, (2.0,))
    recs = fixed_points(form.reconstruct())
    assert len(recs) == 5
    golden = [(-3 - np.sqrt(5)) / 2, (-3 + np.sqrt(5)) / 2]
    origin = _by_point(recs, 0.0)
    assert origin.cls == "superattracting" and not origin.strange
    one = _by_point(recs, 1.0)
    assert abs(one.multiplier - 8.0 / 3.0) <= 1e-9 and one.strange
    inf_rec = _by_point(recs, INF)
    assert inf_rec.cls == "superattracting"
    for g in golden:
        r = _by_point(recs, g)
        assert abs(r.multiplier - 6.0) <= 1e-8 and r.strange


def test_classify_multiplier_bands():
    assert classify_multiplier(0.0) == "superattracting"
    assert classify_multiplier(5e-11) == "superattracting"
    assert classify_multiplier(0.4) == "attracting"
    assert classify_multiplier(1.7) == "repelling"
    assert classify_multiplier(np.exp(0.3j)) == "indifferent"
    third = np.exp(2j * np.pi / 3)
    assert classify_multiplier(third) == "parabolic-candidate"


def test_multiplier_at_infinity_superattracting():
    R = make_form(4, (3.0,)).reconstruct()
    assert abs(multiplier_at(R, INF)) <= 1e-12


def test_critical_points_two_step_family():
    R = conjugated_form("king", {"beta": 1.0}).reconstruct()
    recs = critical_points(R)
    assert _by_point(recs, 0.0).multiplicity == 3
    assert _by_point(recs, INF).multiplicity == 3
    minus = _by_point(recs, -1.0)
    assert minus.multiplicity == 2 and minus.partner == -1.0
    frees = [r for r in recs if r.free and not is_inf(r.point)
             and abs(r.point + 1) > 1e-6]
    assert len(frees) == 2
    prod = frees[0].point * frees[1].point
    assert abs(prod - 1.0) <= 1e-9
    assert abs(frees[0].partner - frees[1].point) <= 1e-9


def test_anchored_multiple_critical_point_stays_together():
    # at beta=0 the free pair lands exactly on -1, multiplicity four
    R = conjugated_form("king", {"beta": 0.0}).reconstruct()
    recs = critical_points(R)
    minus = _by_point(recs, -1.0)
    assert minus.multiplicity == 4
    assert len(free_critical_points(R)) == 1


def test_moebius_sum_closed_forms():
    rng = np.random.default_rng(5)
    for _ in range(20):
        k = int(rng.integers(1, 7))
        roots = []
        while len(roots) < k:
            u = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if min(abs(u - 1), abs(u + 1)) > 0.05:
                roots.append(u)
        P = Polynomial.from_roots(roots)
        plus = moebius_sum(P, "+")
        want = sum((1 + u) / (1 - u) for u in roots)
        assert abs(plus - want) <= 1e-8 * max(1.0, abs(want))
        minus = moebius_sum(P, "-")
        want = sum((1 - u) / (1 + u) for u in roots)
        assert abs(minus - want) <= 1e-8 * max(1.0, abs(want))


def test_moebius_sum_pole():
    # coefficient sum zero makes the plus form blow up
    P = Polynomial((-3.0, 2.0, 1.0))
    assert abs(P(1.0)) <= 1e-12
    with pytest.raises(PoleAtOne):
        moebius_sum(P, "+")


def test_closed_multipliers_match_direct_derivative():
    for name, binds in (("king", {"beta": 0.4}),
                        ("chebyshev-halley", {"alpha": 1.3})):
        form = conjugated_form(name, binds)
        lam = multiplier_at_one_closed(form)
        direct = multiplier_at(form.reconstruct(), 1.0)
        assert abs(lam - direct) <= 1e-9 * max(1.0, abs(direct))


def test_minus_one_multiplier_via_parity():
    # n + k odd makes -1 fixed; the closed form matches the derivative
    form = make_form(2, (0.5,))
    lam = multiplier_at_minus_one_closed(form)
    direct = multiplier_at(form.reconstruct(), -1.0)
    assert abs(lam - direct) <= 1e-9 * max(1.0, abs(direct))


def test_two_cycle_multiplier_of_the_degenerate_family():
    form = conjugated_form("os5", {"a": 0.0})
    R = form.reconstruct()
    lam = multiplier_of_cycle(R, (1.0, -1.0))
    assert abs(lam) <= 1e-12
    with pytest.raises(NotACycle):
        multiplier_of_cycle(R, (0.5, 2.0))


def test_classify_operator_shapes():
    info = classify_operator(conjugated_form("king", {"beta": 1.0}))
    assert info["parity"] == "even"
    assert info["minus_one"] == "preimage of z=1"
    info = classify_operator(conjugated_form("os5", {"a": 0.0}))
    assert info["degenerate"]
    assert "cycle_multiplier" in info
    strange = info["strange_fixed_points"]
    assert all(abs(r.point) > 1e-12 for r in strange)
