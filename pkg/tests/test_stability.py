import numpy as np
import pytest

from ndyn.builder import catalog_entry
from ndyn.conjugate import make_form
from ndyn.errors import (DegenerateFamily, NonRealCoefficients,
                         NonlinearDependence, NotAFixedPoint)
from ndyn.stability import (classify_strange_at, linearize,
                            stability_region_z1, stability_region_zm1)


def _producer(name):
    return catalog_entry(name).stability_producer


def test_linearize_reads_coefficient_lines():
    lc = linearize(_producer("chebyshev-halley"))
    assert (lc.n, lc.k) == (3, 1)
    assert np.allclose(lc.A, [2.0]) and np.allclose(lc.B, [-2.0])

    lc = linearize(_producer("king"))
    assert np.allclose(lc.A, [4.0, 5.0]) and np.allclose(lc.B, [1.0, 2.0])


def test_linearize_rejects_nonlinear_family():
    with pytest.raises(NonlinearDependence):
        linearize(_producer("os3"))


def test_linearize_rejects_complex_lines():
    def family(t):
        return make_form(2, (1.0j + t,))
    with pytest.raises(NonRealCoefficients):
        linearize(family)


def test_circle_region_with_attracting_inside():
    reg = stability_region_z1(linearize(_producer("chebyshev-halley")))
    assert reg.kind == "circle"
    assert abs(reg.center - 13.0 / 6.0) <= 1e-12
    assert abs(reg.radius - 1.0 / 3.0) <= 1e-12
    assert reg.attracting_side == "inside"
    assert abs(reg.superattracting_parameter - 2.0) <= 1e-12
    assert reg.verdict(2.1) == "attracting"
    assert reg.verdict(0.0) == "repelling"
    boundary = 13.0 / 6.0 + (1.0 / 3.0) * np.exp(0.4j)
    assert reg.verdict(boundary) == "boundary"


def test_circle_region_with_attracting_outside():
    reg = stability_region_z1(linearize(_producer("c-family")))
    assert reg.kind == "circle"
    assert abs(reg.center - 3.0) <= 1e-9
    assert abs(reg.radius - 8.0) <= 1e-9
    assert reg.attracting_side == "outside"
    assert reg.verdict(3.0) == "repelling"
    assert reg.verdict(20.0) == "attracting"


def test_everywhere_superattracting_family():
    reg = stability_region_z1(linearize(_producer("os4")))
    assert reg.superattracting_everywhere
    assert reg.verdict(0.37 - 2.0j) == "attracting"


def test_degenerate_family_refused():
    with pytest.raises(DegenerateFamily):
        stability_region_z1(linearize(_producer("os5")))


def test_mirror_target_needs_odd_parity():
    lc = linearize(_producer("king"))      # n + k = 6
    reg = stability_region_zm1(lc)
    assert reg.kind == "not-applicable"
    assert reg.verdict(1.0) == "not-applicable"


def test_half_plane_at_the_mirror_target():
    def family(t):
        t = complex(t)
        if abs(t) < 1e-14:
            return make_form(3, ())    # a_1 = 0 pulls z out of the quotient
        return make_form(2, (t,))
    lc = linearize(family)
    reg = stability_region_zm1(lc)
    assert reg.kind == "half-plane"
    assert abs(reg.threshold - 2.0) <= 1e-12
    assert reg.attracting_side == "right"
    assert reg.verdict(3.0) == "attracting"
    assert reg.verdict(1.0) == "repelling"


def test_constant_family_at_the_mirror_target():
    def family(t):
        return make_form(2, (5.0 + 0.0 * t,))
    reg = stability_region_zm1(linearize(family))
    assert reg.kind == "constant"
    assert reg.attracting_side == "everywhere"


def test_multiplier_against_region_prediction():
    rng = np.random.default_rng(11)
    entry = catalog_entry("king")
    reg = stability_region_z1(linearize(entry.stability_producer))
    for _ in range(60):
        t = complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
        verdict = reg.verdict(t)
        if verdict == "boundary":
            continue
        lam, cls = classify_strange_at(entry.stability_producer(t), 1.0)
        assert abs(lam - reg.multiplier(t)) <= 1e-8 * max(1.0, abs(lam))
        if verdict == "attracting":
            assert cls in ("attracting", "superattracting")
        elif verdict == "repelling":
            assert cls == "repelling"


def test_classify_refuses_non_fixed_target():
    form = make_form(4, (2.0, 3.0))        # n + k even: -1 not fixed
    with pytest.raises(NotAFixedPoint):
        classify_strange_at(form, -1.0)


def test_superattracting_parameter_is_sharp():
    entry = catalog_entry("king")
    lam, cls = classify_strange_at(entry.stability_producer(-4.0), 1.0)
    assert cls == "superattracting"
    assert abs(lam) <= 1e-9
