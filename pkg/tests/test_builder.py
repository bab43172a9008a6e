import pytest

from ndyn.builder import (Scheme, SchemeContext, build_operator, catalog_entry,
                          catalog_names, check_infinity_simple,
                          conjugated_form, evaluate_scheme, instantiate,
                          parse_scheme, target_derivative)
from ndyn.errors import (SchemeSyntaxError, UnboundIdentifier, UnknownMethod,
                         ZeroC)
from ndyn.poly import Polynomial, maps_close, rat_eval, rat_make

NEWTON = "next = z - p(z)/p'(z);"


def test_parse_scheme_steps():
    scheme = parse_scheme("y = z - p(z)/p'(z);\nnext = y;")
    assert isinstance(scheme, Scheme)
    assert [name for name, _ in scheme.steps] == ["y", "next"]


def test_parse_rejects_garbage():
    with pytest.raises(SchemeSyntaxError):
        parse_scheme("next = z +* 3;")
    with pytest.raises(SchemeSyntaxError):
        parse_scheme("= z;")


def test_unbound_identifier_reported():
    scheme = parse_scheme("next = z - beta * p(z)/p'(z);")
    ctx = SchemeContext(d=2, c=1.0, bindings={})
    with pytest.raises(UnboundIdentifier):
        instantiate(scheme, ctx)


def test_newton_operator_is_the_classical_map():
    R = build_operator("newton", d=2, c=1.0)
    # z - (z^2 - 1) / (2z) == (z^2 + 1) / (2z)
    want = rat_make(Polynomial((1.0, 0.0, 1.0)), Polynomial((0.0, 2.0)))
    assert maps_close(R, want)


def test_evaluate_scheme_agrees_with_instantiation():
    scheme = parse_scheme(NEWTON)
    ctx = SchemeContext(d=3, c=2.0, bindings={})
    R = instantiate(scheme, ctx)
    for z in (0.7, 1.0 + 0.4j, -2.3):
        direct = evaluate_scheme(scheme, ctx, z)
        assert abs(direct - rat_eval(R, z)) <= 1e-10 * (1.0 + abs(direct))


def test_target_derivative_orders():
    p0 = target_derivative(3, 2.0, 0)     # z^3 - 2
    assert list(p0.coeffs) == [-2.0, 0.0, 0.0, 1.0]
    p2 = target_derivative(3, 2.0, 2)     # 6z
    assert list(p2.coeffs) == [0.0, 6.0]


def test_zero_c_rejected():
    with pytest.raises(ZeroC):
        build_operator("newton", d=2, c=0.0)


def test_unknown_method():
    with pytest.raises(UnknownMethod):
        catalog_entry("household")


def test_catalog_names_stable():
    names = catalog_names()
    assert names[0] == "newton"
    assert len(names) == len(set(names)) == 17
    assert catalog_names() == names


def test_check_infinity_simple_reads_degree_gap():
    R = build_operator("newton", d=2, c=1.0)
    assert check_infinity_simple(R) == "simple"
    O = conjugated_form("newton").reconstruct()
    assert check_infinity_simple(O) == "superattracting-at-inf"


def test_king_coefficients():
    form = conjugated_form("king", {"beta": -1.0})
    assert (form.n, form.k) == (4, 2)
    assert abs(form.a[0] - 3.0) <= 1e-12
    assert abs(form.a[1] - 3.0) <= 1e-12


def test_vanishing_bottom_coefficient_collapses_into_the_power():
    # the fourth coefficient of this family is (5b - 1)/b, zero at b = 1/5;
    # the factor z it releases joins the z^n block
    form = conjugated_form("m4", {"beta": 0.2})
    assert (form.n, form.k) == (5, 3)
    assert [round(v.real, 9) for v in form.a] == [6.0, 14.0, 14.0]

    form = conjugated_form("os2", {"a": -2.8})
    assert (form.n, form.k) == (6, 2)
    assert abs(form.a[0] - 3.2) <= 1e-12
    assert abs(form.a[1] - 2.8) <= 1e-12


def test_degenerate_family_reduces_on_build():
    form = conjugated_form("os5", {"a": 1.0})
    assert form.sign == -1
    assert form.degenerate
    assert (form.n, form.k) == (4, 3)
    want = (8.0, 26.0, 45.0)
    assert max(abs(x - y) for x, y in zip(form.a, want)) <= 1e-9
