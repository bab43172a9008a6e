import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_form
from ndyn.builder import build_operator, conjugated_form
from ndyn.conjugate import (Mobius, check_iota_symmetry, check_lambda_odd,
                            extract_normal_form, make_form, mobius_conjugate,
                            standard_tau)
from ndyn.errors import NotPalindromic
from ndyn.poly import INF, Polynomial, is_inf, maps_close, rat_eval, rat_make


def test_tau_sends_the_roots_to_zero_and_infinity():
    for c in (1.0, 2.0 - 1.0j, -3.0):
        tau = standard_tau(c)
        r = np.sqrt(complex(c))
        assert is_inf(tau(r))
        assert abs(tau(-r)) <= 1e-12
        assert abs(tau(INF) - 1.0) <= 1e-12


def test_mobius_compose_inverse():
    m = Mobius(2.0, 1.0, 1.0, -1.0)
    both = m.compose(m.inverse())
    z = 0.3 + 0.9j
    assert abs(both(z) - z) <= 1e-12


@settings(max_examples=10, deadline=None)
@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10,
                          allow_nan=False, allow_infinity=False))
def test_newton_conjugates_to_the_square(c):
    R = build_operator("newton", d=2, c=c)
    O = mobius_conjugate(R, standard_tau(c))
    square = rat_make(Polynomial((0.0, 0.0, 1.0)), Polynomial((1.0,)))
    assert maps_close(O, square, rel=1e-10)


def test_extraction_reads_shape_and_coefficients():
    O = conjugated_form("traub")
    assert (O.n, O.k, O.sign) == (3, 1, 1)
    assert abs(O.a[0] - 2.0) <= 1e-12
    R = O.reconstruct()
    got = extract_normal_form(R)
    assert (got.n, got.k) == (3, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_roundtrip_random_forms(seed):
    rng = np.random.default_rng(seed)
    form = random_form(rng)
    back = extract_normal_form(form.reconstruct())
    assert (back.n, back.k, back.sign) == (form.n, form.k, form.sign)
    err = max((abs(x - y) for x, y in zip(back.a, form.a)), default=0.0)
    assert err <= 1e-9 * max(1.0, max((abs(v) for v in form.a), default=1.0))


def test_degenerate_sum_reduces_with_sign_flip():
    # numerator coefficient sum zero puts a root at z=1 that cancels;
    # here the quotient then drops a second shared factor, hence k=1
    a = (2.0, -1.0, -2.0)
    form = make_form(4, a)
    assert form.degenerate
    reduced = extract_normal_form(form.reconstruct())
    assert reduced.sign == -1
    assert reduced.k < len(a)
    assert abs(rat_eval(reduced.reconstruct(), 1.0) + 1.0) <= 1e-9
    assert abs(rat_eval(reduced.reconstruct(), -1.0) - 1.0) <= 1e-9


def test_make_form_rejects_zero_bottom_coefficient():
    with pytest.raises(Exception):
        make_form(3, (1.0, 0.0))


def test_iota_symmetry_detection():
    good = conjugated_form("king", {"beta": 0.3}).reconstruct()
    assert check_iota_symmetry(good)
    bad = rat_make(Polynomial((1.0, 0.0, 1.0)), Polynomial((1.0,)))  # z^2+1
    assert not check_iota_symmetry(bad)


def test_lambda_odd_detection():
    cube = rat_make(Polynomial((0.0, 0.0, 0.0, 1.0)), Polynomial((1.0,)))
    assert check_lambda_odd(cube, 2)      # (-z)^3 == -z^3
    square = rat_make(Polynomial((0.0, 0.0, 1.0)), Polynomial((1.0,)))
    assert not check_lambda_odd(square, 2)


def test_non_palindromic_method_refused():
    with pytest.raises(NotPalindromic):
        conjugated_form("steffensen")
    with pytest.raises(NotPalindromic):
        conjugated_form("chun", {"alpha": 1.0})
