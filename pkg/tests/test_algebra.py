import pytest
from hypothesis import given, settings, strategies as st

from dmforms.algebra import (FieldParams, FqElem, TPoly, exact_div_rows, first_irreducible,
                             is_irreducible, monic_polys)
from dmforms.errors import DivisionByZero, DomainError, InexactDivision

import numpy as np

F3 = FieldParams(3)
F9 = FieldParams(3, 2)
F25 = FieldParams(5, 2)


# -- fields ------------------------------------------------------------


def test_default_modulus_for_f9():
    assert F9.modulus == (1, 0, 1)
    assert F9.q == 9


@pytest.mark.parametrize("p,r", [(3, 1), (3, 2), (3, 3), (5, 2), (7, 2), (11, 1)])
def test_first_irreducible_is_irreducible(p, r):
    m = first_irreducible(p, r)
    assert len(m) == r + 1 and m[-1] == 1
    assert is_irreducible(list(m), p)


def test_reducible_modulus_rejected():
    with pytest.raises(DomainError):
        FieldParams(3, 2, (2, 0, 1))  # x^2 - 1


@pytest.mark.parametrize("p", [2, 4, 9, 1, 0, -3, 65537 * 3])
def test_bad_characteristic(p):
    with pytest.raises(DomainError):
        FieldParams(p)


def test_field_elements_form_a_group():
    els = list(F9.elements())
    assert len(els) == 9
    nonzero = [x for x in els if x]
    for x in nonzero:
        assert x * x.inverse() == F9.one
        assert x ** 8 == F9.one
    # a generator of F_9^* exists
    orders = []
    for x in nonzero:
        n = 1
        while x ** n != F9.one:
            n += 1
        orders.append(n)
    assert max(orders) == 8


def test_zero_has_no_inverse():
    with pytest.raises(DivisionByZero):
        F9.zero.inverse()


def test_elem_text_symmetric_residues():
    assert F9.elem((1, 2)).to_text() == "1 - a"
    assert F3.elem(2).to_text() == "-1"


def test_field_json_round_trip():
    assert FieldParams.from_json(F9.to_json()) == F9


fq9 = st.tuples(st.integers(0, 2), st.integers(0, 2)).map(F9.elem)


@given(fq9, fq9, fq9)
def test_fq_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == F9.zero


@given(fq9)
def test_frobenius_is_additive_and_fixes_fp(a):
    assert (a + F9.one) ** 3 == a ** 3 + F9.one
    assert a ** 9 == a


# -- TPoly -------------------------------------------------------------


def tpolys(field, lo_min=-2, maxlen=5):
    coords = st.lists(st.integers(0, field.p - 1), min_size=field.r, max_size=field.r)
    return st.builds(lambda lo, cs: TPoly(field, lo, [tuple(c) for c in cs]),
                     st.integers(lo_min, 3), st.lists(coords, max_size=maxlen))


@given(tpolys(F9), tpolys(F9), tpolys(F9))
@settings(max_examples=60)
def test_tpoly_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a - b) + b == a


@given(tpolys(F3, lo_min=0), tpolys(F3, lo_min=0))
@settings(max_examples=80)
def test_exact_div_recovers_factor(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


def test_exact_div_inexact_and_zero():
    T = F3.T
    with pytest.raises(InexactDivision):
        (T + 1).exact_div(T - 1)
    # exact in F_q[T, 1/T]
    assert (T + 1).exact_div(T) == T ** -1 + 1
    with pytest.raises(DivisionByZero):
        T.exact_div(TPoly.zero(F3))


def test_canonical_form_and_degree():
    T = F3.T
    z = T - T
    assert z.is_zero() and z.lo == 0 and z.degree is None
    p = (T ** 3 - T).shift(-1)
    assert p.lo == 0 and p.degree == 2
    assert p == T ** 2 - 1


def test_negative_powers_only_for_units():
    T = F3.T
    assert (T ** -2) * T ** 2 == TPoly.const(F3, 1)
    assert ((T * 2) ** -1) == T ** -1 * 2
    with pytest.raises(InexactDivision):
        (T + 1) ** -1


def test_text_is_T_ascending():
    T = F3.T
    assert (T + 1).to_text() == "1 + T"
    assert (T - 1).to_text() == "-1 + T"
    assert (T ** 3 * 2 + T).to_text() == "T - T^3"
    assert TPoly.zero(F3).to_text() == "0"


def test_frobenius_of_tpoly():
    T = F9.T
    a = F9.elem((0, 1))
    f = T * a + 1
    # f -> f^q: T -> T^q, F_q-coefficients fixed
    assert f.frobenius() == f ** 9
    assert f.frobenius() == T ** 9 * a + 1
    assert f.frobenius(2) == f ** 81


@given(tpolys(F25))
@settings(max_examples=40)
def test_tpoly_json_round_trip(a):
    assert TPoly.from_json(F25, a.to_json()) == a


def test_exact_div_rows_vectorised():
    T = F3.T
    b = T ** 2 + 1  # canonical arrays of the divisor start at T^0
    rows = [T ** 2 * b, (T + 1) * b, TPoly.zero(F3)]
    width = 6
    a = np.zeros((3, width, 1), dtype=np.int64)
    for i, x in enumerate(rows):
        if x:
            a[i, x.lo:x.lo + x.array.shape[0]] = x.array
    out = exact_div_rows(F3, a, b.array)
    assert TPoly.from_array(F3, 0, out[0]) == T ** 2
    assert TPoly.from_array(F3, 0, out[1]) == T + 1
    assert not out[2].any()


def test_monic_polys_order_and_count():
    assert [a.to_text() for a in monic_polys(F3, 1)] == ["T", "1 + T", "-1 + T"]
    assert len(list(monic_polys(F3, 2))) == 9
    assert len(list(monic_polys(F3, 2, skip_T_multiples=True))) == 6
    assert len(list(monic_polys(F9, 1))) == 9
