import pytest
from hypothesis import assume, given, settings, strategies as st

from dmforms.algebra import FieldParams, TPoly
from dmforms.errors import (DomainError, IllegalSubstitution, InexactDivision, NotInvertible,
                            VariableMismatch)
from dmforms.series import USeries

import oracles

F3 = FieldParams(3)
F9 = FieldParams(3, 2)
T = F3.T

coef = st.lists(st.integers(0, 2), max_size=4).map(lambda cs: TPoly(F3, 0, cs))


def useries(min_val=0, max_val=3, maxlen=10):
    return st.builds(
        lambda val, cs, extra: USeries.from_coeffs(F3, val, val + len(cs) + extra, cs),
        st.integers(min_val, max_val), st.lists(coef, min_size=1, max_size=maxlen),
        st.integers(0, 3))


def naive(s, N):
    """Oracle form, zero-filled past the precision of ``s``.

    The fill never reaches the checked window: in a product the unknown
    terms of one factor pair only with exponents at or above the result's
    precision.
    """
    known = oracles.as_lists(s, min(N, s.prec))
    return known + [[] for _ in range(N - len(known))]


# -- construction and inspection ----------------------------------------


def test_zero_series_valuation_is_prec():
    z = USeries.zero(F3, 7)
    assert z.val == 7 and z.prec == 7 and z.is_zero()
    assert USeries.from_terms(F3, {3: 0}, 5).val == 5


def test_coeff_beyond_precision():
    s = USeries.from_terms(F3, {1: 1}, 4)
    assert s.coeff(3).is_zero()
    with pytest.raises(DomainError):
        s.coeff(4)


def test_terms_above_prec_dropped():
    s = USeries.from_terms(F3, {1: T, 6: 1}, 5)
    assert s.terms() == [(1, T)]


def test_text_rendering():
    s = USeries.from_terms(F3, {2: 1, 6: -1, 8: -T}, 10)
    assert s.to_text() == "u^2 - u^6 - T*u^8 + O(u^10)"
    c = USeries.from_terms(F3, {0: T + 1, 1: -1, -1: T ** 2}, 3)
    assert c.to_text() == "T^2*u^-1 + (1 + T) - u + O(u^3)"
    assert USeries.zero(F3, 4).to_text() == "O(u^4)"
    assert USeries.from_terms(F3, {1: 1}, 3, var="u_tau").to_text() == "u_tau + O(u_tau^3)"


@given(useries(-2, 3))
@settings(max_examples=50)
def test_json_round_trip(s):
    assert USeries.from_json(F3, s.to_json()) == s


# -- arithmetic -------------------------------------------------------


@given(useries(), useries())
@settings(max_examples=80)
def test_mul_matches_naive(a, b):
    c = a * b
    assert c.prec == min(a.prec + b.val, b.prec + a.val)
    N = c.prec
    expect = oracles.smul(naive(a, N), naive(b, N), 3)
    assert naive(c, N) == expect[:N]


@given(useries(), useries())
@settings(max_examples=60)
def test_add_precision_and_values(a, b):
    c = a + b
    assert c.prec == min(a.prec, b.prec)
    N = c.prec
    assert naive(c, N) == oracles.sadd(naive(a, N), naive(b, N), 3)


@given(useries(0, 0))
@settings(max_examples=60)
def test_invert_matches_leading_unit(a):
    if a.is_zero() or not a.leading().is_unit():
        with pytest.raises(NotInvertible):
            a.invert()
        return
    inv = a.invert()
    assert inv.val == -a.val and inv.prec == a.prec - 2 * a.val
    prod = a * inv
    assert prod.agrees(USeries.one(F3, prod.prec))


def test_invert_laurent_precision():
    s = USeries.from_terms(F3, {2: 1, 4: T}, 12)
    inv = s.invert()
    assert inv.val == -2 and inv.prec == 12 - 4
    assert (s * inv).agrees(USeries.one(F3, 20), hi=inv.prec + 2)


def test_invert_zero_and_non_unit():
    with pytest.raises(NotInvertible):
        USeries.zero(F3, 5).invert()
    with pytest.raises(NotInvertible):
        USeries.from_terms(F3, {0: T + 1}, 5).invert()


@given(useries(0, 2, 6), st.integers(0, 5))
@settings(max_examples=40)
def test_pow_is_repeated_mul(a, e):
    acc = USeries.one(F3, 6 * a.prec + 6)
    for _ in range(e):
        acc = acc * a
    got = a ** e
    assert got.agrees(acc, hi=min(got.prec, acc.prec))


def test_variable_mismatch():
    a = USeries.from_terms(F3, {1: 1}, 5)
    b = a.rename("u_tau")
    with pytest.raises(VariableMismatch):
        a + b
    with pytest.raises(VariableMismatch):
        a * b


def test_scalar_exact_div():
    s = USeries.from_terms(F3, {1: T ** 2 - T, 3: T}, 6)
    assert s.scalar_exact_div(T).terms() == [(1, T - 1), (3, TPoly.const(F3, 1))]
    with pytest.raises(InexactDivision):
        USeries.from_terms(F3, {1: 1, 2: T}, 6).scalar_exact_div(T)
    with pytest.raises(InexactDivision):
        s.scalar_exact_div(T + 1)


def test_truncate_shift_rename():
    s = USeries.from_terms(F3, {1: 1, 2: T}, 6)
    assert s.truncate(2).terms() == [(1, TPoly.const(F3, 1))] and s.truncate(2).prec == 2
    assert s.truncate(60).prec == 6
    sh = s.shift(3)
    assert sh.val == 4 and sh.prec == 9
    assert s.rename("u0").var == "u0"
    with pytest.raises(DomainError):
        s.rename("v")


# -- substitution and Theta -------------------------------------------


@given(useries(0, 2, 6), useries(1, 2, 6))
@settings(max_examples=40)
def test_substitute_matches_naive_horner(f, g):
    assume(not g.is_zero())
    h = f.substitute(g)
    N = h.prec
    gl = naive(g, N)
    acc = oracles.szero(N)
    for e in range(f.val, f.prec):
        if e * g.val >= N:
            break
        c = f.coeff(e)
        if c:
            cl = [int(c.coeff(j).coords[0]) for j in range(c.hi + 1)]
            pe = [[1]] + [[] for _ in range(N - 1)]
            for _ in range(e):
                pe = oracles.smul(pe, gl, 3)
            acc = oracles.sadd(acc, oracles.sscale(pe, cl, 3), 3)
    assert naive(h, N) == acc


def test_substitute_precision_rule():
    f = USeries.from_terms(F3, {0: 1, 1: 1}, 5)
    g = USeries.from_terms(F3, {2: 1}, 7)
    assert f.substitute(g).prec == min(5 * 2, 7)
    f1 = USeries.from_terms(F3, {2: 1}, 5)
    assert f1.substitute(g).prec == min(5 * 2, 1 * 2 + 7)


def test_illegal_substitution():
    f = USeries.from_terms(F3, {1: 1}, 5)
    with pytest.raises(IllegalSubstitution):
        f.substitute(USeries.from_terms(F3, {0: 1}, 5))
    with pytest.raises(IllegalSubstitution):
        f.substitute(USeries.zero(F3, 5))


def test_theta_is_minus_u2_d_du():
    s = USeries.from_terms(F3, {-2: 1, 1: T, 2: 1, 3: 1}, 6)
    th = s.theta()
    # -e u^(e+1), reduced mod 3: e=-2 -> 2, e=1 -> -T, e=2 -> -2 = 1, e=3 -> 0
    assert th.terms() == [(-1, TPoly.const(F3, 2)), (2, -T), (3, TPoly.const(F3, 1))]
    assert th.prec == 7


@given(useries(-1, 2, 6), useries(-1, 2, 6))
@settings(max_examples=40)
def test_theta_is_a_derivation(a, b):
    lhs = (a * b).theta()
    rhs = a.theta() * b + a * b.theta()
    assert lhs.agrees(rhs, hi=min(lhs.prec, rhs.prec))


def test_series_over_f9():
    a = F9.elem((0, 1))
    s = USeries.from_terms(F9, {0: 1, 1: TPoly.const(F9, a)}, 6)
    inv = s.invert()
    assert (s * inv).agrees(USeries.one(F9, 6))
    assert inv.coeff(1) == TPoly.const(F9, -a)
    assert inv.coeff(2) == TPoly.const(F9, a * a)


def test_first_mismatch_window():
    a = USeries.from_terms(F3, {1: 1, 4: 1}, 8)
    b = USeries.from_terms(F3, {1: 1, 5: 1}, 6)
    assert a.first_mismatch(b)[0] == 4
    assert a.agrees(b, hi=4)
    assert a.first_mismatch(b, lo=5)[0] == 5
