import pytest

from dmforms.algebra import FieldParams, TPoly
from dmforms.basis import (PARITY_CASES, canonical_basis, canonical_basis_plus, d_plus_of,
                           parity_case, plus_dimension, plus_holomorphic_basis, plus_seed,
                           poly_text, r_of)
from dmforms.errors import DomainError, TypeWeightMismatch
from dmforms.forms import GenExpr, genexpr_to_series, j_invariants
from dmforms.verify import orbit_dimension, plus_kl_grid

import oracles

F3, F5, F9 = FieldParams(3), FieldParams(5), FieldParams(3, 2)


def test_poly_text():
    T = F3.T
    one = TPoly.const(F3, 1)
    assert poly_text([-T, one]) == "x - T"
    assert poly_text([-T - 1, T, one]) == "x^2 + T*x + (-1 - T)"
    assert poly_text([TPoly.zero(F3)]) == "0"


def test_f01_text_and_constant():
    B = canonical_basis(0, 0, 1, 12, F3)
    assert B[1].F_text() == "x - T"
    # -T and 2T are the same element of F_3[T]
    assert B[1].C == F3.T * 2


def test_C_0i_are_E_T_coefficients_from_oracle():
    N = 2 * 8 + 2
    ET = oracles.generators(N, 3)["ET"]
    B = canonical_basis(0, 0, 8, N, F3)
    for i in range(9):
        assert B[i].C == TPoly(F3, 0, ET[2 * i + 1]), i


@pytest.mark.parametrize("strategy", ["recursive", "power"])
def test_strategies_agree(strategy):
    a = canonical_basis(4, 1, 5, 20, F3)
    b = canonical_basis(4, 1, 5, 20, F3, strategy=strategy)
    for x, y in zip(a, b):
        assert x.series == y.series and x.F == y.F


def test_unknown_strategy_and_bad_imax():
    with pytest.raises(DomainError):
        canonical_basis(0, 0, 2, 10, F3, strategy="greedy")
    with pytest.raises(DomainError):
        canonical_basis(0, 0, -1, 10, F3)
    with pytest.raises(TypeWeightMismatch):
        canonical_basis(3, 0, 2, 10, F3)


@pytest.mark.parametrize("k,l", [(6, 1), (6, 3), (8, 2), (4, 2), (-4, 0), (0, 0)])
def test_q5_bases(k, l):
    q = 5
    B = canonical_basis(k, l, 6, 30, F5)
    r = r_of(k, l, q)
    top = (q - 1) * (r + 1) + l
    for b in B:
        lead = (q - 1) * (r - b.i) + l
        assert b.series.val == lead and b.series.leading() == 1
        assert all(not (lead < e < top) for e, _ in b.series.terms())
        assert b.series.all_in_A() and all(c.is_in_A() for c in b.F)
        assert genexpr_to_series(b.expr, top + 1).agrees(b.series, hi=top + 1)


def test_q9_basis_small():
    B = canonical_basis(0, 0, 3, 30, F9)
    for b in B:
        assert b.series.val == -8 * b.i and b.series.all_in_A()
    jT, _ = j_invariants(30, F9)
    assert B[1].series.agrees(jT - F9.T, hi=30)


def test_negative_r_basis():
    B = canonical_basis(-2, 0, 4, 20, F3)
    assert B[0].expr == GenExpr.monomial(F3, -1, 0, 0)
    assert [b.series.val for b in B] == [-2, -4, -6, -8, -10]


def test_series_exact_up_to_declared_precision():
    B3 = canonical_basis(4, 0, 3, 16, F3)
    B6 = canonical_basis(4, 0, 3, 40, F3)
    for a, b in zip(B3, B6):
        assert a.series.prec >= 16
        assert a.series.agrees(b.series, hi=a.series.prec)


# -- plus family ------------------------------------------------------


@pytest.mark.parametrize("q", [3, 5, 7])
def test_plus_dimension_matches_orbit_count(q):
    for k, l in plus_kl_grid(q):
        assert plus_dimension(k, l, q) == orbit_dimension(k, l, q), (k, l)


def test_plus_dimension_cases_and_domain():
    assert parity_case(3, 0) == PARITY_CASES[0]
    assert parity_case(2, 1) == PARITY_CASES[1]
    assert parity_case(2, 0) == PARITY_CASES[2]
    assert plus_dimension(0, 0, 3) == 1
    assert plus_dimension(2, 1, 3) == 0        # r = 0, l odd
    assert plus_dimension(4, 0, 3) == 2
    with pytest.raises(DomainError):
        plus_dimension(-2, 0, 3)
    assert plus_dimension(0, 2, 5) == 0        # r = -1


@pytest.mark.parametrize("k,l", [(0, 0), (2, 1), (4, 0), (4, 1), (6, 0), (6, 1), (-2, 0)])
def test_plus_seed_is_symmetric(k, l):
    seed, case, dp = plus_seed(k, l, F3)
    assert seed.wT_image() == seed
    assert case == parity_case(r_of(k, l, 3), l) and dp == d_plus_of(k, l, 3)
    s = genexpr_to_series(seed, 3 * dp + 10)
    assert s.val == 2 * (dp - 1) + l and s.leading() == 1


@pytest.mark.parametrize("F", [F3, F5], ids=["q3", "q5"])
def test_plus_basis_symmetric_and_triangular(F):
    q = F.q
    for k, l in [(0, 0), (2 * (q - 1), 0), (q + 1, 1), (2, 1)]:
        B = canonical_basis_plus(k, l, 5, 20, F)
        dp = d_plus_of(k, l, q)
        top = (q - 1) * dp + l
        for b in B:
            lead = (q - 1) * (dp - 1 - b.i) + l
            assert b.expr.wT_image() == b.expr
            assert b.series.val == lead and b.series.leading() == 1
            assert all(not (lead < e < top) for e, _ in b.series.terms())


def test_plus_holomorphic_basis_elements():
    elems, dim = plus_holomorphic_basis(8, 0, F3)   # r = 4
    assert dim == 3 and len(elems) == 3
    for e in elems:
        assert e.wT_image() == e and e.weight_type() == (8, 0)


def test_basis_json_shape():
    b = canonical_basis_plus(4, 0, 1, 8, F3)[1].to_json()
    assert set(b) == {"k", "l", "r", "i", "F", "C", "series", "plus", "d_plus"}
    assert b["plus"] == "r even, l even" and b["d_plus"] == 2
