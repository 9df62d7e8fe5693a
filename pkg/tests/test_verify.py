import jsonschema
import numpy as np
import pytest

from dmforms.algebra import FieldParams, TPoly
from dmforms.errors import DomainError, WindowEmpty
from dmforms.forms import delta_T, delta_W, eisenstein_ET, j_invariants
from dmforms.schema import SCHEMAS
from dmforms.series import USeries
from dmforms.verify import (CHECKS, INF, BiSeries, Options, Report, compare, compare_bi,
                            generating_function_bivariate, run_check, standard_pairs)

F3, F5 = FieldParams(3), FieldParams(5)


@pytest.mark.parametrize("F", [F3, F5], ids=["q3", "q5"])
@pytest.mark.parametrize("name", list(CHECKS))
def test_every_check_passes(F, name):
    reps = run_check(name, Options(field=F, prec=40, imax=4))
    assert reps
    for r in reps:
        assert r.passed, r.line()
        jsonschema.validate(r.to_json(), SCHEMAS["report"])


def test_unknown_check():
    with pytest.raises(DomainError):
        run_check("everything", Options())


def test_standard_pairs_cover_negative_r_and_types():
    assert (-(5 - 1), 0) in standard_pairs(5)
    assert (4, 2) in standard_pairs(5) and (8, 2) in standard_pairs(5)


# -- reports and comparison windows ---------------------------------------


def test_compare_reports_first_mismatch():
    a = USeries.from_terms(F3, {1: 1, 5: F3.T}, 9)
    b = USeries.from_terms(F3, {1: 1, 7: 1}, 8)
    r = compare("x", a, b, 20)
    assert not r.passed and r.window_u == (0, 8)
    assert r.mismatch["exponent"] == [5]
    assert r.mismatch["lhs"] == F3.T.to_json()
    assert compare("x", a, b, 5).passed


def test_report_json_round_trip():
    r = Report("n", False, (0, 3), (1, 4), {"exponent": [1, 2], "lhs": None, "rhs": None})
    assert Report.from_json(r.to_json()) == r
    assert "first mismatch at [1, 2]" in r.line()


def test_window_empty():
    s = BiSeries.lift_u(USeries.from_terms(F3, {1: 1}, 3))
    with pytest.raises(WindowEmpty):
        compare_bi("empty", s, s, (5, 5), (0, 4))
    with pytest.raises(WindowEmpty):
        compare_bi("beyond precision", s, s, (3, 9), (0, 4))


# -- negative controls ---------------------------------------------------


def test_broken_identity_is_caught():
    N = 40
    ET, dT, dW = eisenstein_ET(N, F3), delta_T(N, F3), delta_W(N, F3)
    wrong = dW * dT + USeries.monomial(F3, F3.T, 31, N)
    assert compare("E_T^2 = Delta_W Delta_T", ET ** 2, dW * dT, N).passed
    r = compare("E_T^2 vs perturbed", ET ** 2, wrong, N)
    assert not r.passed and r.mismatch["exponent"] == [31]


@pytest.mark.parametrize("plus,k,l", [(False, 0, 0), (False, 4, 1), (True, 4, 0)])
def test_reversed_difference_fails(plus, k, l):
    r = generating_function_bivariate(F3, k, l, 4, INF, 20, plus=plus, sign=-1)
    assert not r.passed


@pytest.mark.parametrize("k,l", [(0, 0), (4, 0), (4, 1)])
def test_level_T_window_is_sharp(k, l):
    # sound window [q, (q-1)(I+2)+1) = [3, 13) for I = 4; one more exponent breaks it
    ok = generating_function_bivariate(F3, k, l, 4, INF, 30)
    assert ok.passed and ok.window_u == (3, 13)
    bad = generating_function_bivariate(F3, k, l, 4, INF, 30, u_hi=14)
    assert not bad.passed and bad.mismatch["exponent"][0] == 13


def test_plus_window_is_sharp_and_grows_with_I():
    ok = generating_function_bivariate(F3, 4, 0, 4, INF, 30, plus=True)
    assert ok.passed and ok.window_u == (0, 10)
    bad = generating_function_bivariate(F3, 4, 0, 4, INF, 30, plus=True, u_hi=11)
    assert not bad.passed and bad.mismatch["exponent"][0] == 10
    wide = generating_function_bivariate(F3, 4, 0, 7, INF, 30, plus=True)
    assert wide.passed and wide.window_u == (0, 16)


@pytest.mark.parametrize("k,l", [(0, 0), (4, 0), (4, 1)])
def test_level_T_sixteen_exponents_at_I7(k, l):
    r = generating_function_bivariate(F3, k, l, 7, INF, 30)
    assert r.passed and r.window_u[1] - r.window_u[0] == 16


# -- bivariate series ------------------------------------------------------


def _rand_series(rng, var, val, n):
    terms = {val + i: TPoly(F3, 0, list(rng.integers(0, 3, size=3))) for i in range(n)}
    return USeries.from_terms(F3, terms, val + n, var=var)


def test_bivariate_product_of_lifts_is_tensor_product():
    rng = np.random.default_rng(5)
    a = _rand_series(rng, "u", -1, 6)
    b = _rand_series(rng, "u_tau", 0, 5)
    P = BiSeries.lift_u(a) * BiSeries.lift_v(b)
    for eu in range(-1, 5):
        for ev in range(0, 5):
            assert P.coeff(eu, ev) == a.coeff(eu) * b.coeff(ev)
    assert P.uprec == a.prec and P.vprec == b.prec


def test_bivariate_mul_matches_naive():
    rng = np.random.default_rng(11)
    rows_a = [(e, _rand_series(rng, "u_tau", -1, 4)) for e in range(0, 3)]
    rows_b = [(e, _rand_series(rng, "u_tau", 0, 4)) for e in range(1, 4)]
    A = BiSeries.from_rows(F3, rows_a, 3)
    B = BiSeries.from_rows(F3, rows_b, 4)
    C = A * B
    assert C.uprec == min(3 + 1, 4 + 0)
    for eu in range(1, C.uprec):
        for ev in range(-1, C.vprec):
            want = TPoly.zero(F3)
            for ea, sa in rows_a:
                for eb, sb in rows_b:
                    prod = sa * sb
                    if ea + eb == eu and ev < prod.prec:
                        want = want + prod.coeff(ev)
            assert C.coeff(eu, ev) == want, (eu, ev)


def test_hauptmodul_difference_is_antisymmetric():
    N = 20
    jT, _ = j_invariants(N, F3)
    D = BiSeries.lift_u(jT) - BiSeries.lift_v(jT.rename("u_tau"))
    S = D.swap()
    assert S.first_mismatch(-D, -2, N - 2, -2, N - 2) is None
    assert D.first_mismatch(-D, -2, N - 2, -2, N - 2) is not None
