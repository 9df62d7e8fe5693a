"""Mechanical verification of the series identities of level T.

Every check returns a list of :class:`Report` objects.  A report claims
equality only on its recorded window of exponents; outside the window the
truncated computation is not able to decide anything.
"""

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .algebra import TPoly, monic_polys
from .basis import (canonical_basis, canonical_basis_plus, d_plus_of, jplus_expr,
                    plus_dimension, plus_holomorphic_basis, plus_seed, r_of)
from .carlitz import u_sub_a
from .errors import DomainError, TypeWeightMismatch, WindowEmpty
from .forms import (DEFAULT_FIELD, GenExpr, cusp_orders, delta_T, delta_W, e_plus,
                    eisenstein_E, eisenstein_ET, g1, g1_Tz, genexpr_to_series, half,
                    j_invariants)
from .kernels import tensor_mul
from .series import USeries

INF = 1 << 60


# -- reports ----------------------------------------------------------


@dataclass
class Report:
    name: str
    passed: bool
    window_u: tuple
    window_tau: tuple = None
    mismatch: dict = None

    def to_json(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "window": {"u": list(self.window_u),
                       "u_tau": list(self.window_tau) if self.window_tau else None},
            "mismatch": self.mismatch,
        }

    @classmethod
    def from_json(cls, d):
        w = d["window"]
        return cls(d["name"], d["passed"], tuple(w["u"]),
                   tuple(w["u_tau"]) if w["u_tau"] else None, d["mismatch"])

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        win = f"u in [{self.window_u[0]}, {self.window_u[1]})"
        if self.window_tau:
            win += f" x u_tau in [{self.window_tau[0]}, {self.window_tau[1]})"
        out = f"{status}  {self.name}  {win}"
        if self.mismatch:
            m = self.mismatch
            out += f"  first mismatch at {m['exponent']}"
        return out


def compare(name, lhs, rhs, hi, lo=None):
    """Report on lhs == rhs for u-exponents in [lo, hi)."""
    top = min(hi, lhs.prec, rhs.prec)
    if lo is None:
        lo = min(lhs.val, rhs.val, 0)
    mm = lhs.first_mismatch(rhs, lo, top)
    mismatch = None
    if mm is not None:
        e, a, b = mm
        mismatch = {"exponent": [e], "lhs": a.to_json(), "rhs": b.to_json()}
    return Report(name, mismatch is None, (lo, top), None, mismatch)


def _fact(name, ok, window=(0, 0), detail=None):
    """Report on a discrete fact (integer data rather than coefficients)."""
    return Report(name, bool(ok), tuple(window), None, None if ok else detail)


# -- bivariate series -------------------------------------------------


class BiSeries:
    """Truncated Laurent series in (u, u_tau) with TPoly coefficients.

    The array has shape (nu, nv, nT, r) and starts at (uval, vval); rows
    beyond the array are zero.  ``uprec``/``vprec`` follow the univariate
    precision rules independently in each variable.
    """

    __slots__ = ("field", "uval", "uprec", "vval", "vprec", "tlo", "arr")

    def __init__(self, field, uval, uprec, vval, vprec, tlo, arr):
        self.field = field
        self.uval, self.uprec, self.vval, self.vprec = uval, uprec, vval, vprec
        nu = max(0, min(arr.shape[0], uprec - uval))
        nv = max(0, min(arr.shape[1], vprec - vval))
        arr = arr[:nu, :nv] % field.p
        if arr.size and arr.any():
            cols = np.flatnonzero(arr.any(axis=(0, 1, 3)))
            arr = arr[:, :, cols[0]:cols[-1] + 1]
            tlo += int(cols[0])
        else:
            arr = np.zeros((nu, nv, 0, field.r), dtype=np.int64)
            tlo = 0
        self.tlo, self.arr = tlo, arr

    @classmethod
    def lift_u(cls, s, vprec=INF):
        """A u-series as a bivariate series constant in u_tau."""
        return cls(s.field, s.val, s.prec, 0, vprec, s.tlo, s.array[:, None])

    @classmethod
    def lift_v(cls, s, uprec=INF):
        """A u_tau-series as a bivariate series constant in u."""
        return cls(s.field, 0, uprec, s.val, s.prec, s.tlo, s.array[None])

    @classmethod
    def from_rows(cls, field, rows, uprec):
        """sum over (e, s) of s(u_tau) * u^e, exact below u^uprec."""
        uval = min(e for e, _ in rows)
        vval = min(s.val for _, s in rows)
        vprec = min(s.prec for _, s in rows)
        tlo = min((s.tlo for _, s in rows if s), default=0)
        thi = max((s.tlo + s.array.shape[1] for _, s in rows if s), default=0)
        nu = max(e for e, _ in rows) - uval + 1
        nv = max(s.val + s.array.shape[0] for _, s in rows) - vval
        arr = np.zeros((nu, max(nv, 0), max(thi - tlo, 0), field.r), dtype=np.int64)
        for e, s in rows:
            if s:
                a = s.array
                arr[e - uval, s.val - vval:s.val - vval + a.shape[0],
                    s.tlo - tlo:s.tlo - tlo + a.shape[1]] += a
        return cls(field, uval, uprec, vval, vprec, tlo, arr)

    def _aligned(self, b, sign):
        uval, vval = min(self.uval, b.uval), min(self.vval, b.vval)
        uprec, vprec = min(self.uprec, b.uprec), min(self.vprec, b.vprec)
        parts = [(x, s) for x, s in ((self, 1), (b, sign)) if x.arr.shape[2]]
        if not parts:
            return BiSeries(self.field, uval, uprec, vval, vprec, 0,
                            np.zeros((0, 0, 0, self.field.r), dtype=np.int64))
        tlo = min(x.tlo for x, _ in parts)
        thi = max(x.tlo + x.arr.shape[2] for x, _ in parts)
        nu = max(x.uval - uval + x.arr.shape[0] for x, _ in parts)
        nv = max(x.vval - vval + x.arr.shape[1] for x, _ in parts)
        arr = np.zeros((nu, nv, thi - tlo, self.field.r), dtype=np.int64)
        for x, s in parts:
            a = x.arr
            arr[x.uval - uval:x.uval - uval + a.shape[0],
                x.vval - vval:x.vval - vval + a.shape[1],
                x.tlo - tlo:x.tlo - tlo + a.shape[2]] += s * a
        return BiSeries(self.field, uval, uprec, vval, vprec, tlo, arr)

    def __add__(self, b):
        return self._aligned(b, 1)

    def __sub__(self, b):
        return self._aligned(b, -1)

    def __neg__(self):
        return BiSeries(self.field, self.uval, self.uprec, self.vval, self.vprec,
                        self.tlo, -self.arr)

    def __mul__(self, b):
        uval, vval = self.uval + b.uval, self.vval + b.vval
        uprec = min(self.uprec + b.uval, b.uprec + self.uval)
        vprec = min(self.vprec + b.vval, b.vprec + self.vval)
        if not self.arr.size or not b.arr.size:
            return BiSeries(self.field, uval, uprec, vval, vprec, 0,
                            np.zeros((0, 0, 0, self.field.r), dtype=np.int64))
        nout = min(uprec - uval, self.arr.shape[0] + b.arr.shape[0] - 1)
        prod = tensor_mul(self.arr, b.arr, max(nout, 0), self.field)
        return BiSeries(self.field, uval, uprec, vval, vprec, self.tlo + b.tlo, prod)

    def coeff(self, eu, ev):
        i, j = eu - self.uval, ev - self.vval
        if 0 <= i < self.arr.shape[0] and 0 <= j < self.arr.shape[1]:
            return TPoly.from_array(self.field, self.tlo, self.arr[i, j])
        return TPoly.zero(self.field)

    def swap(self):
        """Exchange the roles of u and u_tau."""
        return BiSeries(self.field, self.vval, self.vprec, self.uval, self.uprec,
                        self.tlo, self.arr.transpose(1, 0, 2, 3))

    def first_mismatch(self, other, ulo, uhi, vlo, vhi):
        diff = self - other
        a = diff.arr
        if not a.size:
            return None
        nz = np.argwhere(a.any(axis=(2, 3)))
        for i, j in nz:
            eu, ev = diff.uval + int(i), diff.vval + int(j)
            if ulo <= eu < uhi and vlo <= ev < vhi:
                return eu, ev
        return None


def compare_bi(name, lhs, rhs, uwin, vwin):
    ulo, uhi = uwin
    vlo, vhi = vwin
    uhi = min(uhi, lhs.uprec, rhs.uprec)
    vhi = min(vhi, lhs.vprec, rhs.vprec)
    if uhi <= ulo or vhi <= vlo:
        raise WindowEmpty(f"{name}: no checkable exponents; raise i_max or the precision")
    mm = lhs.first_mismatch(rhs, ulo, uhi, vlo, vhi)
    mismatch = None
    if mm is not None:
        eu, ev = mm
        mismatch = {"exponent": [eu, ev], "lhs": lhs.coeff(eu, ev).to_json(),
                    "rhs": rhs.coeff(eu, ev).to_json()}
    return Report(name, mismatch is None, (ulo, uhi), (vlo, vhi), mismatch)


# -- options ----------------------------------------------------------


def standard_pairs(q):
    """(k, l) pairs exercised by the suite: r = 0, 2, 1, 0 and -1, plus more types."""
    pairs = [(0, 0), (2 * (q - 1), 0), (q + 1, 1), (2, 1), (-(q - 1), 0)]
    for l in range(2, q - 1):
        pairs += [(2 * l, l), (2 * l + q - 1, l)]
    return pairs


def bivariate_pairs(q):
    return [(0, 0), (2 * (q - 1), 0), (q + 1, 1)]


@dataclass
class Options:
    field: object = dc_field(default_factory=lambda: DEFAULT_FIELD)
    prec: int = 40
    imax: int = 4
    seed: int = 0
    pairs: list = None

    def kl_pairs(self):
        return self.pairs if self.pairs is not None else standard_pairs(self.field.q)


def _rng(opts, salt):
    return random.Random(f"{opts.seed}:{salt}")


# -- checks -----------------------------------------------------------


def check_generators(opts):
    """Leading u-expansions of the generators and of j_T, j_T^+."""
    F, q = opts.field, opts.field.q
    T = F.T
    m = half(F)
    N = max(opts.prec, q * q + q)
    dT, dW = delta_T(N, F), delta_W(N, F)
    ET, E = eisenstein_ET(N, F), eisenstein_E(N, F)
    jT, jp = j_invariants(q, F)
    mk = lambda terms, prec: USeries.from_terms(F, terms, prec)
    nq = q * (q - 1)
    out = [
        compare("delta_T leading terms", dT, mk({q - 1: 1, nq: -1}, nq + q - 1), nq + q - 1),
        compare("delta_W leading terms", dW, mk({0: 1, q - 1: T, nq: -(T ** q)}, nq + q - 1),
                nq + q - 1),
        compare("E_T leading terms", ET, mk({1: 1, q: -T}, 2 * q - 1), 2 * q - 1),
        compare("E leading terms", E, mk({1: 1, (q - 1) ** 2 + 1: 1}, nq + 1), nq + 1),
        compare("j_T leading terms", jT, mk({1 - q: 1, 0: T}, q - 1), q - 1),
        compare("j_T^+ leading terms", jp,
                mk({1 - q: 1, 0: (T - T ** m) * 2 - T}, q - 1), q - 1),
        compare("g_1 leading terms", g1(N, F), mk({0: 1, q - 1: -(T ** q - T)}, q), q),
    ]
    integral = all(s.all_in_A() for s in (dT, dW, ET, E, g1(N, F)))
    out.append(_fact("generator coefficients lie in A", integral, (0, N)))
    types = (dT.check_type(0, q) and dW.check_type(0, q) and ET.check_type(1, q)
             and E.check_type(1, q))
    out.append(_fact("generator exponents respect the type", types, (0, N)))
    return out


def check_structural(opts):
    """E_T^(q-1) = Delta_W Delta_T and the relations between g_1, E, E_T."""
    F, q, N = opts.field, opts.field.q, opts.prec
    T = F.T
    W = N + 2 * (q - 1)
    dT, dW, ET, E = delta_T(W, F), delta_W(W, F), eisenstein_ET(W, F), eisenstein_E(W, F)
    uT = u_sub_a(T, W)
    out = [
        compare("E_T^(q-1) = Delta_W Delta_T", ET ** (q - 1), dW * dT, N),
        compare("g_1 = Delta_W - T^q Delta_T", g1(W, F), dW - dT.scale(T ** q), N),
        compare("g_1(Tz) = Delta_W - T Delta_T", g1_Tz(W, F), dW - dT.scale(T), N),
        compare("g_1(Tz) by substitution", g1_Tz(W, F), g1(W, F).substitute(uT), N),
        compare("E_T = E(z) - T E(Tz) by substitution", ET,
                E - E.substitute(uT).scale(T), N),
        compare("E(z) + T E(Tz) by substitution", e_plus(W, F),
                E + E.substitute(uT).scale(T), N),
    ]
    jT, jp = j_invariants(N, F)
    m = half(F)
    out.append(compare("j_T^+ = j_T - 2T^m + T^(q-1)/j_T", jp,
                       jT - T ** m * 2 + jT.invert().scale(T ** (q - 1)), N))
    e = GenExpr.E_T(F) ** (q - 1) - GenExpr.delta_W(F) * GenExpr.delta_T(F)
    z = genexpr_to_series(e, N)
    out.append(compare("E_T^(q-1) - Delta_W Delta_T as an expression", z,
                       USeries.zero(F, N), N, lo=0))
    return out


def _theta_work(opts):
    q = opts.field.q
    return opts.prec + 3 * (q - 1) + 2


def check_theta_closed_forms(opts):
    """Theta of the hauptmoduln and both forms of Phi_T(z, 0)."""
    F, q, N = opts.field, opts.field.q, opts.prec
    T = F.T
    W = _theta_work(opts)
    dT, dW, ET = delta_T(W, F), delta_W(W, F), eisenstein_ET(W, F)
    jT, jp = j_invariants(W, F)
    tj, tjp = jT.theta(), jp.theta()
    phi0 = tj * jT.invert()
    return [
        compare("Theta(j_T) Delta_T^2 = -E_T^q", tj * dT * dT, -(ET ** q), N),
        compare("Theta(j_T) = -E_T j_T", tj, -(ET * jT), N),
        compare("Theta(j_T^+) E_T^(q-2) = -(Delta_W^2 - T^(q-1) Delta_T^2)",
                tjp * ET ** (q - 2), -(dW * dW - (dT * dT).scale(T ** (q - 1))), N),
        compare("Phi_T(z,0) = -E_T^q / (j_T Delta_T^2)", phi0,
                -(ET ** q) * (jT * dT * dT).invert(), N),
        compare("Phi_T(z,0) = -E_T", phi0, -ET, N),
    ]


def _dk(f, k, E):
    """d_k f = Theta f + k E f."""
    return f.theta() + (E * f).scale(k % E.field.p)


def _dplus(f, k, Ep):
    """d^+ f = Theta f + (k/2)(E(z) + T E(Tz)) f."""
    return f.theta() + (Ep * f).scale((k // 2) % Ep.field.p)


def _random_monomial(rng, F, lo=0, hi=2, chi=3):
    a, b, c = rng.randint(lo, hi), rng.randint(lo, hi), rng.randint(0, chi)
    return GenExpr.monomial(F, a, b, c)


def check_partial_identities(opts):
    """The weight-raising operators on the generators and the Leibniz rule."""
    F, q, N, p = opts.field, opts.field.q, opts.prec, opts.field.p
    T = F.T
    m = half(F)
    W = _theta_work(opts)
    dT, dW, ET = delta_T(W, F), delta_W(W, F), eisenstein_ET(W, F)
    E, Ep = eisenstein_E(W, F), e_plus(W, F)
    zero = USeries.zero(F, W)
    half_inv = pow(2, p - 2, p)
    out = [
        compare("d_(q-1) Delta_T = 0", _dk(dT, q - 1, E), zero, N, lo=0),
        compare("d_(q-1) Delta_W = -Delta_W E_T", _dk(dW, q - 1, E), -(dW * ET), N),
        compare("d^+ (E_T^(q-1)) = 0", _dplus(ET ** (q - 1), 2 * (q - 1), Ep), zero, N, lo=0),
        compare("d^+ (Delta_W - T^m Delta_T) = -1/2 (Delta_W + T^m Delta_T) E_T",
                _dplus(dW - dT.scale(T ** m), q - 1, Ep),
                ((dW + dT.scale(T ** m)) * ET).scale(-half_inv % p), N),
    ]
    rng = _rng(opts, "leibniz")
    bad = None
    for n in range(20):
        e1, e2 = _random_monomial(rng, F), _random_monomial(rng, F)
        k1, k2 = e1.weight_type()[0], e2.weight_type()[0]
        f1, f2 = genexpr_to_series(e1, W), genexpr_to_series(e2, W)
        lhs = _dplus(f1 * f2, k1 + k2, Ep)
        rhs = f1 * _dplus(f2, k2, Ep) + f2 * _dplus(f1, k1, Ep)
        rep = compare("", lhs, rhs, N)
        if not rep.passed and bad is None:
            bad = dict(rep.mismatch, pair=[e1.to_text(), e2.to_text()])
    out.append(Report("d^+ Leibniz rule on 20 random pairs", bad is None, (0, N), None, bad))
    return out


def _theta_formula_rhs(f, k, ord0, E, ET, p):
    """-k E f + ord_0(f) E_T f with integer multipliers reduced mod p."""
    return (E * f).scale((-k) % p) + (ET * f).scale(ord0 % p)


def check_theta_divisor(opts):
    """Theta(f) from the divisor of f, for forms whose zeros are all at the cusps."""
    F, q, N, p = opts.field, opts.field.q, opts.prec, opts.field.p
    W = _theta_work(opts)
    dT, dW, ET, E = delta_T(W, F), delta_W(W, F), eisenstein_ET(W, F), eisenstein_E(W, F)
    out = [
        compare("Theta(Delta_T) = E Delta_T", dT.theta(), E * dT, N),
        compare("Theta(Delta_W) = E Delta_W - E_T Delta_W", dW.theta(), E * dW - ET * dW, N),
        compare("Theta(E_T) = -2 E E_T + E_T^2", ET.theta(), (E * ET).scale(-2 % p) + ET * ET, N),
    ]
    rng = _rng(opts, "theta-divisor")
    for n in range(3):
        e = _random_monomial(rng, F, 0, 3, 3)
        while not e.terms or list(e.terms)[0] == (0, 0, 0):
            e = _random_monomial(rng, F, 0, 3, 3)
        (a, b, c), = e.terms
        k = e.weight_type()[0]
        _, ord0 = cusp_orders(e, (q - 1) * (a + b) + c + 2 * q)
        f = genexpr_to_series(e, W)
        out.append(compare(f"Theta formula for {e.to_text()}", f.theta(),
                           _theta_formula_rhs(f, k, ord0, E, ET, p), N))
    return out


def _fp(x, p):
    x = Fraction(x)
    return x.numerator * pow(x.denominator, p - 2, p) % p


def valence_monomials():
    return [(a, b, c) for a in range(4) for b in range(4 - a) for c in range(3)]


def check_valence(opts):
    """Valence identities over F_p for monomials with no zeros in Omega."""
    F, q, p = opts.field, opts.field.q, opts.field.p
    bad_T, bad_plus = None, None
    for a, b, c in valence_monomials():
        e = GenExpr.monomial(F, a, b, c)
        k = e.weight_type()[0]
        oi, o0 = cusp_orders(e, (q - 1) * (a + b) + c + 2 * q)
        expect = ((q - 1) * a + c, (q - 1) * b + c)
        lhs = _fp(Fraction(oi, q - 1) + Fraction(o0, q - 1), p)
        rhs = _fp(Fraction(k, q - 1), p)
        if (lhs != rhs or (oi, o0) != expect) and bad_T is None:
            bad_T = {"exponent": [a, b, c], "lhs": lhs, "rhs": rhs, "orders": [oi, o0]}
        # W_T-invariant companion f * (f | W_T) of weight 2k
        Fp = e * e.wT_image()
        oiF, _ = cusp_orders(Fp, 2 * ((q - 1) * (a + b) + c) + 2 * q)
        lhs_p = _fp(Fraction(oiF, q - 1), p)
        rhs_p = _fp(Fraction(2 * k, 2 * (q - 1)), p)
        if (lhs_p != rhs_p or Fp.wT_image() != Fp) and bad_plus is None:
            bad_plus = {"exponent": [a, b, c], "lhs": lhs_p, "rhs": rhs_p}
    n = len(valence_monomials())
    return [
        Report(f"level-T valence formula on {n} monomials", bad_T is None, (0, 0), None, bad_T),
        Report(f"plus valence formula on {n} symmetrised monomials", bad_plus is None,
               (0, 0), None, bad_plus),
    ]


def _basis_reports(F, k, l, imax, prec, plus):
    q = F.q
    tag = "plus basis" if plus else "basis"
    build = canonical_basis_plus if plus else canonical_basis
    try:
        B = build(k, l, imax, prec, F)
    except TypeWeightMismatch as exc:
        return [_fact(f"{tag} (k,l)=({k},{l}) constructible", False,
                      detail={"error": str(exc)})]
    B2 = build(k, l, imax, prec, F, strategy="power")
    r = r_of(k, l, q)
    if plus:
        dp = d_plus_of(k, l, q)
        lead0, top = (q - 1) * (dp - 1) + l, (q - 1) * dp + l
    else:
        lead0, top = (q - 1) * r + l, (q - 1) * (r + 1) + l
    shape, monic, integral, expr_ok, bound = True, True, True, True, True
    for b in B:
        s = b.series
        lead = lead0 - (q - 1) * b.i
        shape &= (s.val == lead and s.leading() == 1
                  and all(not (lead < e < top) for e, _ in s.terms()))
        monic &= len(b.F) == b.i + 1 and b.F[-1] == 1
        integral &= s.all_in_A() and all(c.is_in_A() for c in b.F)
        expr_ok &= genexpr_to_series(b.expr, top + 1).agrees(s, hi=top + 1)
        if plus:
            expr_ok &= b.expr.wT_image() == b.expr
    bound = B[0].series.val <= (k - l if not plus else (d_plus_of(k, l, q) - 1) * (q - 1) + l)
    same = all(x.series == y.series and x.F == y.F for x, y in zip(B, B2))
    win = (lead0 - (q - 1) * imax, top)
    name = f"{tag} (k,l)=({k},{l}) i<={imax}"
    return [
        _fact(f"{name}: triangular shape", shape, win),
        _fact(f"{name}: F monic of degree i", monic, win),
        _fact(f"{name}: coefficients in A", integral, win),
        _fact(f"{name}: expression matches series", expr_ok, win),
        _fact(f"{name}: order at infinity bound", bound, win),
        _fact(f"{name}: independent of elimination order", same, win),
    ]


def check_basis(opts):
    """Triangular bases of both families and the explicit small cases."""
    F, q = opts.field, opts.field.q
    T = F.T
    out = []
    for k, l in opts.kl_pairs():
        out += _basis_reports(F, k, l, opts.imax, opts.prec, False)
        out += _basis_reports(F, k, l, opts.imax, opts.prec, True)
    B = canonical_basis(0, 0, 1, opts.prec, F)
    expected = GenExpr(F, {(-1, 1, 0): 1, (0, 0, 0): -T})
    jT, _ = j_invariants(opts.prec, F)
    out.append(_fact("f_(0,0) = 1", B[0].expr == GenExpr.const(F, 1)))
    out.append(_fact("f_(0,1) = Delta_W/Delta_T - T", B[1].expr == expected))
    out.append(compare("f_(0,1) = j_T - T as series", B[1].series, jT - T, opts.prec))
    out += _product_formula_reports(opts)
    return out


def _product_formula_reports(opts):
    """f_(r,i) = f_(r,0) sum_(n+s=i) a'_n f_(0,s), and the same for C_(r,i)."""
    F, q, I = opts.field, opts.field.q, opts.imax
    out = []
    for k, l in opts.kl_pairs():
        r = r_of(k, l, q)
        B = canonical_basis(k, l, I, opts.prec, F)
        top = (q - 1) * (r + 1) + l
        B0 = canonical_basis(0, 0, I, opts.prec + (q - 1) * (abs(r) + I + 2) + l, F)
        inv = B[0].series.invert()
        ok_f, ok_c = True, True
        for i in range(I + 1):
            acc = USeries.zero(F, INF)
            cacc = TPoly.zero(F)
            for n in range(i + 1):
                a = inv.coeff((q - 1) * (-r + n) - l)
                acc = acc + B0[i - n].series.scale(a)
                cacc = cacc + a * B0[i - n].C
            prod = B[0].series * acc
            ok_f &= prod.agrees(B[i].series, hi=top)
            ok_c &= cacc == B[i].C
        out.append(_fact(f"f_(r,i) from f_(0,s), (k,l)=({k},{l})", ok_f,
                         ((q - 1) * (r - I) + l, top)))
        out.append(_fact(f"C_(r,i) from C_(0,s), (k,l)=({k},{l})", ok_c))
    return out


def carlitz_constants(field, imax):
    """sum over monic a prime to T, a != 1, of a times {u_a}_((q-1)i+1)."""
    q = field.q
    N = (q - 1) * imax + 2
    out = []
    sums = [TPoly.zero(field) for _ in range(imax + 1)]
    d = 1
    while q ** d < N:
        for a in monic_polys(field, d, skip_T_multiples=True):
            ua = u_sub_a(a, N)
            for i in range(imax + 1):
                sums[i] = sums[i] + a * ua.coeff((q - 1) * i + 1)
        d += 1
    out.extend(sums)
    return out


def check_carlitz_sum(opts):
    """C_(0,i) from the basis equals the Carlitz sum, and -Phi_T(z,0) = E_T."""
    F, q = opts.field, opts.field.q
    I = max(opts.imax, 6)
    B = canonical_basis(0, 0, I, opts.prec, F)
    sums = carlitz_constants(F, I)
    bad = None
    for i in range(1, I + 1):
        if B[i].C != sums[i] and bad is None:
            bad = {"exponent": [(q - 1) * i + 1], "lhs": B[i].C.to_json(),
                   "rhs": sums[i].to_json()}
    top = (q - 1) * (I + 1) + 1
    out = [Report(f"C_(0,i) = Carlitz sum for 1 <= i <= {I}", bad is None, (q, top), None, bad)]
    phi = USeries.from_terms(F, {1: -1} | {(q - 1) * i + 1: -B[i].C for i in range(1, I + 1)}, top)
    out.append(compare("-u - sum C_(0,i) u^((q-1)i+1) = -E_T", phi,
                       -eisenstein_ET(top, F), top))
    return out


def _gf_constants(F, k, l, imax, prec):
    """sum C_(r,i) u^((q-1)(-r+i)+1-l) against Delta_T^(-r) E_T^(1-l)."""
    q = F.q
    r = r_of(k, l, q)
    B = canonical_basis(k, l, imax, prec, F)
    exps = [(q - 1) * (-r + i) + 1 - l for i in range(imax + 2)]
    lhs = USeries.from_terms(F, {exps[i]: B[i].C for i in range(imax + 1)}, exps[-1])
    rhs = genexpr_to_series(GenExpr.monomial(F, -r, 0, 1 - l), exps[-1])
    return compare(f"sum C_(r,i) u^e = Delta_T^-r E_T^(1-l), (k,l)=({k},{l}) i<={imax}",
                   lhs, rhs, exps[-1])


def generating_function_bivariate(F, k, l, imax, prec_u, prec_tau, plus=False, sign=1,
                                  u_hi=None):
    """Cross-multiplied bivariate generating function for either family.

    Level T:  L (j_T(z) - j_T(tau)) Delta_T(z)^2 f_0(z) = E_T(z)^q f_0(tau)
    plus:     L E_T(z)^(q-2) (j^+(z) - j^+(tau)) f^+_0(z)
                  = (Delta_W^2 - T^(q-1) Delta_T^2)(z) f^+_0(tau)
    where L = sum_(i<=imax) f_i(tau) u^(e_i).  ``sign=-1`` swaps the order
    of the difference of hauptmoduln (a negative control).  ``u_hi``
    replaces the truncation-complete bound on the u-window; beyond that
    bound the identity is not expected to hold, so this only serves to
    show the bound is sharp.
    """
    q = F.q
    T = F.T
    r = r_of(k, l, q)
    if plus:
        dp = d_plus_of(k, l, q)
        e0 = (q - 1) * (-(dp - 1)) + 1 - l
        vlo = (q - 1) * (dp - 1 - imax) + l
        ulo = 0
    else:
        e0 = (q - 1) * (-r) + 1 - l
        vlo = (q - 1) * (r - imax) + l
        ulo = q
    ebound = e0 + (q - 1) * (imax + 1)
    # dropping i > imax only disturbs u-exponents >= ulo + (q-1)(imax+1)
    safe = ulo + (q - 1) * (imax + 1)
    target_u = min(prec_u, safe if u_hi is None else u_hi)
    extra = 0
    build = canonical_basis_plus if plus else canonical_basis
    while True:
        Pv = prec_tau + 2 * (q - 1) + max(0, -vlo) + extra
        Pz = target_u - e0 + 3 * (q - 1) + extra
        B = build(k, l, imax, max(Pv, Pz), F)
        rows = [(e0 + (q - 1) * i, b.series.rename("u_tau")) for i, b in enumerate(B)]
        # with u_hi the truncated sum is treated as exact (dropped rows as zero)
        L = BiSeries.from_rows(F, rows, ebound if u_hi is None else INF)
        f0z = genexpr_to_series(B[0].expr, Pz)
        f0t = B[0].series.rename("u_tau")
        jz, jpz = j_invariants(Pz, F)
        jt, jpt = j_invariants(Pv, F)
        dT, dW, ET = delta_T(Pz, F), delta_W(Pz, F), eisenstein_ET(Pz, F)
        if plus:
            D = ET ** (q - 2) * f0z
            hz, ht = jpz, jpt.rename("u_tau")
            rhs_z = dW * dW - (dT * dT).scale(T ** (q - 1))
        else:
            D = dT * dT * f0z
            hz, ht = jz, jt.rename("u_tau")
            rhs_z = ET ** q
        M = BiSeries.lift_u(hz * D) - BiSeries.lift_u(D) * BiSeries.lift_v(ht)
        if sign < 0:
            M = -M
        lhs = L * M
        rhs = BiSeries.lift_u(rhs_z) * BiSeries.lift_v(f0t)
        if (min(lhs.uprec, rhs.uprec) >= target_u and min(lhs.vprec, rhs.vprec) >= prec_tau) \
                or extra > 40 * (q - 1):
            break
        extra += 4 * (q - 1)
    tag = "plus " if plus else ""
    ctl = " (reversed difference)" if sign < 0 else ""
    name = f"{tag}bivariate generating function{ctl}, (k,l)=({k},{l}) I={imax}"
    return compare_bi(name, lhs, rhs, (ulo, target_u), (vlo, prec_tau))


def check_generating_functions(opts):
    """Generating functions of the basis constants and of the basis itself."""
    F, q = opts.field, opts.field.q
    out = []
    for k, l in opts.kl_pairs():
        out.append(_gf_constants(F, k, l, max(opts.imax, 2), opts.prec))
    for k, l in bivariate_pairs(q):
        out.append(generating_function_bivariate(F, k, l, opts.imax, INF, 2 * opts.imax * (q - 1) + 12))
    out.append(generating_function_bivariate(F, 2 * (q - 1), 0, opts.imax, INF,
                                             2 * opts.imax * (q - 1) + 12, plus=True))
    return out


def plus_kl_grid(q, kmax=None):
    kmax = 8 * (q - 1) if kmax is None else kmax
    return [(k, l) for k in range(0, kmax + 1) for l in range(q - 1)
            if (k - 2 * l) % (q - 1) == 0]


def orbit_dimension(k, l, q):
    """Count W_T-orbits of the monomial basis Delta_W^(r-i) Delta_T^i E_T^l.

    W_T pairs i with r - i; the fixed monomial (i = r/2) survives only if it
    is mapped to itself with sign +1.
    """
    r = r_of(k, l, q)
    if r < 0:
        return 0
    n = 0
    for i in range(r + 1):
        j = r - i
        if i < j:
            n += 1
        elif i == j and (r + l) % 2 == 0:
            n += 1
    return n


def check_plus_space(opts):
    """Holomorphic plus space: dimensions, symmetry and leading terms."""
    F, q = opts.field, opts.field.q
    bad_dim, bad_fix, bad_lead = None, None, None
    grid = plus_kl_grid(q)
    for k, l in grid:
        elems, dim = plus_holomorphic_basis(k, l, F)
        if (dim != plus_dimension(k, l, q) or dim != orbit_dimension(k, l, q)
                or len(elems) != dim) and bad_dim is None:
            bad_dim = {"exponent": [k, l], "lhs": dim, "rhs": orbit_dimension(k, l, q)}
        for i, e in enumerate(elems):
            if e.wT_image() != e and bad_fix is None:
                bad_fix = {"exponent": [k, l, i], "lhs": e.to_text(), "rhs": e.wT_image().to_text()}
            lead = i * (q - 1) + l
            s = genexpr_to_series(e, lead + q)
            if (s.val != lead or s.leading() != 1) and bad_lead is None:
                bad_lead = {"exponent": [k, l, i], "lhs": s.val, "rhs": lead}
    n = len(grid)
    out = [
        Report(f"plus dimension formula on {n} (k,l) with 0<=k<=8(q-1)", bad_dim is None,
               (0, 0), None, bad_dim),
        Report("plus basis elements are W_T-fixed", bad_fix is None, (0, 0), None, bad_fix),
        Report("plus basis leading terms u^(i(q-1)+l)", bad_lead is None, (0, 0), None, bad_lead),
    ]
    imax = min(opts.imax, 3)
    tri = True
    first = None
    for k, l in grid:
        reps = _basis_reports(F, k, l, imax, 1, True)
        if not all(x.passed for x in reps):
            tri = False
            first = first or {"exponent": [k, l], "lhs": [x.name for x in reps if not x.passed],
                              "rhs": None}
    out.append(Report(f"plus canonical basis triangular on the same grid, i<={imax}", tri,
                      (0, 0), None, first))
    return out


CHECKS = {
    "generators": check_generators,
    "structural": check_structural,
    "theta_closed_forms": check_theta_closed_forms,
    "partial_identities": check_partial_identities,
    "theta_divisor": check_theta_divisor,
    "valence": check_valence,
    "basis": check_basis,
    "carlitz_sum": check_carlitz_sum,
    "generating_functions": check_generating_functions,
    "plus_space": check_plus_space,
}


def run_check(name, opts):
    if name not in CHECKS:
        raise DomainError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
    return CHECKS[name](opts)
