"""Canonical (triangular) bases of weakly holomorphic forms of level T.

Both families are produced by the same elimination: start from a seed
u^v + O(u^(v+q-1)), multiply by a hauptmodul with expansion
u^(1-q) + ..., then clear the gap window [v - (q-1)i, v + q - 1) using
the earlier elements.  The elimination constants are read off series
coefficients; by integrality they always lie in A.
"""

from dataclasses import dataclass

from .algebra import TPoly
from .errors import DomainError, InternalError
from .forms import (DEFAULT_FIELD, FormParams, GenExpr, genexpr_to_series, half,
                    j_invariants)
from .series import USeries

STRATEGIES = ("recursive", "power")

PARITY_CASES = ("r odd", "r even, l odd", "r even, l even")


def r_of(k, l, q=3):
    return FormParams(k, l, q).r


def parity_case(r, l):
    if r % 2:
        return PARITY_CASES[0]
    return PARITY_CASES[1] if l % 2 else PARITY_CASES[2]


def d_plus_of(k, l, q=3):
    r = r_of(k, l, q)
    case = parity_case(r, l)
    if case == PARITY_CASES[0]:
        return (r + 1) // 2
    if case == PARITY_CASES[1]:
        return r // 2
    return r // 2 + 1


def plus_dimension(k, l, q=3):
    """dim of the holomorphic plus space for k >= 0 (zero when r < 0)."""
    if k < 0:
        raise DomainError(f"holomorphic forms need k >= 0, got k={k}")
    if r_of(k, l, q) < 0:
        return 0
    return d_plus_of(k, l, q)


# -- polynomials in one variable x with TPoly coefficients -------------

def _poly_sub_scaled(f, c, g):
    """f - c*g for coefficient lists (low degree first)."""
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else TPoly.zero(c.field)
        b = g[i] if i < len(g) else TPoly.zero(c.field)
        out.append(a - c * b)
    return out


def _poly_times_x(f):
    return [TPoly.zero(f[0].field)] + list(f)


def poly_text(F, var="x"):
    parts = []
    for n in range(len(F) - 1, -1, -1):
        c = F[n]
        if c.is_zero():
            continue
        mono = "" if n == 0 else (var if n == 1 else f"{var}^{n}")
        ctext = c.to_text()
        single = len(c.terms()) == 1
        neg = single and ctext.startswith("-")
        mag = ctext[1:] if neg else ctext
        if not single:
            mag = f"({mag})"
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        parts.append((neg, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


# -- the elimination --------------------------------------------------

def _check_const(c, what):
    if not c.is_in_A():
        raise InternalError(f"elimination constant {c.to_text()} for {what} is not in A")
    return c


def _triangular(seed, hmod, lead0, i_max, q, strategy, what):
    """Elements f_0..f_imax and their polynomials F_0..F_imax.

    ``seed`` has leading term u^lead0 and nothing else below lead0 + q - 1;
    ``hmod`` is the hauptmodul u^(1-q) + (constant) + ....
    """
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    one = TPoly.const(seed.field, 1)
    fs = [seed]
    Fs = [[one]]
    power = seed
    for i in range(1, i_max + 1):
        if strategy == "recursive":
            g = hmod * fs[i - 1]
            F = _poly_times_x(Fs[i - 1])
        else:
            power = hmod * power
            g = power
            F = [TPoly.zero(seed.field)] * i + [one]
        cs = [g.coeff(lead0 - (q - 1) * (i - d)) for d in range(1, i + 1)]
        for d, c in enumerate(cs, start=1):
            if c.is_zero():
                continue
            _check_const(c, what)
            g = g - fs[i - d].scale(c)
            F = _poly_sub_scaled(F, c, Fs[i - d])
        fs.append(g)
        Fs.append(F)
    return fs, Fs


def _check_shape(s, lead, top, what):
    if s.is_zero() or s.val != lead or s.leading() != 1:
        raise InternalError(f"{what}: leading term is not u^{lead}")
    for e, _ in s.terms():
        if lead < e < top:
            raise InternalError(f"{what}: uncleared term at u^{e}")
        if e >= top:
            break
    if not s.all_in_A():
        raise InternalError(f"{what}: coefficient outside A")


@dataclass(frozen=True, eq=False)
class BasisElement:
    """f_{r,i} = F(j_T) Delta_T^r E_T^l with F monic of degree i."""

    params: FormParams
    i: int
    F: tuple
    expr: GenExpr
    series: USeries

    @property
    def C(self):
        return self.F[0]

    @property
    def r(self):
        return self.params.r

    def F_text(self):
        return poly_text(self.F)

    def to_json(self):
        d = self.params.to_json()
        d.update({"i": self.i, "F": [c.to_json() for c in self.F],
                  "C": self.C.to_json(), "series": self.series.to_json()})
        return d


@dataclass(frozen=True, eq=False)
class PlusBasisElement(BasisElement):
    """f^+_{r,i} = F(j_T^+) * seed with F monic of degree i."""

    parity_case: str = ""
    d_plus: int = 0

    def to_json(self):
        d = super().to_json()
        d.update({"plus": self.parity_case, "d_plus": self.d_plus})
        return d


def _expr_in(hm_expr, F, seed_expr):
    field = seed_expr.field
    acc = GenExpr(field)
    power = seed_expr
    for n, c in enumerate(F):
        if n:
            power = power * hm_expr
        if c:
            acc = acc + power * c
    return acc


def canonical_basis(k, l, i_max, prec, field=None, strategy="recursive"):
    """f_{r,0}, ..., f_{r,i_max} for weight k and type l.

    The returned series are exact below ``max(prec, (q-1)(r+i_max+2)+l+1)``.
    """
    field = DEFAULT_FIELD if field is None else field
    q = field.q
    fp = FormParams(k, l, q)
    r = fp.r
    if i_max < 0:
        raise DomainError("i_max must be non-negative")
    P = max(int(prec), (q - 1) * (r + i_max + 2) + l + 1)
    P0 = P + i_max * (q - 1)
    Pj = max(P0 - (q - 1) * (r + 1) - l, q)
    seed_expr = GenExpr.monomial(field, r, 0, l)
    seed = genexpr_to_series(seed_expr, P0)
    jT, _ = j_invariants(Pj, field)
    lead0 = (q - 1) * r + l
    fs, Fs = _triangular(seed, jT, lead0, i_max, q, strategy, f"f_({r},i)")
    jexpr = GenExpr(field, {(-1, 1, 0): 1})
    out = []
    top = (q - 1) * (r + 1) + l
    for i, (s, F) in enumerate(zip(fs, Fs)):
        s = s.truncate(P)
        _check_shape(s, lead0 - (q - 1) * i, top, f"f_({r},{i})")
        for c in F:
            _check_const(c, f"F_({r},{i})")
        out.append(BasisElement(fp, i, tuple(F), _expr_in(jexpr, F, seed_expr), s))
    return out


def plus_seed(k, l, field):
    """The seed expression of the plus family and its parity case and d^+."""
    q = field.q
    r = r_of(k, l, q)
    dp = d_plus_of(k, l, q)
    case = parity_case(r, l)
    m = half(field)
    T = field.T
    e = (dp - 1) * (q - 1) + l
    ET = GenExpr.monomial(field, 0, 0, e)
    dT, dW = GenExpr.delta_T(field), GenExpr.delta_W(field)
    if case == PARITY_CASES[0]:
        sign = -1 if l % 2 else 1
        seed = (dW - dT * (T ** m) * sign) * ET
    elif case == PARITY_CASES[1]:
        seed = (dW * dW - dT * dT * T ** (q - 1)) * ET
    else:
        seed = ET
    return seed, case, dp


def jplus_expr(field):
    m = half(field)
    num = GenExpr.delta_W(field) - GenExpr.delta_T(field) * field.T ** m
    return num * num * GenExpr.monomial(field, 0, 0, -(field.q - 1))


def canonical_basis_plus(k, l, i_max, prec, field=None, strategy="recursive"):
    """f^+_{r,0}, ..., f^+_{r,i_max} for weight k and type l."""
    field = DEFAULT_FIELD if field is None else field
    q = field.q
    fp = FormParams(k, l, q)
    if i_max < 0:
        raise DomainError("i_max must be non-negative")
    seed_expr, case, dp = plus_seed(k, l, field)
    P = max(int(prec), (q - 1) * (dp + i_max + 1) + l + 1)
    P0 = P + i_max * (q - 1)
    Pj = max(P0 - (q - 1) * dp - l, q)
    seed = genexpr_to_series(seed_expr, P0)
    _, jp = j_invariants(Pj, field)
    lead0 = (q - 1) * (dp - 1) + l
    fs, Fs = _triangular(seed, jp, lead0, i_max, q, strategy, f"f+_({fp.r},i)")
    jexpr = jplus_expr(field)
    top = (q - 1) * dp + l
    out = []
    for i, (s, F) in enumerate(zip(fs, Fs)):
        s = s.truncate(P)
        _check_shape(s, lead0 - (q - 1) * i, top, f"f+_({fp.r},{i})")
        for c in F:
            _check_const(c, f"F+_({fp.r},{i})")
        out.append(PlusBasisElement(fp, i, tuple(F), _expr_in(jexpr, F, seed_expr), s,
                                    parity_case=case, d_plus=dp))
    return out


def plus_holomorphic_basis(k, l, field=None):
    """The W_T-symmetric basis of holomorphic forms and its dimension."""
    field = DEFAULT_FIELD if field is None else field
    q = field.q
    dim = plus_dimension(k, l, q)
    r = r_of(k, l, q)
    m = half(field)
    T = field.T
    sign = -1 if (l + r) % 2 else 1
    elems = []
    for i in range((r - 1) // 2 + 1 if r >= 1 else 0):
        a = GenExpr.monomial(field, i, r - i, l)
        b = GenExpr.monomial(field, r - i, i, l, coeff=T ** (m * (r - 2 * i)) * sign)
        elems.append(a + b)
    if r >= 0 and r % 2 == 0 and l % 2 == 0:
        elems.append(GenExpr.monomial(field, r // 2, r // 2, l))
    if len(elems) != dim:
        raise InternalError(f"built {len(elems)} symmetric forms, expected dimension {dim}")
    return elems, dim
