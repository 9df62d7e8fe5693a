"""The generator forms of level T and symbolic expressions in them.

The basic u-expansions are sums over monic a in A of expressions in
u_a = u(az).  Everything else (Delta_T, Delta_W, j_T, j_T^+) is derived
from them by exact series arithmetic.
"""

import threading
from dataclasses import dataclass

from .algebra import FieldParams, FqElem, TPoly, monic_polys
from .carlitz import u_sub_a
from .errors import AllZeroAtPrecision, DomainError, InternalError, TypeWeightMismatch
from .series import USeries, check_prec

DEFAULT_FIELD = FieldParams(3)

FORM_NAMES = ("E", "ET", "g1", "deltaT", "deltaW", "jT", "jTplus")


def _field(field):
    return DEFAULT_FIELD if field is None else field


def half(field):
    """m = (q-1)/2, the exponent in the W_T action."""
    return (field.q - 1) // 2


def bracket1(field):
    """[1] = T^q - T."""
    T = field.T
    return T ** field.q - T


# -- the generator series ---------------------------------------------


def _compute_base(field, N):
    q = field.q
    zero = USeries.zero(field, N)
    E, E_Tdiv = zero, zero          # sum a*u_a over all a, over T | a
    S, S_Tdiv = zero, zero          # sum u_a^(q-1) over all a, over T | a
    d = 0
    while q ** d < N:
        for a in monic_polys(field, d):
            ua = u_sub_a(a, N)
            term = ua.scale(a)
            pw = (ua ** (q - 1)).truncate(N) if q ** d * (q - 1) < N else None
            E = E + term
            if pw is not None:
                S = S + pw
            if d >= 1 and a.coeff(0).is_zero():
                E_Tdiv = E_Tdiv + term
                if pw is not None:
                    S_Tdiv = S_Tdiv + pw
        d += 1
    one = USeries.one(field, N)
    b1 = bracket1(field)
    T = field.T
    g1 = one - S.scale(b1)
    g1T = one - S_Tdiv.scale(b1)
    dT = (g1T - g1).scalar_exact_div(b1)
    dW = (g1T.scale(T ** q) - g1.scale(T)).scalar_exact_div(b1)
    for name, s in (("E", E), ("g1", g1), ("deltaT", dT), ("deltaW", dW)):
        if not s.all_in_A():
            raise InternalError(f"{name} has a coefficient outside A")
    return {
        "E": E,
        "ET": E - E_Tdiv,
        "Eplus": E + E_Tdiv,        # E(z) + T E(Tz)
        "g1": g1,
        "g1T": g1T,
        "deltaT": dT,
        "deltaW": dW,
    }


class _GeneratorCache:
    """Per-field cache of the generator series at the largest precision seen."""

    def __init__(self):
        self._lock = threading.Lock()
        self._store = {}

    def base(self, field, N):
        with self._lock:
            hit = self._store.get(field)
            if hit is not None and hit[0] >= N:
                return {k: v.truncate(N) for k, v in hit[1].items()}
        data = _compute_base(field, N)
        with self._lock:
            hit = self._store.get(field)
            if hit is None or hit[0] < N:
                self._store[field] = (N, data)
        return dict(data)

    def clear(self):
        with self._lock:
            self._store.clear()


GENERATORS = _GeneratorCache()


def _base(field, prec):
    return GENERATORS.base(_field(field), check_prec(prec))


def eisenstein_E(prec, field=None):
    """E = sum over monic a of a*u(az)."""
    return _base(field, prec)["E"]


def eisenstein_ET(prec, field=None):
    """E_T: the same sum restricted to a prime to T."""
    return _base(field, prec)["ET"]


def e_plus(prec, field=None):
    """E(z) + T E(Tz), the weight-2 correction term of the operator d^+."""
    return _base(field, prec)["Eplus"]


def g1(prec, field=None):
    """g_1 = 1 - (T^q - T) * sum over monic a of u_a^(q-1)."""
    return _base(field, prec)["g1"]


def g1_Tz(prec, field=None):
    """g_1(Tz), summed directly over the monic multiples of T."""
    return _base(field, prec)["g1T"]


def delta_T(prec, field=None):
    """(g_1(Tz) - g_1(z)) / (T^q - T)."""
    return _base(field, prec)["deltaT"]


def delta_W(prec, field=None):
    """(T^q g_1(Tz) - T g_1(z)) / (T^q - T)."""
    return _base(field, prec)["deltaW"]


def j_invariants(prec, field=None):
    """(j_T, j_T^+) to precision ``prec``."""
    field = _field(field)
    prec = check_prec(prec)
    q = field.q
    b = _base(field, prec + 2 * (q - 1))
    dT, dW, ET = b["deltaT"], b["deltaW"], b["ET"]
    jT = (dW * dT.invert()).truncate(prec)
    num = dW - dT.scale(field.T ** half(field))
    jplus = (num * num * (ET ** (q - 1)).invert()).truncate(prec)
    return jT, jplus


def form_series(name, prec, field=None):
    """Series of a generator form by its CLI name."""
    if name in ("jT", "jTplus"):
        jT, jp = j_invariants(prec, field)
        return jT if name == "jT" else jp
    if name not in FORM_NAMES:
        raise DomainError(f"unknown form {name!r}; choose from {', '.join(FORM_NAMES)}")
    return _base(field, prec)[name]


# -- weights and types --------------------------------------------------


@dataclass(frozen=True)
class FormParams:
    """Weight k and type l with r = (k - 2l)/(q - 1)."""

    k: int
    l: int
    q: int

    def __post_init__(self):
        q, k, l = self.q, self.k, self.l
        if not 0 <= l <= q - 2:
            raise TypeWeightMismatch(f"type l={l} must satisfy 0 <= l <= q-2 = {q - 2}")
        if (k - 2 * l) % (q - 1):
            raise TypeWeightMismatch(
                f"k = {k} and l = {l} violate k = 2l (mod q-1): "
                f"k - 2l = {k - 2 * l} is not divisible by {q - 1}")

    @property
    def r(self):
        return (self.k - 2 * self.l) // (self.q - 1)

    def to_json(self):
        return {"k": self.k, "l": self.l, "r": self.r}


# -- symbolic expressions -----------------------------------------------


class GenExpr:
    """Laurent polynomial in Delta_T, Delta_W, E_T with TPoly coefficients.

    ``terms`` maps exponent triples (e_dT, e_dW, e_ET) to nonzero TPoly
    coefficients.  Any exponent may be negative.
    """

    __slots__ = ("field", "terms")

    def __init__(self, field, terms=None):
        self.field = field
        clean = {}
        for key, c in (terms or {}).items():
            c = TPoly.coerce(field, c)
            if c:
                clean[tuple(int(x) for x in key)] = c
        self.terms = clean

    @classmethod
    def monomial(cls, field, a=0, b=0, c=0, coeff=1):
        return cls(field, {(a, b, c): coeff})

    @classmethod
    def const(cls, field, c):
        return cls(field, {(0, 0, 0): c})

    @classmethod
    def delta_T(cls, field):
        return cls.monomial(field, 1, 0, 0)

    @classmethod
    def delta_W(cls, field):
        return cls.monomial(field, 0, 1, 0)

    @classmethod
    def E_T(cls, field):
        return cls.monomial(field, 0, 0, 1)

    def _coerce(self, b):
        if isinstance(b, GenExpr):
            if b.field != self.field:
                raise DomainError("expressions over different fields")
            return b
        if isinstance(b, (int, FqElem, TPoly)):
            return GenExpr.const(self.field, b)
        return NotImplemented

    def __add__(self, b):
        b = self._coerce(b)
        if b is NotImplemented:
            return b
        out = dict(self.terms)
        for k, c in b.terms.items():
            out[k] = out[k] + c if k in out else c
        return GenExpr(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return GenExpr(self.field, {k: -c for k, c in self.terms.items()})

    def __sub__(self, b):
        b = self._coerce(b)
        if b is NotImplemented:
            return b
        return self + (-b)

    def __rsub__(self, b):
        return (-self) + b

    def __mul__(self, b):
        if isinstance(b, (int, FqElem, TPoly)):
            return GenExpr(self.field, {k: c * b for k, c in self.terms.items()})
        b = self._coerce(b)
        if b is NotImplemented:
            return b
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in b.terms.items():
                k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return GenExpr(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            if len(self.terms) != 1:
                raise DomainError("only monomials have negative powers")
            (key, c), = self.terms.items()
            return GenExpr(self.field, {tuple(x * e for x in key): c ** e})
        acc = GenExpr.const(self.field, 1)
        for _ in range(e):
            acc = acc * self
        return acc

    def __eq__(self, b):
        if not isinstance(b, GenExpr):
            return NotImplemented
        return self.field == b.field and self.terms == b.terms

    __hash__ = None

    def is_zero(self):
        return not self.terms

    def weight_type(self):
        """The common (k, l mod (q-1)) of all terms, or None if inhomogeneous."""
        q = self.field.q
        wts = {((q - 1) * (a + b) + 2 * c, c % (q - 1)) for a, b, c in self.terms}
        return wts.pop() if len(wts) == 1 else None

    def is_homogeneous(self):
        return len(self.terms) <= 1 or self.weight_type() is not None

    def wT_image(self):
        """Image under the Fricke involution W_T.

        Delta_T -> -T^(-m) Delta_W, Delta_W -> -T^m Delta_T and
        E_T -> -E_T with m = (q-1)/2.
        """
        m = half(self.field)
        out = {}
        for (a, b, c), coeff in self.terms.items():
            sign = -1 if (a + b + c) % 2 else 1
            out[(b, a, c)] = (coeff * sign).shift(m * (b - a))
        return GenExpr(self.field, out)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_text(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b, c), coeff in self.sorted_terms():
            mono = []
            for sym, e in (("dT", a), ("dW", b), ("ET", c)):
                if e == 1:
                    mono.append(sym)
                elif e:
                    mono.append(f"{sym}^{e}")
            ctext = coeff.to_text()
            body = "*".join(mono)
            if not body:
                parts.append(f"({ctext})")
            elif ctext == "1":
                parts.append(body)
            else:
                parts.append(f"({ctext})*{body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"GenExpr({self.to_text()})"

    def to_json(self):
        return [{"exp": list(k), "coeff": c.to_json()} for k, c in self.sorted_terms()]


def _gen_power(cache, name, base, e):
    key = (name, e)
    if key not in cache:
        cache[key] = base ** e
    return cache[key]


def genexpr_to_series(e, prec, field=None):
    """u-expansion of a GenExpr, correct for all exponents below ``prec``."""
    field = e.field if field is None else field
    prec = int(prec)
    if e.is_zero():
        return USeries.zero(field, prec)
    q = field.q
    vmin = min((q - 1) * a + c for a, _, c in e.terms)
    work = max(prec - vmin + (q - 1), prec, 1) + 1
    while True:
        b = _base(field, work)
        cache = {}
        total = None
        for (a, bw, c), coeff in e.sorted_terms():
            s = USeries.one(field, work)
            for name, ex in (("deltaT", a), ("deltaW", bw), ("ET", c)):
                if ex:
                    s = s * _gen_power(cache, name, b[name], ex)
            s = s.scale(coeff)
            total = s if total is None else total + s
        if total.prec >= prec:
            return total.truncate(prec)
        work += prec - total.prec + 1


def cusp_orders(e, prec):
    """(ord_inf, ord_0) of a homogeneous expression, read from u-valuations."""
    if not e.is_homogeneous():
        raise DomainError("cusp orders need a homogeneous expression")
    s_inf = genexpr_to_series(e, prec)
    s_zero = genexpr_to_series(e.wT_image(), prec)
    for s, where in ((s_inf, "infinity"), (s_zero, "0")):
        if s.is_zero():
            raise AllZeroAtPrecision(
                f"expansion at the cusp {where} vanishes below u^{prec}; raise the precision")
    return s_inf.val, s_zero.val
