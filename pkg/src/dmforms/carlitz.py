"""The Carlitz module and the expansions u_a = u(az) = 1/rho_a(1/u)."""

import threading

import numpy as np

from .algebra import TPoly
from .errors import DomainError
from .kernels import polymul
from .series import USeries, check_prec


class TwistedPoly:
    """An F_q-linear polynomial sum c_i X^(q^i) with TPoly coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = [TPoly.coerce(field, c) for c in coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __add__(self, b):
        n = max(len(self.coeffs), len(b.coeffs))
        zero = TPoly.zero(self.field)
        return TwistedPoly(self.field, [
            (self.coeffs[i] if i < len(self.coeffs) else zero)
            + (b.coeffs[i] if i < len(b.coeffs) else zero) for i in range(n)])

    def compose(self, b):
        """self o b; moving a coefficient past X^(q^i) raises it to q^i."""
        if not self.coeffs or not b.coeffs:
            return TwistedPoly(self.field, [])
        out = [TPoly.zero(self.field)] * (len(self.coeffs) + len(b.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, c in enumerate(b.coeffs):
                out[i + j] = out[i + j] + a * c.frobenius(i)
        return TwistedPoly(self.field, out)

    __matmul__ = compose

    def scale(self, c):
        return TwistedPoly(self.field, [c * x for x in self.coeffs])

    def __eq__(self, b):
        if not isinstance(b, TwistedPoly):
            return NotImplemented
        return self.field == b.field and self.coeffs == b.coeffs

    __hash__ = None

    def __repr__(self):
        return "TwistedPoly([" + ", ".join(c.to_text() for c in self.coeffs) + "])"

    def to_json(self):
        return [c.to_json() for c in self.coeffs]


_RHO_CACHE = {}
_RHO_LOCK = threading.Lock()


def rho(a):
    """The twisted polynomial rho_a for a nonzero ``a`` in A."""
    field = a.field
    if a.is_zero() or not a.is_in_A():
        raise DomainError(f"rho_a needs a nonzero element of A, got {a.to_text()}")
    key = (field, a.lo, a.array.tobytes())
    with _RHO_LOCK:
        hit = _RHO_CACHE.get(key)
    if hit is not None:
        return hit
    rho_T = TwistedPoly(field, [field.T, 1])
    # Horner over the T-digits of a
    acc = TwistedPoly(field, [a.coeff(a.degree)])
    for e in range(a.degree - 1, -1, -1):
        acc = rho_T.compose(acc) + TwistedPoly(field, [a.coeff(e)])
    with _RHO_LOCK:
        _RHO_CACHE.setdefault(key, acc)
    return acc


def rho_at_inverse_u(a, prec):
    """rho_a(1/u) as a Laurent series in u (exact below ``prec``)."""
    field = a.field
    tw = rho(a)
    q = field.q
    return USeries.from_terms(field, {-(q ** i): c for i, c in enumerate(tw.coeffs)}, prec)


def _from_zero(c):
    """Coefficient array of a polynomial in A indexed from T^0."""
    pad = np.zeros((c.lo, c.field.r), dtype=np.int64)
    return np.concatenate([pad, c.array])


def u_sub_a(a, prec):
    """The series u(az) for monic ``a``, with terms of exponent < ``prec``.

    Writing rho_a(X) = sum c_i X^(q^i) with c_d = 1, one has
    u(az) = u^(q^d) / D(u) where D = 1 + sum_{i<d} c_i u^(q^d - q^i).
    D only involves exponents divisible by q - 1, so 1/D is produced by the
    sparse recurrence w_n = -sum_i c_i w_(n - e_i) in steps of q - 1.
    """
    prec = check_prec(prec)
    field = a.field
    if not a.is_in_A() or not a.is_monic():
        raise DomainError(f"u_sub_a needs a monic element of A, got {a.to_text()}")
    q, p, r = field.q, field.p, field.r
    d = a.degree
    lead = q ** d
    if lead >= prec:
        return USeries.zero(field, prec)
    tw = rho(a)
    steps = [((lead - q ** i) // (q - 1), _from_zero(c)) for i, c in enumerate(tw.coeffs[:-1])
             if not c.is_zero()]
    nt = (prec - lead - 1) // (q - 1) + 1
    one = np.zeros((1, r), dtype=np.int64)
    one[0, 0] = 1
    w = [one]
    for t in range(1, nt):
        acc = np.zeros((0, r), dtype=np.int64)
        for s, c in steps:
            if s <= t and w[t - s].shape[0]:
                prod = polymul(c, w[t - s], field)
                if prod.shape[0] > acc.shape[0]:
                    acc = np.concatenate(
                        [acc, np.zeros((prod.shape[0] - acc.shape[0], r), dtype=np.int64)])
                acc[:prod.shape[0]] += prod
        acc = (-acc) % p
        nz = np.flatnonzero(acc.any(axis=1))
        w.append(acc[:nz[-1] + 1] if nz.size else acc[:0])
    width = max(x.shape[0] for x in w)
    n = prec - lead
    arr = np.zeros((n, width, r), dtype=np.int64)
    for t, x in enumerate(w):
        arr[t * (q - 1), :x.shape[0]] = x
    return USeries(field, "u", lead, prec, 0, arr)
