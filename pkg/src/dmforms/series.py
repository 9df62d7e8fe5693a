"""Truncated Laurent series in a uniformizer with F_q[T, 1/T] coefficients.

A :class:`USeries` is stored densely as an int64 array of shape
``(prec - val, nT, r)``: axis 0 runs over u-exponents ``val..prec-1``,
axis 1 over T-exponents ``tlo..tlo+nT-1`` (shared by all coefficients) and
the last axis holds F_q coordinates.
"""

import numpy as np

from .algebra import FqElem, TPoly, exact_div_rows
from .errors import (DivisionByZero, DomainError, IllegalSubstitution, InexactDivision,
                     NotInvertible,
                     VariableMismatch)
from .kernels import tensor_mul

VARIABLES = ("u", "u0", "u_tau")


def check_prec(n):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"precision must be a positive integer, got {n!r}")
    return int(n)


def _trim_t(arr, tlo):
    """Drop all-zero T columns at both ends of a (n, nT, r) array."""
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        return arr[:, :0], 0
    cols = np.flatnonzero(arr.any(axis=(0, 2)))
    if cols.size == 0:
        return arr[:, :0], 0
    return arr[:, cols[0]:cols[-1] + 1], tlo + int(cols[0])


def _align(field, parts, nrows):
    """Place (offset, arr, tlo) parts into one (nrows, nT, r) array.

    ``offset`` is the u-row where ``arr`` starts; rows past ``nrows`` are
    dropped.  Returns ``(array, tlo)`` with every part summed in.
    """
    live = [(o, a, t) for o, a, t in parts if a.shape[0] and a.shape[1]]
    if not live:
        return np.zeros((nrows, 0, field.r), dtype=np.int64), 0
    tlo = min(t for _, _, t in live)
    thi = max(t + a.shape[1] for _, a, t in live)
    out = np.zeros((nrows, thi - tlo, field.r), dtype=np.int64)
    for o, a, t in live:
        n = min(a.shape[0], nrows - o)
        if n > 0:
            out[o:o + n, t - tlo:t - tlo + a.shape[1]] += a[:n]
    return out % field.p, tlo


def _amul(field, a, ta, b, tb, nout):
    """Truncated product of two (n, nT, r) arrays with T offsets."""
    if nout <= 0:
        return np.zeros((0, 0, field.r), dtype=np.int64), 0
    if a.shape[0] == 0 or a.shape[1] == 0 or b.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((nout, 0, field.r), dtype=np.int64), 0
    return _trim_t(tensor_mul(a, b, nout, field), ta + tb)


class USeries:
    """Immutable truncated Laurent series ``sum c_n u^n + O(u^prec)``."""

    __slots__ = ("field", "var", "val", "prec", "tlo", "_a")

    def __init__(self, field, var, val, prec, tlo, arr):
        if var not in VARIABLES:
            raise DomainError(f"unknown series variable {var!r}")
        self.field = field
        self.var = var
        val, prec, tlo = int(val), int(prec), int(tlo)
        n = max(prec - val, 0)
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim != 3 or arr.shape[2] != field.r:
            raise DomainError("series coefficient array must have shape (n, nT, r)")
        if arr.shape[0] >= n:
            arr = arr[:n]
        else:
            arr = np.concatenate(
                [arr, np.zeros((n - arr.shape[0],) + arr.shape[1:], dtype=np.int64)])
        arr = arr % field.p
        rows = np.flatnonzero(arr.any(axis=(1, 2))) if n and arr.shape[1] else np.array([], dtype=int)
        if rows.size == 0:
            val, arr, tlo = prec, np.zeros((0, 0, field.r), dtype=np.int64), 0
        else:
            val += int(rows[0])
            arr = arr[int(rows[0]):]
            arr, tlo = _trim_t(arr, tlo)
        arr.flags.writeable = False
        self.val, self.prec, self.tlo, self._a = val, prec, tlo, arr

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, field, prec, var="u"):
        return cls(field, var, prec, prec, 0, np.zeros((0, 0, field.r), dtype=np.int64))

    @classmethod
    def from_coeffs(cls, field, val, prec, coeffs, var="u"):
        """Series from TPoly (or scalar) coefficients of u^val, u^(val+1), ..."""
        polys = [TPoly.coerce(field, c) for c in coeffs]
        parts = [(j, c.array[None], c.lo) for j, c in enumerate(polys) if c]
        arr, tlo = _align(field, parts, max(prec - val, 0))
        return cls(field, var, val, prec, tlo, arr)

    @classmethod
    def from_terms(cls, field, terms, prec, var="u"):
        """Series from a mapping exponent -> coefficient (exponents < prec kept)."""
        terms = {e: c for e, c in terms.items() if e < prec}
        if not terms:
            return cls.zero(field, prec, var)
        val = min(terms)
        coeffs = [terms.get(val + j, 0) for j in range(prec - val)]
        return cls.from_coeffs(field, val, prec, coeffs, var)

    @classmethod
    def one(cls, field, prec, var="u"):
        return cls.monomial(field, 1, 0, prec, var)

    @classmethod
    def monomial(cls, field, c, e, prec, var="u"):
        return cls.from_terms(field, {e: c}, prec, var)

    # -- inspection -----------------------------------------------------

    @property
    def array(self):
        return self._a

    def is_zero(self):
        return self._a.shape[0] == 0

    def __bool__(self):
        return not self.is_zero()

    def _row(self, j):
        return TPoly.from_array(self.field, self.tlo, self._a[j])

    def coeff(self, e):
        """Coefficient of u^e as a TPoly; ``e`` must be below ``prec``."""
        if e >= self.prec:
            raise DomainError(f"coefficient of {self.var}^{e} is beyond O({self.var}^{self.prec})")
        j = e - self.val
        if j < 0:
            return TPoly.zero(self.field)
        return self._row(j)

    @property
    def coeffs(self):
        return [self._row(j) for j in range(self._a.shape[0])]

    def leading(self):
        if self.is_zero():
            raise DomainError("zero series has no leading coefficient")
        return self._row(0)

    def terms(self):
        """(exponent, TPoly) for every nonzero coefficient, u-ascending."""
        if self.is_zero():
            return []
        nz = np.flatnonzero(self._a.any(axis=(1, 2)))
        return [(self.val + int(j), self._row(int(j))) for j in nz]

    def all_in_A(self):
        return self.is_zero() or self.tlo >= 0

    def check_type(self, l, q):
        """True iff every nonzero exponent is congruent to l mod (q-1)."""
        return all((e - l) % (q - 1) == 0 for e, _ in self.terms())

    # -- helpers --------------------------------------------------------

    def _same(self, b):
        if b.field != self.field:
            raise DomainError("series over different fields")
        if b.var != self.var:
            raise VariableMismatch(f"cannot combine series in {self.var} and {b.var}")

    def _new(self, val, prec, tlo, arr):
        return USeries(self.field, self.var, val, prec, tlo, arr)

    def _as_series(self, b):
        if isinstance(b, USeries):
            self._same(b)
            return b
        if isinstance(b, (int, np.integer, FqElem, TPoly)):
            return USeries.from_terms(self.field, {0: b}, self.prec, self.var)
        return NotImplemented

    def truncate(self, prec):
        """Forget every term of exponent >= ``prec``."""
        prec = min(int(prec), self.prec)
        return self._new(self.val, prec, self.tlo, self._a)

    def rename(self, var):
        return USeries(self.field, var, self.val, self.prec, self.tlo, self._a)

    def shift(self, k):
        """Multiply by u^k."""
        return self._new(self.val + k, self.prec + k, self.tlo, self._a)

    def shift_T(self, k):
        """Multiply every coefficient by T^k."""
        return self._new(self.val, self.prec, self.tlo + k, self._a)

    # -- ring operations ------------------------------------------------

    def _addsub(self, b, sign):
        b = self._as_series(b)
        if b is NotImplemented:
            return b
        prec = min(self.prec, b.prec)
        val = min(self.val, b.val, prec)
        parts = [(self.val - val, self._a, self.tlo),
                 (b.val - val, (sign * b._a) % self.field.p, b.tlo)]
        arr, tlo = _align(self.field, [x for x in parts if x[0] < prec - val], prec - val)
        return self._new(val, prec, tlo, arr)

    def __add__(self, b):
        return self._addsub(b, 1)

    __radd__ = __add__

    def __sub__(self, b):
        return self._addsub(b, -1)

    def __rsub__(self, b):
        return (-self) + b

    def __neg__(self):
        return self._new(self.val, self.prec, self.tlo, -self._a)

    def scale(self, c):
        """Multiply every coefficient by a scalar or TPoly ``c``."""
        c = TPoly.coerce(self.field, c)
        if c.is_zero() or self.is_zero():
            return USeries.zero(self.field, self.prec, self.var)
        arr, tlo = _amul(self.field, self._a, self.tlo, c.array[None], c.lo, self._a.shape[0])
        return self._new(self.val, self.prec, tlo, arr)

    def __mul__(self, b):
        if isinstance(b, (int, np.integer, FqElem, TPoly)):
            return self.scale(b)
        if not isinstance(b, USeries):
            return NotImplemented
        self._same(b)
        val = self.val + b.val
        prec = min(self.prec + b.val, b.prec + self.val)
        if self.is_zero() or b.is_zero():
            return USeries.zero(self.field, prec, self.var)
        arr, tlo = _amul(self.field, self._a, self.tlo, b._a, b.tlo, prec - val)
        return self._new(val, prec, tlo, arr)

    __rmul__ = __mul__

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            return self.invert() ** (-e)
        if e == 0:
            return USeries.one(self.field, max(self.prec - self.val, 1), self.var)
        acc = None
        base = self
        while e:
            if e & 1:
                acc = base if acc is None else acc * base
            e >>= 1
            if e:
                base = base * base
        return acc

    def invert(self):
        """Multiplicative inverse; the leading coefficient must be c*T^m."""
        if self.is_zero():
            raise NotInvertible("inverse of a series that is zero to precision")
        lead = self.leading()
        if not lead.is_unit():
            raise NotInvertible(f"leading coefficient {lead.to_text()} is not a unit")
        field = self.field
        n = self._a.shape[0]
        cinv = field.inv_coords(lead.array[0])
        # b = self / (c T^m u^val), so b = 1 + O(u)
        b = field.mul_arr(self._a, cinv)
        tlb = self.tlo - lead.lo
        one = np.zeros((1, 1, field.r), dtype=np.int64)
        one[0, 0, 0] = 1
        x, tlx, h = one, 0, 1
        while h < n:
            h2 = min(2 * h, n)
            e, tle = _amul(field, b[:h2], tlb, x, tlx, h2)
            d = e[h:h2]
            corr, tlc = _amul(field, x, tlx, d, tle, h2 - h)
            x, tlx = _align(field, [(0, x, tlx), (h, (-corr) % field.p, tlc)], h2)
            h = h2
        x = field.mul_arr(x, cinv)
        return self._new(-self.val, self.prec - 2 * self.val, tlx - lead.lo, x)

    def __truediv__(self, b):
        if isinstance(b, USeries):
            return self * b.invert()
        b = TPoly.coerce(self.field, b)
        if not b.is_unit():
            return self.scalar_exact_div(b)
        return self.scale(b ** -1)

    def scalar_exact_div(self, c):
        """Divide every coefficient exactly by the TPoly ``c``.

        When the series and ``c`` both have coefficients in A the quotient
        must lie in A as well; otherwise division is in F_q[T, 1/T].
        """
        c = TPoly.coerce(self.field, c)
        if c.is_zero():
            raise DivisionByZero("division of a series by the zero polynomial")
        if self.is_zero():
            return self
        quot = exact_div_rows(self.field, self._a, c.array)
        out = self._new(self.val, self.prec, self.tlo - c.lo, quot)
        if self.all_in_A() and c.is_in_A() and not out.all_in_A():
            raise InexactDivision(f"coefficients are not divisible by {c.to_text()} in A")
        return out

    def substitute(self, g):
        """The composition self(g); ``g`` must have positive valuation."""
        if not isinstance(g, USeries):
            raise DomainError("substitute expects a series")
        if g.field != self.field:
            raise DomainError("series over different fields")
        if g.is_zero() or g.val <= 0:
            raise IllegalSubstitution(
                f"substituted series must have positive valuation, got {g.val}")
        m = g.val
        vf, pf = self.val, self.prec
        if self.is_zero():
            return USeries.zero(self.field, pf * m, g.var)
        if vf == 0:
            prec = min(pf * m, g.prec)
        else:
            prec = min(pf * m, (vf - 1) * m + g.prec)
        nout = prec - vf * m
        field = self.field
        # Horner on the val-0 part h(X) = sum a_j X^j; only X^j with j*m < nout matter
        nterms = min(self._a.shape[0], -(-nout // m)) if nout > 0 else 0
        ga, gt = g._a, g.tlo
        # g as an exact polynomial starting at u^m: shift rows by m
        gfull = np.concatenate([np.zeros((m,) + ga.shape[1:], dtype=np.int64), ga])
        h = np.zeros((max(nout, 0), 0, field.r), dtype=np.int64)
        ht = 0
        for j in range(nterms - 1, -1, -1):
            prod, pt = _amul(field, h, ht, gfull, gt, nout)
            h, ht = _align(field, [(0, prod, pt), (0, self._a[j:j + 1], self.tlo)], nout)
        hs = USeries(field, g.var, 0, prec - vf * m, ht, h)
        if vf == 0:
            return hs.truncate(prec)
        return (hs * g ** vf).truncate(prec)

    def theta(self):
        """The operator -u^2 d/du."""
        p = self.field.p
        if self.is_zero():
            return USeries.zero(self.field, self.prec + 1, self.var)
        exps = np.arange(self.val, self.prec, dtype=np.int64)
        mult = (-exps) % p
        arr = self._a * mult[:, None, None]
        return self._new(self.val + 1, self.prec + 1, self.tlo, arr)

    # -- comparison -----------------------------------------------------

    def __eq__(self, b):
        if not isinstance(b, USeries):
            return NotImplemented
        return (self.field == b.field and self.var == b.var and self.val == b.val
                and self.prec == b.prec and self.tlo == b.tlo
                and self._a.shape == b._a.shape and bool((self._a == b._a).all()))

    __hash__ = None

    def first_mismatch(self, other, lo=None, hi=None):
        """First exponent in [lo, hi) where the coefficients differ.

        ``hi`` defaults to the smaller precision.  Returns
        ``(exponent, mine, theirs)`` or ``None``.
        """
        self._same(other)
        top = min(self.prec, other.prec)
        hi = top if hi is None else min(hi, top)
        diff = self - other
        for e, _ in diff.terms():
            if (lo is None or e >= lo) and e < hi:
                return e, self.coeff(e), other.coeff(e)
        return None

    def agrees(self, other, lo=None, hi=None):
        return self.first_mismatch(other, lo, hi) is None

    # -- rendering ------------------------------------------------------

    def _mono(self, e):
        if e == 0:
            return ""
        if e == 1:
            return self.var
        return f"{self.var}^{e}"

    def to_text(self):
        parts = []
        for e, c in self.terms():
            ctext = c.to_text()
            single = len(c.terms()) == 1
            neg = single and ctext.startswith("-")
            mag = ctext[1:] if neg else ctext
            if not single:
                mag = f"({mag})"
            mono = self._mono(e)
            if not mono:
                body = mag
            elif mag == "1":
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append((neg, body))
        otext = f"O({self._mono(self.prec) or '1'})"
        parts.append((False, otext))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"USeries({self.to_text()})"

    def to_json(self):
        coeffs = [self._row(j).to_json() for j in range(self._a.shape[0])]
        return {"var": self.var, "val": self.val, "prec": self.prec, "coeffs": coeffs}

    @classmethod
    def from_json(cls, field, d):
        coeffs = [TPoly.from_json(field, c) for c in d["coeffs"]]
        if len(coeffs) != d["prec"] - d["val"]:
            raise DomainError("series JSON: coeffs length must equal prec - val")
        return cls.from_coeffs(field, d["val"], d["prec"], coeffs, d["var"])
