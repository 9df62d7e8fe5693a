"""Exact arithmetic in F_q and in the Laurent polynomial ring F_q[T, 1/T].

Field elements are stored by their coordinates in the power basis of the
defining modulus (little-endian).  Coefficient arrays throughout the
package carry those coordinates on their last axis, so a Laurent
polynomial with ``n`` coefficients is an ``(n, r)`` int64 array.
"""

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product

import numpy as np

from .errors import DivisionByZero, DomainError, InexactDivision
from .kernels import polymul

MAX_P = 1 << 16


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# Dense polynomials over F_p as lists, low degree first.  Only used to
# validate and pick the modulus.

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, m, p):
    a = _fp_trim(list(a))
    inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _fp_trim(a)
    return a


def _fp_mulmod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _fp_mod(out, m, p)


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def is_irreducible(poly, p):
    """Ben-Or test for a polynomial over F_p given low degree first."""
    f = _fp_trim([c % p for c in poly])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    power = x
    for _ in range(n // 2):
        # power <- power^p mod f
        acc, base, e = [1], power, p
        while e:
            if e & 1:
                acc = _fp_mulmod(acc, base, f, p)
            base = _fp_mulmod(base, base, f, p)
            e >>= 1
        power = acc
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        if len(_fp_gcd(f, diff, p)) > 1:
            return False
    return True


def first_irreducible(p, r):
    """Lexicographically first monic irreducible of degree ``r`` over F_p.

    Candidates are ordered by their non-leading coefficients read from the
    highest degree down.
    """
    for tail in product(range(p), repeat=r):
        poly = list(reversed(tail)) + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise DomainError(f"no irreducible polynomial of degree {r} over F_{p}")


@dataclass(frozen=True)
class FieldParams:
    """The finite field F_q, q = p^r, with p an odd prime.

    ``modulus`` lists the coefficients of a monic irreducible polynomial of
    degree ``r`` low degree first; for ``r == 1`` it is ``x``.
    """

    p: int = 3
    r: int = 1
    modulus: tuple = None
    q: int = dc_field(init=False)

    def __post_init__(self):
        p, r = self.p, self.r
        if not isinstance(p, int) or not _is_prime(p) or p == 2:
            raise DomainError(f"p must be an odd prime, got {p!r}")
        if p >= MAX_P:
            raise DomainError(f"p must be below {MAX_P} for int64 kernels")
        if not isinstance(r, int) or r < 1:
            raise DomainError(f"r must be a positive integer, got {r!r}")
        mod = self.modulus
        if mod is None:
            mod = (0, 1) if r == 1 else first_irreducible(p, r)
        mod = tuple(int(c) % p for c in mod)
        if len(mod) != r + 1 or mod[-1] != 1:
            raise DomainError(f"modulus must be monic of degree {r}")
        if not is_irreducible(mod, p):
            raise DomainError(f"modulus {mod} is reducible over F_{p}")
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "q", p ** r)

    def __repr__(self):
        if self.r == 1:
            return f"FieldParams(p={self.p})"
        return f"FieldParams(p={self.p}, r={self.r}, modulus={self.modulus})"

    @cached_property
    def reduction_matrix(self):
        """Rows give x^j mod modulus in coordinates, for j < 2r - 1."""
        p, r = self.p, self.r
        red = np.zeros((2 * r - 1, r), dtype=np.int64)
        cur = [0] * r
        cur[0] = 1
        for j in range(2 * r - 1):
            red[j] = cur
            # multiply by x and reduce with x^r = -sum m_i x^i
            top = cur[-1]
            cur = [0] + cur[:-1]
            for i in range(r):
                cur[i] = (cur[i] - top * self.modulus[i]) % p
        return red

    # -- coordinate-array arithmetic ------------------------------------

    def mul_arr(self, a, b):
        """Elementwise product of broadcastable coordinate arrays (..., r)."""
        if self.r == 1:
            return (a * b) % self.p
        r = self.r
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        full = np.zeros(a.shape[:-1] + (2 * r - 1,), dtype=np.int64)
        for i in range(r):
            full[..., i:i + r] += a[..., i:i + 1] * b
        return (full @ self.reduction_matrix) % self.p

    def inv_coords(self, c):
        c = np.asarray(c, dtype=np.int64)
        if not c.any():
            raise DivisionByZero("inverse of zero in F_q")
        return self._pow_coords(c, self.q - 2)

    def _pow_coords(self, c, e):
        acc = np.zeros(self.r, dtype=np.int64)
        acc[0] = 1
        base = np.asarray(c, dtype=np.int64) % self.p
        while e:
            if e & 1:
                acc = self.mul_arr(acc, base)
            base = self.mul_arr(base, base)
            e >>= 1
        return acc

    # -- element constructors -------------------------------------------

    def coords_of(self, x):
        """Coordinates of an int (image of Z), FqElem or coordinate sequence."""
        if isinstance(x, FqElem):
            return np.array(x.coords, dtype=np.int64)
        if isinstance(x, (int, np.integer)):
            out = np.zeros(self.r, dtype=np.int64)
            out[0] = int(x) % self.p
            return out
        arr = np.asarray(x, dtype=np.int64).reshape(-1) % self.p
        if arr.shape[0] != self.r:
            raise DomainError(f"expected {self.r} coordinates, got {arr.shape[0]}")
        return arr

    def elem(self, x):
        return FqElem(self, self.coords_of(x))

    def from_code(self, code):
        """Element whose coordinates are the base-p digits of ``code``."""
        digits = []
        for _ in range(self.r):
            code, d = divmod(code, self.p)
            digits.append(d)
        return FqElem(self, digits)

    def elements(self):
        return [self.from_code(c) for c in range(self.q)]

    @property
    def zero(self):
        return self.elem(0)

    @property
    def one(self):
        return self.elem(1)

    @property
    def T(self):
        return TPoly.monomial(self, 1, 1)

    def tpoly(self, coeffs, lo=0):
        return TPoly(self, lo, coeffs)

    def to_json(self):
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d):
        return cls(d["p"], d["r"], tuple(d["modulus"]))


class FqElem:
    """Immutable element of F_q."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = tuple(int(c) % field.p for c in coords)
        if len(self.coords) != field.r:
            raise DomainError(f"expected {field.r} coordinates")

    def _other(self, b):
        if isinstance(b, FqElem):
            if b.field != self.field:
                raise DomainError("elements of different fields")
            return np.array(b.coords, dtype=np.int64)
        if isinstance(b, (int, np.integer)):
            return self.field.coords_of(b)
        return NotImplemented

    def _arr(self):
        return np.array(self.coords, dtype=np.int64)

    def __add__(self, b):
        o = self._other(b)
        if o is NotImplemented:
            return o
        return FqElem(self.field, self._arr() + o)

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.field, -self._arr())

    def __sub__(self, b):
        o = self._other(b)
        if o is NotImplemented:
            return o
        return FqElem(self.field, self._arr() - o)

    def __rsub__(self, b):
        return -(self - b)

    def __mul__(self, b):
        o = self._other(b)
        if o is NotImplemented:
            return o
        return FqElem(self.field, self.field.mul_arr(self._arr(), o))

    __rmul__ = __mul__

    def inverse(self):
        return FqElem(self.field, self.field.inv_coords(self._arr()))

    def __truediv__(self, b):
        o = self._other(b)
        if o is NotImplemented:
            return o
        return self * FqElem(self.field, self.field.inv_coords(o))

    def __rtruediv__(self, b):
        return self.inverse() * b

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return FqElem(self.field, self.field._pow_coords(self._arr(), e))

    def is_zero(self):
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    @property
    def code(self):
        return sum(c * self.field.p ** i for i, c in enumerate(self.coords))

    def __eq__(self, b):
        if isinstance(b, (int, np.integer)):
            return self.coords == tuple(self.field.coords_of(b))
        if not isinstance(b, FqElem):
            return NotImplemented
        return self.field == b.field and self.coords == b.coords

    def __hash__(self):
        return hash((self.field.p, self.coords))

    def __repr__(self):
        return f"FqElem({list(self.coords)})"

    def to_text(self):
        return _fq_text(self.field, self.coords)

    def to_json(self):
        return list(self.coords)


def _signed(c, p):
    return c - p if c > p // 2 else c


def _fq_text(field, coords):
    """Render with symmetric residues; the power-basis generator is ``a``."""
    p = field.p
    terms = []
    for i, c in enumerate(coords):
        s = _signed(int(c), p)
        if s == 0:
            continue
        mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
        if mono and abs(s) == 1:
            body = mono
        elif mono:
            body = f"{abs(s)}*{mono}"
        else:
            body = str(abs(s))
        terms.append((s < 0, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] else "") + terms[0][1]
    for neg, body in terms[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _trim_array(arr):
    """Strip zero coefficient rows at both ends; return (offset, trimmed)."""
    nz = np.flatnonzero(arr.any(axis=1))
    if nz.size == 0:
        return 0, arr[:0]
    return int(nz[0]), arr[nz[0]:nz[-1] + 1]


class TPoly:
    """Immutable Laurent polynomial in T over F_q.

    ``lo`` is the lowest exponent and row ``j`` of the coefficient array
    holds the coordinates of the coefficient of ``T**(lo + j)``.  The first
    and last rows are nonzero unless the polynomial is zero (``lo == 0``,
    no rows).
    """

    __slots__ = ("field", "lo", "_c", "_hash")

    def __init__(self, field, lo=0, coeffs=()):
        if isinstance(coeffs, np.ndarray) and coeffs.ndim == 2:
            arr = coeffs.astype(np.int64) % field.p
        else:
            rows = [field.coords_of(c) for c in coeffs]
            arr = np.array(rows, dtype=np.int64).reshape(len(rows), field.r)
        self._init(field, lo, arr)

    def _init(self, field, lo, arr):
        off, arr = _trim_array(arr)
        arr.flags.writeable = False
        self.field = field
        self.lo = int(lo) + off if arr.shape[0] else 0
        self._c = arr
        self._hash = None

    @classmethod
    def from_array(cls, field, lo, arr):
        obj = cls.__new__(cls)
        obj._init(field, lo, np.array(arr, dtype=np.int64) % field.p)
        return obj

    @classmethod
    def zero(cls, field):
        return cls.from_array(field, 0, np.zeros((0, field.r), dtype=np.int64))

    @classmethod
    def const(cls, field, c):
        return cls.from_array(field, 0, field.coords_of(c)[None])

    @classmethod
    def monomial(cls, field, c, e):
        return cls.from_array(field, e, field.coords_of(c)[None])

    @classmethod
    def coerce(cls, field, x):
        if isinstance(x, TPoly):
            return x
        return cls.const(field, x)

    # -- inspection -----------------------------------------------------

    @property
    def array(self):
        return self._c

    def is_zero(self):
        return self._c.shape[0] == 0

    def __bool__(self):
        return not self.is_zero()

    @property
    def hi(self):
        """Highest exponent (``lo - 1`` for zero)."""
        return self.lo + self._c.shape[0] - 1

    @property
    def degree(self):
        return self.hi if self._c.shape[0] else None

    def is_in_A(self):
        return self.lo >= 0

    def is_unit(self):
        """True for c*T^m with c a nonzero constant."""
        return self._c.shape[0] == 1

    def is_monic(self):
        return bool(self._c.shape[0]) and tuple(self._c[-1]) == tuple(self.field.coords_of(1))

    def coeff(self, e):
        j = e - self.lo
        if self.is_zero() or j < 0 or j >= self._c.shape[0]:
            return self.field.zero
        return FqElem(self.field, self._c[j])

    @property
    def coeffs(self):
        return tuple(FqElem(self.field, row) for row in self._c)

    def leading(self):
        return FqElem(self.field, self._c[-1])

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, b):
        if isinstance(b, TPoly):
            if b.field != self.field:
                raise DomainError("polynomials over different fields")
            return b
        if isinstance(b, (int, np.integer, FqElem)):
            return TPoly.const(self.field, b)
        return NotImplemented

    def _aligned(self, b):
        if self.is_zero():
            return b.lo, np.zeros_like(b._c), b._c
        if b.is_zero():
            return self.lo, self._c, np.zeros_like(self._c)
        lo = min(self.lo, b.lo)
        hi = max(self.hi, b.hi)
        x = np.zeros((hi - lo + 1, self.field.r), dtype=np.int64)
        y = np.zeros_like(x)
        x[self.lo - lo:self.hi - lo + 1] = self._c
        y[b.lo - lo:b.hi - lo + 1] = b._c
        return lo, x, y

    def __add__(self, b):
        b = self._coerce(b)
        if b is NotImplemented:
            return b
        lo, x, y = self._aligned(b)
        return TPoly.from_array(self.field, lo, x + y)

    __radd__ = __add__

    def __neg__(self):
        return TPoly.from_array(self.field, self.lo, -self._c)

    def __sub__(self, b):
        b = self._coerce(b)
        if b is NotImplemented:
            return b
        lo, x, y = self._aligned(b)
        return TPoly.from_array(self.field, lo, x - y)

    def __rsub__(self, b):
        return -(self - b)

    def __mul__(self, b):
        if isinstance(b, FqElem) or isinstance(b, (int, np.integer)):
            c = self.field.coords_of(b)
            return TPoly.from_array(self.field, self.lo, self.field.mul_arr(self._c, c))
        b = self._coerce(b)
        if b is NotImplemented:
            return b
        if self.is_zero() or b.is_zero():
            return TPoly.zero(self.field)
        return TPoly.from_array(self.field, self.lo + b.lo, polymul(self._c, b._c, self.field))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            if not self.is_unit():
                raise InexactDivision(f"{self.to_text()} is not a unit in F_q[T, 1/T]")
            inv = self.field.inv_coords(self._c[0])
            return TPoly.monomial(self.field, FqElem(self.field, inv), -self.lo) ** (-e)
        acc = TPoly.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def shift(self, k):
        """Multiply by T^k."""
        if self.is_zero():
            return self
        return TPoly.from_array(self.field, self.lo + k, self._c)

    def exact_div(self, b):
        """The quotient ``self / b`` in F_q[T, 1/T]; fails unless exact."""
        b = self._coerce(b)
        if b.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        if self.is_zero():
            return self
        q = exact_div_rows(self.field, self._c[None], b._c)[0]
        return TPoly.from_array(self.field, self.lo - b.lo, q)

    def __truediv__(self, b):
        return self.exact_div(b)

    def frobenius(self, k=1):
        """Apply T -> T^(q^k); coefficients in F_q are Frobenius-fixed."""
        if self.is_zero():
            return self
        step = self.field.q ** k
        n = self._c.shape[0]
        arr = np.zeros(((n - 1) * step + 1, self.field.r), dtype=np.int64)
        arr[::step] = self._c
        return TPoly.from_array(self.field, self.lo * step, arr)

    # -- comparison, rendering ------------------------------------------

    def __eq__(self, b):
        if isinstance(b, (int, np.integer, FqElem)):
            b = TPoly.const(self.field, b)
        if not isinstance(b, TPoly):
            return NotImplemented
        return (self.field == b.field and self.lo == b.lo
                and self._c.shape == b._c.shape and bool((self._c == b._c).all()))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.lo, self._c.tobytes()))
        return self._hash

    def __repr__(self):
        return f"TPoly({self.to_text()})"

    def terms(self):
        """(exponent, FqElem) pairs of nonzero terms, T-ascending."""
        out = []
        for j, row in enumerate(self._c):
            if row.any():
                out.append((self.lo + j, FqElem(self.field, row)))
        return out

    def to_text(self):
        parts = []
        for e, c in self.terms():
            ctext = c.to_text()
            compound = " " in ctext
            neg = ctext.startswith("-") and not compound
            mag = ctext[1:] if neg else ctext
            if compound:
                mag = f"({mag})"
            tpart = "" if e == 0 else ("T" if e == 1 else f"T^{e}")
            if tpart and mag == "1":
                body = tpart
            elif tpart:
                body = f"{mag}*{tpart}"
            else:
                body = mag
            parts.append((neg, body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __str__(self):
        return self.to_text()

    def to_json(self):
        return {"lo": self.lo, "coeffs": self._c.tolist()}

    @classmethod
    def from_json(cls, field, d):
        arr = np.array(d["coeffs"], dtype=np.int64).reshape(len(d["coeffs"]), field.r)
        return cls.from_array(field, d["lo"], arr)


def exact_div_rows(field, a, c):
    """Divide every row polynomial of ``a`` (m, n, r) by ``c`` (nc, r).

    Rows and ``c`` are read as ordinary polynomials from exponent 0; ``c``
    must have a nonzero constant term (canonical TPoly arrays do), which
    makes divisibility in F_q[T] equivalent to divisibility in
    F_q[T, 1/T].  Raises :class:`InexactDivision` on a nonzero remainder.
    """
    m, n, r = a.shape
    nc = c.shape[0]
    if nc == 1:
        inv = field.inv_coords(c[0])
        return field.mul_arr(a, inv)
    if n < nc:
        if a.any():
            raise InexactDivision("dividend degree below divisor degree")
        return np.zeros((m, 0, r), dtype=np.int64)
    rem = a.copy()
    quot = np.zeros((m, n - nc + 1, r), dtype=np.int64)
    inv_lead = field.inv_coords(c[-1])
    for pos in range(n - 1, nc - 2, -1):
        top = rem[:, pos]
        if not top.any():
            continue
        qc = field.mul_arr(top, inv_lead)
        quot[:, pos - nc + 1] = qc
        rem[:, pos - nc + 1:pos + 1] -= field.mul_arr(qc[:, None, :], c[None, :, :])
        rem %= field.p
    if rem.any():
        raise InexactDivision("nonzero remainder in exact division")
    return quot


def monic_polys(field, d, skip_T_multiples=False):
    """All monic polynomials of degree ``d`` in A = F_q[T].

    Ordered lexicographically on the non-leading coefficients read from
    T^(d-1) down to T^0, each coefficient ordered by its base-p code.
    With ``skip_T_multiples`` the multiples of T (zero constant term) are
    dropped.
    """
    if d < 0:
        raise DomainError("degree must be non-negative")
    elems = field.elements()
    one = field.coords_of(1)
    out = []
    for tail in product(range(field.q), repeat=d):
        if skip_T_multiples and d >= 1 and tail[-1] == 0:
            continue
        arr = np.zeros((d + 1, field.r), dtype=np.int64)
        arr[d] = one
        for pos, code in enumerate(tail):
            arr[d - 1 - pos] = elems[code].coords
        out.append(TPoly.from_array(field, 0, arr))
    return out
