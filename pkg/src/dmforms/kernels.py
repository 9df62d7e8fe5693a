"""Backend selection and tensor packing for the hot multiplication kernel.

Every product in the package (F_q[T] polynomials, u-series, bivariate
series) is reduced to one primitive: a 2D integer array product that is
truncated along axis 0 and fully convolved along axis 1, mod p.  Extra
dimensions (T, further series variables, the F_q power basis) are
Kronecker-packed into axis 1 with strides wide enough to never overlap.

The compiled backend ``dmforms._ckernels`` is used when importable; the
numpy backend ``dmforms._pure`` is the fallback.  Setting the environment
variable ``DMFORMS_KERNEL=pure`` forces the fallback at import time and
:func:`set_backend` switches at runtime.
"""

import os

import numpy as np

from . import _pure

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"pure": _pure.mul_trunc}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels.mul_trunc

_INT64_HEADROOM = 1 << 62


def available_backends():
    return sorted(_BACKENDS)


def _default_backend():
    wanted = os.environ.get("DMFORMS_KERNEL", "").strip().lower()
    if wanted:
        if wanted not in _BACKENDS:
            raise RuntimeError(
                f"DMFORMS_KERNEL={wanted!r} is not available "
                f"(have {available_backends()})")
        return wanted
    return "compiled" if "compiled" in _BACKENDS else "pure"


BACKEND = _default_backend()
_mul_trunc = _BACKENDS[BACKEND]


def set_backend(name):
    """Select the kernel backend, returning the previously active name."""
    global BACKEND, _mul_trunc
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; have {available_backends()}")
    old = BACKEND
    BACKEND = name
    _mul_trunc = _BACKENDS[name]
    return old


def mul_trunc(a, b, nout, p):
    """Backend-dispatched truncated convolution of two 2D int64 arrays."""
    inner = max(1, min(a.shape[1], b.shape[1]))
    maxpairs = max(1, _INT64_HEADROOM // (inner * (p - 1) ** 2))
    return _mul_trunc(a, b, nout, p, maxpairs)


def _pack(x, out_dims):
    """Flatten trailing dims of ``x`` using the row-major strides of ``out_dims``."""
    n = x.shape[0]
    buf = np.zeros((n,) + tuple(out_dims), dtype=np.int64)
    buf[(slice(None),) + tuple(slice(0, d) for d in x.shape[1:])] = x
    flat = buf.reshape(n, -1)
    strides = np.cumprod((1,) + tuple(out_dims[:0:-1]))[::-1]
    used = int(sum((d - 1) * s for d, s in zip(x.shape[1:], strides))) + 1
    return flat[:, :used]


def tensor_mul(a, b, nout, field):
    """Product of coefficient tensors ``a`` (na, *dims, r) and ``b`` (nb, *dims, r).

    Returns an array of shape ``(nout, *(da + db - 1), r)`` holding the first
    ``nout`` rows of the product, with F_q coordinates reduced by the field
    modulus.  Both inputs must have the same number of dimensions.
    """
    r = field.r
    out_dims = [da + db - 1 for da, db in zip(a.shape[1:-1], b.shape[1:-1])]
    out_dims.append(2 * r - 1)
    if a.shape[0] == 0 or b.shape[0] == 0 or min(out_dims) <= 0 or nout <= 0:
        dims = out_dims[:-1]
        return np.zeros((max(nout, 0), *[max(d, 0) for d in dims], r), dtype=np.int64)
    pa = _pack(a, out_dims)
    pb = _pack(b, out_dims)
    prod = mul_trunc(pa, pb, nout, field.p)
    total = int(np.prod(out_dims))
    if prod.shape[1] < total:
        prod = np.pad(prod, ((0, 0), (0, total - prod.shape[1])))
    prod = prod[:, :total].reshape((nout, *out_dims))
    if r == 1:
        return prod
    return (prod @ field.reduction_matrix) % field.p


def polymul(a, b, field):
    """Product of two coefficient arrays of shape (n, r) and (m, r)."""
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, field.r), dtype=np.int64)
    if field.r == 1:
        return (np.convolve(a[:, 0], b[:, 0]) % field.p)[:, None]
    return tensor_mul(a[None], b[None], 1, field)[0]
