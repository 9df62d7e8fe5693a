"""Pure numpy implementation of the truncated convolution kernel."""

import numpy as np


def _row_ranges(a):
    nz = a != 0
    any_nz = nz.any(axis=1)
    lo = np.argmax(nz, axis=1)
    hi = a.shape[1] - np.argmax(nz[:, ::-1], axis=1)
    return [(i, int(lo[i]), int(hi[i])) for i in np.flatnonzero(any_nz)]


def mul_trunc(a, b, nout, p, maxpairs):
    """Rows ``0..nout-1`` of the 2D product of ``a`` and ``b`` reduced mod ``p``.

    Axis 0 is the truncated series axis, axis 1 is convolved in full.
    ``maxpairs`` bounds how many row products may accumulate before a row
    has to be reduced to stay inside int64.
    """
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    width = a.shape[1] + b.shape[1] - 1
    out = np.zeros((nout, max(width, 0)), dtype=np.int64)
    if nout <= 0 or width <= 0:
        return out
    rows_a = _row_ranges(a)
    rows_b = _row_ranges(b)
    count = np.zeros(nout, dtype=np.int64)
    for i, alo, ahi in rows_a:
        if i >= nout:
            break
        ra = a[i, alo:ahi]
        for j, blo, bhi in rows_b:
            k = i + j
            if k >= nout:
                break
            out[k, alo + blo:ahi + bhi - 1] += np.convolve(ra, b[j, blo:bhi])
            count[k] += 1
            if count[k] >= maxpairs:
                out[k] %= p
                count[k] = 0
    out %= p
    return out
