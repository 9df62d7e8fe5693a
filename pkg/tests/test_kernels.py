import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from dmforms import _pure, kernels
from dmforms.algebra import FieldParams
from dmforms.forms import GENERATORS, delta_T, eisenstein_ET

BACKENDS = kernels.available_backends()


def naive_mul_trunc(a, b, nout, p):
    width = a.shape[1] + b.shape[1] - 1
    out = np.zeros((nout, width), dtype=object)
    for i in range(a.shape[0]):
        for j in range(b.shape[0]):
            if i + j < nout:
                out[i + j] += np.convolve(a[i].astype(object), b[j].astype(object))
    return (out % p).astype(np.int64)


def mats(p, rows=8, cols=6):
    return st.tuples(st.integers(1, rows), st.integers(1, cols)).flatmap(
        lambda sh: arrays(np.int64, sh, elements=st.integers(0, p - 1)))


@pytest.mark.parametrize("backend", BACKENDS)
@given(a=mats(7), b=mats(7), nout=st.integers(0, 12))
@settings(max_examples=60, deadline=None)
def test_backend_matches_naive(backend, a, b, nout):
    old = kernels.set_backend(backend)
    try:
        got = kernels.mul_trunc(a, b, nout, 7)
    finally:
        kernels.set_backend(old)
    assert np.array_equal(got, naive_mul_trunc(a, b, nout, 7))


def test_large_prime_no_overflow():
    p = 65521
    rng = np.random.default_rng(0)
    a = rng.integers(0, p, size=(30, 200), dtype=np.int64)
    b = rng.integers(0, p, size=(30, 200), dtype=np.int64)
    want = naive_mul_trunc(a[:6], b[:6], 6, p)
    for backend in BACKENDS:
        old = kernels.set_backend(backend)
        try:
            got = kernels.mul_trunc(a[:6], b[:6], 6, p)
        finally:
            kernels.set_backend(old)
        assert np.array_equal(got, want), backend


def test_pure_kernel_reduces_when_headroom_is_small():
    rng = np.random.default_rng(1)
    a = rng.integers(0, 5, size=(10, 4), dtype=np.int64)
    b = rng.integers(0, 5, size=(10, 4), dtype=np.int64)
    assert np.array_equal(_pure.mul_trunc(a, b, 10, 5, 1), naive_mul_trunc(a, b, 10, 5))


@pytest.mark.skipif("compiled" not in BACKENDS, reason="extension not built")
def test_series_identical_across_backends():
    F = FieldParams(3, 2)
    outs = []
    old = kernels.BACKEND
    try:
        for backend in BACKENDS:
            kernels.set_backend(backend)
            GENERATORS.clear()
            outs.append((eisenstein_ET(40, F) ** 8, delta_T(40, F)))
    finally:
        kernels.set_backend(old)
        GENERATORS.clear()
    for x, y in zip(outs[0], outs[1]):
        assert x == y


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.set_backend("gpu")


def test_env_var_selects_pure_backend():
    env = dict(os.environ, DMFORMS_KERNEL="pure")
    out = subprocess.run([sys.executable, "-c", "from dmforms import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout
    assert out.strip() == "pure"
    env["DMFORMS_KERNEL"] = "bogus"
    res = subprocess.run([sys.executable, "-c", "import dmforms.kernels"], env=env,
                         capture_output=True, text=True)
    assert res.returncode != 0 and "bogus" in res.stderr
