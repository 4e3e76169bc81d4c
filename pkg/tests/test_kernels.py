import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultraparadox import _kernels_py, kernels
from ultraparadox.matrices import magnus, rho
from ultraparadox.valued_fields import RationalsPadic
from ultraparadox.words import iter_reduced

A0 = ((1, 1), (1, 2))
A1 = ((5, 2), (2, 1))
PARABOLIC = ((1, 1), (0, 1))


def exact_traces(maxlen):
    q2 = RationalsPadic(2)
    A, B = magnus(0, q2), magnus(1, q2)
    return [int(rho(w, A, B).trace().value) for w in iter_reduced(maxlen)]


def test_python_traces_match_exact_products():
    assert _kernels_py.level_traces(A0, A1, 5) == exact_traces(5)


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="extension not built")
def test_backends_agree():
    assert kernels.level_traces(A0, A1, 7, backend="cython") == \
        kernels.level_traces(A0, A1, 7, backend="python")
    assert kernels.trace_scan(A0, A1, 8, backend="cython") == \
        kernels.trace_scan(A0, A1, 8, backend="python")


@pytest.mark.parametrize("backend", ["python", None])
def test_scan_counts_nonidentity_words(backend):
    count, hits = kernels.trace_scan(A0, A1, 6, backend=backend)
    assert count == 4 * (3 ** 6 - 1) // 2
    assert hits == []


@pytest.mark.parametrize("backend", ["python", None])
def test_parabolic_witnesses(backend):
    # every power of a unipotent matrix is parabolic
    _, hits = kernels.trace_scan(PARABOLIC, A0, 2, backend=backend)
    assert "a" in hits and "aa" in hits and "A" in hits


def test_overflow_guard():
    big = ((10**6 + 1, 10**6), (1, 1))
    assert not kernels.fits_int64(big, A0, 10)
    if kernels.BACKEND == "cython":
        with pytest.raises(OverflowError):
            kernels.trace_scan(big, A0, 10, backend="cython")
    # auto falls back to exact Python integers
    count, _ = kernels.trace_scan(big, A0, 4)
    assert count == 160


@given(st.integers(0, 4))
def test_pure_backend_env_independent(n):
    assert kernels.level_traces(A0, A1, n, backend="python")[0] == 2
