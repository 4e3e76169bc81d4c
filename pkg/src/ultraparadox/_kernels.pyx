# cython: language_level=3, boundscheck=False, wraparound=False
"""Word-scan kernels over unimodular 2x2 integer matrices (int64 arithmetic).

Callers must make sure entries cannot overflow; see ``kernels.fits_int64``.
"""

from libc.stdint cimport int64_t

cdef char* _LETTERS = b"aAbB"
# index of the inverse letter: a<->A, b<->B
cdef int _INV[4]
_INV[0] = 1
_INV[1] = 0
_INV[2] = 3
_INV[3] = 2


cdef struct Gens:
    int64_t m[4][4]


cdef Gens _gens(A, B):
    cdef Gens g
    (a, b), (c, d) = A
    g.m[0][0] = a; g.m[0][1] = b; g.m[0][2] = c; g.m[0][3] = d
    g.m[1][0] = d; g.m[1][1] = -b; g.m[1][2] = -c; g.m[1][3] = a
    (a, b), (c, d) = B
    g.m[2][0] = a; g.m[2][1] = b; g.m[2][2] = c; g.m[2][3] = d
    g.m[3][0] = d; g.m[3][1] = -b; g.m[3][2] = -c; g.m[3][3] = a
    return g


cdef void _scan(Gens* g, int64_t* P, int depth, int maxlen, int last, char* buf,
                int64_t t1, int64_t t2, long long* count, list hits):
    cdef int k
    cdef int64_t Q[4]
    cdef int64_t* G
    cdef int64_t tr
    if depth == maxlen:
        return
    for k in range(4):
        if last >= 0 and k == _INV[last]:
            continue
        G = g.m[k]
        Q[0] = P[0] * G[0] + P[1] * G[2]
        Q[1] = P[0] * G[1] + P[1] * G[3]
        Q[2] = P[2] * G[0] + P[3] * G[2]
        Q[3] = P[2] * G[1] + P[3] * G[3]
        buf[depth] = _LETTERS[k]
        count[0] += 1
        tr = Q[0] + Q[3]
        if tr == t1 or tr == t2:
            hits.append(buf[:depth + 1].decode("ascii"))
        _scan(g, Q, depth + 1, maxlen, k, buf, t1, t2, count, hits)


def trace_scan(A, B, int maxlen, targets=(2, -2)):
    """Count nonidentity words of length <= maxlen; list those whose trace is a target."""
    cdef Gens g = _gens(A, B)
    cdef int64_t P[4]
    cdef long long count = 0
    cdef bytearray buf = bytearray(max(maxlen, 1))
    cdef list hits = []
    P[0] = 1; P[1] = 0; P[2] = 0; P[3] = 1
    t1, t2 = targets
    _scan(&g, P, 0, maxlen, -1, buf, t1, t2, &count, hits)
    return count, hits


cdef void _level(Gens* g, int64_t* P, int depth, int target, int last, list out):
    cdef int k
    cdef int64_t Q[4]
    cdef int64_t* G
    if depth == target:
        out.append(P[0] + P[3])
        return
    for k in range(4):
        if last >= 0 and k == _INV[last]:
            continue
        G = g.m[k]
        Q[0] = P[0] * G[0] + P[1] * G[2]
        Q[1] = P[0] * G[1] + P[1] * G[3]
        Q[2] = P[2] * G[0] + P[3] * G[2]
        Q[3] = P[2] * G[1] + P[3] * G[3]
        _level(g, Q, depth + 1, target, k, out)


def level_traces(A, B, int maxlen):
    """Traces of all reduced words of length <= maxlen, in enumeration order."""
    cdef Gens g = _gens(A, B)
    cdef int64_t P[4]
    cdef list out = []
    cdef int L
    P[0] = 1; P[1] = 0; P[2] = 0; P[3] = 1
    for L in range(maxlen + 1):
        _level(&g, P, 0, L, -1, out)
    return out
