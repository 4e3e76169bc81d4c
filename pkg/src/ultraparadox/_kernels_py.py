"""Pure-Python versions of the word-scan kernels (arbitrary-size integers)."""

from __future__ import annotations

_LETTERS = "aAbB"
_INV = (1, 0, 3, 2)


def _gens(A, B):
    out = []
    for (a, b), (c, d) in (A, B):
        out.append((a, b, c, d))
        out.append((d, -b, -c, a))
    return [out[0], out[1], out[2], out[3]]


def _mul(P, G):
    return (P[0] * G[0] + P[1] * G[2], P[0] * G[1] + P[1] * G[3],
            P[2] * G[0] + P[3] * G[2], P[2] * G[1] + P[3] * G[3])


def trace_scan(A, B, maxlen: int, targets=(2, -2)):
    """Count nonidentity words of length <= maxlen; list those whose trace is a target."""
    gens = _gens(A, B)
    targets = set(targets)
    hits: list[str] = []
    count = 0

    def walk(P, depth, last, word):
        nonlocal count
        if depth == maxlen:
            return
        for k in range(4):
            if last >= 0 and k == _INV[last]:
                continue
            Q = _mul(P, gens[k])
            w = word + _LETTERS[k]
            count += 1
            if Q[0] + Q[3] in targets:
                hits.append(w)
            walk(Q, depth + 1, k, w)

    walk((1, 0, 0, 1), 0, -1, "")
    return count, hits


def level_traces(A, B, maxlen: int) -> list[int]:
    """Traces of all reduced words of length <= maxlen, in enumeration order."""
    gens = _gens(A, B)
    out = [2]
    level = [((1, 0, 0, 1), -1)]
    for _ in range(maxlen):
        nxt = []
        for P, last in level:
            for k in range(4):
                if last >= 0 and k == _INV[last]:
                    continue
                Q = _mul(P, gens[k])
                nxt.append((Q, k))
        out.extend(Q[0] + Q[3] for Q, _ in nxt)
        level = nxt
    return out
