"""Reduced words in the free group on a, b.

Letters are written ``a``, ``A`` (= a^-1), ``b``, ``B`` (= b^-1); the empty
word prints as ``1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

LETTERS = "aAbB"  # enumeration order: a < a^-1 < b < b^-1
IDENTITY = "1"
_INV = str.maketrans("aAbB", "AaBb")
_INVERSE_OF = {"a": "A", "A": "a", "b": "B", "B": "b"}


def _is_reduced(letters: str) -> bool:
    return all(_INVERSE_OF[x] != y for x, y in zip(letters, letters[1:]))


@dataclass(frozen=True, order=False)
class Word:
    letters: str = ""

    def __post_init__(self):
        if any(c not in _INVERSE_OF for c in self.letters):
            raise ValueError(f"bad letter in {self.letters!r}")
        if not _is_reduced(self.letters):
            raise ValueError(f"{self.letters!r} is not reduced")

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse and freely reduce a word string."""
        text = text.strip()
        if text in ("", IDENTITY):
            return EMPTY
        stack: list[str] = []
        for c in text:
            if c not in _INVERSE_OF:
                raise ValueError(f"bad letter {c!r} in {text!r}")
            if stack and stack[-1] == _INVERSE_OF[c]:
                stack.pop()
            else:
                stack.append(c)
        return _word("".join(stack))

    def __mul__(self, other: "Word") -> "Word":
        return reduce_concat(self, other)

    def inverse(self) -> "Word":
        return _word(self.letters[::-1].translate(_INV))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self) -> str:
        return self.letters or IDENTITY

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        out = EMPTY
        for _ in range(abs(k)):
            out = out * base
        return out


def _word(letters: str) -> Word:
    # trusted constructor: caller guarantees the letters are reduced
    w = object.__new__(Word)
    object.__setattr__(w, "letters", letters)
    return w


EMPTY = _word("")


def reduce_concat(u: Word, v: Word) -> Word:
    x, y = u.letters, v.letters
    i = 0
    n = min(len(x), len(y))
    while i < n and _INVERSE_OF[x[len(x) - 1 - i]] == y[i]:
        i += 1
    return _word(x[: len(x) - i] + y[i:])


def prefix_letter(w: Word) -> str:
    return w.letters[0] if w.letters else IDENTITY


def iter_reduced(maxlen: int) -> Iterator[Word]:
    """Reduced words by length, then lexicographically (a < A < b < B)."""
    if maxlen < 0:
        raise ValueError("maxlen must be non-negative")
    level = [""]
    yield EMPTY
    for _ in range(maxlen):
        nxt = []
        for w in level:
            last = _INVERSE_OF[w[-1]] if w else None
            for c in LETTERS:
                if c != last:
                    nxt.append(w + c)
        for w in nxt:
            yield _word(w)
        level = nxt


def enumerate_reduced(maxlen: int) -> list[Word]:
    return list(iter_reduced(maxlen))


def count_reduced(maxlen: int) -> int:
    return 1 + sum(4 * 3 ** (k - 1) for k in range(1, maxlen + 1))


# --------------------------------------------------------------------------
# syllables and conjugacy classes


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class APower:
    n: int


@dataclass(frozen=True)
class BPower:
    m: int


@dataclass(frozen=True)
class Syllables:
    pairs: tuple[tuple[int, int], ...]


SyllableForm = Union[Empty, APower, BPower, Syllables]


def _runs(letters: str) -> list[tuple[str, int]]:
    runs: list[tuple[str, int]] = []
    for c in letters:
        gen = c.lower()
        step = 1 if c.islower() else -1
        if runs and runs[-1][0] == gen:
            runs[-1] = (gen, runs[-1][1] + step)
        else:
            runs.append((gen, step))
    return runs


def to_syllables(w: Word) -> SyllableForm:
    """Read ``w`` as written as 1, a^n, b^m or a^n1 b^m1 ... a^nk b^mk."""
    runs = _runs(w.letters)
    if not runs:
        return Empty()
    if len(runs) == 1:
        gen, e = runs[0]
        return APower(e) if gen == "a" else BPower(e)
    if runs[0][0] != "a" or runs[-1][0] != "b":
        raise ValueError(f"{w} is not syllable-shaped as written")
    return Syllables(tuple((runs[i][1], runs[i + 1][1]) for i in range(0, len(runs), 2)))


def from_syllables(form: SyllableForm) -> Word:
    def run(gen: str, e: int) -> str:
        return (gen if e > 0 else gen.upper()) * abs(e)

    if isinstance(form, Empty):
        return EMPTY
    if isinstance(form, APower):
        return _word(run("a", form.n))
    if isinstance(form, BPower):
        return _word(run("b", form.m))
    return _word("".join(run("a", n) + run("b", m) for n, m in form.pairs))


def cyclic_reduce(w: Word) -> Word:
    s = w.letters
    i, j = 0, len(s) - 1
    while i < j and _INVERSE_OF[s[i]] == s[j]:
        i += 1
        j -= 1
    return _word(s[i:j + 1])


@dataclass(frozen=True)
class ConjClass:
    rep: Word
    form: SyllableForm
    la: int
    lb: int

    @property
    def l(self) -> int:  # noqa: E743
        return self.la + self.lb

    @property
    def is_identity(self) -> bool:
        return isinstance(self.form, Empty)

    def __str__(self) -> str:
        return f"[{self.rep}]"


@lru_cache(maxsize=1 << 18)
def _canonical(letters: str) -> ConjClass:
    core = cyclic_reduce(_word(letters)).letters
    runs = _runs(core)
    if len(runs) > 1 and runs[0][0] == runs[-1][0]:
        # only possible for a cyclically reduced word when the end runs share a sign
        gen, e = runs.pop()
        runs[0] = (gen, runs[0][1] + e)
    if not runs:
        return ConjClass(EMPTY, Empty(), 0, 0)
    if len(runs) == 1:
        gen, e = runs[0]
        form = APower(e) if gen == "a" else BPower(e)
        return ConjClass(from_syllables(form), form,
                         abs(e) if gen == "a" else 0, abs(e) if gen == "b" else 0)
    if runs[0][0] != "a":
        runs = runs[1:] + runs[:1]
    pairs = [(runs[i][1], runs[i + 1][1]) for i in range(0, len(runs), 2)]
    k = len(pairs)
    best_key = None
    best: list[tuple[int, int]] = []
    for r in range(k):
        cand = pairs[r:] + pairs[:r]
        key = (tuple(max(abs(n), abs(m)) for n, m in cand),
               tuple(x for pair in cand for x in pair))
        if best_key is None or key > best_key:
            best_key, best = key, cand
        elif key == best_key:
            assert cand == best
    form = Syllables(tuple(best))
    return ConjClass(from_syllables(form), form,
                     sum(abs(n) for n, _ in best), sum(abs(m) for _, m in best))


def canonical_class(w: Word) -> ConjClass:
    """Canonical representative of the conjugacy class of ``w``.

    Among cyclic rotations of syllables, the one maximising the vector of
    syllable maxima lexicographically wins; ties go to the larger exponent
    vector.
    """
    return _canonical(w.letters)


def conjugacy_classes(maxlen: int) -> list[ConjClass]:
    """All classes with length <= maxlen, sorted by (length, representative)."""
    seen: dict[str, ConjClass] = {}
    for w in iter_reduced(maxlen):
        c = canonical_class(w)
        seen.setdefault(c.rep.letters, c)
    order = {c: i for i, c in enumerate(LETTERS)}
    return sorted(seen.values(), key=lambda c: (c.l, [order[x] for x in c.rep.letters]))
