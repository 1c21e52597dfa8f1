"""Reduced words over two generators.

Words are plain strings over the alphabet ``a A b B`` where an uppercase
letter is the inverse of its lowercase partner.  A string is *reduced* when no
letter is adjacent to its inverse.  All functions here keep words reduced.

The shortlex order used everywhere ranks words first by length, then
lexicographically with letters ordered ``a < A < b < B``.  Ranks are dense:
rank 0 is the empty word, and the ``4 * 3**(l-1)`` words of length ``l`` form
a contiguous block.  This gives word <-> integer conversion without a lookup
table, which keeps large ball enumerations cheap.
"""

from __future__ import annotations

from .errors import InvalidParam

__all__ = [
    "ALPHABET",
    "inverse_letter",
    "is_reduced",
    "reduce_word",
    "mul_words",
    "invert_word",
    "ball_size",
    "enumerate_ball",
    "word_rank",
    "word_at_rank",
    "parse_word",
]

ALPHABET = "aAbB"

_INV = {"a": "A", "A": "a", "b": "B", "B": "b"}
_LETTER_INDEX = {ch: i for i, ch in enumerate(ALPHABET)}


def inverse_letter(ch: str) -> str:
    return _INV[ch]


def is_reduced(word: str) -> bool:
    return all(_INV[x] != y for x, y in zip(word, word[1:]))


def reduce_word(word: str) -> str:
    """Cancel adjacent inverse pairs until none remain."""
    out: list[str] = []
    for ch in word:
        if ch not in _INV:
            raise InvalidParam(f"letter {ch!r} is not in the alphabet {ALPHABET!r}")
        if out and out[-1] == _INV[ch]:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def mul_words(u: str, v: str) -> str:
    """Product of two reduced words (cancellation only happens at the seam)."""
    if not u:
        return v
    if not v:
        return u
    i = len(u)
    j = 0
    while i > 0 and j < len(v) and u[i - 1] == _INV[v[j]]:
        i -= 1
        j += 1
    return u[:i] + v[j:]


def invert_word(word: str) -> str:
    return "".join(_INV[ch] for ch in reversed(word))


def ball_size(depth: int) -> int:
    """Number of reduced words of length <= depth: 1 + 2 * (3**depth - 1)."""
    if depth < 0:
        raise InvalidParam("ball depth must be >= 0")
    return 1 + 2 * (3 ** depth - 1)


def enumerate_ball(depth: int):
    """Yield all reduced words of length <= depth in shortlex order."""
    if depth < 0:
        raise InvalidParam("ball depth must be >= 0")
    yield ""
    frontier = [""]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            last = w[-1] if w else ""
            for ch in ALPHABET:
                if last and _INV[last] == ch:
                    continue
                nxt.append(w + ch)
        for w in nxt:
            yield w
        frontier = nxt


def _allowed_after(last: str) -> str:
    """Letters permitted after ``last``, in shortlex order."""
    if not last:
        return ALPHABET
    forbidden = _INV[last]
    return "".join(ch for ch in ALPHABET if ch != forbidden)


def word_rank(word: str) -> int:
    """Shortlex rank of a reduced word (empty word has rank 0)."""
    l = len(word)
    if l == 0:
        return 0
    offset = 1 + sum(4 * 3 ** (k - 1) for k in range(1, l))
    within = _LETTER_INDEX[word[0]]
    for prev, ch in zip(word, word[1:]):
        within = within * 3 + _allowed_after(prev).index(ch)
    return offset + within


def word_at_rank(rank: int) -> str:
    """Inverse of :func:`word_rank`."""
    if rank < 0:
        raise InvalidParam("rank must be >= 0")
    if rank == 0:
        return ""
    rank -= 1
    l = 1
    while rank >= 4 * 3 ** (l - 1):
        rank -= 4 * 3 ** (l - 1)
        l += 1
    digits = []
    for _ in range(l - 1):
        digits.append(rank % 3)
        rank //= 3
    first = ALPHABET[rank]
    out = [first]
    for d in reversed(digits):
        out.append(_allowed_after(out[-1])[d])
    return "".join(out)


def parse_word(text: str) -> str:
    """Parse user-facing word text: letters ``aAbB``, or ``e`` for the identity."""
    text = text.strip()
    if text in ("e", ""):
        return ""
    w = reduce_word(text)
    if w != text:
        raise InvalidParam(f"word {text!r} is not reduced (reduces to {w!r})")
    return w
