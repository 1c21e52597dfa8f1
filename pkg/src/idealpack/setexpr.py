"""Set-description DSL: parser, printer, finiteness judgment, materialization.

Grammar (LL(1), whitespace-insensitive, case-sensitive names)::

    expr := name | prim | comb
    prim := "evens" | "triangular" | "all" | "empty"
          | "ap(" int "," int ")" | "powers(" int ")"
          | "list{" [int ("," int)*] "}" | "interval(" int "," int ")"
          | "f2start(" letter ")"
    comb := ("union" | "inter" | "diff") "(" expr "," expr ")"
          | "compl(" expr ")"
          | "shift(" expr "," (int | word) ")"

A bare identifier that is not a reserved name is a reference into a catalog
of named sets and must be resolved (:func:`resolve`) before materialization.

``shift`` is symbolic: materialization evaluates the shifted predicate
pointwise, so no boundary loss occurs at the window edge (unlike the budgeted
runtime translation of an already-materialized set).  On Z-mod-N it rotates;
on the free group the second argument is a reduced word and truncation drops
are recorded in the result's tally.

Integer primitives take their pointwise meaning on the representative range
``[0, N)`` of Z-mod-N (``evens`` on Z_12 is {0,2,4,6,8,10}; ``ap`` does not
wrap — only ``shift`` wraps, because translation does).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Union

import numpy as np

from . import bitops, words
from .errors import (
    InvalidParam,
    KindMismatch,
    SetSyntaxError,
    UnknownName,
    UnknownPrimitive,
)
from .groups import FreeGroup2, Group, MaterializedSet, ZModGroup, ZWindowGroup

__all__ = [
    "SetExpr",
    "Prim",
    "Combine",
    "Shift",
    "NameRef",
    "parse_set_expr",
    "print_set_expr",
    "symbolic_finiteness",
    "materialize",
    "resolve",
    "free_names",
    "Catalog",
    "parse_catalog",
    "load_catalog",
    "default_catalog",
]


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Prim:
    """Leaf set: evens, triangular, all, empty, ap, powers, list, interval, f2start."""

    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Combine:
    """union/inter/diff (binary) or compl (unary)."""

    op: str
    args: tuple


@dataclass(frozen=True)
class Shift:
    """Symbolic translate of the inner set by an integer or a reduced word."""

    inner: "SetExpr"
    by: Union[int, str]


@dataclass(frozen=True)
class NameRef:
    """Reference to a catalog-defined name; resolved before materialization."""

    name: str


SetExpr = Union[Prim, Combine, Shift, NameRef]

_NULLARY = ("evens", "triangular", "all", "empty")
_BINARY_COMBS = ("union", "inter", "diff")
RESERVED = frozenset(_NULLARY) | frozenset(_BINARY_COMBS) | {
    "ap", "powers", "list", "interval", "f2start", "compl", "shift",
}

_F2_LETTERS = frozenset(words.ALPHABET)


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

class _Scanner:
    """Tokenizer tracking byte offsets for diagnostics."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> tuple[str, str, int]:
        """Return (kind, value, offset) without consuming."""
        self._skip_ws()
        start = self.pos
        if start >= len(self.text):
            return ("end", "", start)
        ch = self.text[start]
        if ch in "(){},":
            return (ch, ch, start)
        if ch.isdigit() or (ch == "-" and start + 1 < len(self.text) and self.text[start + 1].isdigit()):
            j = start + 1
            while j < len(self.text) and self.text[j].isdigit():
                j += 1
            return ("int", self.text[start:j], start)
        if ch.isalpha() or ch == "_":
            j = start + 1
            while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
                j += 1
            return ("ident", self.text[start:j], start)
        raise SetSyntaxError(f"unexpected character {ch!r}", start)

    def take(self, kind: str | None = None, expected: str = "") -> tuple[str, str, int]:
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            raise SetSyntaxError(
                f"unexpected {tok[0]} {tok[1]!r}" if tok[0] != "end" else "unexpected end of input",
                tok[2],
                expected or kind,
            )
        self.pos = tok[2] + len(tok[1])
        return tok


def _parse_int(sc: _Scanner) -> int:
    return int(sc.take("int", "integer")[1])


def _parse_expr(sc: _Scanner) -> SetExpr:
    kind, name, off = sc.take("ident", "set expression")
    if name in _NULLARY:
        return Prim(name)
    if name in ("ap", "interval"):
        sc.take("(")
        a = _parse_int(sc)
        sc.take(",")
        b = _parse_int(sc)
        sc.take(")")
        return Prim(name, (a, b))
    if name == "powers":
        sc.take("(")
        b = _parse_int(sc)
        sc.take(")")
        return Prim(name, (b,))
    if name == "list":
        sc.take("{")
        items: list[int] = []
        if sc.peek()[0] != "}":
            items.append(_parse_int(sc))
            while sc.peek()[0] == ",":
                sc.take(",")
                items.append(_parse_int(sc))
        sc.take("}")
        return Prim("list", tuple(items))
    if name == "f2start":
        sc.take("(")
        k, letter, loff = sc.take("ident", "letter a, A, b, or B")
        if letter not in _F2_LETTERS:
            raise SetSyntaxError(f"bad letter {letter!r}", loff, "one of a, A, b, B")
        sc.take(")")
        return Prim("f2start", (letter,))
    if name in _BINARY_COMBS:
        sc.take("(")
        left = _parse_expr(sc)
        sc.take(",")
        right = _parse_expr(sc)
        sc.take(")")
        return Combine(name, (left, right))
    if name == "compl":
        sc.take("(")
        inner = _parse_expr(sc)
        sc.take(")")
        return Combine("compl", (inner,))
    if name == "shift":
        sc.take("(")
        inner = _parse_expr(sc)
        sc.take(",")
        tk, tv, toff = sc.take(None)
        if tk == "int":
            by: Union[int, str] = int(tv)
        elif tk == "ident":
            try:
                by = words.parse_word(tv)
            except InvalidParam:
                raise SetSyntaxError(f"bad word {tv!r}", toff, "integer or reduced word") from None
        else:
            raise SetSyntaxError(f"unexpected {tv!r}", toff, "integer or reduced word")
        sc.take(")")
        return Shift(inner, by)
    # Not a known primitive/combinator.  Applied like one, that's an error;
    # bare, it's a catalog reference.
    if sc.peek()[0] in ("(", "{"):
        raise UnknownPrimitive(f"unknown primitive {name!r}", off, "a known primitive name")
    return NameRef(name)


def parse_set_expr(text: str) -> SetExpr:
    """Parse DSL text to a tree; raise :class:`SetSyntaxError` with an offset."""
    sc = _Scanner(text)
    expr = _parse_expr(sc)
    tail = sc.peek()
    if tail[0] != "end":
        raise SetSyntaxError(f"trailing input {tail[1]!r}", tail[2], "end of input")
    return expr


def print_set_expr(expr: SetExpr) -> str:
    """Canonical text for a tree; ``parse_set_expr`` inverts it exactly."""
    if isinstance(expr, Prim):
        if expr.name == "list":
            return "list{" + ",".join(str(x) for x in expr.args) + "}"
        if not expr.args:
            return expr.name
        return expr.name + "(" + ",".join(str(a) for a in expr.args) + ")"
    if isinstance(expr, Combine):
        return expr.op + "(" + ",".join(print_set_expr(a) for a in expr.args) + ")"
    if isinstance(expr, Shift):
        by = expr.by if isinstance(expr.by, int) else (expr.by or "e")
        return f"shift({print_set_expr(expr.inner)},{by})"
    if isinstance(expr, NameRef):
        return expr.name
    raise TypeError(f"not a SetExpr: {expr!r}")


# --------------------------------------------------------------------------
# Finiteness
# --------------------------------------------------------------------------

_FINITE_PRIMS = {"empty", "list", "interval"}
_INFINITE_PRIMS = {"evens", "triangular", "all", "ap", "powers", "f2start"}


def symbolic_finiteness(expr: SetExpr) -> str:
    """Sound judgment {finite, infinite, unknown} from the tree alone.

    Judged for an infinite ambient group; a window materialization is always
    finite and says nothing about the set described.  "finite"/"infinite"
    are only returned when the structure proves them; everything else is
    "unknown" (in particular diff of two infinite sets).
    """
    if isinstance(expr, Prim):
        if expr.name in _FINITE_PRIMS:
            return "finite"
        if expr.name == "powers" and expr.args[0] == 1:
            return "finite"  # {1, 1, 1, ...}
        if expr.name == "ap" and expr.args[1] == 0:
            return "finite"  # constant progression
        return "infinite"
    if isinstance(expr, Shift):
        return symbolic_finiteness(expr.inner)
    if isinstance(expr, Combine):
        sub = [symbolic_finiteness(a) for a in expr.args]
        if expr.op == "union":
            if "infinite" in sub:
                return "infinite"
            if sub == ["finite", "finite"]:
                return "finite"
            return "unknown"
        if expr.op == "inter":
            if "finite" in sub:
                return "finite"
            return "unknown"
        if expr.op == "diff":
            if sub[0] == "finite":
                return "finite"
            if sub == ["infinite", "finite"]:
                return "infinite"
            return "unknown"
        if expr.op == "compl":
            if sub[0] == "finite":
                return "infinite"
            return "unknown"
    if isinstance(expr, NameRef):
        raise UnknownName(f"unresolved name {expr.name!r}")
    raise TypeError(f"not a SetExpr: {expr!r}")


# --------------------------------------------------------------------------
# Name resolution
# --------------------------------------------------------------------------

def free_names(expr: SetExpr) -> set[str]:
    if isinstance(expr, NameRef):
        return {expr.name}
    if isinstance(expr, Combine):
        out: set[str] = set()
        for a in expr.args:
            out |= free_names(a)
        return out
    if isinstance(expr, Shift):
        return free_names(expr.inner)
    return set()


def resolve(expr: SetExpr, env: dict[str, SetExpr]) -> SetExpr:
    """Substitute catalog definitions for every :class:`NameRef`."""
    if isinstance(expr, NameRef):
        if expr.name not in env:
            raise UnknownName(f"unknown set name {expr.name!r}")
        return env[expr.name]
    if isinstance(expr, Combine):
        return Combine(expr.op, tuple(resolve(a, env) for a in expr.args))
    if isinstance(expr, Shift):
        return Shift(resolve(expr.inner, env), expr.by)
    return expr


# --------------------------------------------------------------------------
# Materialization
# --------------------------------------------------------------------------

_EMPTY_POS = np.empty(0, dtype=np.int64)


def _triangular_upto(hi: int) -> np.ndarray:
    """All n(n-1)/2 <= hi, n >= 0 (so 0 and 1 are both present)."""
    if hi < 0:
        return _EMPTY_POS
    n_max = int(math.isqrt(8 * hi + 1) + 3) // 2 + 1
    n = np.arange(0, n_max + 1, dtype=np.int64)
    t = n * (n - 1) // 2
    return np.unique(t[t <= hi])


def _z_positions(expr: SetExpr, lo: int, hi: int) -> np.ndarray:
    """Sorted positions of the pointwise evaluation of ``expr`` on [lo, hi]."""
    if hi < lo:
        return _EMPTY_POS
    if isinstance(expr, Prim):
        name, args = expr.name, expr.args
        if name == "evens":
            first = lo if lo % 2 == 0 else lo + 1
            return np.arange(first, hi + 1, 2, dtype=np.int64)
        if name == "triangular":
            t = _triangular_upto(hi)
            return t[t >= lo]
        if name == "ap":
            a, d = args
            if d == 0:
                return np.array([a], dtype=np.int64) if lo <= a <= hi else _EMPTY_POS
            # elements a + k d, k >= 0, clipped to [lo, hi]
            if d > 0:
                k_lo = max(0, -(-(lo - a) // d))
                k_hi = (hi - a) // d
            else:
                k_lo = max(0, -(-(hi - a) // d))
                k_hi = (lo - a) // d
            if k_hi < k_lo:
                return _EMPTY_POS
            vals = a + d * np.arange(k_lo, k_hi + 1, dtype=np.int64)
            return np.sort(vals)
        if name == "powers":
            (b,) = args
            if b < 1:
                raise InvalidParam(f"powers base must be >= 1, got {b}")
            if b == 1:
                return np.array([1], dtype=np.int64) if lo <= 1 <= hi else _EMPTY_POS
            vals = []
            v = 1
            while v <= hi:
                if v >= lo:
                    vals.append(v)
                v *= b
            return np.array(vals, dtype=np.int64)
        if name == "interval":
            a, b = args
            if b < a:
                raise InvalidParam(f"interval({a},{b}) is descending")
            return np.arange(max(a, lo), min(b, hi) + 1, dtype=np.int64)
        if name == "list":
            vals = sorted({x for x in args if lo <= x <= hi})
            return np.array(vals, dtype=np.int64)
        if name == "all":
            return np.arange(lo, hi + 1, dtype=np.int64)
        if name == "empty":
            return _EMPTY_POS
        if name == "f2start":
            raise KindMismatch("f2start only materializes on the free group")
        raise InvalidParam(f"unknown primitive {name!r}")
    if isinstance(expr, Combine):
        if expr.op == "compl":
            inner = _z_positions(expr.args[0], lo, hi)
            return np.setdiff1d(np.arange(lo, hi + 1, dtype=np.int64), inner, assume_unique=True)
        left = _z_positions(expr.args[0], lo, hi)
        right = _z_positions(expr.args[1], lo, hi)
        if expr.op == "union":
            return np.union1d(left, right)
        if expr.op == "inter":
            return np.intersect1d(left, right, assume_unique=True)
        if expr.op == "diff":
            return np.setdiff1d(left, right, assume_unique=True)
    if isinstance(expr, Shift):
        if not isinstance(expr.by, int):
            raise KindMismatch("word shift does not apply to integer groups")
        return _z_positions(expr.inner, lo - expr.by, hi - expr.by) + expr.by
    if isinstance(expr, NameRef):
        raise UnknownName(f"unresolved name {expr.name!r}")
    raise TypeError(f"not a SetExpr: {expr!r}")


def _zmod_positions(expr: SetExpr, n: int) -> np.ndarray:
    if isinstance(expr, Shift):
        if not isinstance(expr.by, int):
            raise KindMismatch("word shift does not apply to integer groups")
        inner = _zmod_positions(expr.inner, n)
        return np.unique((inner + expr.by) % n)
    if isinstance(expr, Combine):
        if expr.op == "compl":
            inner = _zmod_positions(expr.args[0], n)
            return np.setdiff1d(np.arange(n, dtype=np.int64), inner, assume_unique=True)
        left = _zmod_positions(expr.args[0], n)
        right = _zmod_positions(expr.args[1], n)
        if expr.op == "union":
            return np.union1d(left, right)
        if expr.op == "inter":
            return np.intersect1d(left, right, assume_unique=True)
        if expr.op == "diff":
            return np.setdiff1d(left, right, assume_unique=True)
    # primitives: pointwise on the representative range [0, n)
    return _z_positions(expr, 0, n - 1)


def _f2_start_bits(letter: str, depth: int) -> int:
    """Words of length 1..depth whose first letter is exactly ``letter``.

    Shortlex groups ranks by length, and within a length block the first
    letter splits it into four contiguous runs of 3^(len-1), in alphabet
    order — so the whole set is a union of contiguous rank ranges.
    """
    idx = words.ALPHABET.index(letter)
    bits = 0
    offset = 1  # rank of the first length-1 word
    for length in range(1, depth + 1):
        run = 3 ** (length - 1)
        bits |= bitops.mask(run) << (offset + idx * run)
        offset += 4 * run
    return bits


def _f2_bits(expr: SetExpr, group: FreeGroup2) -> tuple[int, int]:
    """(bits, tally) of the pointwise evaluation on the word ball."""
    if isinstance(expr, Prim):
        if expr.name == "f2start":
            return _f2_start_bits(expr.args[0], group.depth), 0
        if expr.name == "all":
            return group.full_mask, 0
        if expr.name == "empty":
            return 0, 0
        raise KindMismatch(f"{expr.name} does not materialize on the free group")
    if isinstance(expr, Combine):
        if expr.op == "compl":
            bits, tally = _f2_bits(expr.args[0], group)
            return ~bits & group.full_mask, tally
        lb, lt = _f2_bits(expr.args[0], group)
        rb, rt = _f2_bits(expr.args[1], group)
        if expr.op == "union":
            return lb | rb, lt + rt
        if expr.op == "inter":
            return lb & rb, lt + rt
        if expr.op == "diff":
            return lb & ~rb, lt + rt
    if isinstance(expr, Shift):
        if isinstance(expr.by, int):
            raise KindMismatch("integer shift does not apply to the free group")
        bits, tally = _f2_bits(expr.inner, group)
        out, dropped = group.translate_bits(expr.by, bits)
        return out, tally + dropped
    if isinstance(expr, NameRef):
        raise UnknownName(f"unresolved name {expr.name!r}")
    raise TypeError(f"not a SetExpr: {expr!r}")


def materialize(expr: SetExpr, group: Group) -> MaterializedSet:
    """Evaluate ``expr`` pointwise over the group's universe."""
    if isinstance(group, ZWindowGroup):
        pos = _z_positions(expr, group.window.lo, group.window.hi)
        bits = bitops.bits_from_positions(pos - group.window.lo, group.size)
        return MaterializedSet(group, bits)
    if isinstance(group, ZModGroup):
        pos = _zmod_positions(expr, group.modulus)
        bits = bitops.bits_from_positions(pos, group.size)
        return MaterializedSet(group, bits)
    if isinstance(group, FreeGroup2):
        bits, tally = _f2_bits(expr, group)
        return MaterializedSet(group, bits, tally)
    # cayley-table groups have no symbolic primitives; only all/empty/list make
    # sense there, with list meaning element indices.
    if isinstance(expr, Prim) and expr.name == "all":
        return group.full_set()
    if isinstance(expr, Prim) and expr.name == "empty":
        return group.empty_set()
    if isinstance(expr, Prim) and expr.name == "list":
        return group.set_of(expr.args)
    if isinstance(expr, Combine):
        parts = [materialize(a, group) for a in expr.args]
        if expr.op == "union":
            return parts[0].union(parts[1])
        if expr.op == "inter":
            return parts[0].inter(parts[1])
        if expr.op == "diff":
            return parts[0].diff(parts[1])
        return parts[0].compl()
    raise KindMismatch(f"{print_set_expr(expr)} does not materialize on kind {group.kind!r}")


# --------------------------------------------------------------------------
# Catalogs
# --------------------------------------------------------------------------

class Catalog:
    """Ordered collection of named set expressions, references resolved.

    ``exprs`` holds closed trees (no :class:`NameRef` remains); ``raw`` keeps
    the trees as written, for faithful re-printing.
    """

    def __init__(self, entries: list[tuple[str, SetExpr]]):
        self.names: list[str] = []
        self.raw: dict[str, SetExpr] = {}
        for name, expr in entries:
            if name in self.raw:
                raise InvalidParam(f"duplicate catalog name {name!r}")
            if name in RESERVED:
                raise InvalidParam(f"catalog name {name!r} is a reserved word")
            self.names.append(name)
            self.raw[name] = expr
        self.exprs: dict[str, SetExpr] = {}
        for name in self.names:
            self._close(name, [])

    def _close(self, name: str, trail: list[str]) -> SetExpr:
        if name in self.exprs:
            return self.exprs[name]
        if name in trail:
            cycle = " -> ".join(trail[trail.index(name):] + [name])
            raise InvalidParam(f"catalog definitions form a cycle: {cycle}")
        if name not in self.raw:
            raise UnknownName(f"unknown set name {name!r}")
        env = {}
        for dep in sorted(free_names(self.raw[name])):
            env[dep] = self._close(dep, trail + [name])
        closed = resolve(self.raw[name], env)
        self.exprs[name] = closed
        return closed

    def __contains__(self, name: str) -> bool:
        return name in self.exprs

    def __getitem__(self, name: str) -> SetExpr:
        if name not in self.exprs:
            raise UnknownName(f"unknown set name {name!r}")
        return self.exprs[name]

    def items(self) -> Iterator[tuple[str, SetExpr]]:
        return ((n, self.exprs[n]) for n in self.names)


def parse_catalog(text: str) -> Catalog:
    """Parse ``name = expr`` lines; ``#`` starts a comment."""
    entries: list[tuple[str, SetExpr]] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParam(f"catalog line {lineno}: expected 'name = expr'")
        name, _, body = line.partition("=")
        name = name.strip()
        if not name.isidentifier():
            raise InvalidParam(f"catalog line {lineno}: bad name {name!r}")
        try:
            expr = parse_set_expr(body.strip())
        except SetSyntaxError as exc:
            raise InvalidParam(f"catalog line {lineno}: {exc}") from exc
        entries.append((name, expr))
    return Catalog(entries)


def load_catalog(path: str | Path) -> Catalog:
    return parse_catalog(Path(path).read_text())


def default_catalog() -> Catalog:
    """The catalog shipped with the package (data/default.cat)."""
    from importlib import resources

    text = resources.files("idealpack").joinpath("data/default.cat").read_text()
    return parse_catalog(text)
