"""Partial functions over finite alphabets, given as truth tables.

Words are tuples of ints (symbols ``0..g-1``), positions are 0-based
internally and 1-based whenever a block is printed or serialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import (
    ArityMismatch,
    ConstantFunction,
    DuplicateKey,
    EmptyDomain,
    FunctionSyntaxError,
    SymbolOutOfRange,
    WordNotInDomain,
)

ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"
MAX_ALPHABET = len(ALPHABET)

Word = tuple[int, ...]


def word_to_str(word: Iterable[int]) -> str:
    return "".join(ALPHABET[s] for s in word)


def str_to_word(text: str, g: int = MAX_ALPHABET) -> Word:
    word = []
    for ch in text:
        k = ALPHABET.find(ch)
        if k < 0:
            raise FunctionSyntaxError(f"bad symbol {ch!r} in word {text!r}")
        if k >= g:
            raise SymbolOutOfRange(f"symbol {ch!r} in {text!r} is not below g={g}")
        word.append(k)
    return tuple(word)


def diff_mask(x: Word, y: Word) -> int:
    """Bitmask of the positions where ``x`` and ``y`` differ."""
    mask = 0
    for i, (a, b) in enumerate(zip(x, y)):
        if a != b:
            mask |= 1 << i
    return mask


def mask_indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class PartialFunction:
    """Immutable truth table of ``f : S -> H`` with ``S`` a subset of ``G^n``.

    Construction validates the table and rejects empty and constant
    functions.
    """

    __slots__ = ("n", "g", "h", "_table", "_domain", "_hash")

    def __init__(self, n: int, g: int, h: int, table: Mapping[Iterable[int], int]):
        if n < 1:
            raise ArityMismatch(f"arity must be positive, got {n}")
        if not 1 <= g <= MAX_ALPHABET or not 1 <= h <= MAX_ALPHABET:
            raise SymbolOutOfRange(f"alphabet sizes must lie in 1..{MAX_ALPHABET}")
        clean: dict[Word, int] = {}
        for key, value in table.items():
            word = tuple(key)
            if len(word) != n:
                raise ArityMismatch(f"word {word_to_str(word)} has length {len(word)}, expected {n}")
            if any(not 0 <= s < g for s in word):
                raise SymbolOutOfRange(f"word {word} has a symbol outside 0..{g - 1}")
            if not 0 <= value < h:
                raise SymbolOutOfRange(f"output {value} outside 0..{h - 1}")
            clean[word] = int(value)
        if not clean:
            raise EmptyDomain("function has an empty domain")
        if len(set(clean.values())) < 2:
            raise ConstantFunction("function is constant on its domain")
        self.n = n
        self.g = g
        self.h = h
        self._domain = tuple(sorted(clean))
        self._table = {x: clean[x] for x in self._domain}
        self._hash = hash((n, g, h, tuple(self._table.items())))

    @property
    def domain(self) -> tuple[Word, ...]:
        """Domain words in lexicographic order."""
        return self._domain

    @property
    def table(self) -> Mapping[Word, int]:
        return dict(self._table)

    @property
    def is_total(self) -> bool:
        return len(self._domain) == self.g ** self.n

    @property
    def outputs(self) -> tuple[int, ...]:
        """Output symbols that actually occur, ascending."""
        return tuple(sorted(set(self._table.values())))

    def __len__(self) -> int:
        return len(self._domain)

    def __contains__(self, x) -> bool:
        return tuple(x) in self._table

    def __iter__(self) -> Iterator[Word]:
        return iter(self._domain)

    def __call__(self, x: Iterable[int]) -> int:
        word = tuple(x)
        try:
            return self._table[word]
        except KeyError:
            raise WordNotInDomain(f"{word_to_str(word)} is not in the domain") from None

    def items(self):
        return self._table.items()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialFunction):
            return NotImplemented
        return (self.n, self.g, self.h, self._table) == (other.n, other.g, other.h, other._table)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"PartialFunction(n={self.n}, g={self.g}, h={self.h}, |S|={len(self)})"


@dataclass(frozen=True)
class Block:
    """Non-empty set of 0-based positions."""

    indices: frozenset[int]

    def __post_init__(self):
        if not self.indices:
            raise ValueError("a block must be non-empty")
        if min(self.indices) < 0:
            raise ValueError("block indices must be non-negative")

    @classmethod
    def from_mask(cls, mask: int) -> Block:
        return cls(frozenset(mask_indices(mask)))

    @property
    def mask(self) -> int:
        m = 0
        for i in self.indices:
            m |= 1 << i
        return m

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, i: int) -> bool:
        return i in self.indices

    def __str__(self) -> str:
        return "{" + ",".join(str(i + 1) for i in sorted(self.indices)) + "}"


@dataclass(frozen=True)
class SensitiveBlockFamily:
    base: Word
    blocks: tuple[tuple[Block, Word], ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    @property
    def index_sets(self) -> set[frozenset[int]]:
        return {b.indices for b, _ in self.blocks}


def sensitive_blocks(f: PartialFunction, x: Iterable[int]) -> SensitiveBlockFamily:
    """All distinct sensitive blocks of ``x``, each with its first witness in
    lexicographic order."""
    x = tuple(x)
    fx = f(x)
    seen: dict[int, Word] = {}
    for y, fy in f.items():
        if fy != fx:
            seen.setdefault(diff_mask(x, y), y)
    return SensitiveBlockFamily(x, tuple((Block.from_mask(m), y) for m, y in seen.items()))


def sensitive_masks(f: PartialFunction, x: Word) -> list[int]:
    """Distinct sensitive blocks of ``x`` as bitmasks, first-seen order."""
    fx = f(x)
    seen: dict[int, None] = {}
    for y, fy in f.items():
        if fy != fx:
            seen.setdefault(diff_mask(x, y))
    return list(seen)


def inputs_with_output(f: PartialFunction, b: int) -> frozenset[Word]:
    if not 0 <= b < f.h:
        raise SymbolOutOfRange(f"output symbol {b} outside 0..{f.h - 1}")
    return frozenset(x for x, v in f.items() if v == b)


# --- function file format -------------------------------------------------

def _content_lines(text: str):
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        cut = line.find("#")
        if cut >= 0:
            line = line[:cut]
        if line.strip():
            yield lineno, line


def _parse_header(line: str, lineno: int) -> tuple[int, int, int]:
    parts = line.strip().split(" ")
    if len(parts) != 5 or parts[0] != "qfn" or parts[1] != "1":
        raise FunctionSyntaxError(f"line {lineno}: expected header 'qfn 1 n=<N> g=<G> h=<H>'")
    values = []
    for part, key in zip(parts[2:], "ngh"):
        name, _, num = part.partition("=")
        if name != key or not num.isdigit():
            raise FunctionSyntaxError(f"line {lineno}: bad header field {part!r}")
        values.append(int(num))
    n, g, h = values
    if g > MAX_ALPHABET or h > MAX_ALPHABET or g < 1 or h < 1:
        raise SymbolOutOfRange(f"line {lineno}: alphabet sizes must lie in 1..{MAX_ALPHABET}")
    if n < 1:
        raise ArityMismatch(f"line {lineno}: arity must be positive")
    return n, g, h


def parse_function(text: str) -> PartialFunction:
    """Parse one function from the ``qfn 1`` text format."""
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise FunctionSyntaxError("missing header line") from None
    n, g, h = _parse_header(header, lineno)
    table: dict[Word, int] = {}
    for lineno, line in lines:
        parts = line.strip().split(" ")
        if len(parts) != 2 or not parts[0] or len(parts[1]) != 1:
            raise FunctionSyntaxError(f"line {lineno}: expected '<word> <out>', got {line!r}")
        wtext, otext = parts
        if len(wtext) != n:
            raise ArityMismatch(f"line {lineno}: word {wtext!r} has length {len(wtext)}, expected {n}")
        word = str_to_word(wtext, g)
        out = str_to_word(otext, h)[0]
        if table.get(word, out) != out:
            raise DuplicateKey(f"line {lineno}: conflicting outputs for {wtext}")
        table[word] = out
    if not table:
        raise EmptyDomain("function file has no table lines")
    return PartialFunction(n, g, h, table)


def serialize_function(f: PartialFunction, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"qfn 1 n={f.n} g={f.g} h={f.h}")
    lines.extend(f"{word_to_str(x)} {ALPHABET[v]}" for x, v in f.items())
    return "\n".join(lines) + "\n"


def serialize_archive(functions: Iterable[PartialFunction]) -> str:
    return "---\n".join(serialize_function(f) for f in functions)


def parse_archive(text: str) -> list[PartialFunction]:
    """Split a ``---``-separated multi-function archive."""
    chunks: list[list[str]] = [[]]
    for raw in text.split("\n"):
        if raw.rstrip("\r").strip() == "---":
            chunks.append([])
        else:
            chunks[-1].append(raw)
    return [parse_function("\n".join(c)) for c in chunks if any(l.strip() for l in c)]
