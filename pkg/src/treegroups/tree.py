"""Spherically homogeneous rooted trees: degree sequences and vertex arithmetic.

Vertices are digit words.  The vertices of level ``n`` are numbered
``0 .. |V_n| - 1`` by reading the word as a mixed-radix integer, most
significant digit first, which is the numbering every level permutation uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterator, Sequence


class InvalidVertex(ValueError):
    pass


class InvalidIndex(ValueError):
    pass


@dataclass(frozen=True)
class DegreeSequence:
    """An eventually constant sequence of vertex degrees.

    ``prefix`` lists the degrees of the first levels explicitly; every later
    level has degree ``tail``.
    """

    prefix: tuple[int, ...]
    tail: int

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(d) for d in self.prefix))
        for d in self.prefix + (self.tail,):
            if d < 2:
                raise ValueError(f"degrees must be >= 2, got {d}")
        # normalise so equal sequences compare equal
        p = self.prefix
        while p and p[-1] == self.tail:
            p = p[:-1]
        object.__setattr__(self, "prefix", p)

    @classmethod
    def constant(cls, k: int) -> DegreeSequence:
        return cls((), k)

    @classmethod
    def from_list(cls, degrees: Sequence[int]) -> DegreeSequence:
        """The last entry of ``degrees`` repeats forever."""
        if not degrees:
            raise ValueError("empty degree list")
        return cls(tuple(degrees[:-1]), degrees[-1])

    @property
    def is_constant(self) -> bool:
        return not self.prefix

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        return self.prefix[i] if i < len(self.prefix) else self.tail

    def shift(self, k: int = 1) -> DegreeSequence:
        """Degree sequence of the tree below a level-``k`` vertex."""
        return DegreeSequence(self.prefix[k:], self.tail)

    def level_size(self, n: int) -> int:
        return prod(self[i] for i in range(n))

    def level(self, n: int) -> LevelIndex:
        return LevelIndex(n, self.level_size(n))

    def to_list(self) -> list[int]:
        return list(self.prefix) + [self.tail]

    def __str__(self):
        if self.is_constant:
            return f"{self.tail}"
        return ",".join(map(str, self.prefix)) + f",{self.tail}..."


@dataclass(frozen=True)
class LevelIndex:
    level: int
    size: int


Vertex = tuple  # tuple[int, ...]


def check_vertex(v: Sequence[int], alpha: DegreeSequence) -> None:
    for i, x in enumerate(v):
        if not 0 <= x < alpha[i]:
            raise InvalidVertex(f"digit {x} at position {i} out of range [0, {alpha[i]})")


def vertex_to_index(v: Sequence[int], alpha: DegreeSequence) -> int:
    check_vertex(v, alpha)
    i = 0
    for pos, x in enumerate(v):
        i = i * alpha[pos] + x
    return i


def index_to_vertex(i: int, n: int, alpha: DegreeSequence) -> Vertex:
    if not 0 <= i < alpha.level_size(n):
        raise InvalidIndex(f"index {i} out of range for level {n}")
    digits = []
    for pos in reversed(range(n)):
        i, x = divmod(i, alpha[pos])
        digits.append(x)
    return tuple(reversed(digits))


def is_prefix(k: Sequence[int], w: Sequence[int]) -> bool:
    """True iff ``k <= w``, i.e. ``w`` lies in the tree below ``k``."""
    return len(k) <= len(w) and tuple(w[: len(k)]) == tuple(k)


def level_vertices(n: int, alpha: DegreeSequence) -> Iterator[Vertex]:
    """Vertices of level ``n`` in index order."""
    if n == 0:
        yield ()
        return
    for v in level_vertices(n - 1, alpha):
        for x in range(alpha[n - 1]):
            yield v + (x,)


def leaves_below(v: Sequence[int], n: int, alpha: DegreeSequence) -> range:
    """Level-``n`` indices of the vertices below ``v``; they are contiguous."""
    if len(v) > n:
        raise InvalidVertex(f"vertex {tuple(v)} is deeper than level {n}")
    width = prod(alpha[i] for i in range(len(v), n))
    start = vertex_to_index(v, alpha) * width
    return range(start, start + width)


def parse_vertex(text: str) -> Vertex:
    """``"1.0.3"`` -> ``(1, 0, 3)``; the empty string is the root."""
    text = text.strip()
    if not text:
        return ()
    return tuple(int(x) for x in text.split("."))


def format_vertex(v: Sequence[int]) -> str:
    return ".".join(map(str, v))
