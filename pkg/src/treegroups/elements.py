"""Automorphisms of spherically homogeneous rooted trees.

Three representations share the :class:`TreeElement` interface:

* :class:`Portrait` -- finitary elements, a root permutation plus child
  portraits down to a finite depth; works over any degree sequence.
* :class:`StateElement` -- a state of a minimised :class:`Automaton`; covers
  self-similar groups such as the Grigorchuk and Gupta--Sidki groups.
* :class:`Word` -- an unevaluated product, used only when an automaton
  product exceeds its state budget.

Composition is a left action: ``(g * h)(v) == g(h(v))``.  Sections satisfy
``(g * h)|_v == g|_{h(v)} * h|_v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .automaton import Automaton, BudgetExceeded
from .tree import DegreeSequence, check_vertex


class ElementError(ValueError):
    pass


def _perm_mul(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    return tuple(p[y] for y in q)


def _perm_inv(p: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


class TreeElement:
    """Common interface; subclasses provide ``degrees``, ``perm`` and ``child``."""

    degrees: DegreeSequence
    kind: str

    @property
    def perm(self) -> tuple[int, ...]:
        raise NotImplementedError

    def child(self, x: int) -> TreeElement:
        raise NotImplementedError

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        check_vertex(v, self.degrees)
        g: TreeElement = self
        out = []
        for x in v:
            out.append(g.perm[x])
            g = g.child(x)
        return tuple(out)

    def section(self, v: Sequence[int]) -> TreeElement:
        check_vertex(v, self.degrees)
        g: TreeElement = self
        for x in v:
            g = g.child(x)
        return g

    def truncate(self, n: int) -> tuple[int, ...]:
        if n == 0:
            return (0,)
        width = self.degrees.shift(1).level_size(n - 1)
        out = [0] * (width * self.degrees[0])
        for x, y in enumerate(self.perm):
            sub = self.child(x).truncate(n - 1)
            off, base = x * width, y * width
            for j, z in enumerate(sub):
                out[off + j] = base + z
        return tuple(out)

    def __mul__(self, other: TreeElement) -> TreeElement:
        return compose(self, other)

    def inverse(self) -> TreeElement:
        raise NotImplementedError

    def __pow__(self, n: int) -> TreeElement:
        base = self if n >= 0 else self.inverse()
        out: TreeElement = identity(self.degrees)
        for _ in range(abs(n)):
            out = compose(out, base)
        return out

    def is_trivial_root(self) -> bool:
        return self.perm == tuple(range(len(self.perm)))


@dataclass(frozen=True, eq=True)
class Portrait(TreeElement):
    """A finitary automorphism.

    ``children`` is empty for an element whose sections are all trivial;
    otherwise it has one entry per first-level letter.  Portraits are kept
    normalised (trivial subtrees collapsed), so structural equality is
    action equality.
    """

    degrees: DegreeSequence
    root: tuple[int, ...]
    children: tuple[Portrait, ...] = ()

    kind = "finitary"

    def __post_init__(self):
        k = self.degrees[0]
        if sorted(self.root) != list(range(k)):
            raise ElementError(f"{self.root} is not a permutation of 0..{k - 1}")
        if self.children:
            if len(self.children) != k:
                raise ElementError(f"expected {k} children, got {len(self.children)}")
            if all(c.is_identity_portrait for c in self.children):
                object.__setattr__(self, "children", ())

    @property
    def perm(self) -> tuple[int, ...]:
        return self.root

    @cached_property
    def is_identity_portrait(self) -> bool:
        return not self.children and self.is_trivial_root()

    def child(self, x: int) -> Portrait:
        if self.children:
            return self.children[x]
        return identity(self.degrees.shift(1))

    @cached_property
    def depth(self) -> int:
        """Number of levels carrying nontrivial labels."""
        if self.is_identity_portrait:
            return 0
        return 1 + max((c.depth for c in self.children), default=0)

    def inverse(self) -> Portrait:
        pinv = _perm_inv(self.root)
        if not self.children:
            return Portrait(self.degrees, pinv)
        return Portrait(self.degrees, pinv, tuple(self.children[pinv[x]].inverse() for x in range(len(pinv))))

    def truncate(self, n: int) -> tuple[int, ...]:
        return _portrait_truncate(self, n)

    def __repr__(self):
        return f"Portrait(depth={self.depth}, root={self.root})"


_TRUNC_CACHE: dict[tuple[Portrait, int], tuple[int, ...]] = {}


def _portrait_truncate(g: Portrait, n: int) -> tuple[int, ...]:
    if n == 0:
        return (0,)
    key = (g, n)
    hit = _TRUNC_CACHE.get(key)
    if hit is not None:
        return hit
    size = g.degrees.level_size(n)
    if g.is_identity_portrait:
        res = tuple(range(size))
    else:
        res = TreeElement.truncate(g, n)
    if len(_TRUNC_CACHE) > 100_000:
        _TRUNC_CACHE.clear()
    _TRUNC_CACHE[key] = res
    return res


def identity(degrees: DegreeSequence) -> Portrait:
    return Portrait(degrees, tuple(range(degrees[0])))


def rooted(degrees: DegreeSequence, perm: Sequence[int]) -> Portrait:
    """The element acting by ``perm`` on the first letter and trivially below."""
    return Portrait(degrees, tuple(perm))


def planted(degrees: DegreeSequence, vertex: Sequence[int], perm: Sequence[int]) -> Portrait:
    """The element acting by ``perm`` on the children of ``vertex`` and nowhere else."""
    check_vertex(vertex, degrees)
    if not vertex:
        return rooted(degrees, perm)
    x = vertex[0]
    sub = planted(degrees.shift(1), vertex[1:], perm)
    kids = tuple(sub if y == x else identity(degrees.shift(1)) for y in range(degrees[0]))
    return Portrait(degrees, tuple(range(degrees[0])), kids)


@dataclass(frozen=True, eq=True)
class StateElement(TreeElement):
    """A state of a minimised automaton; ids are canonical."""

    automaton: Automaton
    state: int

    kind = "automaton"

    @property
    def degrees(self) -> DegreeSequence:  # type: ignore[override]
        return DegreeSequence.constant(self.automaton.k)

    @property
    def perm(self) -> tuple[int, ...]:
        return self.automaton.perm(self.state)

    def child(self, x: int) -> StateElement:
        return StateElement(self.automaton, self.automaton.child(self.state, x))

    def inverse(self) -> StateElement:
        return StateElement(self.automaton, self.automaton.inv(self.state))

    def truncate(self, n: int) -> tuple[int, ...]:
        return self.automaton.truncate(self.state, n)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        check_vertex(v, self.degrees)
        return self.automaton.apply(self.state, v)

    def __hash__(self):
        return hash((id(self.automaton), self.state))

    def __eq__(self, other):
        return isinstance(other, StateElement) and other.automaton is self.automaton and other.state == self.state

    def __repr__(self):
        names = [n for n, s in self.automaton.names.items() if s == self.state]
        return f"StateElement({names[0] if names else self.state})"


def _is_store_identity(g: TreeElement) -> bool:
    if isinstance(g, StateElement):
        return g.state == g.automaton.identity
    return isinstance(g, Portrait) and g.is_identity_portrait


class Word(TreeElement):
    """An unevaluated product ``factors[0] * factors[1] * ...``."""

    kind = "word"

    def __init__(self, factors: Sequence[TreeElement]):
        if not factors:
            raise ElementError("empty word; use identity()")
        self.factors = tuple(factors)
        self.degrees = self.factors[0].degrees

    @cached_property
    def perm(self) -> tuple[int, ...]:  # type: ignore[override]
        p = tuple(range(self.degrees[0]))
        for f in self.factors:
            p = _perm_mul(p, f.perm)
        return p

    def child(self, x: int) -> TreeElement:
        secs = []
        y = x
        for f in reversed(self.factors):
            secs.append(f.child(y))
            y = f.perm[y]
        secs.reverse()
        live = [f for f in secs if not _is_store_identity(f)]
        if not live:
            return secs[0]
        return Word(live) if len(live) > 1 else live[0]

    def inverse(self) -> Word:
        return Word([f.inverse() for f in reversed(self.factors)])

    def truncate(self, n: int) -> tuple[int, ...]:
        p = tuple(range(self.degrees.level_size(n)))
        for f in self.factors:
            p = _perm_mul(p, f.truncate(n))
        return p


def as_state(g: TreeElement, aut: Automaton) -> StateElement:
    """Import a finitary or automaton element into ``aut``."""
    if isinstance(g, StateElement):
        if g.automaton is aut:
            return g
        raise ElementError("elements belong to different automata")
    if not isinstance(g, Portrait):
        raise ElementError(f"cannot import {g.kind} element into an automaton")
    if not g.degrees.is_constant or g.degrees.tail != aut.k:
        raise ElementError("degree sequence does not match automaton alphabet")
    nodes: list[Portrait] = []
    index: dict[Portrait, int] = {}

    def visit(p: Portrait) -> int:
        if p.is_identity_portrait:
            return ~aut.identity
        if p in index:
            return index[p]
        i = index[p] = len(nodes)
        nodes.append(p)
        for x in range(aut.k):
            visit(p.child(x))
        return i

    visit(g)
    if not nodes:
        return StateElement(aut, aut.identity)
    perms = [p.root for p in nodes]
    kids = [tuple(visit(p.child(x)) for x in range(aut.k)) for p in nodes]
    return StateElement(aut, aut.absorb(perms, kids)[0])


# -- module-level operations ------------------------------------------------


def apply(g: TreeElement, v: Sequence[int]) -> tuple[int, ...]:
    return g.apply(v)


def section(g: TreeElement, v: Sequence[int]) -> TreeElement:
    return g.section(v)


def invert(g: TreeElement) -> TreeElement:
    return g.inverse()


def truncate(g: TreeElement, n: int) -> tuple[int, ...]:
    """Permutation induced on level ``n``, vertices numbered by mixed radix."""
    return g.truncate(n)


def _portrait_mul(g: Portrait, h: Portrait) -> Portrait:
    if g.is_identity_portrait:
        return h
    if h.is_identity_portrait:
        return g
    root = _perm_mul(g.root, h.root)
    if not g.children and not h.children:
        return Portrait(g.degrees, root)
    k = len(root)
    kids = tuple(_portrait_mul(g.child(h.root[x]), h.child(x)) for x in range(k))
    return Portrait(g.degrees, root, kids)


def compose(g: TreeElement, h: TreeElement) -> TreeElement:
    """``g`` after ``h``."""
    if g.degrees != h.degrees:
        raise ElementError(f"degree sequences differ: {g.degrees} vs {h.degrees}")
    if isinstance(g, Portrait) and isinstance(h, Portrait):
        return _portrait_mul(g, h)
    aut = None
    if isinstance(g, StateElement):
        aut = g.automaton
    elif isinstance(h, StateElement):
        aut = h.automaton
    if aut is not None and not isinstance(g, Word) and not isinstance(h, Word):
        try:
            a, b = as_state(g, aut), as_state(h, aut)
            return StateElement(aut, aut.mul(a.state, b.state))
        except (BudgetExceeded, ElementError):
            pass
    fg = g.factors if isinstance(g, Word) else (g,)
    fh = h.factors if isinstance(h, Word) else (h,)
    return Word(fg + fh)


def is_identity(g: TreeElement, budget: int = 12) -> bool | None:
    """Decide whether ``g`` acts trivially.

    Finitary and automaton elements are decided exactly (automaton states are
    canonical in their minimised store).  Unevaluated words are searched for a
    moved vertex down to depth ``budget``; ``None`` means no witness was found
    and the question stays open.
    """
    if isinstance(g, Portrait):
        return g.is_identity_portrait
    if isinstance(g, StateElement):
        return g.state == g.automaton.identity
    return _bounded_identity(g, budget)


def _bounded_identity(g: TreeElement, depth: int) -> bool | None:
    frontier = [g]
    for _ in range(depth + 1):
        nxt = []
        for h in frontier:
            if not h.is_trivial_root():
                return False
            if isinstance(h, StateElement) and h.state == h.automaton.identity:
                continue
            if isinstance(h, Portrait) and h.is_identity_portrait:
                continue
            nxt.extend(h.child(x) for x in range(h.degrees[0]))
        if not nxt:
            return True
        frontier = nxt
        if len(frontier) > 1_000_000:
            break
    return None


def witness(g: TreeElement, depth: int) -> tuple[int, ...] | None:
    """A vertex of level ``<= depth`` moved by ``g``, if any (breadth first)."""
    frontier = [((), g)]
    for _ in range(depth):
        nxt = []
        for v, h in frontier:
            for x, y in enumerate(h.perm):
                if x != y:
                    return v + (x,)
            nxt.extend((v + (x,), h.child(x)) for x in range(h.degrees[0]))
        frontier = nxt
    return None


def equal(g: TreeElement, h: TreeElement, budget: int = 12) -> bool | None:
    """Action equality of ``g`` and ``h`` (same three-valued verdict as :func:`is_identity`)."""
    return is_identity(compose(g, h.inverse()), budget)
