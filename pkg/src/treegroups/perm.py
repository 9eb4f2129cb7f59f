"""Permutation groups on ``range(n)``: stabilizer chains and what they buy.

Permutations are tuples of images; ``mul(p, q)`` is ``p`` after ``q``, the
same left-action convention the tree elements use.  Orders and indices are
Python ints, so they never overflow.

Chains are built by Schreier--Sims.  A seeded random presift is used to find
most strong generators cheaply; the deterministic Schreier-generator pass
that follows makes the result exact either way.  When the order of the group
is known in advance (base changes, stabilizers from coset orbits) the random
phase alone is exact, because a partial chain whose orbit lengths multiply to
the group order is complete.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

Perm = tuple  # tuple[int, ...]

SEED = 20240611
POINT_BUDGET = 5 ** 8
COSET_CAP = 10 ** 6
ENUMERATION_LIMIT = 10 ** 6


def set_seed(seed: int) -> None:
    """Seed used by randomized acceleration.  Results never depend on it."""
    global SEED
    SEED = seed


class PermError(ValueError):
    pass


class NotASubgroup(PermError):
    pass


class CapExceeded(RuntimeError):
    pass


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(map(p.__getitem__, q))


def inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def ident(n: int) -> Perm:
    return tuple(range(n))


def commutator(a: Perm, b: Perm) -> Perm:
    """``a^-1 b^-1 a b``."""
    return mul(inv(a), mul(inv(b), mul(a, b)))


def conj(g: Perm, p: Perm) -> Perm:
    """``g p g^-1``."""
    return mul(g, mul(p, inv(g)))


def check_perm(p: Sequence[int], n: int | None = None) -> Perm:
    p = tuple(p)
    if n is not None and len(p) != n:
        raise PermError(f"permutation of {len(p)} points, expected {n}")
    if sorted(p) != list(range(len(p))):
        raise PermError(f"not a bijection: {p}")
    return p


def from_cycles(cycles: Iterable[Sequence[int]], n: int) -> Perm:
    out = list(range(n))
    for c in cycles:
        c = list(c)
        for i, x in enumerate(c):
            out[x] = c[(i + 1) % len(c)]
    return check_perm(out, n)


def cycles(p: Perm) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            seen.add(j)
            c.append(j)
            j = p[j]
        out.append(tuple(c))
    return out


def format_cycles(p: Perm) -> str:
    cs = cycles(p)
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cs) or "()"


def parity(p: Perm) -> int:
    return sum(len(c) - 1 for c in cycles(p)) % 2


def _first_moved(p: Perm) -> int:
    for x, y in enumerate(p):
        if x != y:
            return x
    raise PermError("identity moves no point")


class _Level:
    """One basic orbit with its Schreier tree and cached coset representatives."""

    __slots__ = ("b", "gens", "ginv", "parent", "_inv", "_fwd")

    def __init__(self, b: int, n: int):
        self.b = b
        self.gens: list[Perm] = []
        self.ginv: list[Perm] = []
        self.parent: dict[int, tuple[int, int] | None] = {b: None}
        e = ident(n)
        self._inv: dict[int, Perm] = {b: e}
        self._fwd: dict[int, Perm] = {b: e}

    def copy(self) -> _Level:
        new = _Level.__new__(_Level)
        new.b = self.b
        new.gens = list(self.gens)
        new.ginv = list(self.ginv)
        new.parent = dict(self.parent)
        new._inv = dict(self._inv)
        new._fwd = dict(self._fwd)
        return new

    def add(self, g: Perm) -> None:
        gi = len(self.gens)
        self.gens.append(g)
        self.ginv.append(inv(g))
        parent = self.parent
        queue = []
        for x in list(parent):
            y = g[x]
            if y not in parent:
                parent[y] = (x, gi)
                queue.append(y)
        i = 0
        while i < len(queue):
            x = queue[i]
            i += 1
            for gj, h in enumerate(self.gens):
                y = h[x]
                if y not in parent:
                    parent[y] = (x, gj)
                    queue.append(y)

    def u_inv(self, y: int) -> Perm:
        """``u_y^-1`` where ``u_y`` maps the base point to ``y``."""
        hit = self._inv.get(y)
        if hit is not None:
            return hit
        path = []
        z = y
        while z not in self._inv:
            path.append(z)
            z = self.parent[z][0]
        acc = self._inv[z]
        for z in reversed(path):
            acc = mul(acc, self.ginv[self.parent[z][1]])
            self._inv[z] = acc
        return acc

    def u(self, y: int) -> Perm:
        hit = self._fwd.get(y)
        if hit is not None:
            return hit
        path = []
        z = y
        while z not in self._fwd:
            path.append(z)
            z = self.parent[z][0]
        acc = self._fwd[z]
        for z in reversed(path):
            acc = mul(self.gens[self.parent[z][1]], acc)
            self._fwd[z] = acc
        return acc

    def conjugate(self, g: Perm, ginv_: Perm) -> _Level:
        new = _Level.__new__(_Level)
        new.b = g[self.b]
        new.gens = [mul(g, mul(h, ginv_)) for h in self.gens]
        new.ginv = [inv(h) for h in new.gens]
        new.parent = {
            g[x]: (None if p is None else (g[p[0]], p[1])) for x, p in self.parent.items()
        }
        e = ident(len(g))
        new._inv = {new.b: e}
        new._fwd = {new.b: e}
        return new


class StabChain:
    """Base, strong generators per level and basic orbits."""

    def __init__(self, n: int):
        self.n = n
        self.e = ident(n)
        self.levels: list[_Level] = []
        self._checked: list[set[tuple[int, int]]] = []

    @property
    def base(self) -> list[int]:
        return [lev.b for lev in self.levels]

    def order(self) -> int:
        return prod(len(lev.parent) for lev in self.levels)

    def orbit_sizes(self) -> list[int]:
        return [len(lev.parent) for lev in self.levels]

    def strong_generators(self, start: int = 0) -> list[Perm]:
        seen = set()
        out = []
        for lev in self.levels[start:]:
            for g in lev.gens:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out

    def copy(self) -> StabChain:
        new = StabChain(self.n)
        new.levels = [lev.copy() for lev in self.levels]
        new._checked = [set(c) for c in self._checked]
        return new

    def suffix(self, start: int) -> StabChain:
        """Chain of the pointwise stabilizer of ``base[:start]``."""
        new = StabChain(self.n)
        new.levels = [lev.copy() for lev in self.levels[start:]]
        new._checked = [set(c) for c in self._checked[start:]]
        # level gens of the suffix must generate the stabilizer on their own
        gens = self.strong_generators(start)
        if new.levels:
            top = new.levels[0]
            have = set(top.gens)
            for g in gens:
                if g not in have:
                    top.add(g)
                    have.add(g)
        return new

    def conjugate(self, g: Perm) -> StabChain:
        """Chain of ``g G g^-1``; no Schreier--Sims needed."""
        gi = inv(g)
        new = StabChain(self.n)
        new.levels = [lev.conjugate(g, gi) for lev in self.levels]
        new._checked = [set() for _ in self.levels]
        return new

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        levels = self.levels
        for l in range(start, len(levels)):
            lev = levels[l]
            y = g[lev.b]
            if y == lev.b:
                continue
            if y not in lev.parent:
                return g, l
            g = tuple(map(lev.u_inv(y).__getitem__, g))
        return g, len(levels)

    def contains(self, g: Perm) -> bool:
        r, _ = self.sift(g)
        return r == self.e

    def _new_level(self, b: int) -> None:
        self.levels.append(_Level(b, self.n))
        self._checked.append(set())

    def _add_strong(self, r: Perm, lo: int, j: int) -> None:
        if j == len(self.levels):
            self._new_level(_first_moved(r))
        for l in range(lo, j + 1):
            self.levels[l].add(r)

    def extend_base(self, points: Iterable[int]) -> None:
        for b in points:
            self._new_level(b)

    def add_generator(self, g: Perm) -> bool:
        """Enlarge the group by ``g``; False if ``g`` was already a member."""
        r, j = self.sift(g)
        if r == self.e:
            return False
        self._add_strong(r, 0, j)
        self.complete(j)
        return True

    def seed_generators(self, gens: Sequence[Perm]) -> None:
        """Install ``gens`` as level-0 generators without completing."""
        for g in gens:
            if g == self.e:
                continue
            if all(g[lev.b] == lev.b for lev in self.levels):
                self._new_level(_first_moved(g))
            for lev in self.levels:
                lev.add(g)
                if g[lev.b] != lev.b:
                    break

    def random_fill(self, gens: Sequence[Perm], rng: random.Random, target: int | None = None,
                    patience: int = 12, limit: int = 20000) -> None:
        """Sift random elements, adding residues.

        Stops when the order reaches ``target`` (exact) or after ``patience``
        consecutive successful sifts (heuristic; follow with :meth:`complete`).
        """
        gens = [g for g in gens if g != self.e]
        if not gens:
            return
        pr = _ProductReplacement(gens, rng)
        quiet = 0
        for _ in range(limit):
            if target is not None and self.order() == target:
                return
            r, j = self.sift(pr.next())
            if r == self.e:
                quiet += 1
                if target is None and quiet >= patience:
                    return
                continue
            quiet = 0
            self._add_strong(r, 1 if j >= 1 else 0, j)
        if target is not None and self.order() != target:
            logger.debug("random fill gave up at order %s of %s", self.order(), target)

    def complete(self, start: int | None = None) -> None:
        """Deterministic Schreier--Sims from level ``start`` upward to 0."""
        i = len(self.levels) - 1 if start is None else min(start, len(self.levels) - 1)
        while i >= 0:
            j = self._check_level(i)
            if j is None:
                i -= 1
            else:
                i = j

    def _check_level(self, i: int) -> int | None:
        lev = self.levels[i]
        checked = self._checked[i]
        e = self.e
        for x in list(lev.parent):
            ux = None
            for gi in range(len(lev.gens)):
                if (x, gi) in checked:
                    continue
                checked.add((x, gi))
                s = lev.gens[gi]
                y = s[x]
                if ux is None:
                    ux = lev.u(x)
                # u_{s(x)}^-1 s u_x, fixes the base point of level i
                h = tuple(map(lev.u_inv(y).__getitem__, mul(s, ux)))
                if h == e:
                    continue
                r, j = self.sift(h, i + 1)
                if r != e:
                    self._add_strong(r, i + 1, j)
                    return j
        return None

    def canonical_coset(self, g: Perm) -> Perm:
        """Canonical element of the left coset ``g H`` of the chain's group ``H``.

        Levelwise minimal image of the base point; two elements get the same
        answer exactly when they lie in the same left coset.
        """
        for lev in self.levels:
            gi = g.__getitem__
            x = min(lev.parent, key=gi)
            if x != lev.b:
                g = mul(g, lev.u(x))
        return g


class _ProductReplacement:
    def __init__(self, gens: Sequence[Perm], rng: random.Random, warmup: int = 50):
        self.rng = rng
        self.state = list(gens)
        while len(self.state) < 10:
            self.state.extend(gens)
        self.acc = gens[0]
        for _ in range(warmup):
            self.next()

    def next(self) -> Perm:
        st = self.state
        i = self.rng.randrange(len(st))
        j = self.rng.randrange(len(st) - 1)
        if j >= i:
            j += 1
        if self.rng.random() < 0.5:
            st[i] = mul(st[i], st[j])
        else:
            st[i] = mul(st[i], inv(st[j]))
        self.acc = mul(self.acc, st[i])
        return self.acc


def build_chain(gens: Sequence[Perm], n: int, base_prefix: Sequence[int] = (),
                order: int | None = None, seed: int | None = None) -> StabChain:
    chain = StabChain(n)
    chain.extend_base(base_prefix)
    gens = [g for g in gens if g != chain.e]
    rng = random.Random(SEED if seed is None else seed)
    if order is not None:
        chain.seed_generators(gens)
        chain.random_fill(gens, rng, target=order)
        if chain.order() == order:
            return chain
        chain.complete()
        if chain.order() != order:
            raise PermError(f"chain order {chain.order()} disagrees with known order {order}")
        return chain
    chain.seed_generators(gens)
    if gens and n > 8:
        chain.random_fill(gens, rng)
    chain.complete()
    return chain


@dataclass
class CosetAction:
    """Left-multiplication action of ``source`` on the left cosets of ``subgroup``."""

    source: PermGroup
    subgroup: PermGroup
    coset_count: int
    overflow: bool
    images: list[Perm] = field(default_factory=list)
    representatives: list[Perm] = field(default_factory=list)
    kernel: PermGroup | None = None
    image_order: int | None = None
    base_orbits: list[int] = field(default_factory=list)

    @property
    def kernel_order(self) -> int | None:
        return None if self.kernel is None else self.kernel.order()

    @property
    def transitive(self) -> bool | None:
        if self.overflow:
            return None
        return _orbit_of(self.images, 0, self.coset_count) == self.coset_count


def _orbit_of(gens: Sequence[Perm], x: int, n: int) -> int:
    seen = {x}
    stack = [x]
    while stack:
        y = stack.pop()
        for g in gens:
            z = g[y]
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return len(seen)


class PermGroup:
    """A permutation group on ``range(degree)`` given by generators."""

    def __init__(self, gens: Iterable[Sequence[int]] = (), degree: int | None = None,
                 *, chain: StabChain | None = None):
        gens = [tuple(g) for g in gens]
        if degree is None:
            if not gens:
                raise PermError("degree required for a group without generators")
            degree = len(gens[0])
        for g in gens:
            check_perm(g, degree)
        self.degree = degree
        self.gens: tuple[Perm, ...] = tuple(gens)
        self.identity = ident(degree)
        self._chain = chain
        self._order: int | None = None

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.gens)})"

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = build_chain(self.gens, self.degree)
        return self._chain

    def order(self) -> int:
        if self._order is None:
            self._order = self.chain.order()
        return self._order

    def is_trivial(self) -> bool:
        return all(g == self.identity for g in self.gens)

    def contains(self, p: Sequence[int]) -> bool:
        p = tuple(p)
        if len(p) != self.degree:
            return False
        return self.chain.contains(p)

    __contains__ = contains

    def orbit(self, x: int) -> set[int]:
        if not 0 <= x < self.degree:
            raise PermError(f"point {x} out of range")
        seen = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for g in self.gens:
                z = g[y]
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
        return seen

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self.degree == other.degree and all(other.contains(g) for g in self.gens)

    def normalizes(self, other: PermGroup) -> bool:
        return all(other.contains(conj(g, h)) for g in self.gens for h in other.gens)

    def conjugate(self, g: Perm) -> PermGroup:
        """``g G g^-1``; reuses the chain."""
        out = PermGroup([conj(g, h) for h in self.gens], self.degree, chain=self.chain.conjugate(g))
        out._order = self._order
        return out

    def random_element(self, rng: random.Random) -> Perm:
        if self.is_trivial():
            return self.identity
        # uniform: a random transversal element per level
        g = self.identity
        for lev in reversed(self.chain.levels):
            y = rng.choice(list(lev.parent))
            g = mul(lev.u(y), g)
        return g

    def pointwise_stabilizer(self, points: Iterable[int]) -> PermGroup:
        pts = list(dict.fromkeys(points))
        if not pts:
            return self
        if self.is_trivial():
            return PermGroup([], self.degree)
        chain = build_chain(self.chain.strong_generators(), self.degree, base_prefix=pts, order=self.order())
        sub = chain.suffix(len(pts))
        gens = sub.strong_generators()
        out = PermGroup(gens, self.degree, chain=sub)
        return out

    def stabilizer(self, x: int) -> PermGroup:
        return self.pointwise_stabilizer([x])

    def normal_closure(self, gens: Iterable[Sequence[int]]) -> PermGroup:
        """Smallest normal subgroup of ``self`` containing ``gens``."""
        gens = [tuple(g) for g in gens]
        for g in gens:
            if not self.contains(g):
                raise NotASubgroup(f"{format_cycles(g)} is not in the group")
        chain = StabChain(self.degree)
        added: list[Perm] = []
        for g in gens:
            if chain.add_generator(g):
                added.append(g)
        i = 0
        while i < len(added):
            n = added[i]
            i += 1
            for s in self.gens:
                c = conj(s, n)
                if chain.add_generator(c):
                    added.append(c)
        return PermGroup(added, self.degree, chain=chain)

    def derived_subgroup(self) -> PermGroup:
        gs = self.gens
        comms = [commutator(a, b) for i, a in enumerate(gs) for b in gs[i + 1:]]
        return self.normal_closure([c for c in comms if c != self.identity])

    def subgroup_index(self, sub: PermGroup) -> int:
        if not sub.is_subgroup_of(self):
            raise NotASubgroup("not a subgroup")
        q, r = divmod(self.order(), sub.order())
        if r:
            raise ArithmeticError(f"Lagrange violated: {self.order()} / {sub.order()}")
        return q

    def intersection(self, other: PermGroup, cap: int = COSET_CAP) -> PermGroup:
        return intersection(self, other, cap)

    def coset_action(self, sub: PermGroup, cap: int = COSET_CAP) -> CosetAction:
        return coset_action(self, sub, cap)


# -- coset orbits -----------------------------------------------------------


def _coset_orbit(acting: PermGroup, sub: PermGroup, cap: int, shift: Perm | None = None):
    """Orbit of ``acting`` on left cosets of ``K = shift sub shift^-1`` containing ``K``.

    Cosets are identified by canonical representatives from ``sub``'s chain.
    Returns (keys, transversal, schreier_pairs) or None if the orbit exceeds ``cap``.
    """
    chain = sub.chain
    if shift is None:
        def key(x):
            return chain.canonical_coset(x)
    else:
        def key(x):
            return chain.canonical_coset(mul(x, shift))
    e = acting.identity
    k0 = key(e)
    index = {k0: 0}
    reps = [e]
    i = 0
    while i < len(reps):
        r = reps[i]
        i += 1
        for s in acting.gens:
            x = mul(s, r)
            k = key(x)
            if k not in index:
                if len(reps) >= cap:
                    return None
                index[k] = len(reps)
                reps.append(x)
    return index, reps, key


def _stabilizer_from_orbit(acting: PermGroup, index, reps, key) -> PermGroup:
    """Stabilizer of the first coset of an orbit computed by :func:`_coset_orbit`.

    Its order is known (orbit-stabilizer), so uniform random stabilizer
    elements ``t_j^-1 x`` are sifted until the chain reaches it.  If that
    stalls, all Schreier generators are added deterministically.
    """
    target, r = divmod(acting.order(), len(reps))
    if r:
        raise ArithmeticError("orbit length does not divide group order")
    n = acting.degree
    if target == 1:
        return PermGroup([], n)
    rng = random.Random(SEED)
    chain = StabChain(n)
    e = chain.e
    quiet = 0
    while chain.order() != target and quiet < 200:
        x = acting.random_element(rng)
        h = mul(inv(reps[index[key(x)]]), x)
        res, lvl = chain.sift(h)
        if res == e:
            quiet += 1
            continue
        quiet = 0
        chain._add_strong(res, 0, lvl)
    if chain.order() != target:
        for i, t in enumerate(reps):
            for s in acting.gens:
                x = mul(s, t)
                chain.add_generator(mul(inv(reps[index[key(x)]]), x))
                if chain.order() == target:
                    break
            if chain.order() == target:
                break
    if chain.order() != target:
        raise PermError("stabilizer order mismatch")
    return PermGroup(chain.strong_generators(), n, chain=chain)


def relative_index(acting: PermGroup, sub: PermGroup, cap: int = COSET_CAP,
                   shift: Perm | None = None) -> int | None:
    """``|A : A ∩ K|`` with ``K = shift sub shift^-1``, or None past ``cap``."""
    res = _coset_orbit(acting, sub, cap, shift)
    return None if res is None else len(res[1])


def intersection(g: PermGroup, h: PermGroup, cap: int = COSET_CAP) -> PermGroup:
    """Exact ``G ∩ H`` as the stabilizer of the coset ``H`` under ``G``.

    Tries the orbit of ``G`` on cosets of ``H`` and of ``H`` on cosets of ``G``
    (lengths ``|G : G∩H|`` and ``|H : G∩H|``); falls back to filtering an
    enumeration of the smaller group when both exceed ``cap``.
    """
    if g.degree != h.degree:
        raise PermError("groups act on different point sets")
    if g.is_trivial() or h.is_trivial():
        return PermGroup([], g.degree)
    if all(h.contains(x) for x in g.gens):
        return g
    if all(g.contains(x) for x in h.gens):
        return h
    first, second = (g, h) if g.order() <= h.order() else (h, g)
    for acting, sub in ((first, second), (second, first)):
        res = _coset_orbit(acting, sub, cap)
        if res is not None:
            return _stabilizer_from_orbit(acting, *res)
    small, big = first, second
    if small.order() > ENUMERATION_LIMIT:
        raise CapExceeded(f"intersection: coset orbits exceed {cap} and groups too large to enumerate")
    chain = StabChain(g.degree)
    gens = []
    for x in enumerate_elements(small):
        if big.contains(x) and chain.add_generator(x):
            gens.append(x)
    return PermGroup(gens, g.degree, chain=chain)


def enumerate_elements(g: PermGroup, limit: int = ENUMERATION_LIMIT) -> list[Perm]:
    """All elements, via the chain (transversal products)."""
    if g.order() > limit:
        raise CapExceeded(f"group of order {g.order()} too large to enumerate")
    elems = [g.identity]
    for lev in reversed(g.chain.levels):
        us = [lev.u(y) for y in sorted(lev.parent)]
        elems = [mul(u, x) for u in us for x in elems]
    return elems


def coset_action(g: PermGroup, h: PermGroup, cap: int = COSET_CAP) -> CosetAction:
    """Action of ``g`` on left cosets of ``h`` with generator images and kernel.

    The image order is assembled from a stabilizer chain of the action
    (coset stabilizers ``G > H > H ∩ rHr^-1 > ...``), so the identity
    ``image order * kernel order == |G|`` is a genuine check.
    """
    if not h.is_subgroup_of(g):
        raise NotASubgroup("coset action needs a subgroup")
    index_expected = g.subgroup_index(h)
    if index_expected > cap:
        return CosetAction(g, h, index_expected, True)
    res = _coset_orbit(g, h, cap)
    if res is None:
        return CosetAction(g, h, index_expected, True)
    index, reps, key = res
    images = []
    for s in g.gens:
        images.append(tuple(index[key(mul(s, r))] for r in reps))
    act = CosetAction(g, h, len(reps), False, images, reps)
    if len(reps) != index_expected:
        raise ArithmeticError("coset count disagrees with order quotient")

    # stabilizer chain of the action: S_0 = g, S_1 = h, ...
    orbits = [len(reps)]
    stab = h
    while not stab.is_trivial():
        moved = _moved_coset(stab, reps, h)
        if moved is None:
            break
        r = reps[moved]
        # orbit of stab on cosets of r h r^-1 is its orbit through coset moved
        sres = _coset_orbit(stab, h, cap, shift=r)
        sidx, sreps, skey = sres
        orbits.append(len(sreps))
        stab = _stabilizer_from_orbit(stab, sidx, sreps, skey)
    act.base_orbits = orbits
    act.image_order = prod(orbits)
    act.kernel = stab
    return act


def _moved_coset(stab: PermGroup, reps: Sequence[Perm], h: PermGroup) -> int | None:
    gens = [s for s in stab.gens if s != stab.identity]
    for i, r in enumerate(reps):
        ri = inv(r)
        for s in gens:
            if not h.contains(mul(ri, mul(s, r))):
                return i
    return None


def normal_core(g: PermGroup, h: PermGroup, cap: int = COSET_CAP) -> PermGroup:
    """Largest normal subgroup of ``g`` inside ``h``."""
    core = h
    while True:
        changed = False
        for s in g.gens:
            if core.is_trivial():
                return core
            conjugated = core.conjugate(s)
            if all(core.contains(x) for x in conjugated.gens):
                continue
            core = intersection(core, conjugated, cap)
            changed = True
        if not changed:
            return core


# -- functional surface -----------------------------------------------------


def group_from_generators(perms: Iterable[Sequence[int]], m: int) -> PermGroup:
    return PermGroup(perms, m)


def order(g: PermGroup) -> int:
    return g.order()


def contains(g: PermGroup, p: Sequence[int]) -> bool:
    return g.contains(p)


def orbit(g: PermGroup, x: int) -> set[int]:
    return g.orbit(x)


def pointwise_stabilizer(g: PermGroup, points: Iterable[int]) -> PermGroup:
    return g.pointwise_stabilizer(points)


def normal_closure(g: PermGroup, gens: Iterable[Sequence[int]]) -> PermGroup:
    return g.normal_closure(gens)


def derived_subgroup(g: PermGroup) -> PermGroup:
    return g.derived_subgroup()


def subgroup_index(g: PermGroup, h: PermGroup) -> int:
    return g.subgroup_index(h)
