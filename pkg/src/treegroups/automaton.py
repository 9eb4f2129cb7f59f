"""Finite-state tree automorphisms kept in a minimised Mealy automaton.

Every state of an :class:`Automaton` is a distinct automorphism of the
``k``-regular rooted tree: the store is kept bisimulation-minimal, so two
state ids are equal exactly when the automorphisms they denote are equal.
New states (products, inverses, imported portraits) are absorbed by hash
consing on ``(permutation, child ids)`` for acyclic parts and by partition
refinement against the recurrent part of the store for cyclic parts.
"""

from __future__ import annotations

import logging
from typing import Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    pass


class AutomatonError(ValueError):
    pass


def _tarjan(n: int, kids: Sequence[Sequence[int]]) -> list[list[int]]:
    """SCCs of a graph on ``0..n-1``; negative kid entries are ignored.

    Components come out children first.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            ks = kids[v]
            while pos < len(ks) and ks[pos] < 0:
                pos += 1
            if pos < len(ks):
                w = ks[pos]
                work[-1] = (v, pos + 1)
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def _refine(perms: Sequence[tuple], kids: Sequence[Sequence[int]]) -> list[int]:
    """Coarsest bisimulation (Moore refinement); returns a class per node."""
    labels: dict = {}
    cls = [labels.setdefault(p, len(labels)) for p in perms]
    count = len(labels)
    while True:
        labels = {}
        new = [
            labels.setdefault((c,) + tuple(cls[k] for k in ks), len(labels))
            for c, ks in zip(cls, kids)
        ]
        if len(labels) == count:
            return new
        cls, count = new, len(labels)


class Automaton:
    """A growing, always-minimal store of finite-state automorphisms of T_k."""

    def __init__(self, k: int, budget: int = DEFAULT_BUDGET, contracting: bool = False):
        if k < 2:
            raise AutomatonError("alphabet size must be >= 2")
        self.k = k
        self.budget = budget
        self.contracting = contracting
        self._perm: list[tuple[int, ...]] = []
        self._kids: list[tuple[int, ...]] = []
        self._key: dict[tuple, int] = {}
        self._cyclic: set[int] = set()
        self._core: list[int] | None = None
        self._mul: dict[tuple[int, int], int] = {}
        self._inv: dict[int, int] = {}
        self._trunc: dict[tuple[int, int], tuple[int, ...]] = {}
        self.names: dict[str, int] = {}
        ident = tuple(range(k))
        self.identity = self._new(ident, None)
        self._kids[self.identity] = (self.identity,) * k
        self._key[(ident, self._kids[self.identity])] = self.identity
        self._cyclic.add(self.identity)
        self._inv[self.identity] = self.identity

    # -- construction -----------------------------------------------------

    @classmethod
    def from_states(
        cls,
        k: int,
        states: Mapping[str, tuple[Sequence[int], Sequence[str]]],
        contracting: bool = False,
        budget: int = DEFAULT_BUDGET,
    ) -> Automaton:
        """Build from ``name -> (permutation images, child names)``.

        The names ``"1"`` and ``"e"`` denote the identity unless redefined.
        An empty child list means all children are the identity.
        """
        aut = cls(k, budget=budget, contracting=contracting)
        names = list(states)
        local = {name: i for i, name in enumerate(names)}
        perms, kids = [], []
        for name in names:
            perm, children = states[name]
            perm = tuple(perm)
            if sorted(perm) != list(range(k)):
                raise AutomatonError(f"state {name!r}: {list(perm)} is not a permutation of 0..{k - 1}")
            children = list(children) or ["1"] * k
            if len(children) != k:
                raise AutomatonError(f"state {name!r}: expected {k} children, got {len(children)}")
            row = []
            for c in children:
                if c in local:
                    row.append(local[c])
                elif c in ("1", "e"):
                    row.append(~aut.identity)
                else:
                    raise AutomatonError(f"state {name!r}: unknown child state {c!r}")
            perms.append(perm)
            kids.append(tuple(row))
        ids = aut.absorb(perms, kids)
        aut.names = dict(zip(names, ids))
        aut.names.setdefault("1", aut.identity)
        aut.names.setdefault("e", aut.identity)
        return aut

    def _new(self, perm: tuple[int, ...], kids: tuple[int, ...] | None) -> int:
        self._perm.append(perm)
        self._kids.append(kids if kids is not None else ())
        return len(self._perm) - 1

    def __len__(self) -> int:
        return len(self._perm)

    def perm(self, s: int) -> tuple[int, ...]:
        return self._perm[s]

    def child(self, s: int, x: int) -> int:
        return self._kids[s][x]

    def children(self, s: int) -> tuple[int, ...]:
        return self._kids[s]

    def reach(self, s: int) -> list[int]:
        """States reachable from ``s`` (including ``s``), in DFS order."""
        seen = {s}
        order = [s]
        i = 0
        while i < len(order):
            for c in self._kids[order[i]]:
                if c not in seen:
                    seen.add(c)
                    order.append(c)
            i += 1
        return order

    def is_cyclic(self, s: int) -> bool:
        return s in self._cyclic

    def _recurrent_core(self) -> list[int]:
        if self._core is None:
            seen: set[int] = set()
            for s in sorted(self._cyclic):
                if s not in seen:
                    seen.update(self.reach(s))
            self._core = sorted(seen)
        return self._core

    def absorb(self, perms: Sequence[tuple], kids: Sequence[Sequence[int]]) -> list[int]:
        """Add a closed batch of states; return the canonical id of each.

        ``kids[i][x]`` is a local node index when ``>= 0`` and ``~sid`` for an
        existing store state ``sid``.
        """
        n = len(perms)
        resolved = [-1] * n
        for comp in _tarjan(n, kids):
            if len(comp) == 1 and comp[0] not in kids[comp[0]]:
                v = comp[0]
                ks = tuple(~c if c < 0 else resolved[c] for c in kids[v])
                key = (perms[v], ks)
                sid = self._key.get(key)
                if sid is None:
                    sid = self._new(perms[v], ks)
                    self._key[key] = sid
                resolved[v] = sid
            else:
                self._absorb_cyclic(comp, perms, kids, resolved)
        return resolved

    def _absorb_cyclic(self, comp, perms, kids, resolved) -> None:
        pos = {v: i for i, v in enumerate(comp)}
        external: set[int] = set()
        for v in comp:
            for c in kids[v]:
                if c < 0:
                    external.add(~c)
                elif c not in pos:
                    external.add(resolved[c])
        region: set[int] = set(self._recurrent_core())
        for s in external - region:
            region.update(self.reach(s))
        store_nodes = sorted(region)
        spos = {s: len(comp) + i for i, s in enumerate(store_nodes)}

        def local_index(c: int) -> int:
            if c < 0:
                return spos[~c]
            if c in pos:
                return pos[c]
            return spos[resolved[c]]

        all_perms = [perms[v] for v in comp] + [self._perm[s] for s in store_nodes]
        all_kids = [tuple(local_index(c) for c in kids[v]) for v in comp]
        all_kids += [tuple(spos[c] for c in self._kids[s]) for s in store_nodes]
        cls = _refine(all_perms, all_kids)

        owner: dict[int, int] = {}
        for s in store_nodes:
            owner.setdefault(cls[spos[s]], s)
        fresh = []
        for i in range(len(comp)):
            c = cls[i]
            if c not in owner:
                owner[c] = self._new(all_perms[i], None)
                fresh.append(i)
        for i in fresh:
            sid = owner[cls[i]]
            ks = tuple(owner[cls[j]] for j in all_kids[i])
            self._kids[sid] = ks
            self._key[(self._perm[sid], ks)] = sid
            self._cyclic.add(sid)
            self._core = None
        for i, v in enumerate(comp):
            resolved[v] = owner[cls[i]]

    # -- group operations -------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        """The state acting as ``a`` after ``b``: ``x -> a(b(x))``."""
        e = self.identity
        if a == e:
            return b
        if b == e:
            return a
        hit = self._mul.get((a, b))
        if hit is not None:
            return hit
        index = {(a, b): 0}
        pairs = [(a, b)]
        perms, kids = [], []
        i = 0
        while i < len(pairs):
            p, q = pairs[i]
            pp, pq = self._perm[p], self._perm[q]
            perms.append(tuple(pp[y] for y in pq))
            row = []
            for x in range(self.k):
                u, w = self._kids[p][pq[x]], self._kids[q][x]
                if u == e:
                    row.append(~w)
                elif w == e:
                    row.append(~u)
                elif (u, w) in self._mul:
                    row.append(~self._mul[(u, w)])
                else:
                    j = index.get((u, w))
                    if j is None:
                        j = index[(u, w)] = len(pairs)
                        pairs.append((u, w))
                        if len(pairs) > self.budget:
                            raise BudgetExceeded(f"product automaton exceeds {self.budget} states")
                    row.append(j)
            kids.append(tuple(row))
            i += 1
        ids = self.absorb(perms, kids)
        for pair, sid in zip(pairs, ids):
            self._mul[pair] = sid
        return ids[0]

    def inv(self, a: int) -> int:
        hit = self._inv.get(a)
        if hit is not None:
            return hit
        nodes = [s for s in self.reach(a) if s not in self._inv]
        pos = {s: i for i, s in enumerate(nodes)}
        perms, kids = [], []
        for s in nodes:
            p = self._perm[s]
            pinv = [0] * self.k
            for x, y in enumerate(p):
                pinv[y] = x
            perms.append(tuple(pinv))
            row = []
            for x in range(self.k):
                c = self._kids[s][pinv[x]]
                row.append(pos[c] if c in pos else ~self._inv[c])
            kids.append(tuple(row))
        for s, sid in zip(nodes, self.absorb(perms, kids)):
            self._inv[s] = sid
            self._inv.setdefault(sid, s)
        return self._inv[a]

    def word(self, states: Iterable[int]) -> int:
        out = self.identity
        for s in states:
            out = self.mul(out, s)
        return out

    def apply(self, s: int, v: Sequence[int]) -> tuple[int, ...]:
        out = []
        for x in v:
            out.append(self._perm[s][x])
            s = self._kids[s][x]
        return tuple(out)

    def section(self, s: int, v: Sequence[int]) -> int:
        for x in v:
            s = self._kids[s][x]
        return s

    def truncate(self, s: int, n: int) -> tuple[int, ...]:
        """Permutation of the ``k**n`` level-``n`` vertices induced by ``s``."""
        if n == 0:
            return (0,)
        if s == self.identity:
            return tuple(range(self.k ** n))
        hit = self._trunc.get((s, n))
        if hit is not None:
            return hit
        width = self.k ** (n - 1)
        out = [0] * (width * self.k)
        p = self._perm[s]
        for x in range(self.k):
            base = p[x] * width
            sub = self.truncate(self._kids[s][x], n - 1)
            off = x * width
            for j, y in enumerate(sub):
                out[off + j] = base + y
        res = tuple(out)
        self._trunc[(s, n)] = res
        return res

    def finitary_depth(self, s: int) -> int | None:
        """Depth below which all sections are trivial, or None if ``s`` is not finitary."""
        depth: dict[int, int] = {self.identity: 0}
        order = self.reach(s)
        if any(t in self._cyclic and t != self.identity for t in order):
            return None
        for t in reversed(order):
            if t not in depth:
                depth[t] = 1 + max(depth[c] for c in self._kids[t])
        return depth[s]

    def nucleus(self, budget: int = 1000) -> list[int]:
        """The nucleus of the group generated by the named states.

        Starts from the recurrent part of the generating automaton and adds
        the recurrent parts of pairwise products until closed.  Raises
        :class:`BudgetExceeded` if more than ``budget`` states accumulate,
        which is what happens for non-contracting automata.
        """
        def recurrent(states: Iterable[int]) -> set[int]:
            out: set[int] = set()
            for s in states:
                for t in self.reach(s):
                    if t in self._cyclic and t not in out:
                        out.update(self.reach(t))
            return out

        gens = set(self.names.values()) | {self.identity}
        nuc = recurrent(gens)
        done: set[tuple[int, int]] = set()
        while True:
            new = set()
            for a in sorted(nuc):
                for b in sorted(nuc):
                    if (a, b) in done:
                        continue
                    done.add((a, b))
                    new |= recurrent([self.mul(a, b)])
            if new <= nuc:
                return sorted(nuc)
            nuc |= new
            if len(nuc) > budget:
                raise BudgetExceeded(f"nucleus exceeds {budget} states")
