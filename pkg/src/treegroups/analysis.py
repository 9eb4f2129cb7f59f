"""Finite-depth diagnostics for groups acting on rooted trees.

Everything is computed inside the level quotients ``G_n`` (the action on the
level-``n`` vertices).  Rigid stabilizers are those *of the quotient*: the
subgroup of ``G_n`` fixing every level-``n`` vertex outside the subtree.  It
contains the image of the true rigid stabilizer, so indices derived from it
are lower bounds for the indices in ``G``.  Tables across levels are
evidence, never proof.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import prod
from typing import Any, Callable, Iterable, Sequence

from . import perm as P
from .elements import TreeElement
from .group import GroupSpec, SubgroupSpec
from .perm import PermGroup
from .tree import Vertex, leaves_below, level_vertices

STABILIZATION_WINDOW = 3


class NotNormal(ValueError):
    """A subgroup failed the per-level normality check."""

    def __init__(self, level: int, witness: str):
        super().__init__(f"not normal at level {level}: {witness}")
        self.level = level
        self.witness = witness


class NotInGroup(ValueError):
    pass


@dataclass
class IndexRow:
    level: int
    value: int | None
    seconds: float = 0.0
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class IndexTable:
    """Level-indexed values with flags derived from the data."""

    label: str
    rows: list[IndexRow] = field(default_factory=list)
    window: int = STABILIZATION_WINDOW

    def __post_init__(self):
        self.rows.sort(key=lambda r: r.level)

    @property
    def values(self) -> list[int | None]:
        return [r.value for r in self.rows]

    def _known(self) -> list[int]:
        return [r.value for r in self.rows if r.value is not None]

    @property
    def complete(self) -> bool:
        return all(r.value is not None for r in self.rows)

    @property
    def monotone_nondecreasing(self) -> bool:
        v = self._known()
        return all(a <= b for a, b in zip(v, v[1:]))

    @property
    def strictly_increasing(self) -> bool:
        v = self._known()
        return len(v) >= 2 and all(a < b for a, b in zip(v, v[1:]))

    @property
    def stabilized_window(self) -> bool:
        v = self._known()
        return len(v) >= self.window and len(set(v[-self.window:])) == 1

    @property
    def constant_from(self) -> int | None:
        """First level from which every later (known) value is equal."""
        rows = [r for r in self.rows if r.value is not None]
        if not rows:
            return None
        last = rows[-1].value
        start = rows[-1].level
        for r in reversed(rows):
            if r.value != last:
                break
            start = r.level
        return start

    def flags(self) -> dict[str, Any]:
        return {
            "monotone_nondecreasing": self.monotone_nondecreasing,
            "strictly_increasing": self.strictly_increasing,
            "stabilized_window": self.stabilized_window,
            "window": self.window,
            "constant_from": self.constant_from,
            "complete": self.complete,
        }

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        rows = []
        for r in self.rows:
            row: dict[str, Any] = {"level": r.level, "value": r.value}
            row.update(r.extra)
            if timings:
                row["seconds"] = round(r.seconds, 6)
            rows.append(row)
        return {"label": self.label, "rows": rows, "flags": self.flags()}


def _timed(fn: Callable[..., Any], *args) -> tuple[Any, float]:
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def _run_cells(fn: Callable[..., Any], cells: Sequence[tuple], jobs: int) -> list[tuple[Any, float]]:
    """Evaluate ``fn(*cell)`` for each cell, in order; optionally in worker processes."""
    if jobs <= 1 or len(cells) <= 1:
        return [_timed(fn, *c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_timed, fn, *c) for c in cells]
        return [f.result() for f in futures]


# -- level quotients -----------------------------------------------------------


def level_quotient(g: GroupSpec, n: int) -> PermGroup:
    return g.level_quotient(n)


def check_level_transitive(g: GroupSpec, n_max: int) -> list[bool]:
    """Transitivity of ``G_n`` on level ``n`` for ``n = 1 .. n_max``."""
    out = []
    for n in range(1, n_max + 1):
        q = g.level_quotient(n)
        out.append(len(q.orbit(0)) == g.level_size(n))
    return out


def rist_quotient(g: GroupSpec, v: Vertex, n: int) -> PermGroup:
    """Pointwise stabilizer in ``G_n`` of all level-``n`` vertices not below ``v``."""
    v = tuple(v)
    if len(v) > n:
        raise ValueError(f"vertex {v} is below level {n}")
    q = g.level_quotient(n)
    inside = leaves_below(v, n, g.degrees)
    outside = [x for x in range(q.degree) if x not in inside]
    return q.pointwise_stabilizer(outside)


@dataclass
class RistReport:
    level: int
    depth: int
    vertex_orders: list[int]
    product_order: int
    index: int
    is_direct_product: bool
    commuting: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "depth": self.depth,
            "vertex_orders": self.vertex_orders,
            "product_order": self.product_order,
            "index": self.index,
            "is_direct_product": self.is_direct_product,
            "commuting": self.commuting,
            "semantics": "quotient-rist",
        }


def rist_product(g: GroupSpec, k: int, n: int) -> tuple[PermGroup, list[PermGroup]]:
    """The subgroup of ``G_n`` generated by all level-``k`` quotient rigid stabilizers."""
    parts = [rist_quotient(g, v, n) for v in level_vertices(k, g.degrees)]
    if k == 0:
        return parts[0], parts
    gens = [x for r in parts for x in r.gens]
    return PermGroup(gens, g.level_size(n)), parts


def _disjoint_commuting(parts: Sequence[PermGroup]) -> bool:
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            for x in a.gens:
                for y in b.gens:
                    if P.mul(x, y) != P.mul(y, x):
                        return False
    return True


def rist_level_report(g: GroupSpec, k: int, n: int) -> RistReport:
    if k > n:
        raise ValueError("rist level deeper than the quotient level")
    prod_group, parts = rist_product(g, k, n)
    orders = [r.order() for r in parts]
    q = g.level_quotient(n)
    return RistReport(
        level=k,
        depth=n,
        vertex_orders=orders,
        product_order=prod_group.order(),
        index=q.subgroup_index(prod_group),
        is_direct_product=prod_group.order() == prod(orders),
        commuting=_disjoint_commuting(parts),
    )


def _rist_index_cell(g: GroupSpec, k: int, n: int) -> int:
    return rist_level_report(g, k, n).index


def rist_index_table(g: GroupSpec, k: int, levels: Iterable[int], jobs: int = 1) -> IndexTable:
    """``|G_n : rist_{G_n}(k)|`` over ``n``; lower bounds for ``|G : rist_G(k)|``."""
    levels = [n for n in levels if n >= k]
    res = _run_cells(_rist_index_cell, [(g, k, n) for n in levels], jobs)
    rows = [IndexRow(n, v, t) for n, (v, t) in zip(levels, res)]
    return IndexTable(f"|G_n : rist(k={k})|", rows)


def _ji_cell(g: GroupSpec, k: int, n: int) -> tuple[int, int]:
    r, _ = rist_product(g, k, n)
    d = r.derived_subgroup()
    return r.subgroup_index(d), r.order()


def ji_criterion_table(g: GroupSpec, k: int, levels: Iterable[int], jobs: int = 1) -> IndexTable:
    """``|R : R'|`` for ``R`` the level-``k`` quotient-rist product of ``G_n``."""
    levels = [n for n in levels if n >= k]
    res = _run_cells(_ji_cell, [(g, k, n) for n in levels], jobs)
    rows = [IndexRow(n, v[0], t, {"rist_order": v[1]}) for n, (v, t) in zip(levels, res)]
    return IndexTable(f"|R : R'| (k={k})", rows)


# -- commensuration and index evidence ------------------------------------------


def _comm_cell(group: GroupSpec, sub: SubgroupSpec, elem: TreeElement, n: int, cap: int):
    q = group.level_quotient(n)
    gn = elem.truncate(n)
    if not q.contains(gn):
        raise NotInGroup(f"element does not lie in the level-{n} quotient")
    h = sub.level_quotient(n)
    forward = P.relative_index(h, h, cap, shift=gn)
    backward = P.relative_index(h, h, cap, shift=P.inv(gn))
    return forward, backward


def commensuration_table(group: GroupSpec, sub: SubgroupSpec, elements: Sequence[TreeElement],
                         levels: Iterable[int], cap: int = P.COSET_CAP, jobs: int = 1,
                         labels: Sequence[str] | None = None) -> list[IndexTable]:
    """Per element ``g``: ``|H_n : H_n ∩ g H_n g^-1|`` over levels.

    Each row also records the reverse index ``|g H_n g^-1 : H_n ∩ g H_n g^-1|``.
    ``None`` marks a coset orbit longer than ``cap``.
    """
    levels = list(levels)
    labels = list(labels) if labels is not None else [f"g{i}" for i in range(len(elements))]
    cells = [(group, sub, e, n, cap) for e in elements for n in levels]
    res = iter(_run_cells(_comm_cell, cells, jobs))
    tables = []
    for lab in labels:
        rows = []
        for n in levels:
            (fwd, bwd), t = next(res)
            rows.append(IndexRow(n, fwd, t, {"reverse": bwd}))
        tables.append(IndexTable(f"|H : H ∩ {lab} H {lab}^-1|", rows))
    return tables


def _index_cell(group: GroupSpec, sub: SubgroupSpec, n: int) -> int:
    return group.level_quotient(n).subgroup_index(sub.level_quotient(n))


def infinite_index_evidence(group: GroupSpec, sub: SubgroupSpec, levels: Iterable[int],
                            jobs: int = 1) -> IndexTable:
    """``|G_n : H_n|`` over levels; strict growth suggests infinite index."""
    levels = list(levels)
    res = _run_cells(_index_cell, [(group, sub, n) for n in levels], jobs)
    return IndexTable("|G_n : H_n|", [IndexRow(n, v, t) for n, (v, t) in zip(levels, res)])


# -- containment of rist' -------------------------------------------------------


def check_normal(group: GroupSpec, sub: SubgroupSpec, n: int) -> None:
    """Raise :class:`NotNormal` unless ``H_n`` is normal in ``G_n``."""
    q = group.level_quotient(n)
    h = sub.level_quotient(n)
    for si, s in enumerate(q.gens):
        for hi, x in enumerate(h.gens):
            if not h.contains(P.conj(s, x)):
                gname = group.generator_names[si]
                raise NotNormal(n, f"{gname} * h{hi} * {gname}^-1 is not in H_{n}")


@dataclass
class ContainmentCertificate:
    level: int
    depth: int
    generators: list[P.Perm]
    verified: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": self.level,
            "depth": self.depth,
            "generator_count": len(self.generators),
            "generators": [P.format_cycles(x) for x in self.generators],
            "verified": self.verified,
        }


def verify_certificate(group: GroupSpec, sub: SubgroupSpec, cert: ContainmentCertificate) -> bool:
    """Recheck that the certificate's generators are in ``H`` and generate ``rist(m)'``."""
    h = sub.level_quotient(cert.depth)
    if not all(h.contains(x) for x in cert.generators):
        return False
    r, _ = rist_product(group, cert.level, cert.depth)
    d = r.derived_subgroup()
    mine = PermGroup(cert.generators, h.degree)
    return mine.order() == d.order() and all(d.contains(x) for x in cert.generators)


def containment_level(group: GroupSpec, sub: SubgroupSpec, n_max: int,
                      depth: int | None = None) -> ContainmentCertificate | None:
    """Smallest ``m <= n_max`` with ``rist(m)' <= H`` inside ``G_depth``.

    ``depth`` defaults to ``n_max + 2``.  Normality of ``H_n`` is checked at
    every level up to ``depth`` first.  ``None`` means no such ``m`` was found
    within the budget, which does not refute existence.  A level whose
    quotient ``rist(m)'`` is already trivial at ``depth`` is unresolved there
    and ends the search, since containment would hold vacuously.
    """
    depth = n_max + 2 if depth is None else depth
    if depth < n_max:
        raise ValueError("evaluation depth must be at least n_max")
    for n in range(1, depth + 1):
        check_normal(group, sub, n)
    h = sub.level_quotient(depth)
    for m in range(0, n_max + 1):
        r, _ = rist_product(group, m, depth)
        d = r.derived_subgroup()
        if d.is_trivial():
            return None
        if all(h.contains(x) for x in d.gens):
            return ContainmentCertificate(m, depth, list(d.gens), True)
    return None


# -- Schlichting approximation ----------------------------------------------------


@dataclass
class SchlichtingSummary:
    level: int
    coset_count: int
    overflow: bool
    transitive: bool | None = None
    kernel_order: int | None = None
    core_order: int | None = None
    image_order: int | None = None
    group_order: int | None = None
    generator_images: list[P.Perm] = field(default_factory=list)

    def to_dict(self, images: bool = False) -> dict[str, Any]:
        out = {
            "level": self.level,
            "coset_count": self.coset_count,
            "overflow": self.overflow,
            "transitive": self.transitive,
            "kernel_order": self.kernel_order,
            "core_order": self.core_order,
            "image_order": self.image_order,
            "group_order": self.group_order,
        }
        if images:
            out["generator_images"] = [list(p) for p in self.generator_images]
        return out


def schlichting_approximation(group: GroupSpec, sub: SubgroupSpec, n: int,
                              cap: int = P.COSET_CAP) -> SchlichtingSummary:
    """Action of ``G_n`` by left multiplication on the cosets ``G_n / O_n``.

    The kernel is computed from the action's own stabilizer chain and checked
    against the normal core of ``O_n``.
    """
    q = group.level_quotient(n)
    o = sub.level_quotient(n)
    act = P.coset_action(q, o, cap)
    if act.overflow:
        return SchlichtingSummary(n, act.coset_count, True, group_order=q.order())
    core = P.normal_core(q, o, cap)
    if core.order() != act.kernel_order:
        raise ArithmeticError("action kernel and normal core disagree")
    return SchlichtingSummary(
        level=n,
        coset_count=act.coset_count,
        overflow=False,
        transitive=act.transitive,
        kernel_order=act.kernel_order,
        core_order=core.order(),
        image_order=act.image_order,
        group_order=q.order(),
        generator_images=act.images,
    )


def branch_verdict(transitive: Sequence[bool], rist_tables: Sequence[IndexTable],
                   rist_nontrivial: Sequence[bool]) -> str:
    """Summarise finite evidence as one of four labels.

    ``branch-evidence``: transitive at every level and each rist index table
    stabilizes.  ``weakly-branch-evidence``: transitive, rist tables keep
    growing but every rist is nontrivial.  ``fails-transitivity`` is a
    genuine refutation; anything else is ``inconclusive``.
    """
    if not all(transitive):
        return "fails-transitivity"
    if rist_tables and all(t.complete and t.stabilized_window for t in rist_tables):
        return "branch-evidence"
    if rist_nontrivial and all(rist_nontrivial):
        return "weakly-branch-evidence"
    return "inconclusive"
