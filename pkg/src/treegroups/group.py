"""Groups and subgroups of Aut(T_alpha) given by generating elements.

Elements are written as words over generator names: factors joined by
``*``, each an optional power ``^k`` (``k`` may be negative), for example
``a*b^-1*c^2``.  ``1`` and ``e`` denote the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import perm
from .elements import StateElement, TreeElement, compose, identity
from .perm import PermGroup
from .tree import DegreeSequence


class WordError(ValueError):
    pass


class LevelBudgetExceeded(RuntimeError):
    pass


_FACTOR = re.compile(r"^\s*([^\s*^]+)\s*(?:\^\s*(-?\d+))?\s*$")


def parse_word(text: str) -> list[tuple[str, int]]:
    text = text.strip()
    if not text:
        raise WordError("empty word")
    out = []
    for part in text.split("*"):
        m = _FACTOR.match(part)
        if not m:
            raise WordError(f"cannot parse factor {part!r} in {text!r}")
        out.append((m.group(1), int(m.group(2) or 1)))
    return out


@dataclass(eq=False)
class GroupSpec:
    """A named group with an ordered, named generating set."""

    name: str
    degrees: DegreeSequence
    generators: dict[str, TreeElement]
    flags: dict[str, bool] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for gname, g in self.generators.items():
            if g.degrees != self.degrees:
                raise ValueError(f"generator {gname!r} lives on a different tree")
        self._quotients: dict[int, PermGroup] = {}

    @property
    def generator_names(self) -> list[str]:
        return list(self.generators)

    def identity(self) -> TreeElement:
        for g in self.generators.values():
            if isinstance(g, StateElement):
                return StateElement(g.automaton, g.automaton.identity)
        return identity(self.degrees)

    def element(self, word: str) -> TreeElement:
        out = self.identity()
        for name, k in parse_word(word):
            if name in ("1", "e") and name not in self.generators:
                continue
            if name not in self.generators:
                raise WordError(f"unknown generator {name!r} in {word!r}")
            g = self.generators[name]
            base = g if k >= 0 else g.inverse()
            for _ in range(abs(k)):
                out = compose(out, base)
        return out

    def level_size(self, n: int) -> int:
        return self.degrees.level_size(n)

    def level_quotient(self, n: int, budget: int | None = None) -> PermGroup:
        """The group generated by the level-``n`` truncations of the generators."""
        budget = perm.POINT_BUDGET if budget is None else budget
        size = self.level_size(n)
        if size > budget:
            raise LevelBudgetExceeded(f"level {n} has {size} vertices, budget is {budget}")
        hit = self._quotients.get(n)
        if hit is None:
            gens = [g.truncate(n) for g in self.generators.values()]
            hit = self._quotients[n] = PermGroup(gens, size)
        return hit


@dataclass(eq=False)
class SubgroupSpec:
    """A subgroup of ``parent`` given by generators, optionally closed normally.

    With ``normal=True`` the level-``n`` image is the normal closure of the
    truncated generators inside the level-``n`` quotient of the parent.
    """

    parent: GroupSpec
    generators: list[TreeElement]
    name: str = "H"
    normal: bool = False
    words: list[str] = field(default_factory=list)

    def __post_init__(self):
        for g in self.generators:
            if g.degrees != self.parent.degrees:
                raise ValueError("subgroup generator lives on a different tree")
        self._quotients: dict[int, PermGroup] = {}

    @classmethod
    def from_words(cls, parent: GroupSpec, words: Sequence[str], name: str | None = None,
                   normal: bool = False) -> SubgroupSpec:
        gens = [parent.element(w) for w in words]
        label = name or (("<<%s>>" if normal else "<%s>") % ",".join(words))
        return cls(parent, gens, label, normal, list(words))

    @classmethod
    def whole(cls, parent: GroupSpec) -> SubgroupSpec:
        return cls(parent, list(parent.generators.values()), parent.name, False, parent.generator_names)

    @classmethod
    def trivial(cls, parent: GroupSpec) -> SubgroupSpec:
        return cls(parent, [], "1")

    def level_quotient(self, n: int) -> PermGroup:
        hit = self._quotients.get(n)
        if hit is None:
            big = self.parent.level_quotient(n)
            gens = [g.truncate(n) for g in self.generators]
            if self.normal:
                hit = big.normal_closure(gens)
            else:
                hit = PermGroup(gens, big.degree)
            self._quotients[n] = hit
        return hit


def spec_from_automaton_names(name: str, aut, gens: Sequence[str],
                              flags: Mapping[str, bool] | None = None) -> GroupSpec:
    elems = {g: StateElement(aut, aut.names[g]) for g in gens}
    return GroupSpec(name, DegreeSequence.constant(aut.k), elems, dict(flags or {}))
