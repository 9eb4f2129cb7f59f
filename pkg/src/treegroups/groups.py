"""Built-in groups and the group-spec file format.

Spec files are YAML (JSON is accepted too)::

    name: grigorchuk
    alphabet: 2              # or a per-level list; its last entry repeats
    states:
      a: {perm: "(0 1)", children: [e, e]}
      b: {perm: [0, 1], children: [a, c]}
    generators: [a, b]
    flags: {contracting: true}

``perm`` is either cycle notation or a list of images. ``children`` names
one state per letter; an omitted list means all children are trivial.  The
names ``e`` and ``1`` are the identity state.  Constant alphabets give
automaton elements; per-level alphabets need finitary (acyclic) states.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Sequence

import yaml

from . import perm as P
from .automaton import Automaton, AutomatonError
from .elements import Portrait, StateElement, TreeElement, as_state, planted, rooted
from .group import GroupSpec, SubgroupSpec
from .tree import DegreeSequence, format_vertex, level_vertices


class SpecError(ValueError):
    """Malformed group-spec document; the message starts with the location."""


# -- built-ins --------------------------------------------------------------


def grigorchuk() -> GroupSpec:
    """a = swap, b = (a, c), c = (a, d), d = (1, b) on the binary tree."""
    aut = Automaton.from_states(2, {
        "a": ((1, 0), ("e", "e")),
        "b": ((0, 1), ("a", "c")),
        "c": ((0, 1), ("a", "d")),
        "d": ((0, 1), ("e", "b")),
    }, contracting=True)
    return GroupSpec("grigorchuk", DegreeSequence.constant(2),
                     {g: StateElement(aut, aut.names[g]) for g in "abcd"},
                     {"contracting": True, "level_transitive": True})


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def gupta_sidki(p: int = 3) -> GroupSpec:
    """t = (0 1 ... p-1) at the root, u = (t, t^-1, 1, ..., 1, u)."""
    if p % 2 == 0 or not _is_prime(p):
        raise ValueError(f"Gupta-Sidki groups need an odd prime, got {p}")
    shift = tuple((x + 1) % p for x in range(p))
    back = tuple((x - 1) % p for x in range(p))
    ident = tuple(range(p))
    aut = Automaton.from_states(p, {
        "t": (shift, ()),
        "T": (back, ()),
        "u": (ident, ("t", "T") + ("e",) * (p - 3) + ("u",)),
    }, contracting=True)
    return GroupSpec(f"gupta-sidki:{p}", DegreeSequence.constant(p),
                     {g: StateElement(aut, aut.names[g]) for g in "tu"},
                     {"contracting": True, "level_transitive": True})


def trivial_group(k: int = 2) -> GroupSpec:
    return GroupSpec("trivial", DegreeSequence.constant(k), {})


A5_GENERATORS = {
    "x": P.from_cycles([(0, 1, 2, 3, 4)], 5),
    "y": P.from_cycles([(0, 1, 2)], 5),
}

# proper nontrivial subgroups of A5 on [0, 5), by generators
A5_SUBGROUPS: dict[str, list[P.Perm]] = {
    "A4": [P.from_cycles([(0, 1, 2)], 5), P.from_cycles([(1, 2, 3)], 5)],
    "C5": [P.from_cycles([(0, 1, 2, 3, 4)], 5)],
    "D10": [P.from_cycles([(0, 1, 2, 3, 4)], 5), P.from_cycles([(1, 4), (2, 3)], 5)],
    "S3": [P.from_cycles([(0, 1, 2)], 5), P.from_cycles([(0, 1), (3, 4)], 5)],
    "V4": [P.from_cycles([(0, 1), (2, 3)], 5), P.from_cycles([(0, 2), (1, 3)], 5)],
    "C3": [P.from_cycles([(0, 1, 2)], 5)],
    "C2": [P.from_cycles([(0, 1), (2, 3)], 5)],
}


@dataclass
class WreathTowerSpec:
    """Data of the iterated wreath product of ``depth`` copies of ``(top, [k])``.

    ``top`` names the generating permutations of the group acting at every
    vertex; ``sub`` generates the subgroup ``F`` used for the commensurated
    subgroup.  Elements of the depth-``n`` tower move everything below level
    ``n`` rigidly.
    """

    depth: int
    top: dict[str, P.Perm] = field(default_factory=lambda: dict(A5_GENERATORS))
    sub: list[P.Perm] = field(default_factory=lambda: list(A5_SUBGROUPS["A4"]))
    sub_name: str = "A4"

    @property
    def degree(self) -> int:
        return len(next(iter(self.top.values())))

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("tower depth must be >= 1")
        top = P.PermGroup(self.top.values(), self.degree)
        for g in self.sub:
            if not top.contains(g):
                raise ValueError(f"F generator {P.format_cycles(g)} is not in the top group")


def _tower_generators(depth: int, labels: Mapping[str, P.Perm], k: int) -> dict[str, Portrait]:
    alpha = DegreeSequence.constant(k)
    out: dict[str, Portrait] = {}
    for level in range(depth):
        for v in level_vertices(level, alpha):
            for name, p in labels.items():
                key = name if not v else f"{name}@{format_vertex(v)}"
                out[key] = rooted(alpha, p) if not v else planted(alpha, v, p)
    return out


def wreath_tower(n: int, spec: WreathTowerSpec | None = None) -> GroupSpec:
    """K_n: top-group generators planted at every vertex of levels ``< n``."""
    spec = spec or WreathTowerSpec(n)
    if spec.depth != n:
        spec = WreathTowerSpec(n, spec.top, spec.sub, spec.sub_name)
    k = spec.degree
    if k ** n > P.POINT_BUDGET:
        raise ValueError(f"wreath tower of depth {n} exceeds the point budget")
    gens = _tower_generators(n, spec.top, k)
    return GroupSpec(f"wreath:{n}", DegreeSequence.constant(k), dict(gens),
                     {"level_transitive": True}, {"tower": spec})


def resolve_f(f: str | Sequence[P.Perm]) -> tuple[str, list[P.Perm]]:
    if isinstance(f, str):
        if f not in A5_SUBGROUPS:
            raise ValueError(f"unknown subgroup {f!r} of A5; choose from {', '.join(A5_SUBGROUPS)}")
        return f, list(A5_SUBGROUPS[f])
    return "F", [tuple(p) for p in f]


def wreath_commensurated(n: int, f: str | Sequence[P.Perm] = "A4",
                         parent: GroupSpec | None = None) -> SubgroupSpec:
    """O_n: the iterated wreath product of copies of ``(F, [5])``."""
    name, fgens = resolve_f(f)
    a5 = P.PermGroup(A5_GENERATORS.values(), 5)
    fg = P.PermGroup(fgens, 5)
    if not fg.is_subgroup_of(a5):
        raise ValueError("F must be a subgroup of A5")
    if fg.order() in (1, a5.order()):
        raise ValueError("F must be a proper non-trivial subgroup of A5")
    parent = parent or wreath_tower(n)
    labels = {f"f{i}": p for i, p in enumerate(fgens)}
    gens = _tower_generators(n, labels, 5)
    return SubgroupSpec(parent, list(gens.values()), f"O({name})", False, list(gens))


# -- spec documents ----------------------------------------------------------

_CYCLE = re.compile(r"\(([^()]*)\)")


def _parse_perm(value: Any, k: int, where: str) -> tuple[int, ...]:
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"(\([^()]*\)\s*)*", text):
            raise SpecError(f"{where}: cannot parse cycle notation {value!r}")
        cyc = []
        for m in _CYCLE.finditer(text):
            parts = m.group(1).replace(",", " ").split()
            cyc.append([int(x) for x in parts])
        try:
            if any(x < 0 or x >= k for c in cyc for x in c):
                raise SpecError(f"{where}: digit out of range [0, {k}) in {value!r}")
            if any(len(set(c)) != len(c) for c in cyc):
                raise SpecError(f"{where}: repeated point in a cycle of {value!r}")
            p = P.from_cycles(cyc, k)
        except P.PermError as exc:
            raise SpecError(f"{where}: {exc}") from None
        return p
    if isinstance(value, (list, tuple)):
        if len(value) != k or sorted(value) != list(range(k)):
            raise SpecError(f"{where}: {list(value)} is not a permutation of 0..{k - 1}")
        return tuple(int(x) for x in value)
    raise SpecError(f"{where}: expected cycle string or image list, got {type(value).__name__}")


def _yaml(text: str) -> Any:
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "document"
        raise SpecError(f"{where}: not valid YAML ({getattr(exc, 'problem', None) or exc})") from None


def load_group_spec(document: str | Path | Mapping[str, Any]) -> GroupSpec:
    """Validate a spec document (mapping, YAML/JSON text, or path) into a GroupSpec."""
    if isinstance(document, Path) or (isinstance(document, str) and "\n" not in document
                                      and Path(document).exists()):
        document = _yaml(Path(document).read_text(encoding="utf-8"))
    elif isinstance(document, str):
        document = _yaml(document)
    if not isinstance(document, Mapping):
        raise SpecError("document: expected a mapping")
    unknown = set(document) - {"name", "alphabet", "states", "generators", "flags"}
    if unknown:
        raise SpecError(f"document: unknown fields {sorted(unknown)}")
    name = str(document.get("name", "spec"))
    alphabet = document.get("alphabet")
    if isinstance(alphabet, bool) or alphabet is None:
        raise SpecError("alphabet: required integer >= 2 or list of integers")
    try:
        if isinstance(alphabet, int):
            degrees = DegreeSequence.constant(alphabet)
        elif isinstance(alphabet, list) and all(isinstance(a, int) for a in alphabet):
            degrees = DegreeSequence.from_list(alphabet)
        else:
            raise SpecError("alphabet: expected integer or list of integers")
    except ValueError as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"alphabet: {exc}") from None
    states = document.get("states") or {}
    if not isinstance(states, Mapping):
        raise SpecError("states: expected a mapping")
    gens = document.get("generators") or []
    if not isinstance(gens, list):
        raise SpecError("generators: expected a list")
    flags = document.get("flags") or {}
    if not isinstance(flags, Mapping):
        raise SpecError("flags: expected a mapping")
    flags = {str(k): bool(v) for k, v in flags.items()}

    raw: dict[str, tuple[Any, list[str]]] = {}
    for sname, body in states.items():
        sname = str(sname)
        where = f"states.{sname}"
        if not isinstance(body, Mapping):
            raise SpecError(f"{where}: expected a mapping with perm/children")
        extra = set(body) - {"perm", "children"}
        if extra:
            raise SpecError(f"{where}: unknown fields {sorted(extra)}")
        children = body.get("children") or []
        if not isinstance(children, list):
            raise SpecError(f"{where}.children: expected a list")
        children = [str(c) for c in children]
        for i, c in enumerate(children):
            if c not in states and c not in ("e", "1"):
                raise SpecError(f"{where}.children[{i}]: unknown state {c!r}")
        raw[sname] = (body.get("perm", "()"), children)
    for i, g in enumerate(gens):
        if str(g) not in raw and str(g) not in ("e", "1"):
            raise SpecError(f"generators[{i}]: unknown state {g!r}")
    gens = [str(g) for g in gens]

    if degrees.is_constant:
        k = degrees.tail
        parsed = {}
        for sname, (pv, children) in raw.items():
            where = f"states.{sname}"
            if children and len(children) != k:
                raise SpecError(f"{where}.children: expected {k} entries, got {len(children)}")
            parsed[sname] = (_parse_perm(pv, k, f"{where}.perm"), children)
        try:
            aut = Automaton.from_states(k, parsed, contracting=flags.get("contracting", False))
        except AutomatonError as exc:
            raise SpecError(f"states: {exc}") from None
        elems = {g: StateElement(aut, aut.names[g]) for g in gens}
        return GroupSpec(name, degrees, elems, flags)

    # per-level alphabet: finitary states only
    cache: dict[tuple[str, int], Portrait] = {}

    def build(sname: str, level: int, trail: tuple[str, ...]) -> Portrait:
        if sname in ("e", "1") and sname not in raw:
            sub = degrees.shift(level)
            return Portrait(sub, tuple(range(sub[0])))
        if sname in trail:
            raise SpecError(f"states.{sname}: cycle through {' -> '.join(trail + (sname,))}; "
                            "per-level alphabets allow finitary states only")
        key = (sname, level)
        if key in cache:
            return cache[key]
        pv, children = raw[sname]
        k = degrees[level]
        where = f"states.{sname}"
        if children and len(children) != k:
            raise SpecError(f"{where}.children: state used at level {level} needs {k} entries, "
                            f"got {len(children)}")
        perm = _parse_perm(pv, k, f"{where}.perm")
        kids = tuple(build(c, level + 1, trail + (sname,)) for c in children)
        out = Portrait(degrees.shift(level), perm, kids)
        cache[key] = out
        return out

    elems = {g: build(g, 0, ()) for g in gens}
    return GroupSpec(name, degrees, elems, flags)


def _perm_text(p: Sequence[int]) -> str:
    return P.format_cycles(tuple(p))


def dump_group_spec(spec: GroupSpec) -> dict[str, Any]:
    """Document for ``spec``; :func:`load_group_spec` reads it back action-equal."""
    doc: dict[str, Any] = {"name": spec.name}
    gens = spec.generators
    states: dict[str, dict[str, Any]] = {}
    if spec.degrees.is_constant:
        k = spec.degrees.tail
        aut = None
        for g in gens.values():
            if isinstance(g, StateElement):
                aut = g.automaton
                break
        if aut is None:
            aut = Automaton(k)
        ids = {gname: as_state(g, aut).state for gname, g in gens.items()}
        names: dict[int, str] = {aut.identity: "e"}
        for gname, sid in ids.items():
            names.setdefault(sid, gname)
        order: list[int] = []
        seen = set()
        for sid in ids.values():
            for s in aut.reach(sid):
                if s not in seen:
                    seen.add(s)
                    order.append(s)
        for s in order:
            names.setdefault(s, f"s{len(names)}")
        for s in order:
            if s == aut.identity:
                continue
            kids = [names[c] for c in aut.children(s)]
            body: dict[str, Any] = {"perm": _perm_text(aut.perm(s))}
            if any(c != "e" for c in kids):
                body["children"] = kids
            states[names[s]] = body
        doc["alphabet"] = k
        # a generator equal to another (or trivial) gets an alias state
        gen_names = []
        for gname, sid in ids.items():
            if names[sid] != gname:
                states[gname] = {"perm": _perm_text(aut.perm(sid)),
                                 "children": [names[c] for c in aut.children(sid)]}
            gen_names.append(gname)
        doc["states"] = states
        doc["generators"] = gen_names
    else:
        doc["alphabet"] = spec.degrees.to_list()
        index: dict[Portrait, str] = {}

        def visit(p: Portrait) -> str:
            if p.is_identity_portrait:
                return "e"
            if p in index:
                return index[p]
            label = index[p] = f"s{len(index)}"
            body: dict[str, Any] = {"perm": _perm_text(p.root)}
            if p.children:
                body["children"] = [visit(c) for c in p.children]
            states[label] = body
            return label

        gen_names = []
        for gname, g in gens.items():
            if not isinstance(g, Portrait):
                raise SpecError("non-constant alphabets only serialise finitary generators")
            label = visit(g)
            body = dict(states[label]) if label != "e" else {"perm": "()"}
            states[gname] = body
            gen_names.append(gname)
        doc["states"] = states
        doc["generators"] = gen_names
    if spec.flags:
        doc["flags"] = dict(spec.flags)
    return doc


def dumps_group_spec(spec: GroupSpec) -> str:
    return yaml.safe_dump(dump_group_spec(spec), sort_keys=False, default_flow_style=None)


SHIPPED = ("grigorchuk", "gupta_sidki_3", "wreath_1", "wreath_2", "wreath_3")


def shipped_spec_text(name: str) -> str:
    return resources.files("treegroups.data").joinpath(f"{name}.spec").read_text(encoding="utf-8")


def load_shipped(name: str) -> GroupSpec:
    return load_group_spec(shipped_spec_text(name))


# -- name resolution used by the CLI ------------------------------------------


def resolve_group(text: str) -> GroupSpec:
    """``grigorchuk``, ``gupta-sidki[:p]``, ``wreath:n``, ``trivial``, ``file:PATH``."""
    text = text.strip()
    if text.startswith("file:"):
        return load_group_spec(Path(text[5:]))
    head, _, arg = text.partition(":")
    if head == "grigorchuk" and not arg:
        return grigorchuk()
    if head in ("gupta-sidki", "gupta_sidki"):
        return gupta_sidki(int(arg) if arg else 3)
    if head == "wreath":
        n, _, f = arg.partition(":")
        spec = WreathTowerSpec(int(n or 1))
        if f:
            fname, fg = resolve_f(f)
            spec = WreathTowerSpec(int(n or 1), sub=fg, sub_name=fname)
        return wreath_tower(spec.depth, spec)
    if head == "trivial":
        return trivial_group(int(arg) if arg else 2)
    if text in SHIPPED:
        return load_shipped(text)
    raise KeyError(f"unknown group {text!r}")


def resolve_subgroup(group: GroupSpec, text: str) -> SubgroupSpec:
    """``group``, ``trivial``, ``O[:F]``, ``gen:w1,w2``, ``normal:w1,w2``, ``file:PATH``."""
    text = text.strip()
    if text in ("group", "whole", "G"):
        return SubgroupSpec.whole(group)
    if text in ("trivial", "1"):
        return SubgroupSpec.trivial(group)
    head, _, arg = text.partition(":")
    if head == "O":
        tower = group.meta.get("tower")
        if tower is None:
            raise KeyError("subgroup O is defined for wreath groups only")
        if arg:
            return wreath_commensurated(tower.depth, arg, parent=group)
        return wreath_commensurated(tower.depth, tower.sub, parent=group) if tower.sub_name == "F" \
            else wreath_commensurated(tower.depth, tower.sub_name, parent=group)
    if head in ("gen", "normal"):
        words = [w for w in arg.split(",") if w.strip()]
        return SubgroupSpec.from_words(group, words, normal=head == "normal")
    if head == "file":
        doc = _yaml(Path(arg).read_text(encoding="utf-8"))
        if not isinstance(doc, Mapping) or not isinstance(doc.get("generators", []), list):
            raise SpecError("subgroup document: expected a mapping with a generators list")
        return SubgroupSpec.from_words(group, [str(w) for w in doc.get("generators", [])],
                                       name=doc.get("name"), normal=bool(doc.get("normal", False)))
    raise KeyError(f"unknown subgroup {text!r}")
