"""Command-line front end.

    python -m treegroups info --group grigorchuk --depth 3
    python -m treegroups commensurate --group wreath:2 --subgroup O --elements x --format json

Exit codes: 0 success (overflow-marked reports included), 2 usage or parse
error, 3 precondition violation (the witness goes to stderr and the report).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Any, Sequence

from . import __version__
from . import analysis as A
from . import perm as P
from .group import GroupSpec, LevelBudgetExceeded, SubgroupSpec, WordError
from .groups import SpecError, resolve_group, resolve_subgroup

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class Precondition(Exception):
    def __init__(self, message: str, witness: str):
        super().__init__(message)
        self.witness = witness


class Report:
    """Machine-readable report; serialises with sorted keys."""

    def __init__(self, command: str, group: GroupSpec, params: dict[str, Any]):
        self.command = command
        self.group = group.name
        self.params = params
        self.tables: list[dict[str, Any]] = []
        self.flags: dict[str, Any] = {}
        self.result: dict[str, Any] = {}
        self.truncated = False

    def table(self, label: str, rows: list[dict[str, Any]], flags: dict[str, Any] | None = None):
        self.tables.append({"label": label, "rows": rows, "flags": flags or {}})

    def index_table(self, t: A.IndexTable, timings: bool, **tags):
        d = t.to_dict(timings)
        d.update(tags)
        self.tables.append(d)

    def to_dict(self) -> dict[str, Any]:
        return {
            "tool": "treegroups",
            "version": __version__,
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "group": self.group,
            "params": self.params,
            "tables": self.tables,
            "flags": dict(self.flags, truncated=self.truncated),
            "result": self.result,
        }


# -- rendering ---------------------------------------------------------------


def _cell(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    if isinstance(v, dict):
        return " ".join(f"{k}={_cell(x)}" for k, x in sorted(v.items()))
    return str(v)


def _columns(rows: list[dict[str, Any]]) -> list[str]:
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def render_text(doc: dict[str, Any]) -> str:
    out = io.StringIO()
    out.write(f"{doc['command']}  group={doc['group']}  treegroups {doc['version']}\n")
    params = ", ".join(f"{k}={_cell(v)}" for k, v in sorted(doc["params"].items()))
    out.write(f"params: {params}\n")
    for t in doc["tables"]:
        out.write(f"\n{t['label']}\n")
        cols = _columns(t["rows"])
        body = [[_cell(r.get(c)) for c in cols] for r in t["rows"]]
        widths = [max([len(c)] + [len(row[i]) for row in body]) for i, c in enumerate(cols)]
        out.write("  ".join(c.rjust(w) for c, w in zip(cols, widths)) + "\n")
        for row in body:
            out.write("  ".join(x.rjust(w) for x, w in zip(row, widths)) + "\n")
        if t.get("flags"):
            out.write("flags: " + ", ".join(f"{k}={_cell(v)}" for k, v in sorted(t["flags"].items())) + "\n")
    if doc["result"]:
        out.write("\n")
        for k, v in sorted(doc["result"].items()):
            out.write(f"{k}: {_cell(v)}\n")
    flags = {k: v for k, v in doc["flags"].items() if v}
    if flags:
        out.write("flags: " + ", ".join(f"{k}={_cell(v)}" for k, v in sorted(flags.items())) + "\n")
    return out.getvalue()


def render_csv(doc: dict[str, Any]) -> str:
    out = io.StringIO()
    for i, t in enumerate(doc["tables"]):
        if i:
            out.write("\n")
        cols = _columns(t["rows"])
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["table"] + cols)
        for r in t["rows"]:
            w.writerow([t["label"]] + ["" if r.get(c) is None else r.get(c) for c in cols])
    if doc["result"]:
        if doc["tables"]:
            out.write("\n")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in sorted(doc["result"].items()):
            w.writerow([k, json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v])
    return out.getvalue()


def render(doc: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        return render_csv(doc)
    return render_text(doc)


# -- commands -----------------------------------------------------------------


def _subgroup(args, group: GroupSpec) -> SubgroupSpec:
    if not args.subgroup:
        raise UsageError("--subgroup is required")
    return resolve_subgroup(group, args.subgroup)


def cmd_info(args, group: GroupSpec) -> Report:
    rep = Report("info", group, {"depth": args.depth})
    rows = []
    for n in range(1, args.depth + 1):
        t0 = time.perf_counter()
        try:
            q = group.level_quotient(n)
        except LevelBudgetExceeded:
            rep.truncated = True
            break
        row = {"level": n, "vertices": group.level_size(n), "order": q.order(),
               "transitive": len(q.orbit(0)) == group.level_size(n)}
        if args.timings:
            row["seconds"] = round(time.perf_counter() - t0, 6)
        rows.append(row)
    rep.table("level quotients", rows)
    rep.result = {"generators": group.generator_names, "flags": dict(sorted(group.flags.items()))}
    return rep


def _usable_depth(group: GroupSpec, depth: int) -> tuple[int, bool]:
    n = 0
    while n < depth and group.level_size(n + 1) <= P.POINT_BUDGET:
        n += 1
    return n, n < depth


def cmd_branch_check(args, group: GroupSpec) -> Report:
    depth, truncated = _usable_depth(group, args.depth)
    rep = Report("branch-check", group, {"depth": args.depth, "rist_level": args.rist_level})
    rep.truncated = truncated
    trans = A.check_level_transitive(group, depth)
    rep.table("level transitivity", [{"level": i + 1, "transitive": t} for i, t in enumerate(trans)])
    levels_k = [args.rist_level] if args.rist_level is not None else list(range(1, min(2, depth - 1) + 1))
    tables, nontrivial = [], []
    if all(trans):
        for k in levels_k:
            if k > depth:
                continue
            t = A.rist_index_table(group, k, range(k, depth + 1), jobs=args.jobs)
            tables.append(t)
            rep.index_table(t, args.timings, rist_level=k, semantics="quotient-rist lower bound")
            nontrivial.append(A.rist_level_report(group, k, depth).product_order > 1)
    verdict = A.branch_verdict(trans, tables, nontrivial)
    rep.result = {"verdict": verdict}
    rep.flags["monotone_nondecreasing"] = all(t.monotone_nondecreasing for t in tables)
    return rep


def _elements(args, group: GroupSpec):
    if not args.elements:
        raise UsageError("--elements is required")
    words = [w.strip() for w in args.elements.split(",") if w.strip()]
    if not words:
        raise UsageError("--elements is empty")
    return words, [group.element(w) for w in words]


def cmd_commensurate(args, group: GroupSpec) -> Report:
    sub = _subgroup(args, group)
    words, elems = _elements(args, group)
    depth, truncated = _usable_depth(group, args.depth)
    rep = Report("commensurate", group, {"depth": args.depth, "subgroup": sub.name,
                                         "elements": words, "cap": args.cap})
    rep.truncated = truncated
    try:
        tables = A.commensuration_table(group, sub, elems, range(1, depth + 1), cap=args.cap,
                                        jobs=args.jobs, labels=words)
    except A.NotInGroup as exc:
        raise Precondition("element outside the group", str(exc)) from exc
    for w, t in zip(words, tables):
        rep.index_table(t, args.timings, element=w)
    rep.flags["overflow"] = any(not t.complete for t in tables)
    rep.flags["monotone_nondecreasing"] = all(t.monotone_nondecreasing for t in tables)
    return rep


def cmd_schlichting(args, group: GroupSpec) -> Report:
    sub = _subgroup(args, group)
    n = args.level if args.level is not None else args.depth
    rep = Report("schlichting", group, {"level": n, "subgroup": sub.name, "cap": args.cap})
    t0 = time.perf_counter()
    s = A.schlichting_approximation(group, sub, n, cap=args.cap)
    rep.result = s.to_dict()
    if args.timings:
        rep.result["seconds"] = round(time.perf_counter() - t0, 6)
    rep.flags["overflow"] = s.overflow
    return rep


def cmd_ji(args, group: GroupSpec) -> Report:
    k = args.rist_level if args.rist_level is not None else 1
    depth, truncated = _usable_depth(group, args.depth)
    rep = Report("ji", group, {"depth": args.depth, "rist_level": k})
    rep.truncated = truncated
    t = A.ji_criterion_table(group, k, range(max(k, 1), depth + 1), jobs=args.jobs)
    rep.index_table(t, args.timings, rist_level=k, semantics="quotient-rist")
    rep.flags["monotone_nondecreasing"] = t.monotone_nondecreasing
    return rep


def cmd_containment(args, group: GroupSpec) -> Report:
    sub = _subgroup(args, group)
    m_max = args.level if args.level is not None else min(3, args.depth)
    rep = Report("containment", group, {"depth": args.depth, "m_max": m_max, "subgroup": sub.name})
    try:
        cert = A.containment_level(group, sub, m_max, depth=args.depth)
    except A.NotNormal as exc:
        raise Precondition("subgroup is not normal", exc.witness) from exc
    if cert is None:
        rep.result = {"m": None, "note": "no level found within budget; not a refutation"}
    else:
        rep.result = cert.to_dict()
        rep.result["rechecked"] = A.verify_certificate(group, sub, cert)
    return rep


COMMANDS = {
    "info": cmd_info,
    "branch-check": cmd_branch_check,
    "commensurate": cmd_commensurate,
    "schlichting": cmd_schlichting,
    "ji": cmd_ji,
    "containment": cmd_containment,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", required=True, help="name, wreath:n[:F], gupta-sidki:p, trivial, or file:PATH")
    common.add_argument("--subgroup", help="group, trivial, O[:F], gen:w,..., normal:w,..., or file:PATH")
    common.add_argument("--elements", help="comma-separated words such as a*b^-1")
    common.add_argument("--depth", type=int, default=3)
    common.add_argument("--level", type=int, help="level for schlichting; m_max for containment")
    common.add_argument("--rist-level", type=int, dest="rist_level")
    common.add_argument("--cap", type=int, default=P.COSET_CAP)
    common.add_argument("--seed", type=int, default=P.SEED)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--timings", action="store_true", help="add wall-clock seconds (not byte-stable)")
    ap = argparse.ArgumentParser(prog="treegroups", description="Diagnostics for groups acting on rooted trees")
    ap.add_argument("--version", action="version", version=f"treegroups {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.depth < 0 or args.cap < 1 or args.jobs < 1:
        print("error: depth must be >= 0, cap and jobs >= 1", file=sys.stderr)
        return 2
    P.set_seed(args.seed)
    try:
        group = resolve_group(args.group)
        rep = COMMANDS[args.command](args, group)
    except (UsageError, KeyError, WordError, SpecError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2
    except Precondition as exc:
        print(f"error: {exc}: {exc.witness}", file=sys.stderr)
        doc = {"tool": "treegroups", "version": __version__, "schema": SCHEMA_VERSION,
               "command": args.command, "group": group.name, "params": {}, "tables": [],
               "flags": {"precondition_failed": True},
               "result": {"error": str(exc), "witness": exc.witness}}
        sys.stdout.write(render(doc, args.format))
        return 3
    except LevelBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(rep.to_dict(), args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
