"""Text format for graphs with instance calls ("SGN").

Extends the degree-0 "SG0" format with an ``instances { ... }`` header
declaring which library objects are plugged in, edge labels of the form
``NAME.op(j1,...,jk)`` invoking an instance's operation on outer tapes,
and an optional ``operation { ... }`` footer fixing the tape partition
and the start/finish states so the file denotes an operation rather
than a bare graph.

Example::

    hardware { a: x; d': δ; }
    instances { C is obj0[d']; }
    state s; state f;
    edge s -> f { C.inc2() }
    operation { ext a; val d'; int; start s; finish f; }
"""

from __future__ import annotations

import re as _regex
from dataclasses import dataclass
from typing import Callable, Optional

from sgraph.graph0 import Edge, parse_action_block, parse_hardware
from sgraph.star import ActionN, InstanceDef, OperationDef, StarGraph


_HW_RE = _regex.compile(r"hardware\s*\{([^}]*)\}", _regex.S)
_INST_BLOCK_RE = _regex.compile(r"instances\s*\{([^}]*)\}", _regex.S)
_INST_RE = _regex.compile(r"(\S+)\s+is\s+(.+?)\s*\[([^\]]*)\]\s*$")
_STATE_RE = _regex.compile(r"\bstate\s+([^\s;]+)\s*;")
_EDGE_RE = _regex.compile(r"\bedge\s+(\S+)\s*->\s*(\S+)\s*\{([^}]*)\}", _regex.S)
_OP_RE = _regex.compile(r"\boperation\s*\{([^}]*)\}", _regex.S)
_CALL_RE = _regex.compile(r"^\s*(\S+?)\.(\w+)\(([^)]*)\)\s*$")


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


@dataclass
class SgnFile:
    """A parsed graph file, optionally denoting an operation."""

    graph: StarGraph
    op_spec: Optional[dict] = None  # ext/val/int/start/finish

    def operation(self, name: str = "op") -> OperationDef:
        if self.op_spec is None:
            raise ValueError("file has no operation block")
        s = self.op_spec
        return OperationDef(
            name,
            self.graph,
            ext=tuple(s["ext"]),
            val=tuple(s["val"]),
            int_=tuple(s["int"]),
            start=s["start"],
            finish=s["finish"],
        )


def parse_sgn(text: str, resolver: Optional[Callable[[str], object]] = None) -> SgnFile:
    """Parse the SGN format; library objects resolve by canonical name."""
    if resolver is None:
        from sgraph.gadgets import lookup_object

        def resolver(name: str):
            return lookup_object(name)

    text = _strip_comments(text)
    m = _HW_RE.search(text)
    if not m:
        raise ValueError("missing hardware block")
    hardware = parse_hardware(m.group(1))

    instances: dict[str, InstanceDef] = {}
    mb = _INST_BLOCK_RE.search(text)
    if mb:
        for decl in mb.group(1).split(";"):
            decl = decl.strip()
            if not decl:
                continue
            mi = _INST_RE.match(decl)
            if not mi:
                raise ValueError(f"cannot parse instance declaration {decl!r}")
            iname, oname, args = mi.group(1), mi.group(2), mi.group(3)
            std = resolver(oname)
            obj = getattr(std, "obj", std)
            outer = [a.strip() for a in args.split(",") if a.strip()]
            vt = obj.value_tapes
            if len(outer) != len(vt):
                raise ValueError(
                    f"instance {iname}: {oname} has {len(vt)} value tapes, got {len(outer)}"
                )
            instances[iname] = InstanceDef.make(iname, obj, dict(zip(vt, outer)))

    states = _STATE_RE.findall(text)
    if not states:
        raise ValueError("no states declared")

    edges = []
    for k, (tail, head, block) in enumerate(_EDGE_RE.findall(text)):
        mc = _CALL_RE.match(block)
        if mc:
            iname, opname, args = mc.group(1), mc.group(2), mc.group(3)
            if iname not in instances:
                raise ValueError(f"edge calls undeclared instance {iname!r}")
            inst = instances[iname]
            op = inst.obj.operations[opname]
            outer = [a.strip() for a in args.split(",") if a.strip()]
            if len(outer) != len(op.ext):
                raise ValueError(
                    f"{iname}.{opname} takes {len(op.ext)} arguments, got {len(outer)}"
                )
            label = ActionN.make(inst, opname, dict(zip(op.ext, outer)))
        else:
            label = parse_action_block(block)
        edges.append(Edge(f"e{k + 1}", tail, head, label))

    graph = StarGraph(hardware, states, edges, instances=list(instances.values()))

    op_spec = None
    mo = _OP_RE.search(text)
    if mo:
        spec = {"ext": [], "val": [], "int": [], "start": None, "finish": None}
        for item in mo.group(1).split(";"):
            item = item.strip()
            if not item:
                continue
            key, _, rest = item.partition(" ")
            if key in ("ext", "val", "int"):
                spec[key] = [t.strip() for t in rest.split(",") if t.strip()]
            elif key in ("start", "finish"):
                spec[key] = rest.strip()
            else:
                raise ValueError(f"unknown operation item {item!r}")
        if spec["start"] is None or spec["finish"] is None:
            raise ValueError("operation block must set start and finish")
        op_spec = spec
    return SgnFile(graph, op_spec)


def dump_sgn(graph: StarGraph, op: Optional[OperationDef] = None) -> str:
    lines = ["hardware {"]
    for t in graph.hardware.tapes:
        lines.append(f"  {t}: {','.join(sorted(graph.hardware.alphabets[t]))};")
    lines.append("}")
    if graph.instances:
        lines.append("instances {")
        for inst in graph.instances:
            args = ",".join(inst.mapping[v] for v in inst.obj.value_tapes)
            lines.append(f"  {inst.name} is {inst.obj.name}[{args}];")
        lines.append("}")
    for s in graph.states:
        lines.append(f"state {s};")
    for e in graph.edges:
        if e.eid.endswith("~"):
            continue
        label = e.label
        if isinstance(label, ActionN):
            ext_order = label.op.ext
            outer = dict(label.ext_map)
            args = ",".join(outer[t] for t in ext_order)
            body = f"{label.instance.name}.{label.operation}({args})"
        else:
            body = " ".join(f"{f};" for f in label.fragment_texts())
        lines.append(f"edge {e.tail} -> {e.head} {{ {body} }}")
    if op is not None:
        lines.append(
            "operation { "
            + f"ext {','.join(op.ext)}; val {','.join(op.val)}; int {','.join(op.int)}; "
            + f"start {op.start}; finish {op.finish}; "
            + "}"
        )
    return "\n".join(lines) + "\n"
