"""JSON documents for every representation.

Index fields inside files are 1-based (TT virtual indices, TTN ``i, j, k``);
the in-memory structures are 0-based. Bits stay 0/1.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .circuit import INPUT, PLUS, TIMES, Circuit, Gate
from .dense import DenseFunction
from .errors import InvariantViolation, ParseError
from .evdd import Edge, Evdd
from .semiring import Semiring, get_semiring
from .tt import TensorTrain
from .ttn import TreeTensorNetwork
from .vtree import Vtree

KINDS = ("tt", "ttn", "evdd", "circuit", "dense")


@dataclass(frozen=True)
class Document:
    kind: str
    semiring: Semiring
    body: Any


def kind_of(rep) -> str:
    for cls, kind in ((TensorTrain, "tt"), (TreeTensorNetwork, "ttn"), (Evdd, "evdd"),
                      (Circuit, "circuit"), (DenseFunction, "dense")):
        if isinstance(rep, cls):
            return kind
    raise TypeError(f"not a representation: {type(rep).__name__}")


def document(rep) -> Document:
    return Document(kind_of(rep), rep.semiring, rep)


# field access with path diagnostics


def _get(obj, key, path, types=None, default=...):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", field=path or "<root>")
    if key not in obj:
        if default is not ...:
            return default
        raise ParseError(f"missing field {key!r}", field=_join(path, key))
    value = obj[key]
    if types is not None and not _is(value, types):
        raise ParseError(
            f"field {key!r} has type {type(value).__name__}", field=_join(path, key))
    return value


def _is(value, types):
    if isinstance(value, bool) and bool not in (types if isinstance(types, tuple) else (types,)):
        return False
    return isinstance(value, types)


def _join(path, key):
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _int(value, path):
    if not _is(value, int):
        raise ParseError(f"expected an integer, got {value!r}", field=path)
    return value


def _list(value, path, length=None):
    if not isinstance(value, list):
        raise ParseError(f"expected a list, got {type(value).__name__}", field=path)
    if length is not None and len(value) != length:
        raise ParseError(f"expected {length} items, got {len(value)}", field=path)
    return value


def _bit(value, path):
    if value not in (0, 1) or isinstance(value, bool):
        raise ParseError(f"expected bit 0|1, got {value!r}", field=path)
    return value


# vtrees


def vtree_to_json(vt: Vtree, extra=None) -> dict:
    return vt.to_json(extra=extra)


def vtree_from_json(obj, path="vtree") -> tuple[Vtree, dict[int, dict]]:
    """Parse a recursive node dict; also returns the raw node dicts by id."""
    children, labels, raw = {}, {}, {}

    def walk(node, p):
        nid = _int(_get(node, "id", p), _join(p, "id"))
        if nid in raw:
            raise InvariantViolation("vtree node ids are unique", f"id {nid}", where=p)
        raw[nid] = node
        has_var = "var" in node
        has_kids = "left" in node or "right" in node
        if has_var == has_kids:
            raise ParseError("a node has either 'var' or 'left'/'right'", field=p)
        if has_var:
            labels[nid] = _get(node, "var", p, str)
        else:
            left = walk(_get(node, "left", p, dict), _join(p, "left"))
            right = walk(_get(node, "right", p, dict), _join(p, "right"))
            children[nid] = (left, right)
        return nid

    root = walk(obj, path)
    return Vtree(root, children, labels), raw


# per-kind codecs


def _tt_to_json(tt: TensorTrain) -> dict:
    K = tt.semiring
    return {
        "kind": "tt",
        "semiring": K.name,
        "n": tt.n,
        "bond": list(tt.bond),
        "cores": [[[s + 1, t + 1, b, K.to_json(w)] for (s, t, b), w in sorted(core.items())]
                  for core in tt.cores],
    }


def _tt_from_json(obj, K: Semiring) -> TensorTrain:
    n = _int(_get(obj, "n", ""), "n")
    bond = [_int(c, f"bond[{i}]") for i, c in enumerate(_list(_get(obj, "bond", ""), "bond"))]
    raw_cores = _list(_get(obj, "cores", ""), "cores", length=n)
    if len(bond) != n + 1:
        raise InvariantViolation("len(bond) = n+1", f"{len(bond)} bond entries for n={n}",
                                 where="bond")
    cores = []
    for r, core in enumerate(raw_cores):
        entries = {}
        for e, item in enumerate(_list(core, f"cores[{r}]")):
            p = f"cores[{r}][{e}]"
            s, t, b, w = _list(item, p, length=4)
            key = (_int(s, p + "[0]") - 1, _int(t, p + "[1]") - 1, _bit(b, p + "[2]"))
            if key in entries:
                raise InvariantViolation("core entries are listed once", str(item), where=p)
            entries[key] = K.from_json(w, field=p + "[3]")
        cores.append(entries)
    return TensorTrain(K, bond, cores)


def _ttn_to_json(ttn: TreeTensorNetwork) -> dict:
    K = ttn.semiring
    t = ttn.tree
    tensors = {}
    for v in t.nodes:
        rows = []
        for key, w in sorted(ttn.tensors[v].items()):
            if t.is_leaf(v):
                rows.append([key[0], key[1] + 1, K.to_json(w)])
            else:
                rows.append([key[0] + 1, key[1] + 1, key[2] + 1, K.to_json(w)])
        tensors[str(v)] = rows
    return {
        "kind": "ttn",
        "semiring": K.name,
        "tree": t.to_json(extra=lambda v: {"d": ttn.d[v]}),
        "tensors": tensors,
    }


def _ttn_from_json(obj, K: Semiring) -> TreeTensorNetwork:
    tree, raw = vtree_from_json(_get(obj, "tree", "", dict), "tree")
    d = {v: _int(_get(node, "d", f"tree<{v}>"), f"tree<{v}>.d") for v, node in raw.items()}
    tensors_raw = _get(obj, "tensors", "", dict)
    tensors = {}
    for key, rows in tensors_raw.items():
        p = f"tensors.{key}"
        try:
            v = int(key)
        except ValueError:
            raise ParseError(f"tensor key {key!r} is not a node id", field=p) from None
        if v not in raw:
            raise InvariantViolation("tensors belong to tree nodes", f"node {v}", where=p)
        leaf = tree.is_leaf(v)
        entries = {}
        for e, item in enumerate(_list(rows, p)):
            q = f"{p}[{e}]"
            if leaf:
                b, k, w = _list(item, q, length=3)
                idx = (_bit(b, q + "[0]"), _int(k, q + "[1]") - 1)
            else:
                i, j, k, w = _list(item, q, length=4)
                idx = (_int(i, q + "[0]") - 1, _int(j, q + "[1]") - 1, _int(k, q + "[2]") - 1)
            if idx in entries:
                raise InvariantViolation("tensor entries are listed once", str(item), where=q)
            entries[idx] = K.from_json(w, field=q + f"[{len(item) - 1}]")
        tensors[v] = entries
    return TreeTensorNetwork(K, tree, d, tensors)


def _evdd_to_json(g: Evdd) -> dict:
    K = g.semiring
    nodes = []
    for v in sorted(g.labels):
        x = g.labels[v]
        nodes.append({"id": v, "sink": True} if x is None else {"id": v, "var": x})
    return {
        "kind": "evdd",
        "semiring": K.name,
        "vars": list(g.var_order),
        "nodes": nodes,
        "source": g.source,
        "sink": g.sink,
        "edges": [{"from": e.src, "to": e.dst, "bit": e.bit, "weight": K.to_json(e.weight)}
                  for e in g.edges],
    }


def _evdd_from_json(obj, K: Semiring) -> Evdd:
    var_order = _get(obj, "vars", "", list)
    for i, x in enumerate(var_order):
        if not isinstance(x, str):
            raise ParseError("variable names are strings", field=f"vars[{i}]")
    labels = {}
    for i, node in enumerate(_list(_get(obj, "nodes", ""), "nodes")):
        p = f"nodes[{i}]"
        nid = _int(_get(node, "id", p), p + ".id")
        if nid in labels:
            raise InvariantViolation("node ids are unique", f"id {nid}", where=p)
        if _get(node, "sink", p, bool, default=False):
            labels[nid] = None
        else:
            labels[nid] = _get(node, "var", p, str)
    edges = []
    for i, e in enumerate(_list(_get(obj, "edges", ""), "edges")):
        p = f"edges[{i}]"
        edges.append(Edge(_int(_get(e, "from", p), p + ".from"),
                          _int(_get(e, "to", p), p + ".to"),
                          _bit(_get(e, "bit", p), p + ".bit"),
                          K.from_json(_get(e, "weight", p), field=p + ".weight")))
    return Evdd(K, var_order, labels, _int(_get(obj, "source", ""), "source"),
                _int(_get(obj, "sink", ""), "sink"), edges)


def _circuit_to_json(c: Circuit) -> dict:
    K = c.semiring
    gates = []
    for gid in sorted(c.gates):
        g = c.gates[gid]
        if g.kind == INPUT:
            item = {"id": gid, "type": INPUT, "var": g.var, "value": g.value}
        elif g.kind == TIMES:
            item = {"id": gid, "type": TIMES, "children": list(g.children)}
        else:
            item = {"id": gid, "type": PLUS,
                    "children": [{"gate": ch, "weight": K.to_json(w)} for ch, w in g.terms]}
        if c.phi and gid in c.phi and g.kind != INPUT:
            item["vnode"] = c.phi[gid]
        gates.append(item)
    out = {"kind": "circuit", "semiring": K.name}
    if c.vtree is not None:
        out["vtree"] = c.vtree.to_json()
    out["gates"] = gates
    out["outputs"] = list(c.outputs)
    return out


def _circuit_from_json(obj, K: Semiring) -> Circuit:
    vtree = None
    if "vtree" in obj and obj["vtree"] is not None:
        vtree, _ = vtree_from_json(_get(obj, "vtree", "", dict), "vtree")
    gates, phi = [], {}
    for i, item in enumerate(_list(_get(obj, "gates", ""), "gates")):
        p = f"gates[{i}]"
        gid = _int(_get(item, "id", p), p + ".id")
        kind = _get(item, "type", p, str)
        if kind == INPUT:
            gates.append(Gate.input(gid, _get(item, "var", p, str),
                                    _bit(_get(item, "value", p), p + ".value")))
        elif kind == TIMES:
            kids = _list(_get(item, "children", p), p + ".children")
            gates.append(Gate.times(gid, [_int(ch, f"{p}.children[{j}]")
                                          for j, ch in enumerate(kids)]))
        elif kind == PLUS:
            terms = []
            for j, ch in enumerate(_list(_get(item, "children", p), p + ".children")):
                q = f"{p}.children[{j}]"
                terms.append((_int(_get(ch, "gate", q), q + ".gate"),
                              K.from_json(_get(ch, "weight", q), field=q + ".weight")))
            gates.append(Gate.plus(gid, terms))
        else:
            raise ParseError(f"unknown gate type {kind!r}", field=p + ".type")
        if "vnode" in item:
            phi[gid] = _int(item["vnode"], p + ".vnode")
    outputs = [_int(o, f"outputs[{i}]")
               for i, o in enumerate(_list(_get(obj, "outputs", ""), "outputs"))]
    return Circuit(K, gates, outputs, vtree, phi or None)


def _dense_from_json(obj, K: Semiring) -> DenseFunction:
    n = _int(_get(obj, "n", ""), "n")
    values = _list(_get(obj, "values", ""), "values", length=1 << n)
    variables = _get(obj, "vars", "", list, default=[f"x{r + 1}" for r in range(n)])
    return DenseFunction(K, variables, [K.from_json(v, field=f"values[{i}]")
                                        for i, v in enumerate(values)])


_ENCODERS = {
    "tt": _tt_to_json,
    "ttn": _ttn_to_json,
    "evdd": _evdd_to_json,
    "circuit": _circuit_to_json,
    "dense": DenseFunction.to_json,
}

_DECODERS = {
    "tt": _tt_from_json,
    "ttn": _ttn_from_json,
    "evdd": _evdd_from_json,
    "circuit": _circuit_from_json,
    "dense": _dense_from_json,
}


def to_json(rep) -> dict:
    return _ENCODERS[kind_of(rep)](rep)


def from_json(obj) -> Document:
    kind = _get(obj, "kind", "", str)
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}; expected one of {list(KINDS)}", field="kind")
    try:
        K = get_semiring(_get(obj, "semiring", "", str))
    except ValueError as e:
        raise ParseError(str(e), field="semiring") from None
    try:
        body = _DECODERS[kind](obj, K)
    except (ValueError, TypeError) as e:
        raise ParseError(str(e)) from None
    return Document(kind, K, body)


_FLAT_LIST = re.compile(r"\[[^\[\]{}]*\]|\{[^\[\]{}]*\}")


def dumps(rep) -> str:
    if isinstance(rep, Document):
        rep = rep.body
    text = json.dumps(to_json(rep), indent=1, ensure_ascii=False)
    # keep innermost lists and objects on one line
    return _FLAT_LIST.sub(
        lambda m: json.dumps(json.loads(m.group(0)), ensure_ascii=False), text) + "\n"


def loads(text: str) -> Document:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno, column=e.colno) from None
    return from_json(obj)


def load(path) -> Document:
    return loads(Path(path).read_text(encoding="utf-8"))


def save(doc, path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")
