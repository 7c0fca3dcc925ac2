"""Weighted (+, x)-circuits over indicator inputs ``1[x = b]``.

A ``plus`` gate carries one weight per incoming edge; ``times`` gates are
unweighted. Only nonzero weights are stored. Circuits may carry a vtree and
an explicit (possibly partial) gate-to-vtree-node map ``phi``; missing
entries are filled with the lowest covering vtree node.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .dense import (
    DenseFunction,
    assignments,
    default_cap,
    index_of,
    resolve_assignment,
    tabulate,
)
from .errors import InvariantViolation, NotStructured, TooManyVariables, VariableNotInVtree
from .semiring import BOOLEAN, Semiring, get_semiring
from .vtree import Vtree

INPUT, PLUS, TIMES = "input", "plus", "times"


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Gate:
    id: int
    kind: str
    var: str | None = None
    value: int | None = None
    children: tuple[int, ...] = ()
    weights: tuple = field(default=())

    @classmethod
    def input(cls, id, var, value):
        return cls(int(id), INPUT, str(var), int(value))

    @classmethod
    def plus(cls, id, terms: Iterable[tuple[int, object]]):
        terms = list(terms)
        return cls(int(id), PLUS, children=tuple(int(c) for c, _ in terms),
                   weights=tuple(w for _, w in terms))

    @classmethod
    def times(cls, id, children: Iterable[int]):
        return cls(int(id), TIMES, children=tuple(int(c) for c in children))

    @property
    def terms(self):
        return zip(self.children, self.weights)


def _natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


class Circuit:
    def __init__(self, semiring, gates: Iterable[Gate], outputs: Sequence[int],
                 vtree: Vtree | None = None, phi: Mapping[int, int] | None = None):
        self.semiring: Semiring = get_semiring(semiring)
        K = self.semiring
        self.gates: dict[int, Gate] = {}
        for g in gates:
            if g.id in self.gates:
                raise InvariantViolation("gate ids are unique", f"gate {g.id}")
            if g.kind == PLUS:
                if len(g.weights) != len(g.children):
                    raise InvariantViolation(
                        "each + edge carries one weight", f"gate {g.id}")
                kept = [(c, K.coerce(w)) for c, w in g.terms]
                if len({c for c, _ in kept}) != len(kept):
                    raise InvariantViolation(
                        "no multi-edges", f"gate {g.id} lists a child twice")
                kept = [(c, w) for c, w in kept if not K.is_zero(w, 0.0)]
                g = Gate.plus(g.id, kept)
            self.gates[g.id] = g
        self.outputs = tuple(int(o) for o in outputs)
        self.vtree = vtree
        self.phi = dict(phi) if phi else None
        self._validate()

    def _validate(self):
        for g in self.gates.values():
            if g.kind == INPUT:
                if g.var is None or g.value not in (0, 1) or g.children:
                    raise InvariantViolation(
                        "inputs are indicators 1[x=b]", f"gate {g.id}")
            elif g.kind == TIMES:
                if len(set(g.children)) != len(g.children):
                    raise InvariantViolation(
                        "no multi-edges", f"gate {g.id} lists a child twice")
            elif g.kind != PLUS:
                raise InvariantViolation("gate kinds are input/plus/times", f"gate {g.id}")
            for c in g.children:
                if c not in self.gates:
                    raise InvariantViolation(
                        "children reference existing gates", f"gate {g.id} -> {c}")
        if not self.outputs:
            raise InvariantViolation("outputs are nonempty")
        for o in self.outputs:
            if o not in self.gates:
                raise InvariantViolation("outputs reference existing gates", f"output {o}")
        self.topological_order  # raises on cycles
        if self.vtree is not None:
            known = set(self.vtree.variables)
            for g in self.gates.values():
                if g.kind == INPUT and g.var not in known:
                    raise VariableNotInVtree(f"variable {g.var} of gate {g.id} not in vtree")
        if self.phi:
            if self.vtree is None:
                raise InvariantViolation("phi requires a vtree")
            for gid, v in self.phi.items():
                if gid not in self.gates:
                    raise InvariantViolation("phi maps existing gates", f"gate {gid}")
                if v not in self.vtree.depth:
                    raise InvariantViolation("phi maps into the vtree", f"gate {gid} -> {v}")

    # structure

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        """Gate ids with children before parents."""
        order, state = [], {}
        for root in self.gates:
            if root in state:
                continue
            stack = [(root, iter(self.gates[root].children))]
            state[root] = 1
            while stack:
                gid, it = stack[-1]
                child = next(it, None)
                if child is None:
                    stack.pop()
                    state[gid] = 2
                    order.append(gid)
                elif child not in state:
                    state[child] = 1
                    stack.append((child, iter(self.gates[child].children)))
                elif state[child] == 1:
                    raise InvariantViolation("the circuit is a DAG", f"cycle through gate {child}")
        return tuple(order)

    @cached_property
    def varsets(self) -> dict[int, frozenset]:
        out = {}
        for gid in self.topological_order:
            g = self.gates[gid]
            if g.kind == INPUT:
                out[gid] = frozenset((g.var,))
            else:
                acc = frozenset()
                for c in g.children:
                    acc |= out[c]
                out[gid] = acc
        return out

    def var(self, gid: int) -> frozenset:
        return self.varsets[gid]

    @cached_property
    def variables(self) -> tuple[str, ...]:
        if self.vtree is not None:
            return self.vtree.variables
        names = {g.var for g in self.gates.values() if g.kind == INPUT}
        return tuple(sorted(names, key=_natural_key))

    @property
    def num_outputs(self) -> int:
        return len(self.outputs)

    def cone(self, roots: Iterable[int]) -> list[int]:
        """Gates below ``roots`` in topological order."""
        seen = set()
        stack = list(roots)
        while stack:
            gid = stack.pop()
            if gid not in seen:
                seen.add(gid)
                stack.extend(self.gates[gid].children)
        return [g for g in self.topological_order if g in seen]

    @cached_property
    def _cones(self):
        return {o: self.cone([o]) for o in set(self.outputs)}

    def counts(self) -> dict[str, int]:
        kinds = [g.kind for g in self.gates.values()]
        return {
            "gates": len(kinds),
            "inputs": kinds.count(INPUT),
            "plus": kinds.count(PLUS),
            "times": kinds.count(TIMES),
            "edges": sum(len(g.children) for g in self.gates.values()),
        }

    def __eq__(self, other):
        return (isinstance(other, Circuit) and self.semiring is other.semiring
                and self.gates == other.gates and self.outputs == other.outputs
                and self.vtree == other.vtree and (self.phi or {}) == (other.phi or {}))

    __hash__ = None

    def __repr__(self):
        c = self.counts()
        return (f"Circuit(gates={c['gates']}, outputs={len(self.outputs)}, "
                f"semiring={self.semiring.name})")

    # semantics

    def evaluate(self, alpha, output: int = 0):
        """Value of output gate ``output`` (0-based) on ``alpha``."""
        out = self.outputs[output]
        a = resolve_assignment(alpha, self.variables, needed=sorted(self.var(out)))
        return self._eval_gates(self._cones[out], a)[out]

    def evaluate_gate(self, gid: int, alpha) -> object:
        a = resolve_assignment(alpha, self.variables, needed=sorted(self.var(gid)))
        return self._eval_gates(self.cone([gid]), a)[gid]

    def _eval_gates(self, order, a):
        K = self.semiring
        val = {}
        for gid in order:
            g = self.gates[gid]
            if g.kind == INPUT:
                val[gid] = K.one if a[g.var] == g.value else K.zero
            elif g.kind == TIMES:
                acc = K.one
                for c in g.children:
                    acc = K.mul(acc, val[c])
                val[gid] = acc
            else:
                acc = K.zero
                for c, w in g.terms:
                    acc = K.add(acc, K.mul(w, val[c]))
                val[gid] = acc
        return val

    def with_vtree(self, vtree: Vtree, phi=None) -> "Circuit":
        return Circuit(self.semiring, self.gates.values(), self.outputs, vtree, phi)


def evaluate(c: Circuit, alpha, out: int = 0):
    return c.evaluate(alpha, out)


# structural properties


def check_decomposable(c: Circuit) -> bool:
    for g in c.gates.values():
        if g.kind != TIMES:
            continue
        seen = set()
        for child in g.children:
            vs = c.var(child)
            if seen & vs:
                return False
            seen |= vs
    return True


def infer_phi(c: Circuit, vtree: Vtree | None = None) -> dict[int, int]:
    """Map each gate to the lowest vtree node covering its variables.

    Variable-free gates go to the leftmost leaf of the root.
    """
    vt = _need_vtree(c, vtree)
    phi = {}
    for gid in c.topological_order:
        g = c.gates[gid]
        if g.kind == INPUT:
            phi[gid] = vt.leaf(g.var)
            continue
        node = None
        for child in g.children:
            if not c.var(child):
                continue
            node = phi[child] if node is None else vt.lca(node, phi[child])
        phi[gid] = vt.leftmost_leaf() if node is None else node
    return phi


def resolved_phi(c: Circuit, vtree: Vtree | None = None) -> dict[int, int]:
    """Inferred phi overridden by the circuit's explicit annotations."""
    vt = _need_vtree(c, vtree)
    phi = infer_phi(c, vt)
    if c.phi and (vtree is None or vtree == c.vtree):
        phi.update(c.phi)
    return phi


def _need_vtree(c: Circuit, vtree) -> Vtree:
    vt = vtree if vtree is not None else c.vtree
    if vt is None:
        raise NotStructured("no vtree given and the circuit carries none")
    return vt


def check_structured(c: Circuit, vtree: Vtree | None = None, phi=None) -> bool:
    """Containment, binary split x gates, and + children at or below phi(g)."""
    vt = _need_vtree(c, vtree)
    try:
        phi = resolved_phi(c, vt) if phi is None else phi
    except VariableNotInVtree:
        return False
    for gid, g in c.gates.items():
        if gid not in phi:
            return False
        v = phi[gid]
        if not c.var(gid) <= vt.varset(v):
            return False
        if g.kind == TIMES:
            if len(g.children) != 2 or vt.is_leaf(v):
                return False
            vl, vr = vt.children[v]
            a, b = (phi[ch] for ch in g.children)
            straight = vt.is_descendant(a, vl) and vt.is_descendant(b, vr)
            swapped = vt.is_descendant(a, vr) and vt.is_descendant(b, vl)
            if not (straight or swapped):
                return False
        elif g.kind == PLUS:
            if not all(vt.is_descendant(phi[ch], v) for ch in g.children):
                return False
    return True


# support and determinism


def boolean_abstraction(c: Circuit, tol=None) -> Circuit:
    """Same DAG over the Boolean semiring with weights [w != 0]."""
    K = c.semiring
    gates = []
    for g in c.gates.values():
        if g.kind == PLUS:
            g = Gate.plus(g.id, [(ch, 1) for ch, w in g.terms if not K.is_zero(w, tol)])
        gates.append(g)
    return Circuit(BOOLEAN, gates, c.outputs, c.vtree, c.phi)


def support(c: Circuit, out: int = 0, mode: str = "exact", cap: int | None = None,
            tol=None) -> DenseFunction:
    """Support of an output as a Boolean table over ``c.variables``.

    ``structural`` ignores cancellation and over-approximates ``exact``.
    """
    cap = default_cap() if cap is None else cap
    if len(c.variables) > cap:
        raise TooManyVariables(f"{len(c.variables)} variables exceed the cap of {cap}")
    if mode == "exact":
        f = tabulate(c, out, cap)
        K = c.semiring
        return DenseFunction(BOOLEAN, f.variables, tuple(
            0 if K.is_zero(v, tol) else 1 for v in f.values))
    if mode == "structural":
        return tabulate(boolean_abstraction(c, tol), out, cap)
    raise ValueError(f"mode must be 'exact' or 'structural', got {mode!r}")


class _Tables:
    """Lazily computed value tables of gates over their own variables."""

    def __init__(self, c: Circuit, cap: int):
        self.c = c
        self.cap = cap
        self.order = {x: i for i, x in enumerate(c.variables)}
        self.tables: dict[int, tuple | None] = {}

    def vars(self, gid) -> tuple[str, ...]:
        return tuple(sorted(self.c.var(gid), key=self.order.__getitem__))

    def projector(self, outer: tuple[str, ...], inner: tuple[str, ...]) -> list[int]:
        pos = [outer.index(x) for x in inner]
        return [index_of([bits[p] for p in pos]) for bits in assignments(len(outer))]

    def table(self, gid):
        if gid in self.tables:
            return self.tables[gid]
        c, K = self.c, self.c.semiring
        for sub in c.cone([gid]):
            if sub in self.tables:
                continue
            vs = self.vars(sub)
            if len(vs) > self.cap:
                self.tables[sub] = None
                continue
            g = c.gates[sub]
            if g.kind == INPUT:
                t = (K.one, K.zero) if g.value == 0 else (K.zero, K.one)
            else:
                size = 1 << len(vs)
                if g.kind == TIMES:
                    t = [K.one] * size
                    combine = K.mul
                    coeffs = [None] * len(g.children)
                else:
                    t = [K.zero] * size
                    combine = K.add
                    coeffs = list(g.weights)
                for child, w in zip(g.children, coeffs):
                    ct = self.tables[child]
                    proj = self.projector(vs, self.vars(child))
                    for i in range(size):
                        term = ct[proj[i]] if w is None else K.mul(w, ct[proj[i]])
                        t[i] = combine(t[i], term)
                t = tuple(t)
            self.tables[sub] = t
        return self.tables[gid]

    def product_is_zero(self, a, wa, b, wb, tol) -> bool | None:
        """Is wa*a * wb*b the zero function? ``None`` when over the cap."""
        union = tuple(sorted(self.c.var(a) | self.c.var(b), key=self.order.__getitem__))
        if len(union) > self.cap:
            return None
        ta, tb = self.table(a), self.table(b)
        if ta is None or tb is None:
            return None
        K = self.c.semiring
        pa = self.projector(union, self.vars(a))
        pb = self.projector(union, self.vars(b))
        for i in range(1 << len(union)):
            v = K.mul(K.mul(wa, ta[pa[i]]), K.mul(wb, tb[pb[i]]))
            if not K.is_zero(v, tol):
                return False
        return True


def check_deterministic(c: Circuit, mode: str = "semantic", cap: int | None = None,
                        tol=None, gates: Iterable[int] | None = None) -> Verdict:
    """Pairwise products of weighted + children must be the zero function.

    ``semantic`` decides each pair exhaustively and answers ``unknown`` when
    a pair spans more than ``cap`` variables. ``structural`` only answers
    yes (disjoint cancellation-free supports) or unknown. ``gates`` restricts
    the check to the listed + gates.
    """
    cap = default_cap() if cap is None else cap
    K = c.semiring
    tol = K.resolve_tol(tol)
    if mode == "semantic":
        target, ttol = c, tol
    elif mode == "structural":
        target, ttol = boolean_abstraction(c, tol), None
    else:
        raise ValueError(f"mode must be 'semantic' or 'structural', got {mode!r}")
    tables = _Tables(target, cap)
    ids = list(c.gates) if gates is None else list(gates)
    unknown = False
    for gid in ids:
        g = target.gates[gid]
        if g.kind != PLUS:
            continue
        terms = list(g.terms)
        for i in range(len(terms)):
            for j in range(i + 1, len(terms)):
                (a, wa), (b, wb) = terms[i], terms[j]
                zero = tables.product_is_zero(a, wa, b, wb, ttol)
                if zero is None:
                    unknown = True
                elif not zero:
                    if mode == "semantic":
                        return Verdict.NO
                    unknown = True
    return Verdict.UNKNOWN if unknown else Verdict.YES


# decision gates

_ZERO = "zero"


def _indicator(c: Circuit, gid):
    """``(var, bit)`` if the gate is ``w * 1[var = bit]``, ``_ZERO`` if it is
    the empty sum, else ``None``."""
    g = c.gates[gid]
    if g.kind == INPUT:
        return (g.var, g.value)
    if g.kind == PLUS:
        if not g.children:
            return _ZERO
        if len(g.children) == 1:
            child = c.gates[g.children[0]]
            if child.kind == INPUT:
                return (child.var, child.value)
    return None


def _complementary(a, b) -> bool:
    if a == _ZERO or b == _ZERO:
        return True
    return a[0] == b[0] and {a[1], b[1]} == {0, 1}


def is_decision_gate(c: Circuit, gid: int) -> bool:
    g = c.gates[gid]
    if g.kind != PLUS:
        return True
    kids = [c.gates[ch] for ch in g.children]
    if len(kids) <= 1:
        return all(k.kind in (INPUT, TIMES) for k in kids)
    if len(kids) != 2:
        return False
    if all(k.kind == INPUT for k in kids):
        return _complementary((kids[0].var, kids[0].value), (kids[1].var, kids[1].value))
    if all(k.kind == TIMES for k in kids):
        guards = []
        for k in kids:
            options = [_indicator(c, ch) for ch in k.children]
            guards.append([o for o in options if o is not None])
        return any(_complementary(a, b) for a in guards[0] for b in guards[1])
    return False


def check_decision(c: Circuit) -> bool:
    """Every + gate is a decision gate.

    Accepted forms: ``w*1[x=b]``, ``w0*1[x=0] + w1*1[x=1]``, a single
    weighted x child, or two x children guarded by complementary indicators
    on one variable (guards may be inputs or single-indicator + gates).
    """
    return all(is_decision_gate(c, gid) for gid in c.gates)


# normalization and conversion to a tree tensor network


class _Plus:
    __slots__ = ("node", "terms", "orig", "seq")

    def __init__(self, node, terms, orig, seq):
        self.node = node
        self.terms = terms
        self.orig = orig
        self.seq = seq


class _Normalizer:
    def __init__(self, c: Circuit, vt: Vtree, phi: dict[int, int]):
        self.c, self.vt, self.phi = c, vt, phi
        self.K = c.semiring
        self.node_memo: dict[tuple[int, int], _Plus] = {}
        self.terms_memo: dict[tuple[int, int], dict] = {}
        self.one_memo: dict[int, _Plus] = {}
        self.handles: list[_Plus] = []

    def _new(self, v, terms, orig=None) -> _Plus:
        h = _Plus(v, terms, orig, len(self.handles))
        self.handles.append(h)
        return h

    def one(self, v) -> _Plus:
        if v not in self.one_memo:
            K, vt = self.K, self.vt
            if vt.is_leaf(v):
                terms = {0: K.one, 1: K.one}
            else:
                vl, vr = vt.children[v]
                terms = {(self.one(vl), self.one(vr)): K.one}
            self.one_memo[v] = self._new(v, terms)
        return self.one_memo[v]

    def node(self, gid, v) -> _Plus:
        key = (gid, v)
        if key not in self.node_memo:
            terms = self.terms(gid, v)
            g = self.c.gates[gid]
            orig = gid if g.kind == PLUS and self.phi[gid] == v else None
            self.node_memo[key] = self._new(v, terms, orig)
        return self.node_memo[key]

    def _lift(self, gid, anchor, v) -> dict:
        vt, K = self.vt, self.K
        vl, vr = vt.children[v]
        if vt.is_descendant(anchor, vl):
            return {(self.node(gid, vl), self.one(vr)): K.one}
        return {(self.one(vl), self.node(gid, vr)): K.one}

    def terms(self, gid, v) -> dict:
        key = (gid, v)
        if key in self.terms_memo:
            return self.terms_memo[key]
        c, vt, K = self.c, self.vt, self.K
        g = c.gates[gid]
        u = self.phi[gid]
        if g.kind == INPUT:
            leaf = vt.leaf(g.var)
            out = {g.value: K.one} if leaf == v else self._lift(gid, leaf, v)
        elif u != v:
            out = self._lift(gid, u, v)
        elif g.kind == PLUS:
            out = {}
            for child, w in g.terms:
                for k, tw in self.terms(child, v).items():
                    t = K.mul(w, tw)
                    out[k] = K.add(out[k], t) if k in out else t
            out = {k: w for k, w in out.items() if not K.is_zero(w, 0.0)}
        else:
            vl, _ = vt.children[v]
            a, b = g.children
            if not vt.is_descendant(self.phi[a], vl):
                a, b = b, a
            vl, vr = vt.children[v]
            out = {(self.node(a, vl), self.node(b, vr)): K.one}
        self.terms_memo[key] = out
        return out

    def run(self) -> Circuit:
        c, vt = self.c, self.vt
        root = vt.root
        for gid in sorted(c.gates):
            if c.gates[gid].kind == PLUS and self.phi[gid] != root:
                self.node(gid, self.phi[gid])
        out_handles = [self.node(o, root) for o in c.outputs]

        by_node: dict[int, list[_Plus]] = {v: [] for v in vt.nodes}
        for h in self.handles:
            by_node[h.node].append(h)
        ordered: dict[int, list[_Plus]] = {}
        for v, hs in by_node.items():
            if v == root:
                first = list(dict.fromkeys(out_handles))
                rest = [h for h in hs if h not in first]
                ordered[v] = first + sorted(rest, key=lambda h: h.seq)
            else:
                origs = sorted((h for h in hs if h.orig is not None), key=lambda h: h.orig)
                synth = sorted((h for h in hs if h.orig is None), key=lambda h: h.seq)
                ordered[v] = origs + synth

        gates, phi = [], {}
        new_id: dict[_Plus, int] = {}
        inputs: dict[tuple[str, int], int] = {}
        counter = 0
        for x in vt.variables:
            for b in (0, 1):
                if any(b in h.terms for h in ordered[vt.leaf(x)]):
                    inputs[(x, b)] = counter
                    gates.append(Gate.input(counter, x, b))
                    phi[counter] = vt.leaf(x)
                    counter += 1
        for v in vt.postorder:
            if vt.is_leaf(v):
                x = vt.labels[v]
                for h in ordered[v]:
                    new_id[h] = counter
                    gates.append(Gate.plus(counter, [(inputs[(x, b)], w)
                                                     for b, w in sorted(h.terms.items())]))
                    phi[counter] = v
                    counter += 1
                continue
            times: dict[tuple, int] = {}
            for h in ordered[v]:
                for (hl, hr) in h.terms:
                    if (hl, hr) not in times:
                        times[(hl, hr)] = counter
                        gates.append(Gate.times(counter, (new_id[hl], new_id[hr])))
                        phi[counter] = v
                        counter += 1
            for h in ordered[v]:
                new_id[h] = counter
                gates.append(Gate.plus(counter, [(times[k], w) for k, w in h.terms.items()]))
                phi[counter] = v
                counter += 1
        outputs = [new_id[h] for h in out_handles]
        return Circuit(c.semiring, gates, outputs, vt, phi)


def normalize_for_ttn(c: Circuit, vtree: Vtree | None = None) -> Circuit:
    """Rewrite a structured circuit into the layered form a TTN reads off.

    The result computes the same functions and satisfies: outputs are +
    gates; one input per literal; every + gate at a leaf sums weighted
    literals of that leaf; every + gate at an internal node v sums weighted
    products ``p x q`` of + gates mapped exactly to v's children. Gates mapped
    strictly below the node they are needed at are promoted by multiplying
    with constant-one gadgets; + children of + gates at the same node are
    flattened by distributing weights. Missing edges stay implicit (weight 0).
    """
    vt = _need_vtree(c, vtree)
    phi = resolved_phi(c, vt)
    if not check_structured(c, vt, phi):
        raise NotStructured("circuit is not structured by the vtree")
    return _Normalizer(c, vt, phi).run()


def _layers(c: Circuit) -> dict[int, list[int]]:
    """+ gates per vtree node of a normalized circuit, in tensor index order."""
    vt = c.vtree
    layers: dict[int, list[int]] = {v: [] for v in vt.nodes}
    for gid in sorted(c.gates):
        if c.gates[gid].kind == PLUS and c.phi[gid] != vt.root:
            layers[c.phi[gid]].append(gid)
    layers[vt.root] = list(c.outputs)
    return layers


def to_ttn(c: Circuit, vtree: Vtree | None = None):
    """Structured circuit -> tree tensor network.

    d(v) is the number of + gates at v in the normalized circuit; leaf
    tensors hold the literal weights and internal tensors hold the weights
    of the products of child-node gates. Output k becomes root column k.
    """
    from .ttn import TreeTensorNetwork

    cn = normalize_for_ttn(c, vtree)
    vt = cn.vtree
    layers = _layers(cn)
    index = {v: {g: k for k, g in enumerate(gs)} for v, gs in layers.items()}
    tensors: dict[int, dict] = {}
    d = {}
    for v, gs in layers.items():
        d[v] = max(1, len(gs))
        entries = {}
        for k, gid in enumerate(gs):
            g = cn.gates[gid]
            for child, w in g.terms:
                ch = cn.gates[child]
                if vt.is_leaf(v):
                    if ch.kind != INPUT:
                        raise InvariantViolation("leaf + gates sum literals", f"gate {gid}")
                    entries[(ch.value, k)] = w
                else:
                    if ch.kind != TIMES:
                        raise InvariantViolation("internal + gates sum products", f"gate {gid}")
                    vl, vr = vt.children[v]
                    a, b = ch.children
                    if cn.phi[a] != vl:
                        a, b = b, a
                    entries[(index[vl][a], index[vr][b], k)] = w
        tensors[v] = entries
    return TreeTensorNetwork(cn.semiring, vt, d, tensors)


def gate_counts_by_node(c: Circuit, vtree: Vtree | None = None) -> dict[int, dict[str, int]]:
    """Number of + / x / input gates mapped to every vtree node."""
    vt = _need_vtree(c, vtree)
    phi = resolved_phi(c, vt)
    out = {v: {PLUS: 0, TIMES: 0, INPUT: 0} for v in vt.nodes}
    for gid, g in c.gates.items():
        out[phi[gid]][g.kind] += 1
    return out
