"""Non-deterministic edge-valued decision diagrams (nd-EVDDs).

The value of an assignment is the sum, over all source-to-sink paths that
follow the assigned bit at every node, of the product of edge weights.

Nodes with no outgoing edges and nodes unreachable from the source are
tolerated: they lie on no source-to-sink path and contribute nothing. This
lets :func:`pbkc.tt.to_evdd` emit one node per virtual index even for
sparse cores; :meth:`Evdd.trim` removes them.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Mapping, NamedTuple, Sequence

from .dense import resolve_assignment
from .errors import InvariantViolation, NotOrdered, UnassignedVariable
from .semiring import Semiring, get_semiring


class Edge(NamedTuple):
    src: int
    dst: int
    bit: int
    weight: object


class Evdd:
    def __init__(self, semiring, var_order: Sequence[str], labels: Mapping[int, str | None],
                 source: int, sink: int, edges: Sequence):
        self.semiring: Semiring = get_semiring(semiring)
        K = self.semiring
        self.var_order = tuple(var_order)
        self.labels = {int(k): (None if v is None else str(v)) for k, v in labels.items()}
        self.source = int(source)
        self.sink = int(sink)
        self.edges = tuple(Edge(int(e[0]), int(e[1]), int(e[2]), K.coerce(e[3])) for e in edges)
        self._validate()

    def _validate(self):
        if len(set(self.var_order)) != len(self.var_order):
            raise InvariantViolation("variable order has no repeats", str(self.var_order))
        for v in (self.source, self.sink):
            if v not in self.labels:
                raise InvariantViolation("source and sink are nodes", f"node {v} missing")
        if self.source == self.sink:
            raise InvariantViolation("source differs from sink")
        sinks = [v for v, x in self.labels.items() if x is None]
        if sinks != [self.sink]:
            raise InvariantViolation("exactly one sink, labeled SINK", f"unlabeled nodes {sinks}")
        known = set(self.var_order)
        for v, x in self.labels.items():
            if x is not None and x not in known:
                raise InvariantViolation(
                    "node variables belong to the variable order", f"node {v} reads {x}")
        for i, e in enumerate(self.edges):
            if e.src not in self.labels or e.dst not in self.labels:
                raise InvariantViolation("edges join existing nodes", f"edge {i}")
            if e.bit not in (0, 1):
                raise InvariantViolation("edge bits are 0 or 1", f"edge {i}")
            if e.src == self.sink:
                raise InvariantViolation("the sink has no outgoing edges", f"edge {i}")
            if e.dst == self.source:
                raise InvariantViolation("the source has no incoming edges", f"edge {i}")
        self.topological_order  # raises on cycles

    # structure

    @cached_property
    def out_edges(self) -> dict[int, tuple[Edge, ...]]:
        out = {v: [] for v in self.labels}
        for e in self.edges:
            out[e.src].append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        indeg = {v: 0 for v in self.labels}
        for e in self.edges:
            indeg[e.dst] += 1
        ready = deque(sorted(v for v, d in indeg.items() if d == 0))
        order = []
        while ready:
            v = ready.popleft()
            order.append(v)
            for e in self.out_edges[v]:
                indeg[e.dst] -= 1
                if indeg[e.dst] == 0:
                    ready.append(e.dst)
        if len(order) != len(self.labels):
            raise InvariantViolation("the diagram is a DAG", "cycle detected")
        return tuple(order)

    @cached_property
    def reachable(self) -> frozenset:
        seen = {self.source}
        stack = [self.source]
        while stack:
            for e in self.out_edges[stack.pop()]:
                if e.dst not in seen:
                    seen.add(e.dst)
                    stack.append(e.dst)
        return frozenset(seen)

    @cached_property
    def coreachable(self) -> frozenset:
        into = {v: [] for v in self.labels}
        for e in self.edges:
            into[e.dst].append(e.src)
        seen = {self.sink}
        stack = [self.sink]
        while stack:
            for u in into[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return frozenset(seen)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.var_order

    @property
    def n(self) -> int:
        return len(self.var_order)

    num_outputs = 1

    @cached_property
    def level(self) -> dict[int, int]:
        """0-based position of each node's variable; the sink sits at n."""
        pos = {x: i for i, x in enumerate(self.var_order)}
        return {v: (self.n if x is None else pos[x]) for v, x in self.labels.items()}

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def level_sizes(self) -> list[int]:
        sizes = [0] * (self.n + 1)
        for v in self.labels:
            sizes[self.level[v]] += 1
        return sizes

    def __eq__(self, other):
        return (isinstance(other, Evdd) and self.semiring is other.semiring
                and self.var_order == other.var_order and self.labels == other.labels
                and self.source == other.source and self.sink == other.sink
                and sorted(self.edges, key=_edge_key) == sorted(other.edges, key=_edge_key))

    def __repr__(self):
        return (f"Evdd(nodes={self.node_count}, edges={self.edge_count}, "
                f"vars={len(self.var_order)}, semiring={self.semiring.name})")

    # semantics

    def evaluate(self, alpha, output: int = 0):
        """Path sum, computed bottom-up: value(v) = sum of w * value(child)."""
        if output != 0:
            raise IndexError("an EVDD has a single output")
        a = resolve_assignment(alpha, self.var_order, needed=())
        K = self.semiring
        val = {self.sink: K.one}
        for v in reversed(self.topological_order):
            if v == self.sink:
                continue
            x = self.labels[v]
            if x not in a:
                if self.out_edges[v] and v in self.reachable:
                    raise UnassignedVariable(f"variable {x} is not assigned")
                val[v] = K.zero
                continue
            b = a[x]
            acc = K.zero
            for e in self.out_edges[v]:
                if e.bit == b:
                    acc = K.add(acc, K.mul(e.weight, val[e.dst]))
            val[v] = acc
        return val[self.source]

    def trim(self) -> "Evdd":
        """Drop nodes that lie on no source-to-sink path."""
        keep = (self.reachable & self.coreachable) | {self.source, self.sink}
        labels = {v: x for v, x in self.labels.items() if v in keep}
        edges = [e for e in self.edges if e.src in keep and e.dst in keep]
        return Evdd(self.semiring, self.var_order, labels, self.source, self.sink, edges)


def _edge_key(e: Edge):
    return (e.src, e.dst, e.bit, str(e.weight))


def evaluate(g: Evdd, alpha):
    return g.evaluate(alpha)


def check_read_once(g: Evdd) -> bool:
    """No variable is read twice along any path from the source."""
    below: dict[int, frozenset] = {}
    for v in reversed(g.topological_order):
        acc = set()
        for e in g.out_edges[v]:
            acc |= below[e.dst]
            if g.labels[e.dst] is not None:
                acc.add(g.labels[e.dst])
        below[v] = frozenset(acc)
    return all(g.labels[v] not in below[v]
               for v in g.reachable if g.labels[v] is not None)


def check_ordered(g: Evdd) -> bool:
    """Variables along every path from the source follow ``var_order``."""
    return all(g.level[e.dst] > g.level[e.src]
               for e in g.edges if e.src in g.reachable)


def check_deterministic(g: Evdd) -> bool:
    """At most one nonzero 0-edge and one nonzero 1-edge per node."""
    seen = set()
    for e in normalize_parallel_edges(g).edges:
        key = (e.src, e.bit)
        if key in seen:
            return False
        seen.add(key)
    return True


def check_complete(g: Evdd) -> bool:
    """Every source-to-sink path reads every variable once, in order."""
    useful = g.reachable & g.coreachable
    if g.sink not in useful:
        return True
    if g.level[g.source] != 0:
        return False
    return all(g.level[e.dst] == g.level[e.src] + 1
               for e in g.edges if e.src in useful and e.dst in useful)


def normalize_parallel_edges(g: Evdd) -> Evdd:
    """Merge edges sharing (from, to, bit) by summing; drop zero weights."""
    K = g.semiring
    merged: dict[tuple, object] = {}
    for e in g.edges:
        key = (e.src, e.dst, e.bit)
        merged[key] = K.add(merged[key], e.weight) if key in merged else e.weight
    edges = [Edge(s, d, b, w) for (s, d, b), w in merged.items() if not K.is_zero(w, 0.0)]
    if len(edges) == len(g.edges):
        return g
    return Evdd(K, g.var_order, g.labels, g.source, g.sink, edges)


def complete(g: Evdd) -> Evdd:
    """Insert pass-through nodes so every path reads every variable.

    An edge skipping k variables becomes a chain through k fresh nodes; the
    original weight stays on the first chain edge and each fresh node has a
    0-edge and a 1-edge of weight 1. A source below the first variable gets
    a padding chain in front of it.
    """
    if not check_ordered(g):
        raise NotOrdered("completion requires an ordered diagram")
    K = g.semiring
    labels = dict(g.labels)
    next_id = max(labels) + 1
    edges = []

    def fresh(level):
        nonlocal next_id
        v = next_id
        next_id += 1
        labels[v] = g.var_order[level]
        return v

    changed = False
    for e in g.edges:
        lo, hi = g.level[e.src], g.level[e.dst]
        if hi <= lo + 1:
            edges.append(e)
            continue
        changed = True
        prev = e.src
        first = True
        for lvl in range(lo + 1, hi):
            v = fresh(lvl)
            if first:
                edges.append(Edge(prev, v, e.bit, e.weight))
                first = False
            else:
                edges.append(Edge(prev, v, 0, K.one))
                edges.append(Edge(prev, v, 1, K.one))
            prev = v
        edges.append(Edge(prev, e.dst, 0, K.one))
        edges.append(Edge(prev, e.dst, 1, K.one))

    source = g.source
    start = g.level[g.source]
    if start > 0 and g.source in g.coreachable:
        changed = True
        chain = [fresh(lvl) for lvl in range(start)]
        for u, w in zip(chain, chain[1:] + [g.source]):
            edges.append(Edge(u, w, 0, K.one))
            edges.append(Edge(u, w, 1, K.one))
        source = chain[0]
    if not changed:
        return g
    return Evdd(K, g.var_order, labels, source, g.sink, edges)


def level_enumeration(g: Evdd) -> list[list[int]]:
    """Nodes of a complete diagram per level, in BFS order from the source.

    Successors are visited in ascending node id.
    """
    levels = [[] for _ in range(g.n + 1)]
    seen = {g.source}
    queue = deque([g.source])
    while queue:
        v = queue.popleft()
        levels[g.level[v]].append(v)
        for w in sorted({e.dst for e in g.out_edges[v]}):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return levels


def to_tt(g: Evdd):
    """nd-EVDD -> TT: nodes per level become virtual indices.

    A(r)[s, t, b] is the weight of the b-edge from the s-th node of level r
    to the t-th node of level r+1.
    """
    from .tt import TensorTrain

    if not check_ordered(g):
        raise NotOrdered("conversion to a tensor train requires an ordered diagram")
    K = g.semiring
    h = complete(normalize_parallel_edges(g))
    levels = level_enumeration(h)
    n = h.n
    # the sink is the single index of level n+1, even if unreachable
    levels[n] = [h.sink]
    pos = {}
    for nodes in levels:
        for i, v in enumerate(nodes):
            pos[v] = i
    bond = [max(1, len(levels[r])) for r in range(n)] + [1]
    cores = [dict() for _ in range(n)]
    for r in range(n):
        for v in levels[r]:
            for e in h.out_edges[v]:
                key = (pos[v], pos[e.dst], e.bit)
                core = cores[r]
                core[key] = K.add(core[key], e.weight) if key in core else e.weight
    return TensorTrain(K, bond, cores)
