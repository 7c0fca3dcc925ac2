"""Seeded random instances of every representation.

``flavor="deterministic"`` and ``flavor="decision"`` produce instances that
satisfy the respective property by construction; ``density`` is the chance
that an optional entry or edge is present.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .circuit import Circuit, Gate
from .errors import UnsupportedFlavor
from .evdd import Edge, Evdd
from .io import Document
from .semiring import Semiring, get_semiring
from .tt import TensorTrain
from .ttn import TreeTensorNetwork
from .vtree import Vtree

FLAVORS = ("any", "deterministic", "decision")
_SUPPORTED = {
    "tt": ("any", "deterministic"),
    "evdd": ("any", "deterministic"),
    "ttn": FLAVORS,
    "circuit": FLAVORS,
}


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    max_dim: int = 3
    density: float = 0.7
    flavor: str = "any"
    seed: int = 0
    semiring: str = "rational"

    def __post_init__(self):
        if self.kind not in _SUPPORTED:
            raise ValueError(f"kind must be one of {sorted(_SUPPORTED)}, got {self.kind!r}")
        if self.flavor not in FLAVORS:
            raise ValueError(f"flavor must be one of {FLAVORS}, got {self.flavor!r}")
        if self.flavor not in _SUPPORTED[self.kind]:
            raise UnsupportedFlavor(f"flavor {self.flavor!r} is not defined for {self.kind}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.max_dim < 1:
            raise ValueError("max_dim must be at least 1")
        if not 0 < self.density <= 1:
            raise ValueError("density must lie in (0, 1]")


def random_weight(K: Semiring, rng: random.Random):
    """A nonzero weight."""
    name = K.name
    if name == "boolean":
        return 1
    if name == "integer":
        return rng.choice([-3, -2, -1, 1, 2, 3, 4, 5])
    if name == "rational":
        return Fraction(rng.choice([-3, -2, -1, 1, 2, 3, 4, 5]), rng.choice([1, 1, 2, 3, 4]))
    if name == "float64":
        return rng.choice([-1, 1]) * rng.uniform(0.25, 2.0)
    return complex(rng.uniform(-2, 2), rng.choice([-1, 1]) * rng.uniform(0.25, 2.0))


def random_vtree(variables, rng: random.Random) -> Vtree:
    """Random binary tree shape with leaves in the given left-to-right order."""
    def build(xs):
        if len(xs) == 1:
            return xs[0]
        cut = rng.randint(1, len(xs) - 1)
        return (build(xs[:cut]), build(xs[cut:]))
    return Vtree.from_nested(build(list(variables)))


def generate(spec: GeneratorSpec) -> Document:
    rng = random.Random(spec.seed)
    K = get_semiring(spec.semiring)
    body = _GENERATORS[spec.kind](spec, K, rng)
    return Document(spec.kind, K, body)


# tensor trains


def _tt(spec: GeneratorSpec, K, rng) -> TensorTrain:
    n = spec.n
    bond = [1] + [rng.randint(1, spec.max_dim) for _ in range(n - 1)] + [1]
    cores = []
    for r in range(n):
        core = {}
        for s in range(bond[r]):
            for b in (0, 1):
                if spec.flavor == "deterministic":
                    if rng.random() < spec.density:
                        core[(s, rng.randrange(bond[r + 1]), b)] = random_weight(K, rng)
                    continue
                for t in range(bond[r + 1]):
                    if rng.random() < spec.density:
                        core[(s, t, b)] = random_weight(K, rng)
        cores.append(core)
    return TensorTrain(K, bond, cores)


# decision diagrams


def _evdd(spec: GeneratorSpec, K, rng) -> Evdd:
    n = spec.n
    variables = [f"x{r + 1}" for r in range(n)]
    det = spec.flavor == "deterministic"
    levels: list[list[int]] = []
    labels = {}
    nid = 0
    start = 1 if n > 1 and rng.random() < 0.2 else 0
    for r in range(n):
        size = 0 if r < start else (1 if r == start else rng.randint(1, spec.max_dim))
        ids = list(range(nid, nid + size))
        nid += size
        for v in ids:
            labels[v] = variables[r]
        levels.append(ids)
    sink = nid
    labels[sink] = None
    levels.append([sink])
    source = levels[start][0]

    def target(r):
        lvl = r + 1 if rng.random() < 0.6 else rng.randint(r + 1, n)
        return rng.choice(levels[lvl])

    edges = []
    for r in range(start, n):
        for v in levels[r]:
            for b in (0, 1):
                if rng.random() >= spec.density:
                    continue
                dst = target(r)
                w = random_weight(K, rng)
                edges.append(Edge(v, dst, b, w))
                if det:
                    continue
                if rng.random() < 0.15:
                    edges.append(Edge(v, dst, b, random_weight(K, rng)))
                if rng.random() < 0.3:
                    edges.append(Edge(v, target(r), b, random_weight(K, rng)))
    return Evdd(K, variables, labels, source, sink, edges)


# tree tensor networks


def _ttn(spec: GeneratorSpec, K, rng) -> TreeTensorNetwork:
    variables = [f"x{r + 1}" for r in range(spec.n)]
    tree = random_vtree(variables, rng)
    d = {v: rng.randint(1, spec.max_dim) for v in tree.nodes}
    tensors: dict[int, dict] = {}
    if spec.flavor == "decision":
        _decision_tensors(spec, K, rng, tree, d, tensors)
    elif spec.flavor == "deterministic":
        _deterministic_tensors(spec, K, rng, tree, d, tensors)
    else:
        for v in tree.nodes:
            if tree.is_leaf(v):
                keys = [(b, k) for b in (0, 1) for k in range(d[v])]
            else:
                l, r = tree.children[v]
                keys = [(i, j, k) for i in range(d[l]) for j in range(d[r]) for k in range(d[v])]
            tensors[v] = {key: random_weight(K, rng) for key in keys
                          if rng.random() < spec.density}
    return TreeTensorNetwork(K, tree, d, tensors)


def _decision_tensors(spec, K, rng, tree, d, tensors):
    bits = {}
    for v in tree.postorder:
        if tree.is_leaf(v):
            cols = [rng.randint(0, 1) for _ in range(d[v])]
            if d[v] >= 2 and len(set(cols)) == 1:
                cols[rng.randrange(d[v])] ^= 1
            bits[v] = cols
            tensors[v] = {(b, k): random_weight(K, rng) for k, b in enumerate(cols)}
            continue
        l, r = tree.children[v]
        leaf_sides = [s for s, c in ((0, l), (1, r)) if tree.is_leaf(c)]
        entries = {}
        for k in range(d[v]):
            if leaf_sides and rng.random() < spec.density:
                s = rng.choice(leaf_sides)
                child, other = (l, r) if s == 0 else (r, l)
                zeros = [i for i, b in enumerate(bits[child]) if b == 0]
                ones = [i for i, b in enumerate(bits[child]) if b == 1]
                if zeros and ones:
                    for leaf_idx in (rng.choice(zeros), rng.choice(ones)):
                        o = rng.randrange(d[other])
                        key = (leaf_idx, o, k) if s == 0 else (o, leaf_idx, k)
                        entries[key] = random_weight(K, rng)
                    continue
            entries[(rng.randrange(d[l]), rng.randrange(d[r]), k)] = random_weight(K, rng)
        tensors[v] = entries


def _deterministic_tensors(spec, K, rng, tree, d, tensors):
    supports = {}
    for v in tree.postorder:
        if tree.is_leaf(v):
            entries = {}
            for k in range(d[v]):
                for b in (0, 1):
                    if rng.random() < spec.density:
                        entries[(b, k)] = random_weight(K, rng)
            tensors[v] = entries
            supports[v] = [frozenset((b,) for b in (0, 1) if (b, k) in entries)
                           for k in range(d[v])]
            continue
        l, r = tree.children[v]
        sl, sr = supports[l], supports[r]
        entries, sup = {}, []
        for k in range(d[v]):
            chosen = []
            pairs = [(i, j) for i in range(d[l]) for j in range(d[r])]
            rng.shuffle(pairs)
            for i, j in pairs:
                if rng.random() >= spec.density:
                    continue
                if all(not (sl[i] & sl[i2]) or not (sr[j] & sr[j2]) for i2, j2 in chosen):
                    chosen.append((i, j))
                    entries[(i, j, k)] = random_weight(K, rng)
            sup.append(frozenset(a + b for i, j in chosen for a in sl[i] for b in sr[j]))
        tensors[v] = entries
        supports[v] = sup


# circuits


class _CircuitBuilder:
    def __init__(self, K, rng, vtree: Vtree):
        self.K, self.rng, self.vt = K, rng, vtree
        self.gates: list[Gate] = []
        self.pool: dict[int, list[int]] = {v: [] for v in vtree.nodes}
        self.next_id = 0

    def add(self, gate_fn, *args, node=None):
        gid = self.next_id
        self.next_id += 1
        self.gates.append(gate_fn(gid, *args))
        if node is not None:
            self.pool[node].append(gid)
        return gid

    def input(self, x, b):
        return self.add(Gate.input, x, b)

    def plus(self, terms, node):
        seen, kept = set(), []
        for ch, w in terms:
            if ch not in seen:
                seen.add(ch)
                kept.append((ch, w))
        return self.add(Gate.plus, kept, node=node)

    def times(self, a, b, node):
        pair = (a, b) if self.rng.random() < 0.5 else (b, a)
        return self.add(Gate.times, pair, node=node)


def _circuit(spec: GeneratorSpec, K, rng) -> Circuit:
    variables = [f"x{r + 1}" for r in range(spec.n)]
    vt = random_vtree(variables, rng)
    cb = _CircuitBuilder(K, rng, vt)
    if spec.flavor == "decision":
        outputs = _decision_circuit(spec, cb)
    elif spec.flavor == "deterministic":
        outputs = _deterministic_circuit(spec, cb)
    else:
        outputs = _any_circuit(spec, cb)
    return Circuit(K, cb.gates, outputs, vt)


def _any_circuit(spec, cb: _CircuitBuilder) -> list[int]:
    """Structured circuit exercising lifting, nested products, shared and
    duplicate inputs, sums of sums, and outputs below the root."""
    vt, rng, K = cb.vt, cb.rng, cb.K

    def gen(v) -> int:
        if cb.pool[v] and rng.random() < 0.3:
            return rng.choice(cb.pool[v])
        if vt.is_leaf(v):
            x = vt.labels[v]
            if rng.random() < 0.3:
                return cb.input(x, rng.randint(0, 1))
            terms = [(cb.input(x, b), _w(K, rng)) for b in (0, 1)
                     if rng.random() < spec.density]
            if not terms:
                terms = [(cb.input(x, rng.randint(0, 1)), _w(K, rng))]
            return cb.plus(terms, v)
        vl, vr = vt.children[v]
        roll = rng.random()
        if roll < 0.45:
            return cb.times(gen(vl), gen(vr), v)
        terms = []
        for _ in range(rng.randint(1, max(1, spec.max_dim))):
            pick = rng.random()
            if pick < 0.6:
                child = cb.times(gen(vl), gen(vr), v)
            elif pick < 0.8:
                child = gen(rng.choice((vl, vr)))
            else:
                child = gen(v)
            terms.append((child, _w(K, rng)))
        return cb.plus(terms, v)

    outputs = [gen(vt.root) for _ in range(rng.randint(1, spec.max_dim))]
    if vt.children and rng.random() < 0.3:
        outputs.append(gen(rng.choice(vt.children[vt.root])))
    return outputs


def _w(K, rng):
    return random_weight(K, rng)


def _deterministic_circuit(spec, cb: _CircuitBuilder) -> list[int]:
    """Every + gate gets children with pairwise disjoint supports.

    Supports are tracked exactly as bitmasks over all assignments."""
    vt, rng, K = cb.vt, cb.rng, cb.K
    variables = vt.variables
    n = len(variables)
    full = (1 << (1 << n)) - 1
    literal = {}
    for pos, x in enumerate(variables):
        one = 0
        for idx in range(1 << n):
            if (idx >> (n - 1 - pos)) & 1:
                one |= 1 << idx
        literal[(x, 1)] = one
        literal[(x, 0)] = full ^ one
    support: dict[int, int] = {}

    def record(gid, mask):
        support[gid] = mask
        return gid

    def disjoint_sum(candidates, v):
        terms, acc = [], 0
        for ch in candidates:
            if ch in (c for c, _ in terms) or support[ch] & acc:
                continue
            terms.append((ch, _w(K, rng)))
            acc |= support[ch]
        return record(cb.plus(terms, v), acc)

    def gen(v) -> int:
        if cb.pool[v] and rng.random() < 0.3:
            return rng.choice(cb.pool[v])
        if vt.is_leaf(v):
            x = vt.labels[v]
            bits = [b for b in (0, 1) if rng.random() < spec.density] or [rng.randint(0, 1)]
            cands = [record(cb.input(x, b), literal[(x, b)]) for b in bits]
            return disjoint_sum(cands, v)
        vl, vr = vt.children[v]
        cands = []
        for _ in range(rng.randint(1, spec.max_dim + 1)):
            if rng.random() < 0.8:
                a, b = gen(vl), gen(vr)
                cands.append(record(cb.times(a, b, v), support[a] & support[b]))
            else:
                cands.append(gen(rng.choice((vl, vr))))
        return disjoint_sum(cands, v)

    return [gen(vt.root) for _ in range(rng.randint(1, spec.max_dim))]


def _decision_circuit(spec, cb: _CircuitBuilder) -> list[int]:
    """Layered decision circuit: every gate at v reads all of var(v)."""
    vt, rng, K = cb.vt, cb.rng, cb.K
    inputs: dict[tuple[str, int], int] = {}

    def lit(x, b):
        if (x, b) not in inputs:
            inputs[(x, b)] = cb.input(x, b)
        return inputs[(x, b)]

    def guard(leaf, b):
        return cb.plus([(lit(vt.labels[leaf], b), _w(K, rng))], leaf)

    def gen(v) -> int:
        if cb.pool[v] and rng.random() < 0.3:
            return rng.choice(cb.pool[v])
        if vt.is_leaf(v):
            return guard(v, rng.randint(0, 1))
        vl, vr = vt.children[v]
        leaf_sides = [s for s, c in ((0, vl), (1, vr)) if vt.is_leaf(c)]
        if leaf_sides and rng.random() < spec.density:
            s = rng.choice(leaf_sides)
            leaf, other = (vl, vr) if s == 0 else (vr, vl)
            prods = []
            for b in (0, 1):
                g, o = guard(leaf, b), gen(other)
                prods.append(cb.times(g, o, v) if s == 0 else cb.times(o, g, v))
            return cb.plus([(p, _w(K, rng)) for p in prods], v)
        return cb.plus([(cb.times(gen(vl), gen(vr), v), _w(K, rng))], v)

    return [gen(vt.root) for _ in range(rng.randint(1, spec.max_dim))]


_GENERATORS = {"tt": _tt, "evdd": _evdd, "ttn": _ttn, "circuit": _circuit}
