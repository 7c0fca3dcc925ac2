"""Binary tree tensor networks.

A leaf ``v`` holds a ``2 x d(v)`` tensor keyed ``(b, k)``; an internal node
holds a ``d(left) x d(right) x d(v)`` tensor keyed ``(i, j, k)``. All keys
are 0-based and only nonzero entries are stored. Row ``b`` of a leaf tensor
is the value at ``x = b``.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Mapping

from .circuit import Circuit, Gate, Verdict
from .dense import DenseTensor, assignments, default_cap, resolve_assignment
from .errors import InvariantViolation, TooManyVariables
from .semiring import Semiring, get_semiring
from .vtree import Vtree


class TreeTensorNetwork:
    def __init__(self, semiring, tree: Vtree, d: Mapping[int, int],
                 tensors: Mapping[int, Mapping]):
        self.semiring: Semiring = get_semiring(semiring)
        K = self.semiring
        self.tree = tree
        self.d = {int(v): int(x) for v, x in d.items()}
        self.tensors = {}
        for v, entries in tensors.items():
            kept = {}
            for key, w in entries.items():
                w = K.coerce(w)
                if not K.is_zero(w, 0.0):
                    kept[tuple(int(i) for i in key)] = w
            self.tensors[int(v)] = kept
        for v in tree.nodes:
            self.tensors.setdefault(v, {})
        self._validate()

    def _validate(self):
        t = self.tree
        if set(self.d) != set(t.nodes):
            raise InvariantViolation("d is defined on every tree node",
                                     f"d keys {sorted(self.d)} vs nodes {sorted(t.nodes)}")
        if set(self.tensors) != set(t.nodes):
            raise InvariantViolation("one tensor per tree node",
                                     f"extra tensors {sorted(set(self.tensors) - set(t.nodes))}")
        for v, dv in self.d.items():
            if dv < 1:
                raise InvariantViolation("d(v) is positive", f"d({v}) = {dv}")
        for v, entries in self.tensors.items():
            if t.is_leaf(v):
                shape = (2, self.d[v])
            else:
                l, r = t.children[v]
                shape = (self.d[l], self.d[r], self.d[v])
            for key in entries:
                if len(key) != len(shape) or not all(0 <= i < n for i, n in zip(key, shape)):
                    one_based = tuple(i + 1 for i in key)
                    if t.is_leaf(v):
                        one_based = (key[0],) + one_based[1:]
                    raise InvariantViolation(
                        "tensor shapes match d of the node and its children",
                        f"entry {one_based} at node {v} with shape {shape}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.tree.variables

    @property
    def n(self) -> int:
        return len(self.tree.variables)

    @property
    def num_outputs(self) -> int:
        return self.d[self.tree.root]

    def shape(self, v: int) -> tuple[int, ...]:
        if self.tree.is_leaf(v):
            return (2, self.d[v])
        l, r = self.tree.children[v]
        return (self.d[l], self.d[r], self.d[v])

    def nnz(self) -> int:
        return sum(len(e) for e in self.tensors.values())

    @cached_property
    def _slices(self) -> dict[int, list[list]]:
        """Per node, per column k: list of (key-without-k, weight)."""
        out = {}
        for v, entries in self.tensors.items():
            cols = [[] for _ in range(self.d[v])]
            for key, w in sorted(entries.items()):
                cols[key[-1]].append((key[:-1], w))
            out[v] = cols
        return out

    def evaluate_all(self, alpha) -> list:
        """The d(root) output values at ``alpha``, computed bottom-up."""
        a = resolve_assignment(alpha, self.variables)
        K = self.semiring
        vec = {}
        for v in self.tree.postorder:
            cols = self._slices[v]
            if self.tree.is_leaf(v):
                b = a[self.tree.labels[v]]
                vec[v] = [next((w for (bb,), w in col if bb == b), K.zero) for col in cols]
            else:
                l, r = self.tree.children[v]
                left, right = vec.pop(l), vec.pop(r)
                out = []
                for col in cols:
                    acc = K.zero
                    for (i, j), w in col:
                        acc = K.add(acc, K.mul(w, K.mul(left[i], right[j])))
                    out.append(acc)
                vec[v] = out
        return vec[self.tree.root]

    def evaluate(self, alpha, output: int = 0):
        if not 0 <= output < self.num_outputs:
            raise IndexError(f"output {output} out of range for {self.num_outputs} outputs")
        return self.evaluate_all(alpha)[output]

    def __eq__(self, other):
        return (isinstance(other, TreeTensorNetwork) and self.semiring is other.semiring
                and self.tree == other.tree and self.d == other.d
                and self.tensors == other.tensors)

    def __repr__(self):
        return (f"TreeTensorNetwork(leaves={self.n}, outputs={self.num_outputs}, "
                f"semiring={self.semiring.name})")


def evaluate(ttn: TreeTensorNetwork, alpha) -> list:
    return ttn.evaluate_all(alpha)


def hat_tensor(ttn: TreeTensorNetwork, v: int, cap: int | None = None) -> DenseTensor:
    """The ``2**m x d(v)`` table of the functions computed at ``v``.

    Rows follow ``tree.vars_of(v)`` big-endian.
    """
    cap = default_cap() if cap is None else cap
    m = len(ttn.tree.vars_of(v))
    if m > cap:
        raise TooManyVariables(f"node {v} spans {m} variables, cap is {cap}")
    rows = _hat_rows(ttn, v)
    return DenseTensor(ttn.semiring, (1 << m, ttn.d[v]), tuple(x for row in rows for x in row))


def _hat_rows(ttn: TreeTensorNetwork, v: int) -> list[list]:
    K = ttn.semiring
    t = ttn.tree
    A = ttn.tensors[v]
    if t.is_leaf(v):
        return [[A.get((b, k), K.zero) for k in range(ttn.d[v])] for b in (0, 1)]
    l, r = t.children[v]
    left, right = _hat_rows(ttn, l), _hat_rows(ttn, r)
    cols = ttn._slices[v]
    out = []
    for lrow in left:
        for rrow in right:
            row = []
            for col in cols:
                acc = K.zero
                for (i, j), w in col:
                    acc = K.add(acc, K.mul(w, K.mul(lrow[i], rrow[j])))
                row.append(acc)
            out.append(row)
    return out


def to_circuit(ttn: TreeTensorNetwork) -> Circuit:
    """TTN -> structured circuit, one + gate per (node, column).

    Leaf column k becomes ``A[0,k]*1[x=0] + A[1,k]*1[x=1]``; an internal
    column sums weighted products of child gates, with the product gates
    shared across columns. Root gates are the outputs in column order.
    """
    t = ttn.tree
    gates, phi = [], {}
    gid = {}
    inputs = {}
    counter = 0
    for x in t.variables:
        v = t.leaf(x)
        for b in (0, 1):
            if any(key[0] == b for key in ttn.tensors[v]):
                inputs[(x, b)] = counter
                gates.append(Gate.input(counter, x, b))
                phi[counter] = v
                counter += 1
    for v in t.postorder:
        cols = ttn._slices[v]
        if t.is_leaf(v):
            x = t.labels[v]
            for k, col in enumerate(cols):
                gates.append(Gate.plus(counter, [(inputs[(x, b)], w) for (b,), w in col]))
                phi[counter] = v
                gid[(v, k)] = counter
                counter += 1
            continue
        l, r = t.children[v]
        times = {}
        for col in cols:
            for (i, j), _ in col:
                if (i, j) not in times:
                    times[(i, j)] = None
        for pair in sorted(times):
            times[pair] = counter
            gates.append(Gate.times(counter, (gid[(l, pair[0])], gid[(r, pair[1])])))
            phi[counter] = v
            counter += 1
        for k, col in enumerate(cols):
            gates.append(Gate.plus(counter, [(times[key], w) for key, w in col]))
            phi[counter] = v
            gid[(v, k)] = counter
            counter += 1
    outputs = [gid[(t.root, k)] for k in range(ttn.d[t.root])]
    return Circuit(ttn.semiring, gates, outputs, t, phi)


# decision and determinism


_BOTH = "both"


def _side(col_entries, K, tol):
    """Bit of a single-sided leaf column, ``None`` for the zero column and
    ``_BOTH`` when both rows are nonzero."""
    bits = {b for (b,), w in col_entries if not K.is_zero(w, tol)}
    if not bits:
        return None
    if len(bits) == 2:
        return _BOTH
    return bits.pop()


def check_decision(ttn: TreeTensorNetwork, tol=None) -> bool:
    """Every tensor follows the sparsity pattern of its tree position.

    Leaves: each column is zero on one row. Nodes with a leaf child: each
    slice has at most two nonzeros, and two nonzeros must pick leaf columns
    proportional to ``1[x=0]`` and ``1[x=1]``. Other internal nodes: each
    slice has at most one nonzero.
    """
    K = ttn.semiring
    tol = K.resolve_tol(tol)
    t = ttn.tree
    for v in t.nodes:
        cols = ttn._slices[v]
        if t.is_leaf(v):
            if any(_side(col, K, tol) == _BOTH for col in cols):
                return False
            continue
        l, r = t.children[v]
        leaf_sides = [s for s, c in ((0, l), (1, r)) if t.is_leaf(c)]
        for col in cols:
            nz = [key for key, w in col if not K.is_zero(w, tol)]
            if not leaf_sides:
                if len(nz) > 1:
                    return False
                continue
            if len(nz) > 2:
                return False
            if len(nz) < 2:
                continue
            ok = False
            for s in leaf_sides:
                child = (l, r)[s]
                sides = [_side(ttn._slices[child][key[s]], K, tol) for key in nz]
                if _BOTH in sides:
                    continue
                if None in sides or sides[0] != sides[1]:
                    ok = True
                    break
            if not ok:
                return False
    return True


def _hat_columns(ttn, v, cap, memo):
    if v not in memo:
        if len(ttn.tree.vars_of(v)) > cap:
            memo[v] = None
        else:
            rows = _hat_rows(ttn, v)
            memo[v] = [tuple(row[k] for row in rows) for k in range(ttn.d[v])]
    return memo[v]


def _support_sets(ttn, v, cap, memo, K, tol):
    """Per column, a set of assignments (bit tuples over vars_of(v)) that
    over-approximates the support; products concatenate, sums take unions."""
    if v in memo:
        return memo[v]
    t = ttn.tree
    if len(t.vars_of(v)) > cap:
        memo[v] = None
        return None
    if t.is_leaf(v):
        out = [frozenset((b,) for (b,), w in col if not K.is_zero(w, tol))
               for col in ttn._slices[v]]
    else:
        l, r = t.children[v]
        left = _support_sets(ttn, l, cap, memo, K, tol)
        right = _support_sets(ttn, r, cap, memo, K, tol)
        out = []
        for col in ttn._slices[v]:
            acc = set()
            for (i, j), w in col:
                if not K.is_zero(w, tol):
                    acc.update(a + b for a in left[i] for b in right[j])
            out.append(frozenset(acc))
    memo[v] = out
    return out


def check_deterministic(ttn: TreeTensorNetwork, mode: str = "semantic",
                        cap: int | None = None, tol=None) -> Verdict:
    """For every slice and every pair of its nonzero entries (i1,j1), (i2,j2),
    the left columns i1, i2 or the right columns j1, j2 must have disjoint
    supports (their pointwise product is zero).

    ``semantic`` compares dense hat columns; ``structural`` compares support
    over-approximations and never answers no.
    """
    cap = default_cap() if cap is None else cap
    K = ttn.semiring
    tol = K.resolve_tol(tol)
    t = ttn.tree
    memo: dict = {}
    unknown = False
    if mode not in ("semantic", "structural"):
        raise ValueError(f"mode must be 'semantic' or 'structural', got {mode!r}")

    def disjoint(cols, a, b):
        if cols is None:
            return None
        if mode == "semantic":
            return all(K.is_zero(K.mul(x, y), tol) for x, y in zip(cols[a], cols[b]))
        return not (cols[a] & cols[b])

    for v in t.nodes:
        if t.is_leaf(v):
            continue
        l, r = t.children[v]
        if mode == "semantic":
            left, right = _hat_columns(ttn, l, cap, memo), _hat_columns(ttn, r, cap, memo)
        else:
            left = _support_sets(ttn, l, cap, memo, K, tol)
            right = _support_sets(ttn, r, cap, memo, K, tol)
        for col in ttn._slices[v]:
            nz = [key for key, w in col if not K.is_zero(w, tol)]
            for (i1, j1), (i2, j2) in combinations(nz, 2):
                dl = disjoint(left, i1, i2)
                if dl:
                    continue
                dr = disjoint(right, j1, j2)
                if dr:
                    continue
                if dl is None or dr is None or mode == "structural":
                    unknown = True
                else:
                    return Verdict.NO
    return Verdict.UNKNOWN if unknown else Verdict.YES


def gate_count_formula(ttn: TreeTensorNetwork) -> dict[int, int]:
    """d(v) + d(left) * d(right) per internal node (dense case)."""
    t = ttn.tree
    return {v: ttn.d[v] + ttn.d[l] * ttn.d[r] for v, (l, r) in t.children.items()}


def dense_table(ttn: TreeTensorNetwork, output: int):
    """Convenience: values of one output over all assignments in index order."""
    return [ttn.evaluate_all(bits)[output] for bits in assignments(ttn.n)]
