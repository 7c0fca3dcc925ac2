"""Rooted binary trees whose leaves carry variables (vtrees)."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping

from .errors import InvariantViolation, VariableNotInVtree


class Vtree:
    """A rooted binary tree with a bijection from leaves to variables.

    Nodes are identified by integers. ``children`` maps every internal node
    to its ``(left, right)`` pair and ``labels`` maps every leaf to its
    variable.
    """

    def __init__(self, root: int, children: Mapping[int, tuple[int, int]],
                 labels: Mapping[int, str]):
        self.root = root
        self.children = {int(k): (int(v[0]), int(v[1])) for k, v in children.items()}
        self.labels = {int(k): str(v) for k, v in labels.items()}
        self._validate()

    def _validate(self):
        seen = set()
        stack = [self.root]
        while stack:
            v = stack.pop()
            if v in seen:
                raise InvariantViolation("vtree is a tree", f"node {v} reached twice")
            seen.add(v)
            if v in self.children:
                if v in self.labels:
                    raise InvariantViolation(
                        "internal nodes carry no variable", f"node {v}")
                stack.extend(self.children[v])
            elif v not in self.labels:
                raise InvariantViolation("every leaf carries a variable", f"node {v}")
        extra = (set(self.children) | set(self.labels)) - seen
        if extra:
            raise InvariantViolation("vtree is connected", f"unreachable nodes {sorted(extra)}")
        vars_ = list(self.labels.values())
        if len(set(vars_)) != len(vars_):
            raise InvariantViolation("lambda is a bijection", "a variable labels two leaves")

    # construction helpers

    @classmethod
    def from_nested(cls, nested, start: int = 0) -> "Vtree":
        """Build from nested pairs of variable names, e.g. (("x1","x2"),"x3").

        Ids are assigned in preorder starting at ``start``.
        """
        children, labels = {}, {}
        counter = [start]

        def build(t):
            v = counter[0]
            counter[0] += 1
            if isinstance(t, str):
                labels[v] = t
            else:
                left, right = t
                l = build(left)
                r = build(right)
                children[v] = (l, r)
            return v

        root = build(nested)
        return cls(root, children, labels)

    @classmethod
    def right_linear(cls, variables: Iterable[str]) -> "Vtree":
        variables = list(variables)
        t = variables[-1]
        for x in reversed(variables[:-1]):
            t = (x, t)
        return cls.from_nested(t)

    def to_nested(self, v=None):
        v = self.root if v is None else v
        if self.is_leaf(v):
            return self.labels[v]
        l, r = self.children[v]
        return (self.to_nested(l), self.to_nested(r))

    def __eq__(self, other):
        return (isinstance(other, Vtree) and self.root == other.root
                and self.children == other.children and self.labels == other.labels)

    def __hash__(self):
        return hash((self.root, tuple(sorted(self.labels.items()))))

    def __repr__(self):
        return f"Vtree({self.to_nested()!r})"

    # queries

    def is_leaf(self, v: int) -> bool:
        return v not in self.children

    def left(self, v: int) -> int:
        return self.children[v][0]

    def right(self, v: int) -> int:
        return self.children[v][1]

    @cached_property
    def nodes(self) -> tuple[int, ...]:
        """All nodes in preorder."""
        out = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            if v in self.children:
                l, r = self.children[v]
                stack.append(r)
                stack.append(l)
        return tuple(out)

    @cached_property
    def postorder(self) -> tuple[int, ...]:
        out = []

        def walk(v):
            if v in self.children:
                l, r = self.children[v]
                walk(l)
                walk(r)
            out.append(v)

        walk(self.root)
        return tuple(out)

    @cached_property
    def parent(self) -> dict[int, int]:
        return {c: v for v, pair in self.children.items() for c in pair}

    @cached_property
    def depth(self) -> dict[int, int]:
        d = {self.root: 0}
        for v in self.nodes:
            for c in self.children.get(v, ()):
                d[c] = d[v] + 1
        return d

    @cached_property
    def variables(self) -> tuple[str, ...]:
        """Leaf variables read left to right."""
        return tuple(self.labels[v] for v in self.nodes if self.is_leaf(v))

    @cached_property
    def leaf_of(self) -> dict[str, int]:
        return {x: v for v, x in self.labels.items()}

    @cached_property
    def _vars(self) -> dict[int, tuple[str, ...]]:
        out = {}
        for v in self.postorder:
            if self.is_leaf(v):
                out[v] = (self.labels[v],)
            else:
                l, r = self.children[v]
                out[v] = out[l] + out[r]
        return out

    def vars_of(self, v: int) -> tuple[str, ...]:
        """Variables below ``v``, left to right."""
        return self._vars[v]

    @cached_property
    def _varsets(self) -> dict[int, frozenset]:
        return {v: frozenset(xs) for v, xs in self._vars.items()}

    def varset(self, v: int) -> frozenset:
        return self._varsets[v]

    def leftmost_leaf(self, v: int | None = None) -> int:
        v = self.root if v is None else v
        while v in self.children:
            v = self.children[v][0]
        return v

    def is_descendant(self, u: int, v: int) -> bool:
        """True iff ``u`` is ``v`` or lies below it."""
        du, dv = self.depth[u], self.depth[v]
        while du > dv:
            u = self.parent[u]
            du -= 1
        return u == v

    def lca(self, u: int, v: int) -> int:
        while self.depth[u] > self.depth[v]:
            u = self.parent[u]
        while self.depth[v] > self.depth[u]:
            v = self.parent[v]
        while u != v:
            u, v = self.parent[u], self.parent[v]
        return u

    def leaf(self, x: str) -> int:
        try:
            return self.leaf_of[x]
        except KeyError:
            raise VariableNotInVtree(f"variable {x} is not in the vtree") from None

    # serialization

    def to_json(self, v=None, extra=None) -> dict:
        """Recursive node dict; ``extra(v)`` may add per-node keys."""
        v = self.root if v is None else v
        node = {"id": v}
        if extra is not None:
            node.update(extra(v))
        if self.is_leaf(v):
            node["var"] = self.labels[v]
        else:
            l, r = self.children[v]
            node["left"] = self.to_json(l, extra)
            node["right"] = self.to_json(r, extra)
        return node
