"""Tensor trains (matrix product states) with sparse cores.

Core ``r`` (0-based here) stores entries ``(s, t, b) -> weight`` with
``s < bond[r]``, ``t < bond[r + 1]`` and physical bit ``b`` last. Entries
not listed are zero; exact zeros are dropped on construction.
"""

from __future__ import annotations

from functools import cached_property
from typing import Mapping, Sequence

from .dense import resolve_assignment
from .errors import InvariantViolation, LengthMismatch
from .semiring import Semiring, get_semiring


class TensorTrain:
    def __init__(self, semiring, bond: Sequence[int], cores: Sequence[Mapping]):
        self.semiring: Semiring = get_semiring(semiring)
        self.bond = tuple(int(c) for c in bond)
        K = self.semiring
        self.cores = tuple(
            {(int(s), int(t), int(b)): K.coerce(w) for (s, t, b), w in core.items()
             if not K.is_zero(K.coerce(w), 0.0)}
            for core in cores)
        self._validate()

    def _validate(self):
        n = len(self.cores)
        if n < 1:
            raise InvariantViolation("n >= 1", "a tensor train needs at least one core")
        if len(self.bond) != n + 1:
            raise InvariantViolation(
                "len(bond) = n+1", f"{len(self.bond)} bond entries for {n} cores")
        if self.bond[0] != 1 or self.bond[-1] != 1:
            raise InvariantViolation(
                "χ_1=χ_{n+1}=1", f"got χ_1={self.bond[0]}, χ_{{n+1}}={self.bond[-1]}")
        if any(c < 1 for c in self.bond):
            raise InvariantViolation("bond dimensions are positive", f"bond={self.bond}")
        for r, core in enumerate(self.cores):
            for s, t, b in core:
                if not (0 <= s < self.bond[r] and 0 <= t < self.bond[r + 1] and b in (0, 1)):
                    raise InvariantViolation(
                        "core indices within declared bond dims",
                        f"entry ({s + 1},{t + 1},{b}) of core {r + 1} "
                        f"with shape {self.bond[r]}x{self.bond[r + 1]}x2")

    @classmethod
    def from_dense_cores(cls, semiring, cores) -> "TensorTrain":
        """Build from nested cores ``core[s][t][b]`` (0-based)."""
        K = get_semiring(semiring)
        bond = [len(cores[0])] + [len(core[0]) for core in cores]
        sparse = []
        for core in cores:
            sparse.append({(s, t, b): K.coerce(core[s][t][b])
                           for s in range(len(core))
                           for t in range(len(core[s]))
                           for b in (0, 1)})
        return cls(K, bond, sparse)

    @property
    def n(self) -> int:
        return len(self.cores)

    @cached_property
    def variables(self) -> tuple[str, ...]:
        return tuple(f"x{r + 1}" for r in range(self.n))

    num_outputs = 1

    @cached_property
    def _slices(self):
        # per core, per bit: list of (s, t, w)
        out = []
        for core in self.cores:
            by_bit = ([], [])
            for (s, t, b), w in sorted(core.items()):
                by_bit[b].append((s, t, w))
            out.append(by_bit)
        return tuple(out)

    def entry(self, r: int, s: int, t: int, b: int):
        return self.cores[r].get((s, t, b), self.semiring.zero)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cores)

    def evaluate(self, alpha, output: int = 0):
        """Left-to-right product of the matrices A(r)[., ., alpha_r]."""
        if output != 0:
            raise IndexError("a tensor train has a single output")
        if isinstance(alpha, Mapping):
            a = resolve_assignment(alpha, self.variables)
            bits = tuple(a[x] for x in self.variables)
        else:
            bits = tuple(alpha)
            if len(bits) != self.n:
                raise LengthMismatch(f"assignment has {len(bits)} bits, expected {self.n}")
        K = self.semiring
        vec = [K.one]
        for r, b in enumerate(bits):
            nxt = [K.zero] * self.bond[r + 1]
            for s, t, w in self._slices[r][b]:
                nxt[t] = K.add(nxt[t], K.mul(vec[s], w))
            vec = nxt
        return vec[0]

    def __eq__(self, other):
        return (isinstance(other, TensorTrain) and self.semiring is other.semiring
                and self.bond == other.bond and self.cores == other.cores)

    def __repr__(self):
        return f"TensorTrain(n={self.n}, bond={self.bond}, semiring={self.semiring.name})"


def evaluate(tt: TensorTrain, alpha):
    return tt.evaluate(alpha)


def bond_dimension(tt: TensorTrain) -> int:
    return max(tt.bond)


def check_deterministic(tt: TensorTrain, tol=None) -> bool:
    """At most one nonzero entry per row of every slice A(r)[., ., b]."""
    K = tt.semiring
    tol = K.resolve_tol(tol)
    for core in tt.cores:
        rows = {}
        for (s, t, b), w in core.items():
            if not K.is_zero(w, tol):
                rows[(s, b)] = rows.get((s, b), 0) + 1
                if rows[(s, b)] > 1:
                    return False
    return True


def to_evdd(tt: TensorTrain, tol=None):
    """TT -> nd-EVDD: one node per virtual index, one edge per nonzero entry.

    Node ``v(r, s)`` gets id ``offset[r] + s``; level n+1 is the sink.
    """
    from .evdd import Edge, Evdd

    K = tt.semiring
    tol = K.resolve_tol(tol)
    offsets = []
    total = 0
    for chi in tt.bond:
        offsets.append(total)
        total += chi
    labels = {}
    for r in range(tt.n):
        for s in range(tt.bond[r]):
            labels[offsets[r] + s] = tt.variables[r]
    sink = offsets[tt.n]
    labels[sink] = None
    edges = []
    for r, core in enumerate(tt.cores):
        for (s, t, b), w in sorted(core.items(), key=lambda kv: (kv[0][0], kv[0][2], kv[0][1])):
            if not K.is_zero(w, tol):
                edges.append(Edge(offsets[r] + s, offsets[r + 1] + t, b, w))
    return Evdd(K, tt.variables, labels, source=offsets[0], sink=sink, edges=edges)
