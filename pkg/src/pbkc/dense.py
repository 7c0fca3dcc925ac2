"""Brute-force ground truth: dense tensors, contraction, and exhaustive tables.

Assignments are tuples of bits ``(a1, ..., an)`` and are indexed big-endian,
``index(a) = sum(a_r * 2**(n - r))``, so ``x1`` is the most significant bit.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from math import prod
from typing import Iterator, Mapping, Sequence

from .errors import (
    DimMismatch,
    LengthMismatch,
    MissingOutputIndex,
    SemiringMismatch,
    ShapeMismatch,
    TooManyVariables,
    UnassignedVariable,
)
from .semiring import Semiring, get_semiring

DEFAULT_MAX_VARS = 20
MAX_VARS_ENV = "PBKC_MAX_VARS"


def default_cap() -> int:
    """Oracle cap on the number of tabulated variables (env-overridable)."""
    raw = os.environ.get(MAX_VARS_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{MAX_VARS_ENV} must be an integer, got {raw!r}") from None
    return DEFAULT_MAX_VARS


def assignments(n: int) -> Iterator[tuple[int, ...]]:
    """All assignments to n variables, in index order."""
    return itertools.product((0, 1), repeat=n)


def index_of(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    return idx


def bits_of(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> (n - 1 - r)) & 1 for r in range(n))


def parse_bitstring(s: str) -> tuple[int, ...]:
    if not s or any(c not in "01" for c in s):
        raise ValueError(f"assignment must be a nonempty string of 0/1, got {s!r}")
    return tuple(int(c) for c in s)


def resolve_assignment(alpha, variables: Sequence[str], needed=None) -> dict[str, int]:
    """Turn a bit sequence aligned with ``variables`` or a mapping into a dict.

    ``needed`` lists the variables that must be assigned.
    """
    if isinstance(alpha, Mapping):
        out = {}
        for k, v in alpha.items():
            if v not in (0, 1):
                raise ValueError(f"variable {k} assigned non-bit {v!r}")
            out[k] = int(v)
    else:
        bits = tuple(alpha)
        if len(bits) != len(variables):
            raise LengthMismatch(
                f"assignment has {len(bits)} bits, expected {len(variables)}")
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"assignment bits must be 0/1, got {b!r}")
        out = dict(zip(variables, (int(b) for b in bits)))
    for x in (variables if needed is None else needed):
        if x not in out:
            raise UnassignedVariable(f"variable {x} is not assigned")
    return out


@dataclass(frozen=True)
class DenseTensor:
    """Row-major dense tensor; ``dims == ()`` is a scalar with one entry."""

    semiring: Semiring
    dims: tuple[int, ...]
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "semiring", get_semiring(self.semiring))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "entries", tuple(self.entries))
        if any(d < 1 for d in self.dims):
            raise DimMismatch(f"dimensions must be positive, got {self.dims}")
        if len(self.entries) != prod(self.dims):
            raise DimMismatch(
                f"{len(self.entries)} entries for dims {self.dims} "
                f"(expected {prod(self.dims)})")

    @classmethod
    def from_nested(cls, semiring, nested) -> "DenseTensor":
        semiring = get_semiring(semiring)
        dims = []
        probe = nested
        while isinstance(probe, (list, tuple)):
            dims.append(len(probe))
            probe = probe[0]
        flat = []

        def walk(x, depth):
            if depth == len(dims):
                flat.append(semiring.coerce(x))
                return
            if not isinstance(x, (list, tuple)) or len(x) != dims[depth]:
                raise DimMismatch("ragged nested tensor")
            for y in x:
                walk(y, depth + 1)

        walk(nested, 0)
        return cls(semiring, tuple(dims), tuple(flat))

    @property
    def order(self) -> int:
        return len(self.dims)

    def strides(self) -> tuple[int, ...]:
        out = []
        s = 1
        for d in reversed(self.dims):
            out.append(s)
            s *= d
        return tuple(reversed(out))

    def __getitem__(self, index):
        if not isinstance(index, tuple):
            index = (index,)
        if len(index) != len(self.dims):
            raise IndexError(f"expected {len(self.dims)} indices, got {len(index)}")
        flat = 0
        for i, d in zip(index, self.dims):
            if not 0 <= i < d:
                raise IndexError(f"index {index} out of range for {self.dims}")
            flat = flat * d + i
        return self.entries[flat]

    def to_nested(self):
        def build(offset, depth):
            if depth == len(self.dims):
                return self.entries[offset]
            step = prod(self.dims[depth + 1:])
            return [build(offset + i * step, depth + 1) for i in range(self.dims[depth])]
        return build(0, 0)

    def reshape(self, dims) -> "DenseTensor":
        return DenseTensor(self.semiring, tuple(dims), self.entries)

    def transpose(self, perm: Sequence[int]) -> "DenseTensor":
        """Permute axes (0-based): result axis a is source axis perm[a]."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.order)):
            raise DimMismatch(f"bad permutation {perm} for order {self.order}")
        new_dims = tuple(self.dims[p] for p in perm)
        src_strides = self.strides()
        entries = []
        for idx in itertools.product(*(range(d) for d in new_dims)):
            flat = sum(i * src_strides[p] for i, p in zip(idx, perm))
            entries.append(self.entries[flat])
        return DenseTensor(self.semiring, new_dims, tuple(entries))


def contract(A: DenseTensor, k: int, B: DenseTensor, l: int) -> DenseTensor:
    """Contract axis ``k`` of A with axis ``l`` of B (both 1-based).

    Result axes are A's remaining axes in order, then B's remaining axes.
    """
    if A.semiring is not B.semiring:
        raise SemiringMismatch(f"{A.semiring.name} vs {B.semiring.name}")
    if not 1 <= k <= A.order or not 1 <= l <= B.order:
        raise DimMismatch(f"axes ({k}, {l}) out of range for orders ({A.order}, {B.order})")
    if A.dims[k - 1] != B.dims[l - 1]:
        raise DimMismatch(
            f"contracted dims differ: {A.dims[k - 1]} vs {B.dims[l - 1]}")
    K = A.semiring
    # Move the contracted axis last in A and first in B, then it is a matmul.
    a_perm = [i for i in range(A.order) if i != k - 1] + [k - 1]
    b_perm = [l - 1] + [i for i in range(B.order) if i != l - 1]
    At = A.transpose(a_perm)
    Bt = B.transpose(b_perm)
    m = A.dims[k - 1]
    rows = len(At.entries) // m
    cols = len(Bt.entries) // m
    a, b = At.entries, Bt.entries
    out = []
    for r in range(rows):
        arow = a[r * m:(r + 1) * m]
        for c in range(cols):
            acc = K.zero
            for t in range(m):
                acc = K.add(acc, K.mul(arow[t], b[t * cols + c]))
            out.append(acc)
    dims = tuple(At.dims[:-1]) + tuple(Bt.dims[1:])
    return DenseTensor(K, dims, tuple(out))


def elementwise_product(A: DenseTensor, B: DenseTensor) -> DenseTensor:
    if A.semiring is not B.semiring:
        raise SemiringMismatch(f"{A.semiring.name} vs {B.semiring.name}")
    if A.dims != B.dims:
        raise DimMismatch(f"dims differ: {A.dims} vs {B.dims}")
    K = A.semiring
    return DenseTensor(K, A.dims, tuple(K.mul(x, y) for x, y in zip(A.entries, B.entries)))


@dataclass(frozen=True)
class DenseFunction:
    """Exhaustive 2**n value table of a pseudo-Boolean function."""

    semiring: Semiring
    variables: tuple[str, ...]
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "semiring", get_semiring(self.semiring))
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "values", tuple(self.values))
        if len(set(self.variables)) != len(self.variables):
            raise ShapeMismatch(f"duplicate variables in {self.variables}")
        if len(self.values) != 1 << len(self.variables):
            raise ShapeMismatch(
                f"table has {len(self.values)} entries for n={len(self.variables)}")

    @property
    def n(self) -> int:
        return len(self.variables)

    def __getitem__(self, bits) -> object:
        return self.values[index_of(bits)]

    def reorder(self, variables: Sequence[str]) -> "DenseFunction":
        """The same function tabulated under another variable order."""
        variables = tuple(variables)
        if sorted(variables) != sorted(self.variables):
            raise ShapeMismatch(f"variables {variables} vs {self.variables}")
        if variables == self.variables:
            return self
        pos = [self.variables.index(x) for x in variables]
        n = self.n
        vals = []
        for bits in assignments(n):
            src = [0] * n
            for p, b in zip(pos, bits):
                src[p] = b
            vals.append(self.values[index_of(src)])
        return DenseFunction(self.semiring, variables, tuple(vals))

    def support(self, tol=None) -> frozenset:
        K = self.semiring
        return frozenset(bits for bits, v in zip(assignments(self.n), self.values)
                         if not K.is_zero(v, tol))

    def to_json(self) -> dict:
        return {
            "kind": "dense",
            "semiring": self.semiring.name,
            "n": self.n,
            "vars": list(self.variables),
            "values": [self.semiring.to_json(v) for v in self.values],
        }


def equal(f: DenseFunction, g: DenseFunction, tol=None) -> bool:
    """Entrywise equality; exact semirings compare payloads, floats use tol."""
    if f.semiring is not g.semiring:
        raise SemiringMismatch(f"{f.semiring.name} vs {g.semiring.name}")
    if f.n != g.n:
        raise ShapeMismatch(f"n differs: {f.n} vs {g.n}")
    K = f.semiring
    tol = K.resolve_tol(tol)
    return all(K.close(a, b, tol) for a, b in zip(f.values, g.values))


def num_outputs(rep) -> int:
    return getattr(rep, "num_outputs", 1)


def tabulate(rep, output: int | None = None, cap: int | None = None) -> DenseFunction:
    """Exhaustively evaluate any representation over its variable order.

    ``output`` (0-based) selects a function of multi-output representations.
    """
    cap = default_cap() if cap is None else cap
    variables = tuple(rep.variables)
    if len(variables) > cap:
        raise TooManyVariables(f"{len(variables)} variables exceed the cap of {cap}")
    s = num_outputs(rep)
    if output is None:
        if s > 1:
            raise MissingOutputIndex(f"representation has {s} outputs; pick one")
        output = 0
    if not 0 <= output < s:
        raise IndexError(f"output {output} out of range for {s} outputs")
    values = tuple(rep.evaluate(bits, output) for bits in assignments(len(variables)))
    return DenseFunction(rep.semiring, variables, values)


def tabulate_all(rep, cap: int | None = None) -> list[DenseFunction]:
    return [tabulate(rep, k, cap) for k in range(num_outputs(rep))]
