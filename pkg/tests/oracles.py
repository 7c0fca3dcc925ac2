"""Independent brute-force references used by the tests.

Nothing here imports the representation modules; inputs are plain nested
lists, dicts and Fractions.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "pbkc" / "data"


def naive_contract(a, a_dims, k, b, b_dims, l):
    """Nested-sum contraction over flat row-major entry lists (1-based axes)."""
    def flat(idx, dims):
        f = 0
        for i, d in zip(idx, dims):
            f = f * d + i
        return f

    a_rest = [d for i, d in enumerate(a_dims) if i != k - 1]
    b_rest = [d for i, d in enumerate(b_dims) if i != l - 1]
    out = []
    for ia in itertools.product(*(range(d) for d in a_rest)):
        for ib in itertools.product(*(range(d) for d in b_rest)):
            acc = None
            for t in range(a_dims[k - 1]):
                full_a = list(ia)
                full_a.insert(k - 1, t)
                full_b = list(ib)
                full_b.insert(l - 1, t)
                term = a[flat(full_a, a_dims)] * b[flat(full_b, b_dims)]
                acc = term if acc is None else acc + term
            out.append(acc)
    return out, tuple(a_rest + b_rest)


def fig1_raw():
    """Tensors of the two-leaf golden network, read straight from the golden JSON as 0-based dicts."""
    doc = json.loads((DATA / "fig1-ttn.json").read_text())
    tree = doc["tree"]
    left, right = tree["left"], tree["right"]
    tens = doc["tensors"]

    def leaf(node):
        return {(b, k - 1): Fraction(w) for b, k, w in tens[str(node["id"])]}

    root = {(i - 1, j - 1, k - 1): Fraction(w) for i, j, k, w in tens[str(tree["id"])]}
    return leaf(left), left["d"], leaf(right), right["d"], root, tree["d"]


def fig1_triple_sum():
    """f_k(x1, x2) = sum_i sum_j A_root[i,j,k] * A_l[x1,i] * A_r[x2,j]."""
    al, dl, ar, dr, root, dk = fig1_raw()
    tables = []
    for k in range(dk):
        col = []
        for x1, x2 in itertools.product((0, 1), repeat=2):
            total = Fraction(0)
            for i in range(dl):
                for j in range(dr):
                    total += (root.get((i, j, k), 0) * al.get((x1, i), 0)
                              * ar.get((x2, j), 0))
            col.append(total)
        tables.append(tuple(col))
    return tables


def evdd_path_sum(source, sink, labels, edges, alpha, zero, one):
    """Enumerate every source-to-sink path explicitly.

    ``edges`` is a list of (src, dst, bit, weight); ``alpha`` maps variable
    names to bits. A path counts only if every node it leaves reads the bit
    of the edge taken.
    """
    out = {}
    for e in edges:
        out.setdefault(e[0], []).append(e)
    total = zero

    def walk(v, acc):
        nonlocal total
        if v == sink:
            total = total + acc
            return
        for src, dst, bit, w in out.get(v, ()):
            if alpha[labels[v]] == bit:
                walk(dst, acc * w)

    walk(source, one)
    return total


def tt_chain_value(bond, cores, bits, zero, one):
    """Sum over all virtual index sequences of the product of core entries.

    ``cores[r]`` maps (s, t, b) -> weight, 0-based.
    """
    n = len(cores)
    total = zero
    for path in itertools.product(*(range(bond[r]) for r in range(1, n))):
        idx = (0,) + path + (0,)
        term = one
        for r in range(n):
            w = cores[r].get((idx[r], idx[r + 1], bits[r]))
            if w is None:
                term = None
                break
            term = term * w
        if term is not None:
            total = total + term
    return total


def ttn_sum_over_indices(tree_children, labels, d, tensors, root, alpha, zero, one):
    """Brute force over every labelling of tree edges with indices.

    ``tree_children[v] = (l, r)``; leaves carry ``labels[v]``. The value of
    output k is the sum, over all index choices for non-root nodes, of the
    product of tensor entries. Indices are chosen in postorder so a missing
    entry prunes the partial labelling early.
    """
    order = []

    def collect(v):
        for c in tree_children.get(v, ()):
            collect(c)
        order.append(v)

    collect(root)
    outs = [zero] * d[root]
    idx = {}

    def walk(pos, acc):
        if pos == len(order):
            outs[idx[root]] = outs[idx[root]] + acc
            return
        v = order[pos]
        for i in range(d[v]):
            if v in tree_children:
                l, r = tree_children[v]
                w = tensors[v].get((idx[l], idx[r], i))
            else:
                w = tensors[v].get((alpha[labels[v]], i))
            if w is None:
                continue
            idx[v] = i
            walk(pos + 1, acc * w)

    walk(0, one)
    return outs
