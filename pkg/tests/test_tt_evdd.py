from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import DATA, evdd_path_sum, tt_chain_value
from pbkc import evdd as E
from pbkc import tt as T
from pbkc.dense import DenseTensor, assignments, contract, tabulate
from pbkc.errors import InvariantViolation, LengthMismatch, NotOrdered, UnassignedVariable
from pbkc.evdd import Edge, Evdd
from pbkc.generate import GeneratorSpec, generate
from pbkc.io import load
from pbkc.tt import TensorTrain

seeds = st.integers(0, 10 ** 6)


def rand_tt(seed, n=None, flavor="any", density=0.7):
    n = n or 1 + seed % 6
    return generate(GeneratorSpec("tt", n, 3, density, flavor, seed)).body


def rand_evdd(seed, flavor="any"):
    return generate(GeneratorSpec("evdd", 1 + seed % 6, 3, 0.8, flavor, seed)).body


# tensor trains


def test_single_core():
    tt = TensorTrain("integer", [1, 1], [{(0, 0, 0): 4, (0, 0, 1): 7}])
    assert tt.evaluate((0,)) == 4 and tt.evaluate((1,)) == 7


def test_rank_one_product():
    # f(x1, x2) = (1 + x1) * (2 + 3 x2)
    tt = TensorTrain("integer", [1, 1, 1], [
        {(0, 0, 0): 1, (0, 0, 1): 2},
        {(0, 0, 0): 2, (0, 0, 1): 5},
    ])
    assert tabulate(tt).values == (2, 5, 4, 10)


def test_bond_boundary_invariant():
    with pytest.raises(InvariantViolation) as e:
        TensorTrain("integer", [2, 1], [{}])
    assert e.value.invariant == "χ_1=χ_{n+1}=1"


def test_entry_out_of_shape():
    with pytest.raises(InvariantViolation):
        TensorTrain("integer", [1, 1], [{(0, 1, 0): 1}])


def test_eval_length_mismatch():
    tt = rand_tt(3, n=3)
    with pytest.raises(LengthMismatch):
        tt.evaluate((0, 1))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_tt_matches_index_chain_oracle(seed):
    tt = rand_tt(seed)
    K = tt.semiring
    for bits in assignments(tt.n):
        assert tt.evaluate(bits) == tt_chain_value(tt.bond, tt.cores, bits, K.zero, K.one)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_tt_matches_dense_contract_chain(seed):
    # contract the cores as dense tensors, then read the table
    tt = rand_tt(seed, n=1 + seed % 4, density=1.0)
    K = tt.semiring
    cores = []
    for r, core in enumerate(tt.cores):
        dims = (tt.bond[r], tt.bond[r + 1], 2)
        vals = [core.get((s, t, b), K.zero) for s in range(dims[0])
                for t in range(dims[1]) for b in (0, 1)]
        cores.append(DenseTensor(K, dims, vals))
    acc = cores[0]  # axes: left(1), right, x1
    for core in cores[1:]:
        # the running right bond is always axis 2; new axes: x.., right, x_new
        acc = contract(acc, 2, core, 1)
        order = acc.order
        perm = [0] + [order - 2] + list(range(1, order - 2)) + [order - 1]
        acc = acc.transpose(perm)
    # acc axes: left(1), right(1), x1..xn
    assert acc.entries == tabulate(tt).values


def test_bond_dimension_and_determinism():
    tt = TensorTrain("integer", [1, 2, 1], [
        {(0, 0, 0): 1, (0, 1, 0): 1},
        {(0, 0, 0): 1, (1, 0, 1): 1},
    ])
    assert T.bond_dimension(tt) == 2
    assert not T.check_deterministic(tt)
    tt2 = TensorTrain("integer", [1, 2, 1], [
        {(0, 0, 0): 1, (0, 1, 1): 1},
        {(0, 0, 0): 1, (1, 0, 1): 1},
    ])
    assert T.check_deterministic(tt2)


def test_float_determinism_uses_tolerance():
    tt = TensorTrain("float64", [1, 2, 1], [
        {(0, 0, 0): 1.0, (0, 1, 0): 1e-12},
        {(0, 0, 0): 1.0, (1, 0, 0): 1.0},
    ])
    assert T.check_deterministic(tt)
    assert not T.check_deterministic(tt, tol=1e-15)


def test_to_evdd_one_node_per_virtual_index():
    tt = rand_tt(11, n=4, density=1.0)
    g = T.to_evdd(tt)
    assert g.node_count == sum(tt.bond)
    assert g.edge_count == tt.nnz()
    assert E.check_ordered(g) and E.check_complete(g)


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([0.3, 0.7, 1.0]))
def test_tt_evdd_tt_roundtrip(seed, density):
    tt = rand_tt(seed, density=density)
    g = T.to_evdd(tt)
    back = E.to_tt(g)
    f = tabulate(tt).values
    assert tabulate(g).values == f
    assert tabulate(back).values == f
    assert T.check_deterministic(tt) == E.check_deterministic(g)


# decision diagrams


def fig2():
    return load(DATA / "fig2-evdd.json").body


def test_fig2_is_ordered_complete_but_not_deterministic():
    g = fig2()
    assert E.check_read_once(g)
    assert E.check_ordered(g)
    assert E.check_complete(g)
    assert not E.check_deterministic(g)


def test_fig2_level_two_slices():
    g = fig2()
    tt = E.to_tt(g)
    a00, a01, a11, a12 = F(1, 2), F(3, 4), F(-3, 2), F(1, 3)
    b00, b02, b12 = F(2, 3), F(-2), F(5)
    assert tt.bond == (1, 2, 3, 2, 1)
    slice0 = [[tt.entry(1, s, t, 0) for t in range(3)] for s in range(2)]
    slice1 = [[tt.entry(1, s, t, 1) for t in range(3)] for s in range(2)]
    assert slice0 == [[a00, a01, 0], [0, a11, a12]]
    assert slice1 == [[b00, 0, b02], [0, 0, b12]]
    assert tt == load(DATA / "fig2-tt.json").body


def test_fig2_matches_path_enumeration():
    g = fig2()
    for bits in assignments(4):
        alpha = dict(zip(g.variables, bits))
        want = evdd_path_sum(g.source, g.sink, g.labels, list(g.edges), alpha, F(0), F(1))
        assert g.evaluate(bits) == want


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_random_evdd_matches_path_enumeration(seed):
    g = rand_evdd(seed)
    K = g.semiring
    for bits in assignments(g.n):
        alpha = dict(zip(g.variables, bits))
        want = evdd_path_sum(g.source, g.sink, g.labels, list(g.edges), alpha, K.zero, K.one)
        assert g.evaluate(bits) == want


def test_skipped_variable_means_dont_care():
    # source reads x1, jumps straight to the sink: f ignores x2
    g = Evdd("integer", ["x1", "x2"], {0: "x1", 1: None}, 0, 1,
             [Edge(0, 1, 0, 2), Edge(0, 1, 1, 5)])
    assert tabulate(g).values == (2, 2, 5, 5)
    h = E.complete(g)
    assert E.check_complete(h) and not E.check_complete(g)
    assert tabulate(h).values == (2, 2, 5, 5)
    assert E.complete(h) is h


def test_source_below_first_variable_gets_padding():
    g = Evdd("integer", ["x1", "x2"], {0: "x2", 1: None}, 0, 1, [Edge(0, 1, 1, 3)])
    h = E.complete(g)
    assert h.labels[h.source] == "x1"
    assert tabulate(h).values == tabulate(g).values == (0, 3, 0, 3)


def test_parallel_edges_are_merged():
    g = Evdd("integer", ["x1"], {0: "x1", 1: None}, 0, 1,
             [Edge(0, 1, 0, 2), Edge(0, 1, 0, 3), Edge(0, 1, 1, 1), Edge(0, 1, 1, -1)])
    # parallel edges are one edge after merging, so still deterministic
    assert E.check_deterministic(Evdd("integer", ["x1"], {0: "x1", 1: None}, 0, 1,
                                      [Edge(0, 1, 0, 2), Edge(0, 1, 0, 3)]))
    h = E.normalize_parallel_edges(g)
    assert sorted(h.edges) == [Edge(0, 1, 0, 5)]
    assert E.check_deterministic(g)
    assert tabulate(E.to_tt(g)).values == (5, 0)


def test_unordered_rejected():
    g = Evdd("integer", ["x1", "x2"], {0: "x2", 1: "x1", 2: None}, 0, 2,
             [Edge(0, 1, 0, 1), Edge(1, 2, 0, 1)])
    assert E.check_read_once(g) and not E.check_ordered(g)
    with pytest.raises(NotOrdered):
        E.to_tt(g)
    with pytest.raises(NotOrdered):
        E.complete(g)


def test_not_read_once():
    g = Evdd("integer", ["x1", "x2"], {0: "x1", 1: "x1", 2: None}, 0, 2,
             [Edge(0, 1, 0, 1), Edge(1, 2, 0, 1)])
    assert not E.check_read_once(g)


def test_invariants():
    with pytest.raises(InvariantViolation):
        Evdd("integer", ["x1"], {0: "x1", 1: None, 2: None}, 0, 1, [])
    with pytest.raises(InvariantViolation):
        Evdd("integer", ["x1"], {0: "x1", 1: None}, 0, 1, [Edge(1, 0, 0, 1)])
    with pytest.raises(InvariantViolation):
        Evdd("integer", ["x1"], {0: "x1", 1: "x1", 2: None}, 0, 2,
             [Edge(0, 1, 0, 1), Edge(1, 0, 0, 1)])


def test_partial_assignment():
    g = Evdd("integer", ["x1", "x2"], {0: "x1", 1: None}, 0, 1, [Edge(0, 1, 1, 4)])
    assert g.evaluate({"x1": 1}) == 4
    with pytest.raises(UnassignedVariable):
        g.evaluate({"x2": 1})


def test_trim_drops_dead_nodes():
    tt = TensorTrain("integer", [1, 2, 1], [{(0, 0, 0): 1}, {(0, 0, 1): 2}])
    g = T.to_evdd(tt)
    assert g.node_count == 4
    h = g.trim()
    assert h.node_count == 3
    assert tabulate(h).values == tabulate(g).values


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_completion_invariance(seed):
    g = rand_evdd(seed)
    h = E.complete(g)
    assert tabulate(h).values == tabulate(g).values
    assert E.check_complete(h)
    assert E.complete(h) is h


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_deterministic_evdd_gives_row_sparse_tt(seed):
    g = rand_evdd(seed, "deterministic")
    assert E.check_deterministic(g)
    tt = E.to_tt(g)
    assert T.check_deterministic(tt)
    assert tabulate(tt).values == tabulate(g).values


def test_zero_diagram():
    g = Evdd("integer", ["x1", "x2"], {0: "x1", 1: None}, 0, 1, [])
    tt = E.to_tt(g)
    assert tt.bond == (1, 1, 1)
    assert tabulate(tt).values == (0, 0, 0, 0)
