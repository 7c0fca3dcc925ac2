"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or directly with
``python tests/test_acceptance.py``.
"""

import contextlib
import io
import random
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import pytest

from oracles import DATA, fig1_triple_sum, naive_contract, ttn_sum_over_indices
from pbkc import circuit as C
from pbkc import evdd as E
from pbkc import tt as T
from pbkc import ttn as N
from pbkc.circuit import Verdict
from pbkc.cli import main
from pbkc.dense import DenseTensor, assignments, contract, tabulate, tabulate_all
from pbkc.generate import GeneratorSpec, generate
from pbkc.io import load
from pbkc.semiring import rel_close


def _tables(rep):
    return [f.values for f in tabulate_all(rep)]


def _gen(kind, n, max_dim, density, flavor, seed, semiring="rational"):
    return generate(GeneratorSpec(kind, n, max_dim, density, flavor, seed, semiring)).body


def _ttn_oracle(t):
    K = t.semiring
    cols = [[] for _ in range(t.num_outputs)]
    for bits in assignments(t.n):
        alpha = dict(zip(t.variables, bits))
        vals = ttn_sum_over_indices(t.tree.children, t.tree.labels, t.d, t.tensors,
                                    t.tree.root, alpha, K.zero, K.one)
        for k, v in enumerate(vals):
            cols[k].append(v)
    return [tuple(c) for c in cols]


def _tts():
    """The 200 tensor trains shared by criteria 2 and 4."""
    out = []
    for seed in range(200):
        density = (0.3, 0.7, 1.0)[seed % 3]
        out.append((density, _gen("tt", 1 + seed % 6, 4, density, "any", seed)))
    return out


def criterion_1():
    start = time.perf_counter()
    t = load(DATA / "fig1-ttn.json").body
    got = _tables(t)
    want = fig1_triple_sum()
    f2 = dict(zip(assignments(2), got[1]))
    checks = {
        "table = triple-sum oracle": got == want,
        "f2(0,1) = 3": f2[(0, 1)] == 3,
        "f2(1,1) = 2": f2[(1, 1)] == 2,
    }
    elapsed = time.perf_counter() - start
    checks["< 1 s"] = elapsed < 1
    failed = [k for k, ok in checks.items() if not ok]
    detail = f"f1={_fmt(got[0])} f2={_fmt(got[1])}; {elapsed:.3f}s"
    if failed:
        detail += f"; failed: {', '.join(failed)} (f2(1,1) is {f2[(1, 1)]})"
    return not failed, detail


def _fmt(vals):
    return "(" + ", ".join(str(Fraction(v)) for v in vals) + ")"


def criterion_2():
    start = time.perf_counter()
    bad = []
    dense = 0
    for i, (density, tt) in enumerate(_tts()):
        g = T.to_evdd(tt)
        f = tabulate(tt).values
        if not (tabulate(g).values == f == tabulate(E.to_tt(g)).values):
            bad.append(f"tt#{i} tables")
        if density == 1.0:
            dense += 1
            if g.node_count != sum(tt.bond):
                bad.append(f"tt#{i} nodes {g.node_count} != {sum(tt.bond)}")
    elapsed = time.perf_counter() - start
    if elapsed >= 30:
        bad.append(f"runtime {elapsed:.1f}s")
    return not bad, f"200 TTs ({dense} dense), {elapsed:.2f}s" + _fails(bad)


def _fails(bad):
    return f"; {len(bad)} failures: {bad[:3]}" if bad else ""


def criterion_3():
    bad = []
    dense = 0
    for seed in range(100):
        density = (0.5, 0.8, 1.0)[seed % 3]
        t = _gen("ttn", 1 + seed % 6, 3, density, "any", seed)
        want = _ttn_oracle(t)
        c = N.to_circuit(t)
        back = C.to_ttn(c)
        if _tables(t) != want or _tables(c) != want or _tables(back) != want:
            bad.append(f"ttn#{seed} tables")
        if back.d != t.d:
            bad.append(f"ttn#{seed} d")
        if density == 1.0:
            dense += 1
            per = C.gate_counts_by_node(c)
            for v, expected in N.gate_count_formula(t).items():
                if per[v]["plus"] + per[v]["times"] != expected:
                    bad.append(f"ttn#{seed} gates at {v}")
    return not bad, f"100 TTNs ({dense} dense)" + _fails(bad)


def criterion_4():
    bad = []
    agree = {True: 0, False: 0}
    for i, (_, tt) in enumerate(_tts()):
        a = T.check_deterministic(tt)
        if a != E.check_deterministic(T.to_evdd(tt)):
            bad.append(f"tt#{i}")
        agree[a] += 1
    for seed in range(100):
        g = _gen("evdd", 1 + seed % 6, 3, 0.8, "deterministic", seed)
        if not (E.check_deterministic(g) and T.check_deterministic(E.to_tt(g))):
            bad.append(f"evdd#{seed}")
    return not bad, (f"200 TTs ({agree[True]} deterministic, {agree[False]} not), "
                     f"100 deterministic EVDDs" + _fails(bad))


def criterion_5():
    bad = []
    for seed in range(50):
        t = _gen("ttn", 1 + seed % 6, 3, 0.7, "decision", seed)
        if not (N.check_decision(t) and C.check_decision(N.to_circuit(t))):
            bad.append(f"ttn#{seed}")
        c = _gen("circuit", 1 + seed % 6, 3, 0.7, "decision", seed)
        if not (C.check_decision(c) and N.check_decision(C.to_ttn(c))):
            bad.append(f"circuit#{seed}")
    return not bad, "50 decision TTNs, 50 decision circuits" + _fails(bad)


def _exhaustively_deterministic(t):
    # every slice pair must have a child pair whose hat columns never overlap
    K = t.semiring
    for v, (l, r) in t.tree.children.items():
        hats = {}
        for c in (l, r):
            h = N.hat_tensor(t, c)
            rows, cols = h.dims
            hats[c] = [[h.entries[x * cols + k] for x in range(rows)] for k in range(cols)]
        for k in range(t.d[v]):
            keys = [(i, j) for (i, j, kk) in t.tensors[v] if kk == k]
            for a in range(len(keys)):
                for b in range(a + 1, len(keys)):
                    (i1, j1), (i2, j2) = keys[a], keys[b]
                    lo = all(K.is_zero(K.mul(x, y)) for x, y in zip(hats[l][i1], hats[l][i2]))
                    ro = all(K.is_zero(K.mul(x, y)) for x, y in zip(hats[r][j1], hats[r][j2]))
                    if not (lo or ro):
                        return False
    return True


def criterion_6():
    bad = []
    for seed in range(50):
        n = 1 + seed % 8
        t = _gen("ttn", n, 3, 0.7, "deterministic", seed)
        if not _exhaustively_deterministic(t):
            bad.append(f"ttn#{seed} not deterministic")
        elif C.check_deterministic(N.to_circuit(t), "semantic") != Verdict.YES:
            bad.append(f"ttn#{seed}")
        c = _gen("circuit", n, 3, 0.7, "deterministic", seed)
        if C.check_deterministic(c, "semantic") != Verdict.YES:
            bad.append(f"circuit#{seed} not deterministic")
        elif N.check_deterministic(C.to_ttn(c), "semantic") != Verdict.YES:
            bad.append(f"circuit#{seed}")
    matrix = {}
    for seed in range(500):
        flavor = ("any", "deterministic", "decision")[seed % 3]
        c = _gen("circuit", 1 + seed % 8, 3, 0.7, flavor, seed)
        s = C.check_deterministic(c, "structural")
        m = C.check_deterministic(c, "semantic")
        matrix[(s.value, m.value)] = matrix.get((s.value, m.value), 0) + 1
        if s == Verdict.YES and m == Verdict.NO:
            bad.append(f"matrix#{seed}")
    cells = " ".join(f"{s}/{m}:{k}" for (s, m), k in sorted(matrix.items()))
    return not bad, f"50+50 conversions; structural/semantic {cells}" + _fails(bad)


def criterion_7():
    bad = []
    seed = 0
    found = 0
    while found < 100:
        g = _gen("evdd", 2 + seed % 5, 3, 0.8, "any", seed)
        seed += 1
        if E.check_complete(g):
            continue
        found += 1
        h = E.complete(g)
        if tabulate(h).values != tabulate(g).values:
            bad.append(f"evdd seed {seed - 1}")
        if not E.check_complete(h) or E.complete(h) is not h:
            bad.append(f"evdd seed {seed - 1} idempotence")
    return not bad, f"100 EVDDs with skips (from {seed} seeds)" + _fails(bad)


def _rand_tensor(rng, semiring, dims):
    size = 1
    for d in dims:
        size *= d
    if semiring == "rational":
        vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(size)]
    else:
        vals = [rng.uniform(-5, 5) for _ in range(size)]
    return DenseTensor(semiring, dims, vals)


def criterion_8():
    bad = []
    for semiring in ("rational", "float64"):
        rng = random.Random(2024)
        for i in range(100):
            a_dims = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 4)))
            b_dims = [rng.randint(1, 4) for _ in range(rng.randint(1, 4))]
            k, l = rng.randint(1, len(a_dims)), rng.randint(1, len(b_dims))
            b_dims[l - 1] = a_dims[k - 1]
            A = _rand_tensor(rng, semiring, a_dims)
            B = _rand_tensor(rng, semiring, tuple(b_dims))
            got = contract(A, k, B, l)
            want, dims = naive_contract(A.entries, A.dims, k, B.entries, B.dims, l)
            if semiring == "rational":
                ok = list(got.entries) == want
            else:
                ok = all(rel_close(x, y, 1e-12) for x, y in zip(got.entries, want))
            if got.dims != dims or not ok:
                bad.append(f"{semiring}#{i}")
    return not bad, "100 rational pairs exact, 100 float64 pairs rel 1e-12" + _fails(bad)


def _cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = main([str(a) for a in argv])
    return code, buf.getvalue()


def criterion_9():
    fig1, fig1c = DATA / "fig1-ttn.json", DATA / "fig1-circuit.json"
    fig2, fig2t = DATA / "fig2-evdd.json", DATA / "fig2-tt.json"
    bad = []
    with tempfile.TemporaryDirectory() as tmp:
        c_out, t_out = Path(tmp) / "fig1-c.json", Path(tmp) / "fig2-t.json"
        expect = [
            (("convert", fig1, "--to", "circuit", "-o", c_out), 0, ""),
            (("compare", fig1, c_out), 0, "equal\n"),
            (("compare", c_out, fig1c), 0, "equal\n"),
            (("convert", fig2, "--to", "tt", "-o", t_out), 0, ""),
            (("compare", fig2, t_out), 0, "equal\n"),
            (("compare", fig2t, t_out), 0, "equal\n"),
            (("compare", fig1, fig2), 1, "different\n"),
            (("eval", fig1, "-a", "01", "--output", 2), 0, "3\n"),
            (("eval", fig1, "-a", "10"), 0, "6\n3/2\n"),
            (("eval", fig2, "-a", "0000"), 0, None),
            (("check", fig2, "--property", "deterministic"), 1, "no\n"),
            (("check", fig2, "--property", "ordered"), 0, "yes\n"),
            (("check", fig1c, "--property", "structured"), 0, "yes\n"),
            (("check", fig1, "--property", "deterministic", "--mode", "structural"), 3,
             "unknown\n"),
            (("info", fig2t), 0, None),
            (("convert", fig1, "--to", "tt", "-o", Path(tmp) / "x.json"), 2, ""),
            (("eval", fig1, "-a", "011"), 2, ""),
        ]
        for argv, code, out in expect:
            got_code, got_out = _cli(*argv)
            if got_code != code or (out is not None and got_out != out):
                bad.append(f"{argv[0]} {Path(str(argv[1])).name}: exit {got_code} "
                           f"out {got_out!r}")
        _, text = _cli("info", fig2t)
        if "bond: 1 2 3 2 1" not in text or "evdd_nodes: 9" not in text:
            bad.append("info fig2-tt")
    return not bad, f"{len(expect)} CLI invocations" + _fails(bad)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9]


def _line(i, ok, detail):
    return f"criterion {i}: {'PASS' if ok else 'FAIL'} {detail}"


@pytest.mark.parametrize("i", range(1, len(CRITERIA) + 1))
def test_criterion(i, capsys):
    ok, detail = CRITERIA[i - 1]()
    with capsys.disabled():
        print("\n" + _line(i, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        results.append(ok)
        print(_line(i, ok, detail), flush=True)
    print(f"{sum(results)}/{len(results)} criteria pass")
    raise SystemExit(0 if all(results) else 1)
