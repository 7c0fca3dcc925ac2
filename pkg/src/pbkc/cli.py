"""Command-line front end: ``pbkc convert|eval|check|compare|info|random``.

Exit codes: 0 success / yes / equal, 1 property false or functions differ,
2 usage, parse or unsupported-conversion errors, 3 undecided at the cap.
"""

from __future__ import annotations

import argparse
import sys

from . import circuit, evdd, tt, ttn
from .dense import DenseFunction, default_cap, parse_bitstring, tabulate_all
from .errors import (
    LengthMismatch,
    NotStructured,
    PbkcError,
    TooManyVariables,
    UnsupportedConversion,
)
from .generate import FLAVORS, GeneratorSpec, generate
from .io import Document, dumps, load, save

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3

ROUTES = {
    ("tt", "evdd"): tt.to_evdd,
    ("evdd", "tt"): evdd.to_tt,
    ("ttn", "circuit"): ttn.to_circuit,
    ("circuit", "ttn"): circuit.to_ttn,
}

PROPERTIES = ("read-once", "ordered", "complete", "deterministic", "decision",
              "decomposable", "structured")


def convert(doc: Document, target: str) -> Document:
    """Convert along the explicit routing table; same-kind is the identity."""
    if doc.kind == target:
        return doc
    route = ROUTES.get((doc.kind, target))
    if route is None:
        raise UnsupportedConversion(f"no conversion from {doc.kind} to {target}")
    return Document(target, doc.semiring, route(doc.body))


def tables(doc: Document, cap: int) -> list[DenseFunction]:
    if doc.kind == "dense":
        return [doc.body]
    return tabulate_all(doc.body, cap)


def compare(a: Document, b: Document, cap: int, tol=None) -> bool:
    if a.semiring is not b.semiring:
        raise PbkcError(f"semirings differ: {a.semiring.name} vs {b.semiring.name}")
    tol = a.semiring.resolve_tol(tol)
    fa, fb = tables(a, cap), tables(b, cap)
    if len(fa) != len(fb):
        return False
    K = a.semiring
    for f, g in zip(fa, fb):
        if set(f.variables) != set(g.variables):
            return False
        g = g.reorder(f.variables)
        if not all(K.close(x, y, tol) for x, y in zip(f.values, g.values)):
            return False
    return True


def check(doc: Document, prop: str, mode: str, cap: int, tol=None) -> str:
    """Answer ``yes``, ``no`` or ``unknown`` for a property of a document."""
    rep, kind = doc.body, doc.kind
    yn = lambda b: "yes" if b else "no"  # noqa: E731
    if prop in ("read-once", "ordered", "complete"):
        if kind == "evdd":
            fn = {"read-once": evdd.check_read_once, "ordered": evdd.check_ordered,
                  "complete": evdd.check_complete}[prop]
            return yn(fn(rep))
        if kind == "tt":
            return "yes"
    elif prop == "deterministic":
        if kind == "tt":
            return yn(tt.check_deterministic(rep, tol))
        if kind == "evdd":
            return yn(evdd.check_deterministic(rep))
        if kind == "ttn":
            return ttn.check_deterministic(rep, mode, cap, tol).value
        if kind == "circuit":
            return circuit.check_deterministic(rep, mode, cap, tol).value
    elif prop == "decision":
        if kind == "ttn":
            return yn(ttn.check_decision(rep, tol))
        if kind == "circuit":
            return yn(circuit.check_decision(rep))
    elif prop == "decomposable":
        if kind == "circuit":
            return yn(circuit.check_decomposable(rep))
        if kind == "ttn":
            return "yes"
    elif prop == "structured":
        if kind == "circuit":
            if rep.vtree is None:
                raise NotStructured("the circuit file carries no vtree")
            return yn(circuit.check_structured(rep))
        if kind == "ttn":
            return "yes"
    raise UnsupportedConversion(f"property {prop!r} is not defined for {kind}")


def info(doc: Document) -> list[tuple[str, object]]:
    rep = doc.body
    rows: list[tuple[str, object]] = [("kind", doc.kind), ("semiring", doc.semiring.name)]
    if doc.kind == "dense":
        rows += [("n", rep.n), ("variables", " ".join(rep.variables))]
        return rows
    rows += [("n", len(rep.variables)), ("variables", " ".join(rep.variables)),
             ("outputs", rep.num_outputs)]
    if doc.kind == "tt":
        rows += [("bond", " ".join(map(str, rep.bond))),
                 ("bond_dimension", tt.bond_dimension(rep)),
                 ("nonzeros", rep.nnz()),
                 ("evdd_nodes", sum(rep.bond))]
    elif doc.kind == "evdd":
        rows += [("nodes", rep.node_count), ("edges", rep.edge_count),
                 ("level_sizes", " ".join(map(str, rep.level_sizes())))]
        if evdd.check_ordered(rep):
            rows.append(("bond_dimension", max(max(1, s) for s in rep.level_sizes()[:-1])))
    elif doc.kind == "ttn":
        t = rep.tree
        rows += [("nodes", len(t.nodes)),
                 ("d", " ".join(f"{v}:{rep.d[v]}" for v in t.nodes)),
                 ("max_d", max(rep.d.values())),
                 ("nonzeros", rep.nnz())]
        formula = ttn.gate_count_formula(rep)
        if formula:
            rows.append(("dense_gates_per_internal_node",
                         " ".join(f"{v}:{formula[v]}" for v in t.nodes if v in formula)))
    elif doc.kind == "circuit":
        counts = rep.counts()
        rows += [(k, counts[k]) for k in ("gates", "inputs", "plus", "times", "edges")]
        rows.append(("vtree", "yes" if rep.vtree is not None else "no"))
        if rep.vtree is not None and circuit.check_structured(rep):
            per = circuit.gate_counts_by_node(rep)
            rows.append(("gates_per_vtree_node", " ".join(
                f"{v}:{sum(per[v].values())}" for v in rep.vtree.nodes)))
    return rows


def _tol(value):
    return None if value is None else float(value)


def _cap(value):
    return default_cap() if value is None else value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pbkc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="convert between representations")
    c.add_argument("input")
    c.add_argument("--to", required=True, choices=("tt", "ttn", "evdd", "circuit"))
    c.add_argument("-o", "--output", required=True)

    e = sub.add_parser("eval", help="evaluate at one assignment")
    e.add_argument("input")
    e.add_argument("-a", "--assignment", required=True, help="bits in variable order, e.g. 01")
    e.add_argument("--output", type=int, help="1-based output index")

    k = sub.add_parser("check", help="check a structural or semantic property")
    k.add_argument("input")
    k.add_argument("--property", required=True, choices=PROPERTIES)
    k.add_argument("--mode", default="semantic", choices=("semantic", "structural"))
    k.add_argument("--max-vars", type=int)
    k.add_argument("--tol")

    m = sub.add_parser("compare", help="exit 0 iff both files denote the same functions")
    m.add_argument("a")
    m.add_argument("b")
    m.add_argument("--max-vars", type=int)
    m.add_argument("--tol")

    i = sub.add_parser("info", help="print size statistics")
    i.add_argument("input")

    r = sub.add_parser("random", help="generate a seeded random instance")
    r.add_argument("--kind", required=True, choices=("tt", "ttn", "evdd", "circuit"))
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--max-dim", type=int, default=3)
    r.add_argument("--density", type=float, default=0.7)
    r.add_argument("--flavor", default="any", choices=FLAVORS)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--semiring", default="rational")
    r.add_argument("-o", "--output")
    return p


def _run(args) -> int:
    cmd = args.command
    if cmd == "convert":
        save(convert(load(args.input), args.to), args.output)
        return EXIT_OK
    if cmd == "eval":
        doc = load(args.input)
        rep = doc.body
        bits = parse_bitstring(args.assignment)
        if len(bits) != len(rep.variables):
            raise LengthMismatch(
                f"assignment has {len(bits)} bits, expected {len(rep.variables)}")
        if doc.kind == "dense":
            print(doc.semiring.format(rep[bits]))
            return EXIT_OK
        if args.output is None:
            picks = range(rep.num_outputs)
        else:
            if not 1 <= args.output <= rep.num_outputs:
                raise IndexError(
                    f"--output {args.output} out of range 1..{rep.num_outputs}")
            picks = [args.output - 1]
        for k in picks:
            print(doc.semiring.format(rep.evaluate(bits, k)))
        return EXIT_OK
    if cmd == "check":
        answer = check(load(args.input), args.property, args.mode, _cap(args.max_vars),
                       _tol(args.tol))
        print(answer)
        return {"yes": EXIT_OK, "no": EXIT_FALSE, "unknown": EXIT_UNKNOWN}[answer]
    if cmd == "compare":
        equal = compare(load(args.a), load(args.b), _cap(args.max_vars), _tol(args.tol))
        print("equal" if equal else "different")
        return EXIT_OK if equal else EXIT_FALSE
    if cmd == "info":
        for key, value in info(load(args.input)):
            print(f"{key}: {value}")
        return EXIT_OK
    if cmd == "random":
        spec = GeneratorSpec(args.kind, args.n, args.max_dim, args.density, args.flavor,
                             args.seed, args.semiring)
        doc = generate(spec)
        if args.output:
            save(doc, args.output)
        else:
            sys.stdout.write(dumps(doc))
        return EXIT_OK
    raise AssertionError(cmd)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return _run(args)
    except TooManyVariables as e:
        print(f"unknown: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (PbkcError, ValueError, IndexError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
