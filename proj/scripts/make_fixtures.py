"""Writes the bundled fixtures under data/ and re-checks the contextuality set
with integer arithmetic."""
import itertools
import json
import math
import pathlib

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

CABELLO = [
    [(0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)],
    [(0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0)],
    [(1, -1, 1, -1), (1, -1, -1, 1), (1, 1, 0, 0), (0, 0, 1, 1)],
    [(1, -1, 1, -1), (1, 1, 1, 1), (1, 0, -1, 0), (0, 1, 0, -1)],
    [(0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1), (1, 0, 0, -1)],
    [(1, -1, -1, 1), (1, 1, 1, 1), (1, 0, 0, -1), (0, 1, -1, 0)],
    [(1, 1, -1, 1), (1, 1, 1, -1), (1, -1, 0, 0), (0, 0, 1, 1)],
    [(1, 1, -1, 1), (-1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, -1)],
    [(1, 1, 1, -1), (-1, 1, 1, 1), (1, 0, 0, 1), (0, 1, -1, 0)],
]


def vid(v):
    return "v" + "".join("m" if x < 0 else str(x) for x in v)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def check_cabello():
    vecs = sorted({v for ctx in CABELLO for v in ctx})
    assert len(vecs) == 18
    for ctx in CABELLO:
        for u, v in itertools.combinations(ctx, 2):
            assert dot(u, v) == 0, (u, v)
    for v in vecs:
        assert sum(v in ctx for ctx in CABELLO) == 2, v
    idx = {v: i for i, v in enumerate(vecs)}
    orth = [(i, j) for i, j in itertools.combinations(range(18), 2) if dot(vecs[i], vecs[j]) == 0]
    sat = 0
    for mask in range(1 << 18):
        if any(sum(mask >> idx[v] & 1 for v in ctx) != 1 for ctx in CABELLO):
            continue
        if any(mask >> i & 1 and mask >> j & 1 for i, j in orth):
            continue
        sat += 1
    assert sat == 0, sat


def matrix(rows):
    n = len(rows)
    return {"rows": n, "cols": len(rows[0]),
            "entries": [[float(x.real), float(x.imag)] for r in rows for x in map(complex, r)]}


def outer(v):
    norm = sum(abs(x) ** 2 for x in v)
    return [[v[i] * complex(v[j]).conjugate() / norm for j in range(len(v))] for i in range(len(v))]


def add(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def write(name, obj):
    (DATA / name).write_text(json.dumps(obj, indent=1) + "\n")


def boolean(n):
    atoms = [chr(ord("a") + i) for i in range(n)]
    return {"atoms": atoms, "blocks": [atoms]}


def no_state():
    lines = [[(x, (m * x + c) % 3) for x in range(3)] for m in range(3) for c in range(3)]
    lines += [[(c, y) for y in range(3)] for c in range(3)]
    atoms, blocks, at_point = [], [], {}
    for k, line in enumerate(lines):
        block = []
        for x, y in line:
            a = f"f{x}{y}_{k}"
            atoms.append(a)
            block.append(a)
            at_point.setdefault((x, y), []).append(a)
        blocks.append(block)
    blocks += [at_point[p] for p in sorted(at_point)]
    # 12 line blocks sum to 12, 9 point blocks sum to 9 over the same atoms
    assert len(atoms) == 36 and len(blocks) == 21
    return {"atoms": atoms, "blocks": blocks}


def table3(cell):
    return {f"{a},{b}": cell(a, b) for a in "tTF" for b in "tTF"}


def table2(cell):
    return {f"{a},{b}": cell(a, b) for a in "tF" for b in "tF"}


def main():
    check_cabello()
    DATA.mkdir(exist_ok=True)
    write("ks_cabello18.json", {
        "dim": 4,
        "vectors": {vid(v): [[x, 0] for x in v] for v in sorted({v for c in CABELLO for v in c})},
        "contexts": [[vid(v) for v in c] for c in CABELLO],
    })
    write("ks_single_context.json", {
        "dim": 3,
        "vectors": {"x": [1, 0, 0], "y": [0, 1, 0], "z": [0, 0, 1]},
        "contexts": [["x", "y", "z"]],
    })
    for n in (2, 3, 4):
        write(f"boolean{n}.json", boolean(n))
    write("mo2.json", {"atoms": ["a", "a_perp", "b", "b_perp"], "blocks": [["a", "a_perp"], ["b", "b_perp"]]})
    write("no_state_ag23.json", no_state())
    # MO2 spelled out element by element
    write("mo2_explicit.json", {
        "elements": ["0", "a", "a_perp", "b", "b_perp", "1"],
        "leq": [["0", x] for x in ["a", "a_perp", "b", "b_perp", "1"]] + [[x, "1"] for x in ["a", "a_perp", "b", "b_perp"]],
        "ortho": {"0": "1", "a": "a_perp", "b": "b_perp"},
        "bottom": "0", "top": "1",
    })
    # pentagon: orthocomplemented, not orthomodular
    write("not_orthomodular.json", {
        "elements": ["0", "x", "y", "x_perp", "y_perp", "1"],
        "leq": [["0", e] for e in ["x", "y", "x_perp", "y_perp", "1"]]
               + [["x", "y"], ["y_perp", "x_perp"]] + [[e, "1"] for e in ["x", "y", "x_perp", "y_perp"]],
        "ortho": {"0": "1", "x": "x_perp", "y": "y_perp"},
        "bottom": "0", "top": "1",
    })

    # three-dimensional static configuration
    s = 1 / math.sqrt(2)
    write("static_state.json", {"kind": "density", **matrix(outer([0, 1, 0]))})
    write("static_bindings.json", {
        "P": {"kind": "projector", **matrix(outer([1, 0, 0]))},
        "Q": {"kind": "projector", **matrix(outer([s, s, 0]))},
        "P2": {"kind": "projector", **matrix(outer([0, 0, 1]))},
        "Q2": {"kind": "projector", **matrix(outer([s, s, 0]))},
    })
    (DATA / "static_formulas.txt").write_text("# equal inputs, unequal disjunctions\nP | Q\nP2 | Q2\n")
    # four-dimensional dynamic witness, alpha = beta = gamma = delta = 1/4
    write("dynamic_state.json", {"kind": "density", **matrix(outer([0.5, 0.5, 0.5, 0.5]))})
    e = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
    write("dynamic_bindings.json", {
        "P": {"kind": "projector", **matrix(add(outer(e[0]), outer(e[1])))},
        "Q": {"kind": "projector", **matrix(add(outer(e[1]), outer(e[2])))},
    })
    (DATA / "dynamic_formulas.txt").write_text("P & Q\nP | Q\n!P\n")
    # an entangled qubit pair with a local projector
    write("bell_state.json", {"kind": "density", **matrix(outer([s, 0, 0, s]))})

    write("three_valued_map.json", {"pieces": [
        {"lo": 0, "hi": 0, "label": "F"},
        {"lo": 0, "hi": 1, "lo_open": True, "hi_open": True, "label": "T"},
        {"lo": 1, "hi": 1, "label": "t"}]})
    write("two_valued_map.json", {"pieces": [
        {"lo": 0, "hi": 1, "hi_open": True, "label": "F"},
        {"lo": 1, "hi": 1, "label": "t"}]})
    write("corrupted_map.json", {"pieces": [
        {"lo": 0, "hi": 0, "label": "F"},
        {"lo": 0, "hi": 1, "lo_open": True, "hi_open": True, "label": "T"},
        {"lo": 1, "hi": 1, "label": "F"}]})

    three = {
        "values": ["t", "T", "F"], "designated": ["t"],
        "tables": {
            "not": {"t": ["F"], "T": ["T"], "F": ["t"]},
            "and": table3(lambda a, b: ["F"] if "F" in (a, b) else ["t", "T", "F"] if a == b == "t" else ["T", "F"]),
            "or": table3(lambda a, b: ["t"] if "t" in (a, b) else ["t", "T", "F"] if a == b == "F" else ["t", "T"]),
        }}
    write("three_valued.json", three)
    write("two_valued.json", {
        "values": ["t", "F"], "designated": ["t"],
        "tables": {
            "not": {"t": ["F"], "F": ["t", "F"]},
            "and": table2(lambda a, b: ["t", "F"] if a == b == "t" else ["F"]),
            "or": table2(lambda a, b: ["t"] if "t" in (a, b) else ["t", "F"]),
        }})
    write("classical.json", {
        "values": ["t", "F"], "designated": ["t"],
        "tables": {
            "not": {"t": ["F"], "F": ["t"]},
            "and": table2(lambda a, b: ["t"] if a == b == "t" else ["F"]),
            "or": table2(lambda a, b: ["t"] if "t" in (a, b) else ["F"]),
            "implies": table2(lambda a, b: ["F"] if (a, b) == ("t", "F") else ["t"]),
        }})

    (DATA / "gamma_pq.txt").write_text("p & q\n")
    (DATA / "delta_p.txt").write_text("p\n")
    (DATA / "delta_q_or_p.txt").write_text("q | p\n")
    (DATA / "empty.txt").write_text("# no formulas\n")


if __name__ == "__main__":
    main()
