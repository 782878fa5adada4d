"""Writes T3CUBE.json: the unit cube with opposite faces identified, cut into six
tetrahedra 000 -> e_s1 -> e_s1+e_s2 -> 111, one per permutation s of the axes."""
import itertools
import json
import pathlib

AXES = "xyz"
tets = []
for s in itertools.permutations(range(3)):
    p = [(0, 0, 0)]
    for a in s:
        q = list(p[-1])
        q[a] = 1
        p.append(tuple(q))
    tets.append(p)


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


shifts = list(itertools.product((-1, 0, 1), repeat=3))
doc_tets = []
for i, p in enumerate(tets):
    gluings = []
    for f in range(4):
        face = [v for v in range(4) if v != f]
        found = []
        for j, q in enumerate(tets):
            for g in range(4):
                if (i, f) == (j, g):
                    continue
                other = [v for v in range(4) if v != g]
                for t in shifts:
                    image = {add(p[v], t): v for v in face}
                    if set(image) == {q[w] for w in other}:
                        perm = [0] * 4
                        for v in face:
                            perm[v] = next(w for w in other if q[w] == add(p[v], t))
                        perm[f] = g
                        found.append({"tet": j, "perm": perm})
        assert len(found) == 1, (i, f, found)
        gluings.append(found[0])
    labels = []
    for u, v in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]:
        d = [b - a for a, b in zip(p[u], p[v])]
        labels.append("".join(AXES[k] for k in range(3) if d[k]))
    doc_tets.append({"gluings": gluings, "edge_labels": labels})

doc = {
    "name": "T3CUBE",
    "dimension": 3,
    "generators": ["x", "y", "z"],
    "tetrahedra": doc_tets,
}
out = pathlib.Path(__file__).with_name("T3CUBE.json")
tet_lines = ",\n    ".join(json.dumps(t) for t in doc_tets)
head = json.dumps({k: v for k, v in doc.items() if k != "tetrahedra"})[:-1]
out.write_text(head + ',\n  "tetrahedra": [\n    ' + tet_lines + "\n  ]\n}\n")
