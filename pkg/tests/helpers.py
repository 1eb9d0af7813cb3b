"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from tropceresa.graph_core import TropicalCurve, genus, tropical_curve


def det_fraction(mat) -> Fraction:
    """Plain fraction Gaussian determinant; independent of the package SNF."""
    n = len(mat)
    mm = [[Fraction(x) for x in row] for row in mat]
    d = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if mm[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            mm[col], mm[piv] = mm[piv], mm[col]
            d = -d
        d *= mm[col][col]
        inv = 1 / mm[col][col]
        for r in range(col + 1, n):
            if mm[r][col]:
                f = mm[r][col] * inv
                mm[r] = [x - f * y for x, y in zip(mm[r], mm[col])]
    return d


def naive_snf_diag(mat) -> list[int]:
    """Textbook row/column reduction, used only as an oracle on small inputs."""
    a = [row[:] for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    t = 0
    while t < min(m, n):
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best, piv = abs(a[i][j]), (i, j)
        if piv is None:
            break
        a[t], a[piv[0]] = a[piv[0]], a[t]
        for row in a:
            row[t], row[piv[1]] = row[piv[1]], row[t]
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    for c in range(t, n):
                        a[i][c] -= q * a[t][c]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for r in range(m):
                        a[r][j] -= q * a[r][t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
            if dirty:
                continue
            fix = None
            for i in range(t + 1, m):
                if any(a[i][j] % a[t][t] for j in range(t + 1, n)):
                    fix = i
                    break
            if fix is None:
                break
            for c in range(t, n):
                a[t][c] += a[fix][c]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
        t += 1
    return [a[i][i] for i in range(min(m, n))]


def k4_curve(c=(1, 1, 1, 1, 1, 1)) -> TropicalCurve:
    """K4 with lengths in the conventional parameter order c1..c6."""
    c1, c2, c3, c4, c5, c6 = c
    return tropical_curve(
        [("a", 0), ("b", 0), ("c", 0), ("d", 0)],
        [
            ("t4", ("a", "d"), c4),
            ("t5", ("b", "d"), c5),
            ("t6", ("c", "d"), c6),
            ("u1", ("b", "c"), c1),
            ("u2", ("c", "a"), c2),
            ("u3", ("a", "b"), c3),
        ],
    )


def tl3_curve(c=(1,) * 9) -> TropicalCurve:
    c1, c2, c3, c4, c5, c6, c7, c8, c9 = c
    return tropical_curve(
        [(f"w{i}", 0) for i in range(6)],
        [
            ("t5", ("w0", "w1"), c5),
            ("t6", ("w1", "w2"), c6),
            ("t7", ("w2", "w3"), c7),
            ("t8", ("w3", "w4"), c8),
            ("t9", ("w4", "w5"), c9),
            ("u1", ("w2", "w1"), c1),
            ("u2", ("w1", "w0"), c2),
            ("u3", ("w5", "w0"), c3),
            ("u4", ("w5", "w0"), c4),
        ],
    )


def banana_curve(n_edges: int, lengths=None) -> TropicalCurve:
    lengths = [1] * n_edges if lengths is None else lengths
    return tropical_curve(
        [("u", 0), ("v", 0)],
        [(f"e{i}", ("u", "v"), lengths[i]) for i in range(n_edges)],
    )


def loop_chain_curve(n_loops: int, lengths=None) -> TropicalCurve:
    """Loops at consecutive vertices of a path."""
    edges = []
    verts = [(f"v{i}", 0) for i in range(n_loops)]
    for i in range(n_loops):
        edges.append((f"l{i}", (f"v{i}", f"v{i}"), 1))
        if i:
            edges.append((f"p{i}", (f"v{i-1}", f"v{i}"), 1))
    curve = tropical_curve(verts, edges)
    if lengths is not None:
        ids = [e.id for e in curve.sorted_edges()]
        curve = curve.with_lengths(dict(zip(ids, map(Fraction, lengths))))
    return curve


def random_curve(rng: random.Random, max_edges=8, min_genus=2, weights=True):
    """Random connected multigraph with the requested genus floor."""
    while True:
        nv = rng.randint(1, 5)
        vids = [f"v{i}" for i in range(nv)]
        edges = []
        eid = 0
        for i in range(1, nv):
            j = rng.randrange(i)
            edges.append((f"e{eid:02d}", (vids[i], vids[j]), rng.randint(1, 20)))
            eid += 1
        extra = rng.randint(1, max(1, max_edges - len(edges)))
        for _ in range(extra):
            u, v = rng.choice(vids), rng.choice(vids)
            edges.append((f"e{eid:02d}", (u, v), rng.randint(1, 20)))
            eid += 1
        if len(edges) > max_edges:
            continue
        wchoices = [0, 0, 0, 1] if weights else [0]
        curve = tropical_curve(
            [(v, rng.choice(wchoices)) for v in vids], edges
        )
        if genus(curve) >= min_genus:
            return curve


def random_posdef(g: int, rng: random.Random, spread=5):
    """Random symmetric positive definite integer matrix, entries in [-5, 5]."""
    while True:
        q = [[0] * g for _ in range(g)]
        for i in range(g):
            q[i][i] = rng.randint(1, spread)
            for j in range(i):
                q[i][j] = q[j][i] = rng.randint(-2, 2)
        mm = [row[:] for row in q]
        ok = True
        for t in range(1, g + 1):
            if det_fraction([row[:t] for row in mm[:t]]) <= 0:
                ok = False
                break
        if ok:
            return q


def random_unimodular(n: int, rng: random.Random, shears=8):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(shears):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            q = rng.randint(-2, 2)
            for t in range(n):
                m[i][t] += q * m[j][t]
    return m


def brute_spanning_trees(curve: TropicalCurve):
    """Independent enumeration over all edge subsets of size |V|-1."""
    nonloop = [e for e in curve.edges if e.ends[0] != e.ends[1]]
    need = len(curve.vertices) - 1
    found = []
    for combo in combinations(nonloop, need):
        parent = {v.id: v.id for v in curve.vertices}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        acyclic = True
        for e in combo:
            ru, rv = find(e.ends[0]), find(e.ends[1])
            if ru == rv:
                acyclic = False
                break
            parent[ru] = rv
        if acyclic and len({find(v.id) for v in curve.vertices}) == 1:
            found.append(tuple(sorted(e.id for e in combo)))
    return sorted(found) if need else [()]
