"""Symplectic homology data of a tropical curve.

Fixes a symplectic basis (a_1..a_g, b_1..b_g) of the rank-2g lattice H:
pairs i <= h come from cycles of the graph (a_i the fundamental cycle over a
spanning tree, b_i the loop class of the i-th non-tree edge), and the last
g - h pairs are weight slots on which the edge-length form vanishes.  The
monodromy of the curve is the block-unipotent matrix [[I, 0], [Q, I]].

Sign convention: with the intersection pairing normalized to i(a_k, b_k) = 1,
single twists are composed with TWIST_SIGN = -1 so that the assembled
multitwist reproduces +Q in the lower-left block.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import intlinalg as la
from .errors import PreconditionError
from .graph_core import TropicalCurve, genus, graph_genus, spanning_trees

TWIST_SIGN = -1
CONVENTION = "i(a_k,b_k)=+1; twists composed with sign -1 (monodromy block +Q)"


@dataclass(frozen=True)
class HomologyBasis:
    g: int
    h: int
    tree_edges: tuple[str, ...]
    nontree_edges: tuple[str, ...]          # pair i <-> nontree_edges[i]
    cycles: tuple[tuple[tuple[str, int], ...], ...]  # signed edge vectors
    edge_loop_class: dict                   # edge id -> g-vector of b-coords
    convention: str = CONVENTION

    def cycle_dicts(self) -> list[dict]:
        return [dict(c) for c in self.cycles]

    def weight_pairs(self) -> int:
        return self.g - self.h


def homology_basis(curve: TropicalCurve, tree=None) -> HomologyBasis:
    """Deterministic symplectic basis; the tree defaults to the greedy
    lexicographic-by-id choice and any explicit spanning tree may be passed.
    """
    if genus(curve) < 2:
        raise PreconditionError("homology basis requires genus >= 2")
    h = graph_genus(curve)
    g = genus(curve)
    edges = curve.sorted_edges()
    if tree is None:
        tree_ids = _greedy_tree(curve)
    else:
        tree_ids = set(tree)
        if tuple(sorted(tree_ids)) not in spanning_trees(curve):
            raise PreconditionError("supplied edge set is not a spanning tree")
    nontree = [e for e in edges if e.id not in tree_ids]
    cycles = []
    for e in nontree:
        cyc = {e.id: 1}
        for eid, sgn in _tree_path(curve, tree_ids, e.ends[1], e.ends[0]):
            cyc[eid] = cyc.get(eid, 0) + sgn
        cycles.append({k: v for k, v in cyc.items() if v})
    loop_class = {}
    for e in edges:
        vec = [cycles[i].get(e.id, 0) for i in range(h)] + [0] * (g - h)
        loop_class[e.id] = tuple(vec)
    return HomologyBasis(
        g=g,
        h=h,
        tree_edges=tuple(sorted(tree_ids)),
        nontree_edges=tuple(e.id for e in nontree),
        cycles=tuple(tuple(sorted(c.items())) for c in cycles),
        edge_loop_class=loop_class,
    )


def _greedy_tree(curve: TropicalCurve) -> set[str]:
    parent = {v.id: v.id for v in curve.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for e in curve.sorted_edges():
        ru, rv = find(e.ends[0]), find(e.ends[1])
        if ru != rv:
            parent[ru] = rv
            tree.add(e.id)
    return tree


def _tree_path(curve: TropicalCurve, tree_ids, start, goal):
    """Signed edge walk from start to goal inside the tree."""
    if start == goal:
        return []
    adj: dict[str, list] = {}
    for e in curve.edges:
        if e.id in tree_ids:
            u, v = e.ends
            adj.setdefault(u, []).append((v, e.id, 1))
            adj.setdefault(v, []).append((u, e.id, -1))
    prev = {start: None}
    queue = [start]
    while queue:
        cur = queue.pop(0)
        if cur == goal:
            break
        for nxt, eid, sgn in adj.get(cur, []):
            if nxt not in prev:
                prev[nxt] = (cur, eid, sgn)
                queue.append(nxt)
    walk = []
    cur = goal
    while prev[cur] is not None:
        parent, eid, sgn = prev[cur]
        walk.append((eid, sgn))
        cur = parent
    walk.reverse()
    return walk


# ---------------------------------------------------------------------------
# polarization and monodromy


def polarization_Q(curve: TropicalCurve, basis: HomologyBasis) -> la.Matrix:
    """Gram matrix of the edge-length form on cycles; zero on weight slots."""
    lengths = {}
    for e in curve.edges:
        if e.length.denominator != 1:
            raise PreconditionError(
                f"edge {e.id} has non-integer length {e.length}; scale first"
            )
        lengths[e.id] = e.length.numerator
    g, h = basis.g, basis.h
    cycles = basis.cycle_dicts()
    q = la.zero_matrix(g, g)
    for i in range(h):
        for j in range(i, h):
            s = 0
            for eid, ci in cycles[i].items():
                cj = cycles[j].get(eid, 0)
                if cj:
                    s += lengths[eid] * ci * cj
            q[i][j] = s
            q[j][i] = s
    return q


def delta_from_Q(q: la.Matrix) -> la.Matrix:
    """Unipotent symplectic matrix [[I, 0], [Q, I]]; needs Q symmetric."""
    if not la.is_symmetric(q):
        raise PreconditionError("Q must be symmetric")
    g = len(q)
    d = la.identity(2 * g)
    for i in range(g):
        for j in range(g):
            d[g + i][j] = q[i][j]
    return d


def intersection(u, v, g: int):
    """Algebraic intersection pairing with i(a_k, b_k) = +1."""
    return sum(u[k] * v[g + k] - u[g + k] * v[k] for k in range(g))


def twist_action(loop_class, power, g: int, sign: int = TWIST_SIGN) -> la.Matrix:
    """Action on H of the power-th twist along a class; h -> h + s*c*i(l,h)*l."""
    n = 2 * g
    mat = la.identity(n)
    for j in range(n):
        basis_vec = [int(t == j) for t in range(n)]
        coef = sign * power * intersection(loop_class, basis_vec, g)
        if coef:
            for i in range(n):
                mat[i][j] += coef * loop_class[i]
    return mat


def multitwist_action(twists, g: int, sign: int = TWIST_SIGN) -> la.Matrix:
    """Composite of commuting twists; requires pairwise isotropic classes."""
    classes = [list(l) for l, _ in twists]
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            if intersection(classes[i], classes[j], g):
                raise PreconditionError(
                    "multitwist support must be pairwise isotropic"
                )
    mat = la.identity(2 * g)
    for l, c in twists:
        mat = la.mat_mul(twist_action(l, c, g, sign), mat)
    return mat


def check_unipotent(delta: la.Matrix) -> None:
    n = len(delta)
    m = [[delta[i][j] - (i == j) for j in range(n)] for i in range(n)]
    if not la.is_zero_matrix(la.mat_mul(m, m)):
        raise PreconditionError("(delta - I)^2 != 0")


def image_saturation(delta: la.Matrix) -> list[list[int]]:
    """Basis of the saturation of image(delta - I); requires (delta-I)^2 = 0."""
    check_unipotent(delta)
    n = len(delta)
    m = [[delta[i][j] - (i == j) for j in range(n)] for i in range(n)]
    return la.saturation_basis(m)


def invariant_factors(mat: la.Matrix) -> list[int]:
    """Smith normal form diagonal: divisibility chain, zeros last."""
    return la.invariant_factor_diagonal(mat)


# ---------------------------------------------------------------------------
# basis change between two tree choices


def basis_change_matrix(
    old: HomologyBasis, new: HomologyBasis
) -> la.Matrix:
    """Columns are the new basis vectors written in the old basis."""
    if (old.g, old.h) != (new.g, new.h):
        raise PreconditionError("bases belong to different curves")
    g, h = old.g, old.h
    n = 2 * g
    cols = []
    new_cycles = new.cycle_dicts()
    old_nontree = old.nontree_edges
    for i in range(g):
        col = [0] * n
        if i < h:
            cyc = new_cycles[i]
            for j, eid in enumerate(old_nontree):
                col[j] = cyc.get(eid, 0)
        else:
            col[i] = 1
        cols.append(col)
    for i in range(g):
        col = [0] * n
        if i < h:
            lc = old.edge_loop_class[new.nontree_edges[i]]
            for j in range(g):
                col[g + j] = lc[j]
        else:
            col[g + i] = 1
        cols.append(col)
    return la.from_columns(cols)


def basis_report(curve: TropicalCurve, basis: HomologyBasis) -> dict:
    """JSON-ready description of the basis, for table interpretation."""
    labels = [f"a{i+1}" for i in range(basis.g)] + [
        f"b{i+1}" for i in range(basis.g)
    ]
    return {
        "g": basis.g,
        "h": basis.h,
        "labels": labels,
        "tree_edges": list(basis.tree_edges),
        "nontree_edges": list(basis.nontree_edges),
        "cycles": [
            {eid: sgn for eid, sgn in cyc} for cyc in basis.cycles
        ],
        "edge_loop_classes": {
            eid: list(vec) for eid, vec in sorted(basis.edge_loop_class.items())
        },
        "convention": basis.convention,
    }
