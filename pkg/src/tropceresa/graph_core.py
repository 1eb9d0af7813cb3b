"""Vertex-weighted metric multigraphs and their combinatorial operations.

A tropical curve is a connected multigraph (loops and parallel edges allowed)
with a non-negative integer weight on each vertex and a positive rational
length on each edge.  Genus is the first Betti number plus the total weight.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm

from .errors import PreconditionError, SchemaError

MAX_SEARCH_EDGES = 12  # exhaustive automorphism searches stay desk-sized


@dataclass(frozen=True)
class Vertex:
    id: str
    weight: int


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]  # ordered; the orientation seeds cycle signs
    length: Fraction


@dataclass(frozen=True)
class TropicalCurve:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        vids = [v.id for v in self.vertices]
        if len(set(vids)) != len(vids):
            raise SchemaError("duplicate vertex ids")
        eids = [e.id for e in self.edges]
        if len(set(eids)) != len(eids):
            raise SchemaError("duplicate edge ids")
        vset = set(vids)
        for e in self.edges:
            if e.ends[0] not in vset or e.ends[1] not in vset:
                raise SchemaError(f"edge {e.id} has unknown endpoint")
            if e.length <= 0:
                raise SchemaError(f"edge {e.id} must have positive length")
        for v in self.vertices:
            if v.weight < 0:
                raise SchemaError(f"vertex {v.id} has negative weight")
        if not self.vertices:
            raise SchemaError("empty vertex set")
        if not _is_connected(vids, [e.ends for e in self.edges]):
            raise SchemaError("graph is not connected")

    # -- convenience views ---------------------------------------------------

    def vertex(self, vid: str) -> Vertex:
        return next(v for v in self.vertices if v.id == vid)

    def edge(self, eid: str) -> Edge:
        return next(e for e in self.edges if e.id == eid)

    def sorted_vertices(self) -> list[Vertex]:
        return sorted(self.vertices, key=lambda v: v.id)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=lambda e: e.id)

    def valence(self, vid: str) -> int:
        val = 0
        for e in self.edges:
            val += (e.ends[0] == vid) + (e.ends[1] == vid)
        return val

    def total_weight(self) -> int:
        return sum(v.weight for v in self.vertices)

    def lengths_by_id(self) -> dict[str, Fraction]:
        return {e.id: e.length for e in self.edges}

    def with_lengths(self, lengths: dict[str, Fraction]) -> "TropicalCurve":
        missing = {e.id for e in self.edges} - set(lengths)
        if missing:
            raise SchemaError(f"lengths missing for edges {sorted(missing)}")
        edges = tuple(
            Edge(e.id, e.ends, Fraction(lengths[e.id])) for e in self.edges
        )
        return TropicalCurve(self.vertices, edges)


def tropical_curve(vertices, edges) -> TropicalCurve:
    """Build a curve from (id, weight) and (id, (u, v), length) tuples."""
    vs = tuple(Vertex(str(i), int(w)) for i, w in vertices)
    es = tuple(
        Edge(str(i), (str(u), str(v)), Fraction(l)) for i, (u, v), l in edges
    )
    return TropicalCurve(vs, es)


def _is_connected(vertex_ids, end_pairs) -> bool:
    if not vertex_ids:
        return False
    adj = {v: set() for v in vertex_ids}
    for u, v in end_pairs:
        adj[u].add(v)
        adj[v].add(u)
    seen = {vertex_ids[0]}
    stack = [vertex_ids[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertex_ids)


def _connected_with_edges(curve: TropicalCurve, keep) -> bool:
    return _is_connected(
        [v.id for v in curve.vertices],
        [e.ends for e in curve.edges if e.id in keep],
    )


# ---------------------------------------------------------------------------
# genus, stabilization, scaling


def graph_genus(curve: TropicalCurve) -> int:
    """First Betti number h = |E| - |V| + 1."""
    return len(curve.edges) - len(curve.vertices) + 1


def genus(curve: TropicalCurve) -> int:
    return graph_genus(curve) + curve.total_weight()


def is_stable(curve: TropicalCurve) -> bool:
    return all(2 * v.weight - 2 + curve.valence(v.id) > 0 for v in curve.vertices)


def stabilize(curve: TropicalCurve) -> TropicalCurve:
    """Contract to the unique stable model, preserving the metric space.

    Weight-0 leaves are deleted and weight-0 two-valent vertices suppressed
    (their edges merge, lengths adding) until every vertex v satisfies
    2*w(v) - 2 + val(v) > 0.  Defined for genus >= 2 only.
    """
    if genus(curve) < 2:
        raise PreconditionError("stable model requires genus >= 2")
    verts = {v.id: v.weight for v in curve.vertices}
    edges = {e.id: (e.ends, e.length) for e in curve.edges}

    def val(vid):
        return sum((u == vid) + (w == vid) for (u, w), _ in edges.values())

    changed = True
    while changed:
        changed = False
        # leaves first
        for vid in sorted(verts):
            if verts[vid] == 0 and val(vid) == 1:
                eid = next(
                    i for i, ((u, w), _) in edges.items() if vid in (u, w)
                )
                del edges[eid]
                del verts[vid]
                changed = True
                break
        if changed:
            continue
        for vid in sorted(verts):
            if verts[vid] != 0 or val(vid) != 2:
                continue
            incident = sorted(
                i for i, ((u, w), _) in edges.items() if vid in (u, w)
            )
            if len(incident) != 2:
                continue  # a loop vertex; genus >= 2 rules out the bare circle
            ia, ib = incident
            (ua, wa), la = edges[ia]
            (ub, wb), lb = edges[ib]
            far_a = wa if ua == vid else ua
            far_b = wb if ub == vid else ub
            merged = f"{ia}+{ib}"
            del edges[ia]
            del edges[ib]
            while merged in edges:
                merged += "'"
            edges[merged] = ((far_a, far_b), la + lb)
            del verts[vid]
            changed = True
            break
    return TropicalCurve(
        tuple(Vertex(i, w) for i, w in sorted(verts.items())),
        tuple(Edge(i, ends, l) for i, (ends, l) in sorted(edges.items())),
    )


def scaled_to_integer(curve: TropicalCurve) -> tuple[TropicalCurve, int]:
    """Clear denominators; returns (scaled curve, scale factor)."""
    scale = lcm(*(e.length.denominator for e in curve.edges)) if curve.edges else 1
    if scale == 1:
        return curve, 1
    edges = tuple(Edge(e.id, e.ends, e.length * scale) for e in curve.edges)
    return TropicalCurve(curve.vertices, edges), scale


# ---------------------------------------------------------------------------
# spanning trees and the Symanzik polynomial


def spanning_trees(curve: TropicalCurve) -> list[tuple[str, ...]]:
    """All spanning trees as sorted edge-id tuples.  Loops never occur."""
    nonloop = [e for e in curve.sorted_edges() if e.ends[0] != e.ends[1]]
    need = len(curve.vertices) - 1
    trees = []
    for combo in combinations(nonloop, need):
        ids = {e.id for e in combo}
        if _connected_with_edges(curve, ids):
            trees.append(tuple(sorted(ids)))
    if need == 0:
        return [()]
    return trees


def symanzik(curve: TropicalCurve) -> Fraction:
    """Sum over spanning trees T of the product of lengths of edges not in T."""
    lengths = curve.lengths_by_id()
    total = Fraction(0)
    for tree in spanning_trees(curve):
        inside = set(tree)
        term = Fraction(1)
        for eid, l in lengths.items():
            if eid not in inside:
                term *= l
        total += term
    return total


# ---------------------------------------------------------------------------
# cuts and 2-edge-connectivization


def separating_edges(curve: TropicalCurve) -> set[str]:
    """Bridges: edges whose removal disconnects the graph."""
    out = set()
    all_ids = {e.id for e in curve.edges}
    for e in curve.edges:
        if e.ends[0] == e.ends[1]:
            continue
        if not _connected_with_edges(curve, all_ids - {e.id}):
            out.add(e.id)
    return out


def separating_pairs(curve: TropicalCurve, sigma: "Involution"):
    """Unordered pairs {e, f} with sigma(e) = f != e whose removal disconnects."""
    all_ids = {e.id for e in curve.edges}
    pairs = []
    for e in curve.sorted_edges():
        f = sigma.edge_map[e.id]
        if f <= e.id or f == e.id:
            continue
        if not _connected_with_edges(curve, all_ids - {e.id, f}):
            pairs.append(frozenset((e.id, f)))
    return pairs


def two_edge_connectivization(curve: TropicalCurve) -> TropicalCurve:
    """Contract every bridge; genus is preserved."""
    bridges = separating_edges(curve)
    parent = {v.id: v.id for v in curve.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in bridges:
        u, v = curve.edge(eid).ends
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    weights: dict[str, int] = {}
    for v in curve.vertices:
        r = find(v.id)
        weights[r] = weights.get(r, 0) + v.weight
    edges = tuple(
        Edge(e.id, (find(e.ends[0]), find(e.ends[1])), e.length)
        for e in curve.sorted_edges()
        if e.id not in bridges
    )
    verts = tuple(Vertex(i, w) for i, w in sorted(weights.items()))
    return TropicalCurve(verts, edges)


# ---------------------------------------------------------------------------
# involutions, quotients, hyperellipticity


@dataclass(frozen=True)
class Involution:
    """Order <= 2 automorphism: length-preserving, fixing positive weights.

    flipped_loops marks fixed loops on which the involution reverses the
    circle; for non-loop edges the flip status follows from the vertex map.
    """

    vertex_map: dict = field(compare=True)
    edge_map: dict = field(compare=True)
    flipped_loops: frozenset = field(default_factory=frozenset)

    def is_identity(self) -> bool:
        return (
            all(k == v for k, v in self.vertex_map.items())
            and all(k == v for k, v in self.edge_map.items())
            and not self.flipped_loops
        )


def validate_involution(curve: TropicalCurve, inv: Involution) -> None:
    vm, em = inv.vertex_map, inv.edge_map
    if set(vm) != {v.id for v in curve.vertices} or set(vm.values()) != set(vm):
        raise SchemaError("vertex map is not a permutation")
    if set(em) != {e.id for e in curve.edges} or set(em.values()) != set(em):
        raise SchemaError("edge map is not a permutation")
    for v, img in vm.items():
        if vm[img] != v:
            raise SchemaError("vertex map is not an involution")
        if curve.vertex(v).weight != curve.vertex(img).weight:
            raise SchemaError("vertex map does not preserve weights")
        if curve.vertex(v).weight > 0 and img != v:
            raise SchemaError("positive-weight vertex moved")
    for e, img in em.items():
        if em[img] != e:
            raise SchemaError("edge map is not an involution")
        a, b = curve.edge(e).ends
        if {vm[a], vm[b]} != set(curve.edge(img).ends):
            raise SchemaError("edge map incompatible with incidence")
        if curve.edge(e).length != curve.edge(img).length:
            raise SchemaError("edge map does not preserve lengths")
    for e in inv.flipped_loops:
        edge = curve.edge(e)
        if edge.ends[0] != edge.ends[1] or em[e] != e:
            raise SchemaError("flipped_loops must be fixed loop edges")


def involutions(curve: TropicalCurve) -> list[Involution]:
    """Every involutive automorphism (identity included), exhaustively.

    Loops fixed with fixed base vertex are emitted twice: pointwise fixed
    and reflected.
    """
    if len(curve.edges) > MAX_SEARCH_EDGES:
        raise PreconditionError(
            f"involution search capped at {MAX_SEARCH_EDGES} edges"
        )
    vids = [v.id for v in curve.sorted_vertices()]

    def profile(vid):
        inc = []
        for e in curve.edges:
            count = (e.ends[0] == vid) + (e.ends[1] == vid)
            for _ in range(count):
                inc.append((e.length, e.ends[0] == e.ends[1]))
        inc.sort()
        return (curve.vertex(vid).weight, curve.valence(vid), tuple(inc))

    profiles = {v: profile(v) for v in vids}
    results: list[Involution] = []

    def extend_vertices(i, vmap):
        if i == len(vids):
            for emap in _edge_involutions(curve, vmap):
                loops_free = [
                    e.id
                    for e in curve.sorted_edges()
                    if e.ends[0] == e.ends[1]
                    and emap[e.id] == e.id
                    and vmap[e.ends[0]] == e.ends[0]
                ]
                for mask in range(1 << len(loops_free)):
                    flips = frozenset(
                        e for b, e in enumerate(loops_free) if mask >> b & 1
                    )
                    results.append(Involution(dict(vmap), dict(emap), flips))
            return
        v = vids[i]
        if v in vmap:
            extend_vertices(i + 1, vmap)
            return
        candidates = [v] + [
            u
            for u in vids[i + 1 :]
            if u not in vmap
            and profiles[u] == profiles[v]
            and curve.vertex(v).weight == 0
        ]
        for u in candidates:
            vmap[v] = u
            vmap[u] = v
            extend_vertices(i + 1, vmap)
            del vmap[v]
            if u != v:
                del vmap[u]

    extend_vertices(0, {})
    return results


def _edge_involutions(curve: TropicalCurve, vmap):
    """Involutive edge permutations compatible with a vertex involution."""
    classes: dict[frozenset, list[Edge]] = {}
    for e in curve.sorted_edges():
        classes.setdefault(frozenset(e.ends), []).append(e)
    keys = sorted(classes, key=lambda k: tuple(sorted(k)))
    done = set()
    blocks = []  # list of per-class-pair lists of partial edge maps
    for key in keys:
        if key in done:
            continue
        image_key = frozenset(vmap[v] for v in key)
        if image_key not in classes or len(classes[image_key]) != len(classes[key]):
            return
        done.add(key)
        if image_key == key:
            blocks.append(_self_paired_maps(classes[key]))
        else:
            done.add(image_key)
            blocks.append(_cross_paired_maps(classes[key], classes[image_key]))
    for combo in _product_maps(blocks):
        yield combo


def _self_paired_maps(edges):
    """Involutive length-preserving permutations of one parallel class."""
    by_len: dict[Fraction, list[str]] = {}
    for e in edges:
        by_len.setdefault(e.length, []).append(e.id)
    groups = [sorted(v) for _, v in sorted(by_len.items())]

    def involutions_of(items):
        if not items:
            yield {}
            return
        first, rest = items[0], items[1:]
        for sub in involutions_of(rest):
            yield {first: first, **sub}
        for j, other in enumerate(rest):
            remaining = rest[:j] + rest[j + 1 :]
            for sub in involutions_of(remaining):
                yield {first: other, other: first, **sub}

    def per_group(i):
        if i == len(groups):
            yield {}
            return
        for head in involutions_of(groups[i]):
            for tail in per_group(i + 1):
                yield {**head, **tail}

    return list(per_group(0))


def _cross_paired_maps(edges_a, edges_b):
    """Length-preserving bijections a->b, extended to involutions."""
    by_len_b: dict[Fraction, list[str]] = {}
    for e in edges_b:
        by_len_b.setdefault(e.length, []).append(e.id)
    for v in by_len_b.values():
        v.sort()
    groups_a: dict[Fraction, list[str]] = {}
    for e in edges_a:
        groups_a.setdefault(e.length, []).append(e.id)
    for v in groups_a.values():
        v.sort()
    if {k: len(v) for k, v in groups_a.items()} != {
        k: len(v) for k, v in by_len_b.items()
    }:
        return []

    def bijections(items_a, items_b):
        if not items_a:
            yield {}
            return
        first, rest = items_a[0], items_a[1:]
        for j, img in enumerate(items_b):
            for sub in bijections(rest, items_b[:j] + items_b[j + 1 :]):
                yield {first: img, img: first, **sub}

    def per_group(keys, i):
        if i == len(keys):
            yield {}
            return
        k = keys[i]
        for head in bijections(groups_a[k], by_len_b[k]):
            for tail in per_group(keys, i + 1):
                yield {**head, **tail}

    return list(per_group(sorted(groups_a), 0))


def _product_maps(blocks):
    if any(not b for b in blocks):
        return
    def rec(i):
        if i == len(blocks):
            yield {}
            return
        for head in blocks[i]:
            for tail in rec(i + 1):
                yield {**head, **tail}
    yield from rec(0)


def quotient_curve(curve: TropicalCurve, inv: Involution) -> TropicalCurve:
    """Metric quotient by an involution.

    Swapped edge pairs give one edge, pointwise-fixed edges persist, and a
    fixed edge with swapped endpoints (or a reflected loop) folds onto a
    half-length pendant edge.
    """
    validate_involution(curve, inv)
    vm, em = inv.vertex_map, inv.edge_map
    orbit = {v: min(v, vm[v]) for v in vm}
    verts: dict[str, int] = {}
    for v in curve.vertices:
        verts.setdefault(orbit[v.id], curve.vertex(orbit[v.id]).weight)
    edges = []
    seen = set()
    for e in curve.sorted_edges():
        if e.id in seen:
            continue
        img = em[e.id]
        u, w = e.ends
        if img != e.id:
            seen.update((e.id, img))
            edges.append((e.id, (orbit[u], orbit[w]), e.length))
        elif u == w:
            seen.add(e.id)
            if e.id in inv.flipped_loops:
                tip = f"{e.id}__tip"
                verts[tip] = 0
                edges.append((e.id, (orbit[u], tip), e.length / 2))
            else:
                edges.append((e.id, (orbit[u], orbit[u]), e.length))
        elif vm[u] == u:
            seen.add(e.id)
            edges.append((e.id, (orbit[u], orbit[w]), e.length))
        else:
            seen.add(e.id)
            tip = f"{e.id}__tip"
            verts[tip] = 0
            edges.append((e.id, (orbit[u], tip), e.length / 2))
    return TropicalCurve(
        tuple(Vertex(i, w) for i, w in sorted(verts.items())),
        tuple(Edge(i, ends, l) for i, ends, l in edges),
    )


def hyperelliptic_involutions(curve: TropicalCurve) -> list[Involution]:
    """Involutions fixing positive weights whose metric quotient is a tree."""
    if not is_stable(curve):
        raise PreconditionError("hyperellipticity test expects a stable curve")
    out = []
    for inv in involutions(curve):
        quo = quotient_curve(curve, inv)
        if graph_genus(quo) == 0:
            out.append(inv)
    return out


def is_hyperelliptic(curve: TropicalCurve) -> bool:
    return bool(hyperelliptic_involutions(curve))


# ---------------------------------------------------------------------------
# JSON schema


def curve_to_json(curve: TropicalCurve) -> dict:
    return {
        "vertices": [
            {"id": v.id, "weight": v.weight} for v in curve.sorted_vertices()
        ],
        "edges": [
            {"id": e.id, "ends": list(e.ends), "length": str(e.length)}
            for e in curve.sorted_edges()
        ],
    }


def curve_from_json(data) -> TropicalCurve:
    try:
        verts = tuple(
            Vertex(str(v["id"]), int(v["weight"])) for v in data["vertices"]
        )
        edges = tuple(
            Edge(
                str(e["id"]),
                (str(e["ends"][0]), str(e["ends"][1])),
                Fraction(str(e["length"])),
            )
            for e in data["edges"]
        )
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise SchemaError(f"malformed graph JSON: {exc}") from exc
    return TropicalCurve(verts, edges)


def load_curve(path: str) -> TropicalCurve:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON in {path}: {exc}") from exc
    return curve_from_json(data)
