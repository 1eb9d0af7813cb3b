"""Exterior powers of H with the Y-filtration and its finite quotients.

Wedge vectors are sparse maps from sorted index tuples to exact coefficients.
For a unipotent delta with (delta-I)^2 = 0 and Y the saturation of its image,
the descending filtration F_q = (wedge^q Y) ^ (wedge^{k-q} H) is stable under
delta - I, and the associated finite groups (cokernels of graded maps, and
their versions modulo the embedded copy of H) carry the obstruction theory.

Quotients modulo H are always realized by adjoining the embedded-H generators
to relation lattices; no coset representatives are ever chosen.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import inf, prod

from . import intlinalg as la
from .errors import FiltrationError, PreconditionError

MAX_WEDGE_DEGREE = 7
MAX_RANK = 16


# ---------------------------------------------------------------------------
# abelian group descriptors


@dataclass(frozen=True)
class AbelianGroupDescriptor:
    """Finitely generated abelian group: free rank and invariant factors."""

    free_rank: int
    torsion: tuple[int, ...]  # ascending divisibility chain, entries >= 2

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion is not a divisibility chain")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion entries must be >= 2")

    @property
    def order(self):
        return inf if self.free_rank else prod(self.torsion, start=1)

    def is_finite(self) -> bool:
        return self.free_rank == 0

    @classmethod
    def from_quotient(cls, num_vecs, den_vecs, dim: int):
        free, tor = la.quotient_invariants(num_vecs, den_vecs, dim)
        return cls(free, tuple(tor))

    @classmethod
    def from_cyclic_orders(cls, orders):
        return cls(0, tuple(la.invariant_factors_from_orders(orders)))

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " x ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# wedge vectors


def sort_with_sign(idx):
    """Sorted tuple and permutation sign; (None, 0) on a repeated index."""
    idx = list(idx)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return None, 0
    return tuple(idx), sign


def wedge_basis(n: int, k: int):
    """Sorted k-index tuples in lexicographic order."""
    if k > n:
        raise PreconditionError(f"wedge degree {k} exceeds rank {n}")
    if k > MAX_WEDGE_DEGREE or n > MAX_RANK:
        raise PreconditionError(
            f"wedge machinery capped at degree {MAX_WEDGE_DEGREE}, rank {MAX_RANK}"
        )
    return list(combinations(range(n), k))


@dataclass
class WedgeVector:
    """Sparse element of wedge^k Z^n (or Q^n): sorted tuples -> coefficients."""

    n: int
    k: int
    coeffs: dict

    def __post_init__(self):
        clean = {}
        for idx, c in self.coeffs.items():
            if c == 0:
                continue
            tup, sign = sort_with_sign(tuple(idx))
            if tup is None:
                continue
            if len(tup) != self.k or any(not 0 <= i < self.n for i in tup):
                raise ValueError(f"bad index tuple {idx}")
            clean[tup] = clean.get(tup, 0) + sign * c
        self.coeffs = {t: c for t, c in clean.items() if c != 0}

    # -- algebra ------------------------------------------------------------

    @classmethod
    def zero(cls, n: int, k: int) -> "WedgeVector":
        return cls(n, k, {})

    @classmethod
    def monomial(cls, n: int, idx, coeff=1) -> "WedgeVector":
        return cls(n, len(tuple(idx)), {tuple(idx): coeff})

    def __add__(self, other: "WedgeVector") -> "WedgeVector":
        if (self.n, self.k) != (other.n, other.k):
            raise ValueError("degree mismatch")
        out = dict(self.coeffs)
        for t, c in other.coeffs.items():
            out[t] = out.get(t, 0) + c
        return WedgeVector(self.n, self.k, out)

    def __sub__(self, other: "WedgeVector") -> "WedgeVector":
        return self + other.scale(-1)

    def scale(self, s) -> "WedgeVector":
        return WedgeVector(self.n, self.k, {t: s * c for t, c in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WedgeVector)
            and (self.n, self.k) == (other.n, other.k)
            and self.coeffs == other.coeffs
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def wedge_vector(self, vec) -> "WedgeVector":
        """Right-wedge with a rank-n vector, raising the degree by one."""
        out: dict = {}
        for t, c in self.coeffs.items():
            for i, x in enumerate(vec):
                if x and i not in t:
                    tup, sign = sort_with_sign(t + (i,))
                    out[tup] = out.get(tup, 0) + sign * c * x
        return WedgeVector(self.n, self.k + 1, out)

    def wedge(self, other: "WedgeVector") -> "WedgeVector":
        out: dict = {}
        for t, c in self.coeffs.items():
            for s, d in other.coeffs.items():
                tup, sign = sort_with_sign(t + s)
                if tup is not None:
                    out[tup] = out.get(tup, 0) + sign * c * d
        return WedgeVector(self.n, self.k + other.k, out)

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coeffs.values())

    def to_int(self) -> "WedgeVector":
        if not self.is_integral():
            raise ValueError("non-integral wedge vector")
        return WedgeVector(
            self.n, self.k, {t: int(c) for t, c in self.coeffs.items()}
        )

    # -- coordinates ----------------------------------------------------------

    def to_coords(self, basis=None):
        basis = wedge_basis(self.n, self.k) if basis is None else basis
        return [self.coeffs.get(t, 0) for t in basis]

    @classmethod
    def from_coords(cls, n: int, k: int, coords, basis=None) -> "WedgeVector":
        basis = wedge_basis(n, k) if basis is None else basis
        return cls(n, k, {t: c for t, c in zip(basis, coords) if c})

    def to_json(self) -> dict:
        return {
            "(" + ",".join(str(i + 1) for i in t) + ")": str(Fraction(c))
            for t, c in sorted(self.coeffs.items())
        }

    @classmethod
    def from_json(cls, n: int, k: int, data) -> "WedgeVector":
        coeffs = {}
        for key, val in data.items():
            idx = tuple(int(p) - 1 for p in key.strip("() ").split(","))
            frac = Fraction(str(val))
            coeffs[idx] = frac if frac.denominator != 1 else frac.numerator
        return cls(n, k, coeffs)


def vector_wedge(vectors, n: int) -> WedgeVector:
    """Wedge of rank-n vectors, in the given order."""
    out = WedgeVector(n, 0, {(): 1})
    for v in vectors:
        out = out.wedge_vector(v)
    return out


def apply_matrix(mat, w: WedgeVector) -> WedgeVector:
    """Image of w under the action induced on wedge^k by mat."""
    cols = la.columns(mat)
    out = WedgeVector.zero(w.n, w.k)
    for t, c in w.coeffs.items():
        out = out + vector_wedge([cols[i] for i in t], w.n).scale(c)
    return out


def induced_action(mat, k: int):
    """Matrix of the induced action on wedge^k, over the sorted-tuple basis."""
    n = len(mat)
    basis = wedge_basis(n, k)
    index = {t: i for i, t in enumerate(basis)}
    out = la.zero_matrix(len(basis), len(basis))
    cols = la.columns(mat)
    for j, t in enumerate(basis):
        img = vector_wedge([cols[i] for i in t], n)
        for s, c in img.coeffs.items():
            out[index[s]][j] = c
    return out


# ---------------------------------------------------------------------------
# the symplectic form and the embedding of H


def omega(g: int) -> WedgeVector:
    """Sum of a_i ^ b_i; independent of the symplectic basis choice."""
    return WedgeVector(2 * g, 2, {(i, g + i): 1 for i in range(g)})


def embed_H_in_L(hvec, g: int) -> WedgeVector:
    """h -> omega ^ h, the standard copy of H inside wedge^3 H (g >= 2)."""
    if g < 2:
        raise PreconditionError("embedding needs g >= 2")
    return omega(g).wedge_vector(hvec)


def embedded_H_generators(g: int) -> list[list]:
    """Coordinates of omega ^ e_j for the standard basis of H."""
    n = 2 * g
    basis = wedge_basis(n, 3)
    gens = []
    for j in range(n):
        unit = [int(t == j) for t in range(n)]
        gens.append(embed_H_in_L(unit, g).to_coords(basis))
    return gens


# ---------------------------------------------------------------------------
# the Y-filtration


@dataclass
class Filtration:
    """Ambient rank n with a saturated Y recorded as adapted coordinates.

    When Y is spanned by signed unit vectors the ambient coordinates are kept;
    otherwise a unimodular change of basis P = [X-part | Y-part] is applied
    and results are converted back.
    """

    n: int
    y_positions: frozenset
    P: list | None = None
    Pinv: list | None = None

    @classmethod
    def from_Y(cls, y_vectors, n: int) -> "Filtration":
        ys = [list(v) for v in y_vectors]
        if not ys:
            return cls(n, frozenset())
        mat = [[v[r] for v in ys] for r in range(n)]
        if not la.lattice_eq(ys, la.saturation_basis(mat), n):
            raise PreconditionError("Y is not saturated")
        positions = []
        for v in ys:
            support = [i for i, x in enumerate(v) if x]
            if len(support) == 1 and abs(v[support[0]]) == 1:
                positions.append(support[0])
            else:
                positions = None
                break
        if positions is not None and len(set(positions)) == len(positions):
            return cls(n, frozenset(positions))
        d = len(ys)
        sat = la.saturation_basis(mat)
        comp = _complement_columns(sat, n)
        p = la.from_columns(comp + ys)
        return cls(n, frozenset(range(n - d, n)), P=p, Pinv=la.int_inverse(p))

    def y_degree(self, idx) -> int:
        return sum(1 for i in idx if i in self.y_positions)

    def monomials(self, k: int, q: int, exact: bool = False):
        return [
            t
            for t in wedge_basis(self.n, k)
            if (self.y_degree(t) == q if exact else self.y_degree(t) >= q)
        ]

    def to_adapted(self, w: WedgeVector) -> WedgeVector:
        return w if self.Pinv is None else apply_matrix(self.Pinv, w)

    def from_adapted(self, w: WedgeVector) -> WedgeVector:
        return w if self.P is None else apply_matrix(self.P, w)

    def adapt_matrix(self, mat):
        if self.P is None:
            return mat
        return la.mat_mul(la.mat_mul(self.Pinv, mat), self.P)


def _complement_columns(sat_basis, n: int) -> list:
    """Unit vectors completing a saturated basis to a basis of Z^n."""
    d = len(sat_basis)
    mat = [[v[r] for v in sat_basis] for r in range(n)]
    snf = la.smith_normal_form(mat)
    # columns d..n-1 of Uinv complete the saturation's basis
    return [[snf.Uinv[r][j] for r in range(n)] for j in range(d, n)]


def filtration_basis(y_vectors, n: int, q: int, k: int) -> list[list]:
    """Ambient coordinates of a basis of F_q wedge^k = (^q Y) ^ (^{k-q} H)."""
    filt = Filtration.from_Y(y_vectors, n)
    basis = wedge_basis(n, k)
    out = []
    for t in filt.monomials(k, q):
        w = filt.from_adapted(WedgeVector.monomial(n, t))
        out.append(w.to_coords(basis))
    return out


def _delta_minus_I_images(delta_ad, filt: Filtration, k: int, monos):
    """(delta - I)-images of adapted monomials, with filtration check."""
    n = filt.n
    images = []
    for t in monos:
        img = apply_matrix(delta_ad, WedgeVector.monomial(n, t)) - WedgeVector.monomial(n, t)
        qmin = filt.y_degree(t)
        for s in img.coeffs:
            if filt.y_degree(s) <= qmin:
                raise FiltrationError(
                    f"(delta-I) image of {t} has component at level {filt.y_degree(s)}"
                )
        images.append(img)
    return images


def graded_map(delta, y_vectors, q: int, k: int):
    """Matrix of gr_{q-1} -> gr_q induced by delta - I, on monomial bases."""
    n = len(delta)
    filt = Filtration.from_Y(y_vectors, n)
    delta_ad = filt.adapt_matrix(delta)
    src = filt.monomials(k, q - 1, exact=True)
    dst = filt.monomials(k, q, exact=True)
    dst_index = {t: i for i, t in enumerate(dst)}
    out = la.zero_matrix(len(dst), len(src))
    for j, img in enumerate(_delta_minus_I_images(delta_ad, filt, k, src)):
        for s, c in img.coeffs.items():
            if filt.y_degree(s) == q:
                out[dst_index[s]][j] = c
    return out


# ---------------------------------------------------------------------------
# cokernels, orders, membership


def coker_structure(mat) -> AbelianGroupDescriptor:
    """Cokernel of an integer matrix acting on Z^rows."""
    rows = len(mat)
    if rows == 0:
        return AbelianGroupDescriptor(0, ())
    rank, orders = la.snf_diagonal_orders(mat)
    torsion = la.invariant_factors_from_orders(orders)
    return AbelianGroupDescriptor(rows - rank, tuple(torsion))


def class_order(v, relation_vectors, n: int | None = None):
    """Least k >= 1 with k*v in the relation lattice; math.inf if none."""
    vec = v.to_coords() if isinstance(v, WedgeVector) else list(v)
    return la.class_order(vec, relation_vectors, len(vec))


def membership(v, lattice_vectors) -> bool:
    vec = v.to_coords() if isinstance(v, WedgeVector) else list(v)
    return vec in la.Lattice(len(vec), lattice_vectors)


# ---------------------------------------------------------------------------
# the finite groups attached to a unipotent delta


def _group_context(delta, y_vectors, k: int):
    n = len(delta)
    filt = Filtration.from_Y(y_vectors, n)
    delta_ad = filt.adapt_matrix(delta)
    basis = wedge_basis(n, k)
    return filt, delta_ad, basis


def _unit_coords(monos, basis):
    index = {t: i for i, t in enumerate(basis)}
    out = []
    for t in monos:
        vec = [0] * len(basis)
        vec[index[t]] = 1
        out.append(vec)
    return out


def _image_generators(delta_ad, filt, k: int, basis, monos=None):
    monos = wedge_basis(filt.n, k) if monos is None else monos
    gens = []
    for img in _delta_minus_I_images(delta_ad, filt, k, monos):
        coords = img.to_coords(basis)
        if any(coords):
            gens.append(coords)
    return gens


def A_group(delta, y_vectors, q: int) -> AbelianGroupDescriptor:
    """F_q / ((delta-I) wedge^{2q-1} H  intersect  F_q), with k = 2q - 1.

    Finite when the graded maps are rationally surjective down to level q;
    an infinite answer is reported through a positive free rank.
    """
    k = 2 * q - 1
    filt, delta_ad, basis = _group_context(delta, y_vectors, k)
    num = _unit_coords(filt.monomials(k, q), basis)
    image = _image_generators(delta_ad, filt, k, basis)
    den = la.lattice_intersection(image, num, len(basis))
    return AbelianGroupDescriptor.from_quotient(num, den, len(basis))


def B_group(delta, y_vectors, q: int) -> AbelianGroupDescriptor:
    """F_q / ((delta-I) F_{q-1} + F_{q+1}), with k = 2q - 1."""
    k = 2 * q - 1
    filt, delta_ad, basis = _group_context(delta, y_vectors, k)
    num = _unit_coords(filt.monomials(k, q), basis)
    den = _image_generators(
        delta_ad, filt, k, basis, filt.monomials(k, q - 1, exact=True)
    ) + _unit_coords(filt.monomials(k, q + 1), basis)
    return AbelianGroupDescriptor.from_quotient(num, den, len(basis))


def _require_symplectic_even(n: int) -> int:
    if n % 2:
        raise PreconditionError("H must have even rank")
    return n // 2


def Abar_group(delta, y_vectors) -> AbelianGroupDescriptor:
    """(F_2 L + H) / ((delta-I)L + H) & (F_2 L + H), modulo the embedded H."""
    filt, delta_ad, basis = _group_context(delta, y_vectors, 3)
    g = _require_symplectic_even(filt.n)
    h_gens = [filt.to_adapted(
        WedgeVector.from_coords(filt.n, 3, v)
    ).to_coords(basis) for v in embedded_H_generators(g)]
    num = _unit_coords(filt.monomials(3, 2), basis) + h_gens
    big = _image_generators(delta_ad, filt, 3, basis) + h_gens
    den = la.lattice_intersection(big, num, len(basis))
    return AbelianGroupDescriptor.from_quotient(num, den, len(basis))


def Bbar_group(delta, y_vectors) -> AbelianGroupDescriptor:
    """(F_2 L + H) / ((delta-I) F_1 L + F_3 L + H)."""
    filt, delta_ad, basis = _group_context(delta, y_vectors, 3)
    g = _require_symplectic_even(filt.n)
    h_gens = [filt.to_adapted(
        WedgeVector.from_coords(filt.n, 3, v)
    ).to_coords(basis) for v in embedded_H_generators(g)]
    num = _unit_coords(filt.monomials(3, 2), basis) + h_gens
    den = (
        _image_generators(delta_ad, filt, 3, basis, filt.monomials(3, 1, exact=True))
        + _unit_coords(filt.monomials(3, 3), basis)
        + h_gens
    )
    return AbelianGroupDescriptor.from_quotient(num, den, len(basis))


# ---------------------------------------------------------------------------
# explicit rational inverse of the graded map gr_1 -> gr_2 (maximal rank)


def delta_inverse_gr2(q_matrix, v: WedgeVector) -> WedgeVector:
    """Rational preimage under gr_1 -> gr_2 of a two-Y-factor wedge vector.

    Works in the standard basis (a_1..a_g, b_1..b_g) with Y the full b-span;
    requires Q nonsingular.  For a monomial b_p ^ b_r ^ a_m the preimage is
    (1/2) (Q^-1 b_p ^ b_r ^ a_m + b_p ^ Q^-1 b_r ^ a_m
           - Q^-1 b_p ^ Q^-1 b_r ^ Q a_m).
    """
    g = len(q_matrix)
    n = 2 * g
    if v.n != n or v.k != 3:
        raise PreconditionError("expected a degree-3 wedge vector on rank 2g")
    try:
        qinv = la.frac_inverse(q_matrix)
    except ValueError as exc:
        raise PreconditionError(
            "Q is singular; use the membership test for deficient rank"
        ) from exc

    def x_vec(col):  # Q^-1 applied to b_col, an X-side vector
        return [qinv[s][col] for s in range(g)] + [Fraction(0)] * g

    def qa_vec(col):  # Q applied to a_col, a Y-side vector
        return [Fraction(0)] * g + [Fraction(q_matrix[s][col]) for s in range(g)]

    def b_unit(col):
        return [Fraction(int(t == g + col)) for t in range(n)]

    def a_unit(col):
        return [Fraction(int(t == col)) for t in range(n)]

    out = WedgeVector.zero(n, 3)
    for idx, c in v.coeffs.items():
        ys = [i - g for i in idx if i >= g]
        xs = [i for i in idx if i < g]
        if len(ys) != 2 or len(xs) != 1:
            raise PreconditionError(
                f"coordinate {idx} does not have exactly two Y factors"
            )
        m = xs[0]
        p, r = ys
        # a_m ^ b_p ^ b_r == b_p ^ b_r ^ a_m (cyclic), so signs match
        term = (
            vector_wedge([x_vec(p), b_unit(r), a_unit(m)], n)
            + vector_wedge([b_unit(p), x_vec(r), a_unit(m)], n)
            - vector_wedge([x_vec(p), x_vec(r), qa_vec(m)], n)
        )
        out = out + term.scale(Fraction(c, 2))
    for idx in out.coeffs:
        if sum(1 for i in idx if i >= g) != 1:
            raise FiltrationError("preimage left gr_1")
    return out
