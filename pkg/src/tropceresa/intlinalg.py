"""Exact integer and rational linear algebra.

Everything here works over Z (arbitrary-precision ints) or Q (fractions):
Smith normal form with transformation matrices, echelon-form lattices with
membership and canonical bases, kernels, saturations, lattice intersections,
and structure of finitely generated abelian quotients.  No floating point.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf, lcm, prod

Matrix = list  # list of rows, each a list of ints (or Fractions)
Vector = list


# ---------------------------------------------------------------------------
# basic matrix helpers


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows_b = len(b)
    cols_b = len(b[0]) if rows_b else 0
    out = []
    for row in a:
        acc = [0] * cols_b
        for t, x in enumerate(row):
            if x:
                brow = b[t]
                for j in range(cols_b):
                    if brow[j]:
                        acc[j] += x * brow[j]
        out.append(acc)
    return out


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return [sum(row[j] * v[j] for j in range(len(v)) if v[j]) for row in a]


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))


def is_zero_matrix(a: Matrix) -> bool:
    return all(all(x == 0 for x in row) for row in a)


def is_symmetric(a: Matrix) -> bool:
    n = len(a)
    return all(len(row) == n for row in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i)
    )


def columns(a: Matrix) -> list[Vector]:
    return [list(col) for col in zip(*a)] if a else []


def from_columns(cols: list[Vector]) -> Matrix:
    return [list(row) for row in zip(*cols)] if cols else []


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SmithForm:
    """U @ A @ V == D with U, V unimodular and D diagonal, d_i | d_{i+1}."""

    diag: list         # full min(m, n) diagonal, zeros last
    rank: int
    U: Matrix
    Uinv: Matrix
    V: Matrix
    Vinv: Matrix


def smith_normal_form(a: Matrix) -> SmithForm:
    m = len(a)
    n = len(a[0]) if m else 0
    d = [row[:] for row in a]
    u, uinv = identity(m), identity(m)
    v, vinv = identity(n), identity(n)

    def row_axpy(i, j, q):  # row_i -= q * row_j
        di, dj = d[i], d[j]
        for t in range(n):
            if dj[t]:
                di[t] -= q * dj[t]
        ui, uj = u[i], u[j]
        for t in range(m):
            if uj[t]:
                ui[t] -= q * uj[t]
        for r in range(m):
            if uinv[r][i]:
                uinv[r][j] += q * uinv[r][i]

    def col_axpy(j, i, q):  # col_j -= q * col_i
        for r in range(m):
            if d[r][i]:
                d[r][j] -= q * d[r][i]
        for r in range(n):
            if v[r][i]:
                v[r][j] -= q * v[r][i]
        vi, vj = vinv[i], vinv[j]
        for t in range(n):
            if vj[t]:
                vi[t] += q * vj[t]

    def row_swap(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for r in range(m):
            uinv[r][i], uinv[r][j] = uinv[r][j], uinv[r][i]

    def col_swap(i, j):
        for r in range(m):
            d[r][i], d[r][j] = d[r][j], d[r][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def row_negate(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]
        for r in range(m):
            uinv[r][i] = -uinv[r][i]

    mn = min(m, n)
    t = 0
    while t < mn:
        # locate a pivot of minimal absolute value in the trailing block
        piv = None
        best = None
        for i in range(t, m):
            row = d[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    ax = -x if x < 0 else x
                    if best is None or ax < best:
                        best, piv = ax, (i, j)
                        if ax == 1:
                            break
            if best == 1:
                break
        if piv is None:
            break
        if piv[0] != t:
            row_swap(t, piv[0])
        if piv[1] != t:
            col_swap(t, piv[1])

        while True:
            # clear column t; a nonzero remainder becomes the smaller pivot
            dirty = False
            for i in range(t + 1, m):
                x = d[i][t]
                if x:
                    q = x // d[t][t]
                    if q:
                        row_axpy(i, t, q)
                    if d[i][t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, n):
                x = d[t][j]
                if x:
                    q = x // d[t][t]
                    if q:
                        col_axpy(j, t, q)
                    if d[t][j]:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            # pivot must divide every remaining entry
            fix = None
            dt = d[t][t]
            for i in range(t + 1, m):
                row = d[i]
                for j in range(t + 1, n):
                    if row[j] % dt:
                        fix = i
                        break
                if fix is not None:
                    break
            if fix is None:
                break
            row_axpy(t, fix, -1)
        if d[t][t] < 0:
            row_negate(t)
        t += 1

    diag = [d[i][i] for i in range(mn)]
    return SmithForm(diag=diag, rank=t, U=u, Uinv=uinv, V=v, Vinv=vinv)


def invariant_factor_diagonal(a: Matrix) -> list:
    """Full SNF diagonal of a (unit factors kept, zeros last)."""
    m = len(a)
    n = len(a[0]) if m else 0
    rank, orders = snf_diagonal_orders(a)
    chain = invariant_factors_from_orders(orders)
    return [1] * (rank - len(chain)) + chain + [0] * (min(m, n) - rank)


def matrix_rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return snf_diagonal_orders(a)[0]


def kernel_basis(a: Matrix) -> list[Vector]:
    """Basis of the integer kernel {x : a @ x = 0}; spans a saturated lattice."""
    m = len(a)
    n = len(a[0]) if m else 0
    if n == 0:
        return []
    snf = smith_normal_form(a)
    return [[snf.V[r][j] for r in range(n)] for j in range(snf.rank, n)]


def solve_int(a: Matrix, b: Vector):
    """Integer solution x of a @ x = b, or None."""
    snf = smith_normal_form(a)
    w = mat_vec(snf.U, b)
    n = len(a[0]) if a else 0
    y = [0] * n
    for i, wi in enumerate(w):
        di = snf.diag[i] if i < len(snf.diag) else 0
        if di:
            if wi % di:
                return None
            y[i] = wi // di
        elif wi:
            return None
    return mat_vec(snf.V, y)


def saturation_basis(a: Matrix) -> list[Vector]:
    """Basis of the saturation of the column span of a."""
    snf = smith_normal_form(a)
    m = len(a)
    return [[snf.Uinv[r][j] for r in range(m)] for j in range(snf.rank)]


def int_inverse(a: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix, over Z."""
    snf = smith_normal_form(a)
    if any(x != 1 for x in snf.diag):
        raise ValueError("matrix is not unimodular: SNF diagonal %r" % (snf.diag,))
    return mat_mul(snf.V, snf.U)


def frac_inverse(a: Matrix) -> Matrix:
    """Inverse of a nonsingular matrix over Q (Gauss-Jordan)."""
    n = len(a)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


# ---------------------------------------------------------------------------
# lattices as Z-spans of vectors, kept in echelon form


class Lattice:
    """Z-span of vectors in Z^n, kept in Hermite-reduced echelon form.

    Membership needs divisibility at every pivot, so the echelon rows are a
    genuine lattice basis, not just a rational one.  Rows are re-reduced
    after every insertion; without that, chains of gcd combinations blow up
    doubly exponentially on lattices of this package's working size.
    """

    def __init__(self, n: int, vectors=()):
        self.n = n
        self.rows: list[Vector] = []
        self.pivots: list[int] = []
        for v in vectors:
            self.add(v)

    def add(self, vec: Vector) -> None:
        vec = list(vec)
        touched = False
        while True:
            lead = next((j for j, x in enumerate(vec) if x), None)
            if lead is None:
                break
            pos = bisect_left(self.pivots, lead)
            if pos == len(self.pivots) or self.pivots[pos] != lead:
                self.rows.insert(pos, vec)
                self.pivots.insert(pos, lead)
                touched = True
                break
            row = self.rows[pos]
            a, b = row[lead], vec[lead]
            if b % a == 0:
                q = b // a
                for t in range(lead, self.n):
                    vec[t] -= q * row[t]
            else:
                x, y, g = _xgcd(a, b)
                ag, bg = a // g, b // g
                for t in range(lead, self.n):
                    rt, vt = row[t], vec[t]
                    row[t] = x * rt + y * vt
                    vec[t] = -bg * rt + ag * vt
                touched = True
        if touched:
            self._reduce_rows()

    def _reduce_rows(self) -> None:
        """Hermite discipline: positive pivots, entries above reduced."""
        rows = self.rows
        for s, p in enumerate(self.pivots):
            if rows[s][p] < 0:
                rows[s] = [-x for x in rows[s]]
            piv = rows[s][p]
            for r in range(s):
                q = rows[r][p] // piv
                if q:
                    rs = rows[s]
                    rows[r] = [x - q * y for x, y in zip(rows[r], rs)]

    def reduce(self, vec: Vector) -> Vector:
        """Residual of vec after greedy reduction; zero iff vec is in the lattice."""
        vec = list(vec)
        for row, p in zip(self.rows, self.pivots):
            x = vec[p]
            if x and x % row[p] == 0:
                q = x // row[p]
                for t in range(p, self.n):
                    vec[t] -= q * row[t]
        return vec

    def __contains__(self, vec: Vector) -> bool:
        return all(x == 0 for x in self.reduce(vec))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def coords_of(self, vec: Vector):
        """Express vec over the echelon basis rows; None if not in the lattice."""
        vec = list(vec)
        coeffs = [0] * len(self.rows)
        for i, (row, p) in enumerate(zip(self.rows, self.pivots)):
            x = vec[p]
            if x:
                if x % row[p]:
                    return None
                q = x // row[p]
                coeffs[i] = q
                for t in range(p, self.n):
                    vec[t] -= q * row[t]
        if any(vec):
            return None
        return coeffs

    def basis(self) -> list[Vector]:
        return [row[:] for row in self.rows]

    def canonical(self) -> tuple:
        """Hermite-reduced basis, unique for the lattice (maintained by add)."""
        return tuple(tuple(row) for row in self.rows)


def _xgcd(a: int, b: int):
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def lattice_basis(vectors, n: int) -> list[Vector]:
    return Lattice(n, vectors).basis()


def hnf_rows(mat, n: int | None = None) -> list[Vector]:
    """Canonical row Hermite form of the row span; zero rows dropped.

    Entries stay reduced, so this is the growth-safe workhorse for the
    bigger eliminations (naive Smith reduction can blow up doubly
    exponentially).
    """
    if not mat:
        return []
    n = len(mat[0]) if n is None else n
    return [list(r) for r in Lattice(n, mat).canonical()]


def _is_monomial_matrix(mat) -> bool:
    if not mat:
        return True
    col_used = set()
    for row in mat:
        support = [j for j, x in enumerate(row) if x]
        if len(support) != 1 or support[0] in col_used:
            return False
        col_used.add(support[0])
    return True


def snf_diagonal_orders(mat) -> tuple[int, list[int]]:
    """Rank and the multiset of nonzero SNF diagonal entries of mat.

    Alternates row and column Hermite reduction until the matrix is a
    (partial) monomial matrix; the invariant factors are then the canonical
    refactorization of the diagonal multiset.  Keeps entries polynomially
    bounded, unlike direct pivoting.
    """
    work = [list(r) for r in mat if any(r)]
    rounds = 0
    while work:
        work = hnf_rows(work, len(work[0]))
        if _is_monomial_matrix(work):
            break
        work = transpose(work)
        rounds += 1
        if rounds > 10_000:
            raise RuntimeError("alternating Hermite reduction failed to settle")
    orders = sorted(abs(x) for row in work for x in row if x)
    return len(orders), orders


def solve_frac_gauss(a: Matrix, b: Vector):
    """Rational solution of a @ x = b by fraction Gaussian elimination."""
    m = len(a)
    n = len(a[0]) if m else 0
    work = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = 1 / work[r][col]
        work[r] = [x * inv for x in work[r]]
        for i in range(m):
            if i != r and work[i][col]:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = work[i][n]
    for i in range(r, m):
        if work[i][n]:
            return None
    # verify (free columns were set to zero)
    for i in range(m):
        if sum(Fraction(a[i][j]) * x[j] for j in range(n)) != b[i]:
            return None
    return x


def lattice_eq(vecs_a, vecs_b, n: int) -> bool:
    return Lattice(n, vecs_a).canonical() == Lattice(n, vecs_b).canonical()


def vector_relations(vectors, n: int) -> list[Vector]:
    """Basis of {c : sum_i c_i v_i = 0}, via echelon on tagged vectors."""
    k = len(vectors)
    lat = Lattice(n + k)
    for i, v in enumerate(vectors):
        lat.add(list(v) + [int(t == i) for t in range(k)])
    return [row[n:] for row in lat.basis() if not any(row[:n])]


def lattice_intersection(vecs_a, vecs_b, n: int) -> list[Vector]:
    """Generators of span_Z(vecs_a) & span_Z(vecs_b)."""
    va = [list(v) for v in vecs_a]
    vb = [list(v) for v in vecs_b]
    if not va or not vb:
        return []
    gens = []
    for rel in vector_relations(va + [[-x for x in v] for v in vb], n):
        vec = [0] * n
        for coeff, v in zip(rel[: len(va)], va):
            if coeff:
                for r in range(n):
                    vec[r] += coeff * v[r]
        if any(vec):
            gens.append(vec)
    return gens


def quotient_invariants(num_vecs, den_vecs, n: int) -> tuple[int, list[int]]:
    """Structure of span(num_vecs) / span(den_vecs), which must be contained.

    Returns (free_rank, invariant factors >= 2 in a divisibility chain).
    """
    lat = Lattice(n, num_vecs)
    basis = lat.basis()
    if not basis:
        for v in den_vecs:
            if any(v):
                raise ValueError("denominator lattice not contained in numerator")
        return 0, []
    coords = []
    for v in den_vecs:
        c = lat.coords_of(v)
        if c is None:
            raise ValueError("denominator lattice not contained in numerator")
        coords.append(c)
    if not coords:
        return len(basis), []
    rank, orders = snf_diagonal_orders(coords)
    torsion = invariant_factors_from_orders(orders)
    return len(basis) - rank, torsion


def class_order(vec: Vector, den_vecs, n: int):
    """Least k >= 1 with k*vec in span_Z(den_vecs); math.inf if none exists.

    Equals the lcm of the denominators of vec's rational coordinates over
    any basis of the lattice.
    """
    if not any(vec):
        return 1
    basis = Lattice(n, den_vecs).basis()
    if not basis:
        return inf
    mat = [[v[r] for v in basis] for r in range(n)]
    x = solve_frac_gauss(mat, vec)
    if x is None:
        return inf
    return lcm(*(Fraction(c).denominator for c in x))


# ---------------------------------------------------------------------------
# invariant factors from a list of cyclic orders


def _factorize(n: int) -> dict[int, int]:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_from_orders(orders) -> list[int]:
    """Rewrite a product of cyclic groups Z/n_1 x ... as invariant factors.

    Output is the ascending divisibility chain with unit factors dropped.
    """
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        if n < 1:
            raise ValueError("cyclic orders must be positive")
        for p, e in _factorize(n).items():
            by_prime.setdefault(p, []).append(e)
    depth = max((len(v) for v in by_prime.values()), default=0)
    factors = []
    for slot in range(depth):
        f = 1
        for p, exps in by_prime.items():
            exps_sorted = sorted(exps, reverse=True)
            if slot < len(exps_sorted):
                f *= p ** exps_sorted[slot]
        factors.append(f)
    return sorted(f for f in factors if f > 1)


def group_order(free_rank: int, torsion) -> int | float:
    return inf if free_rank else prod(torsion, start=1)
