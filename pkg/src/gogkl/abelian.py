"""Exact arithmetic for finitely generated abelian groups.

Everything here works over plain Python integers (arbitrary precision);
there are no floating point or modular shortcuts anywhere.  The central
tool is the Smith normal form of an integer matrix, from which we derive
canonical forms (invariant factors), subgroup lattices, indices, quotients
and the 2-torsion test used by the square-root-closure checker.

Conventions:

* Elements are row vectors.  A matrix ``m`` acts on the right: ``x @ m``.
* An ``AbelianGroup`` is stored in invariant-factor form: a free rank
  plus a divisibility chain d1 | d2 | ... | dk with every di >= 2.
* Group elements are coordinate tuples, free coordinates first, then one
  residue in [0, di) per invariant factor.
* Subgroups are handled through their preimage lattices in Z^n, where
  n = free_rank + number of invariant factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


class AbelianError(ValueError):
    """Raised for malformed matrices, elements or subgroup data."""


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise AbelianError("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise AbelianError(
                f"entry count {len(self.entries)} != {self.rows}x{self.cols}")
        if not all(isinstance(e, int) for e in self.entries):
            raise AbelianError("matrix entries must be integers")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise AbelianError("ragged rows")
        else:
            width = 0 if cols is None else cols
        if cols is not None and rows and width != cols:
            raise AbelianError(f"rows have width {width}, expected {cols}")
        flat = tuple(int(e) for r in rows for e in r)
        return cls(len(rows), width, flat)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise AbelianError("dimension mismatch in matrix product")
        rows = []
        for i in range(self.rows):
            r = self.row(i)
            rows.append([sum(r[k] * other[k, j] for k in range(self.cols))
                         for j in range(other.cols)])
        return IntMatrix.from_rows(rows, other.cols)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0
                   for i in range(self.rows) for j in range(self.cols) if i != j)

    def det(self) -> int:
        """Exact determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise AbelianError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __str__(self) -> str:
        return "[" + "; ".join(",".join(str(e) for e in self.row(i))
                               for i in range(self.rows)) + "]"


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row(a, dst, src, k):
    """row dst += k * row src"""
    ad, asrc = a[dst], a[src]
    for j in range(len(ad)):
        ad[j] += k * asrc[j]


def _add_col(a, dst, src, k):
    """col dst += k * col src"""
    for row in a:
        row[dst] += k * row[src]


def _negate_row(a, i):
    a[i] = [-x for x in a[i]]


class _SnfWork:
    """Mutable SNF computation tracking U, V and their inverses.

    Maintains  s = u @ m @ v  and  u @ uinv == I,  vinv @ v == I,
    so  m = uinv @ s @ vinv.
    """

    def __init__(self, m: IntMatrix):
        self.s = m.to_rows()
        self.r, self.c = m.rows, m.cols
        self.u = IntMatrix.identity(self.r).to_rows()
        self.uinv = IntMatrix.identity(self.r).to_rows()
        self.v = IntMatrix.identity(self.c).to_rows()
        self.vinv = IntMatrix.identity(self.c).to_rows()

    # Each elementary operation is mirrored so the tracked inverses stay exact.
    def row_swap(self, i, j):
        _swap_rows(self.s, i, j)
        _swap_rows(self.u, i, j)
        _swap_cols(self.uinv, i, j)

    def col_swap(self, i, j):
        _swap_cols(self.s, i, j)
        _swap_cols(self.v, i, j)
        _swap_rows(self.vinv, i, j)

    def row_add(self, dst, src, k):
        _add_row(self.s, dst, src, k)
        _add_row(self.u, dst, src, k)
        _add_col(self.uinv, src, dst, -k)

    def col_add(self, dst, src, k):
        _add_col(self.s, dst, src, k)
        _add_col(self.v, dst, src, k)
        _add_row(self.vinv, src, dst, -k)

    def row_negate(self, i):
        _negate_row(self.s, i)
        _negate_row(self.u, i)
        for row in self.uinv:
            row[i] = -row[i]

    def reduce(self) -> None:
        s, r, c = self.s, self.r, self.c
        t = 0
        while t < min(r, c):
            # Choose the pivot of least nonzero magnitude in the trailing block.
            pivot = None
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    e = abs(s[i][j])
                    if e and (best is None or e < best):
                        best, pivot = e, (i, j)
            if pivot is None:
                break
            pi, pj = pivot
            if pi != t:
                self.row_swap(t, pi)
            if pj != t:
                self.col_swap(t, pj)
            while True:
                # Clear column t then row t by Euclidean steps.
                dirty = False
                for i in range(t + 1, r):
                    if s[i][t]:
                        q = s[i][t] // s[t][t]
                        self.row_add(i, t, -q)
                        if s[i][t]:
                            self.row_swap(i, t)
                            dirty = True
                for j in range(t + 1, c):
                    if s[t][j]:
                        q = s[t][j] // s[t][t]
                        self.col_add(j, t, -q)
                        if s[t][j]:
                            self.col_swap(j, t)
                            dirty = True
                if dirty:
                    continue
                # Force the pivot to divide the whole trailing block.
                stamp = None
                for i in range(t + 1, r):
                    for j in range(t + 1, c):
                        if s[i][j] % s[t][t]:
                            stamp = i
                            break
                    if stamp is not None:
                        break
                if stamp is None:
                    break
                self.row_add(t, stamp, 1)
            if s[t][t] < 0:
                self.row_negate(t)
            t += 1


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (S, U, V) with S = U @ m @ V, U and V unimodular, S diagonal
    with non-negative entries in a divisibility chain d1 | d2 | ...
    """
    s, u, v, _, _ = smith_normal_form_full(m)
    return s, u, v


def smith_normal_form_full(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    """Like :func:`smith_normal_form` but also returns U^{-1} and V^{-1}."""
    work = _SnfWork(m)
    work.reduce()
    return (IntMatrix.from_rows(work.s, m.cols),
            IntMatrix.from_rows(work.u, m.rows),
            IntMatrix.from_rows(work.v, m.cols),
            IntMatrix.from_rows(work.uinv, m.rows),
            IntMatrix.from_rows(work.vinv, m.cols))


def hermite_row_basis(rows: Iterable[Sequence[int]], cols: int) -> list[list[int]]:
    """Canonical (row-style Hermite) basis of the lattice spanned by ``rows``.

    Pivots are positive, entries above each pivot are reduced into
    [0, pivot).  The result is a deterministic basis of the row span.
    """
    basis: list[list[int]] = [list(r) for r in rows if any(r)]
    for row in basis:
        if len(row) != cols:
            raise AbelianError("row width mismatch")
    # Gaussian elimination over Z using gcd steps, column by column.
    out: list[list[int]] = []
    work = basis
    col = 0
    while col < cols and work:
        carrier = None
        rest = []
        for row in work:
            if row[col] == 0:
                rest.append(row)
                continue
            if carrier is None:
                carrier = row
                continue
            # gcd step: combine carrier and row to shrink the pivot.
            while row[col]:
                q = carrier[col] // row[col]
                carrier = [a - q * b for a, b in zip(carrier, row)]
                carrier, row = row, carrier
            rest.append(row)
        if carrier is not None:
            if carrier[col] < 0:
                carrier = [-x for x in carrier]
            out.append(carrier)
        work = [r for r in rest if any(r)]
        col += 1
    # Reduce entries above each pivot.
    for i in range(len(out) - 1, -1, -1):
        p = next(j for j in range(cols) if out[i][j])
        for k in range(i):
            if out[k][p]:
                q = out[k][p] // out[i][p]
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return out


def kernel_basis(m: IntMatrix) -> list[list[int]]:
    """Basis of { x in Z^rows : x @ m = 0 } as rows."""
    s, u, _v = smith_normal_form(m)
    rank = sum(1 for d in s.diagonal() if d)
    return [list(u.row(i)) for i in range(rank, m.rows)]


def lattice_intersection(a_rows: list[list[int]], b_rows: list[list[int]], cols: int) -> list[list[int]]:
    """Basis of rowspan(a) n rowspan(b) inside Z^cols."""
    if not a_rows or not b_rows:
        return []
    stacked = IntMatrix.from_rows(a_rows + b_rows, cols)
    combos = kernel_basis(stacked)
    na = len(a_rows)
    vecs = []
    for combo in combos:
        vec = [sum(combo[i] * a_rows[i][j] for i in range(na)) for j in range(cols)]
        vecs.append(vec)
    return hermite_row_basis(vecs, cols)


def solve_row_membership(basis: list[list[int]], vec: Sequence[int], cols: int) -> list[int] | None:
    """Solve x @ basis = vec over Z; return x or None if unsolvable."""
    if not basis:
        return [] if not any(vec) else None
    m = IntMatrix.from_rows(basis, cols)
    s, u, v, _uinv, _vinv = smith_normal_form_full(m)
    target = [sum(vec[i] * v[i, j] for i in range(cols)) for j in range(cols)]
    k = m.rows
    w = [0] * k
    for j in range(cols):
        d = s[j, j] if j < min(k, cols) else 0
        if d:
            if target[j] % d:
                return None
            w[j] = target[j] // d
        elif target[j]:
            return None
    # x = w @ u
    return [sum(w[i] * u[i, j] for i in range(k)) for j in range(k)]


def lattice_contains(basis: list[list[int]], vec: Sequence[int], cols: int) -> bool:
    return solve_row_membership(basis, vec, cols) is not None


# ---------------------------------------------------------------------------
# Finitely generated abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group in invariant-factor form.

    ``free_rank`` copies of Z plus Z/d1 + ... + Z/dk with d1 | d2 | ... | dk,
    every di >= 2.  This form is unique per isomorphism class, so structural
    equality of values is isomorphism of groups.
    """

    free_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise AbelianError("negative free rank")
        fs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        for d in fs:
            if d < 2:
                raise AbelianError(f"invariant factor {d} < 2")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise AbelianError(f"invariant factors {a} | {b} fail divisibility")

    # -- constructors -------------------------------------------------------

    @classmethod
    def free(cls, rank: int) -> "AbelianGroup":
        return cls(rank)

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        if n < 1:
            raise AbelianError("cyclic order must be >= 1")
        return cls(0, ()) if n == 1 else cls(0, (n,))

    @classmethod
    def trivial(cls) -> "AbelianGroup":
        return cls(0, ())

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "AbelianGroup":
        """Z/o1 + Z/o2 + ... (+ Z per order 0), recanonicalized."""
        orders = list(orders)
        rank = sum(1 for o in orders if o == 0)
        torsion = [o for o in orders if o not in (0, 1)]
        if not torsion:
            return cls(rank, ())
        rows = [[torsion[i] if i == j else 0 for j in range(len(torsion))]
                for i in range(len(torsion))]
        grp = canonicalize(IntMatrix.from_rows(rows, len(torsion)))
        return cls(rank, grp.invariant_factors)

    def direct_sum(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_cyclic_orders(
            [0] * (self.free_rank + other.free_rank)
            + list(self.invariant_factors) + list(other.invariant_factors))

    # -- structure ----------------------------------------------------------

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.invariant_factors)

    @property
    def rank(self) -> int:
        return self.free_rank

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def torsion_order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def exponent(self) -> int | None:
        """Least common exponent of the torsion part (None if free rank > 0
        makes the group exponent infinite and there is torsion ... we only
        report the torsion exponent; callers treat free parts separately)."""
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def has_two_torsion(self) -> bool:
        """True iff the group has an element of order 2."""
        return bool(self.invariant_factors) and self.invariant_factors[-1] % 2 == 0

    # -- elements -----------------------------------------------------------

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def reduce_element(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.ngens:
            raise AbelianError(
                f"element has {len(coords)} coordinates, expected {self.ngens}")
        out = [int(c) for c in coords]
        for k, d in enumerate(self.invariant_factors):
            i = self.free_rank + k
            out[i] %= d
        return tuple(out)

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self.reduce_element([x + y for x, y in zip(a, b, strict=True)])

    def neg(self, a: Sequence[int]) -> tuple[int, ...]:
        return self.reduce_element([-x for x in a])

    def scale(self, k: int, a: Sequence[int]) -> tuple[int, ...]:
        return self.reduce_element([k * x for x in a])

    def element_order(self, a: Sequence[int]) -> int | None:
        a = self.reduce_element(a)
        if any(a[: self.free_rank]):
            return None
        n = 1
        for k, d in enumerate(self.invariant_factors):
            c = a[self.free_rank + k]
            if c:
                o = d // gcd(c, d)
                n = n * o // gcd(n, o)
        return n

    def elements(self) -> Iterable[tuple[int, ...]]:
        """All elements; only for finite groups."""
        if self.free_rank:
            raise AbelianError("cannot enumerate an infinite group")
        def rec(i: int, prefix: tuple[int, ...]):
            if i == len(self.invariant_factors):
                yield prefix
                return
            for c in range(self.invariant_factors[i]):
                yield from rec(i + 1, prefix + (c,))
        yield from rec(0, ())

    def standard_generators(self) -> list[tuple[int, ...]]:
        n = self.ngens
        return [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]

    def relation_rows(self) -> list[list[int]]:
        """Rows spanning the relation lattice M with ambient = Z^ngens / M."""
        n = self.ngens
        rows = []
        for k, d in enumerate(self.invariant_factors):
            row = [0] * n
            row[self.free_rank + k] = d
            rows.append(row)
        return rows

    # -- formatting ---------------------------------------------------------

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        from collections import Counter
        counts = Counter(self.invariant_factors)
        for d in sorted(counts):
            c = counts[d]
            parts.append(f"Z/{d}" if c == 1 else f"(Z/{d})^{c}")
        return " + ".join(parts) if parts else "0"

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        """Inverse of __str__, e.g. 'Z^2 + Z/2 + (Z/4)^3' or '0'."""
        text = text.strip()
        if text == "0":
            return cls.trivial()
        orders: list[int] = []
        for part in text.split("+"):
            part = part.strip()
            mult = 1
            if part.startswith("("):
                inner, _, exp = part.partition(")^")
                part = inner[1:].strip()
                mult = int(exp)
            elif "^" in part and not part.startswith("Z/"):
                base, _, exp = part.partition("^")
                part = base.strip()
                mult = int(exp)
            if part == "Z":
                orders.extend([0] * mult)
            elif part.startswith("Z/"):
                orders.extend([int(part[2:])] * mult)
            else:
                raise AbelianError(f"cannot parse group summand {part!r}")
        return cls.from_cyclic_orders(orders)


ZERO_GROUP = AbelianGroup.trivial()


def canonicalize(presentation: IntMatrix) -> AbelianGroup:
    """Cokernel Z^cols / rowspan(presentation) in invariant-factor form."""
    grp, _, _ = cokernel_with_maps(presentation)
    return grp


@dataclass(frozen=True)
class _CokernelMaps:
    """Projection/section pair between Z^n and the canonical cokernel."""

    ncols: int
    group: AbelianGroup
    v: IntMatrix
    vinv: IntMatrix
    free_cols: tuple[int, ...]
    torsion_cols: tuple[int, ...]

    def project(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.ncols:
            raise AbelianError("vector length mismatch in projection")
        y = [sum(vec[i] * self.v[i, j] for i in range(self.ncols))
             for j in range(self.ncols)]
        coords = [y[j] for j in self.free_cols] + [y[j] for j in self.torsion_cols]
        return self.group.reduce_element(coords)

    def lift(self, coords: Sequence[int]) -> list[int]:
        g = self.group
        if len(coords) != g.ngens:
            raise AbelianError("coordinate length mismatch in lift")
        y = [0] * self.ncols
        for k, j in enumerate(self.free_cols):
            y[j] = coords[k]
        for k, j in enumerate(self.torsion_cols):
            y[j] = coords[g.free_rank + k]
        return [sum(y[i] * self.vinv[i, j] for i in range(self.ncols))
                for j in range(self.ncols)]


def cokernel_with_maps(presentation: IntMatrix):
    """Cokernel of Z^rows -> Z^cols together with coordinate maps.

    Returns (group, project, lift) where project sends an ambient vector in
    Z^cols to canonical coordinates and lift is a section of project.
    """
    n = presentation.cols
    s, _u, v, _uinv, vinv = smith_normal_form_full(presentation)
    diag = s.diagonal()
    rank = sum(1 for d in diag if d)
    torsion_cols = tuple(j for j in range(rank) if diag[j] > 1)
    free_cols = tuple(range(rank, n))
    grp = AbelianGroup(len(free_cols), tuple(diag[j] for j in torsion_cols))
    maps = _CokernelMaps(n, grp, v, vinv, free_cols, torsion_cols)
    return grp, maps.project, maps.lift


# ---------------------------------------------------------------------------
# Subgroups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianSubgroup:
    """Subgroup of an AbelianGroup given by a generating set of elements."""

    ambient: AbelianGroup
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        gens = tuple(self.ambient.reduce_element(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_generators(cls, ambient: AbelianGroup,
                        gens: Iterable[Sequence[int]]) -> "AbelianSubgroup":
        return cls(ambient, tuple(tuple(g) for g in gens))

    @classmethod
    def full(cls, ambient: AbelianGroup) -> "AbelianSubgroup":
        return cls(ambient, tuple(ambient.standard_generators()))

    @classmethod
    def zero(cls, ambient: AbelianGroup) -> "AbelianSubgroup":
        return cls(ambient, ())

    # -- lattice view -------------------------------------------------------

    def preimage_lattice(self) -> list[list[int]]:
        """Canonical basis of the preimage of the subgroup in Z^ngens."""
        n = self.ambient.ngens
        rows = [list(g) for g in self.generators] + self.ambient.relation_rows()
        return hermite_row_basis(rows, n)

    def contains(self, element: Sequence[int]) -> bool:
        vec = list(self.ambient.reduce_element(element))
        return lattice_contains(self.preimage_lattice(), vec, self.ambient.ngens)

    def contains_subgroup(self, other: "AbelianSubgroup") -> bool:
        if other.ambient != self.ambient:
            raise AbelianError("subgroups live in different ambient groups")
        basis = self.preimage_lattice()
        return all(lattice_contains(basis, list(g), self.ambient.ngens)
                   for g in other.generators)

    def structure(self) -> AbelianGroup:
        """The subgroup's own isomorphism type, L/(L n M) with M relations."""
        n = self.ambient.ngens
        lat = self.preimage_lattice()
        if not lat:
            return AbelianGroup.trivial()
        rel = hermite_row_basis(self.ambient.relation_rows(), n)
        if not rel:
            inter: list[list[int]] = []
        else:
            inter = lattice_intersection(lat, rel, n)
        # Present L by expressing the intersection in L-coordinates.
        coeff_rows = []
        for vec in inter:
            x = solve_row_membership(lat, vec, n)
            if x is None:
                raise AbelianError("internal error: L n M not inside L")
            coeff_rows.append(x)
        return canonicalize(IntMatrix.from_rows(coeff_rows, len(lat)))

    def rank(self) -> int:
        return self.structure().free_rank

    def index(self) -> int | None:
        """[ambient : subgroup]; None when infinite."""
        n = self.ambient.ngens
        lat = self.preimage_lattice()
        if len(lat) < n:
            return None
        m = IntMatrix.from_rows(lat, n)
        d = m.det()
        return abs(d) if d else None

    def quotient(self) -> AbelianGroup:
        return self.quotient_with_maps()[0]

    def quotient_with_maps(self):
        n = self.ambient.ngens
        rows = [list(g) for g in self.generators] + self.ambient.relation_rows()
        return cokernel_with_maps(IntMatrix.from_rows(rows, n))

    def scaled(self, k: int) -> "AbelianSubgroup":
        """The subgroup k*H = { k*h : h in H }."""
        return AbelianSubgroup.from_generators(
            self.ambient, [self.ambient.scale(k, g) for g in self.generators])

    def meet(self, other: "AbelianSubgroup") -> "AbelianSubgroup":
        return subgroup_meet(self, other)

    def sum(self, other: "AbelianSubgroup") -> "AbelianSubgroup":
        if other.ambient != self.ambient:
            raise AbelianError("subgroups live in different ambient groups")
        return AbelianSubgroup.from_generators(
            self.ambient, list(self.generators) + list(other.generators))

    def index_in(self, larger: "AbelianSubgroup") -> int | None:
        """[larger : self] for nested subgroups; None when infinite."""
        if not larger.contains_subgroup(self):
            raise AbelianError("index_in requires nested subgroups")
        n = self.ambient.ngens
        big = larger.preimage_lattice()
        small = self.preimage_lattice()
        if len(small) < len(big):
            return None
        coeffs = []
        for vec in small:
            x = solve_row_membership(big, vec, n)
            if x is None:
                raise AbelianError("internal error: nested lattice solve failed")
            coeffs.append(x)
        q = canonicalize(IntMatrix.from_rows(coeffs, len(big)))
        return q.order()

    def __str__(self) -> str:
        gens = ", ".join("(" + ",".join(str(c) for c in g) + ")" for g in self.generators)
        return f"<{gens}> <= {self.ambient}"


def subgroup_meet(h1: AbelianSubgroup, h2: AbelianSubgroup) -> AbelianSubgroup:
    """Intersection of two subgroups of the same ambient group."""
    if h1.ambient != h2.ambient:
        raise AbelianError("subgroups live in different ambient groups")
    n = h1.ambient.ngens
    lat = lattice_intersection(h1.preimage_lattice(), h2.preimage_lattice(), n)
    gens = [h1.ambient.reduce_element(v) for v in lat]
    gens = [g for g in gens if any(g)]
    return AbelianSubgroup.from_generators(h1.ambient, gens)


def index_of(h: AbelianSubgroup) -> int | None:
    return h.index()


def quotient_by(h: AbelianSubgroup) -> AbelianGroup:
    return h.quotient()


def characteristic_finite_index_inside(g: AbelianGroup,
                                       h: AbelianSubgroup) -> AbelianSubgroup:
    """A fully invariant finite-index subgroup of g contained in h.

    Uses n*g where n = [g : h]: since g/h has exponent dividing n, the
    multiplication-by-n image lands inside h, and it is characteristic
    because every endomorphism commutes with multiplication by n.
    """
    if h.ambient != g:
        raise AbelianError("subgroup does not live in g")
    n = h.index()
    if n is None:
        raise AbelianError("subgroup has infinite index; no n*g trick")
    full = AbelianSubgroup.full(g)
    scaled = full.scaled(n)
    if not h.contains_subgroup(scaled):
        raise AbelianError("internal error: n*g not contained in h")
    return scaled


def has_two_torsion(g: AbelianGroup) -> bool:
    return g.has_two_torsion()
