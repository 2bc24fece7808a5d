"""Exact integer linear algebra and finitely generated abelian groups.

Every group is a quotient ``Z^n / R`` where the columns of the integer
matrix ``R`` are the relators. Groups compare equal exactly when their
invariant factors and free ranks agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from . import _kernel
from .errors import WellDefinednessError

Vector = list[int]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major. Entries are Python ints."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")
        for e in self.entries:
            if not isinstance(e, int):
                raise TypeError(f"non-integer entry {e!r}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
        cols = [list(c) for c in columns]
        return cls.from_rows([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        e = [0] * (rows * cols)
        for t, v in enumerate(values):
            e[t * cols + t] = v
        return cls(rows, cols, tuple(e))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[int]:
        return list(self.entries[j::self.cols]) if self.cols else []

    def tolist(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix.from_rows(self.columns(), self.rows)

    def apply(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        c = self.cols
        e = self.entries
        return [sum(e[i * c + j] * v[j] for j in range(c) if v[j]) for i in range(self.rows)]

    def max_abs(self) -> int:
        return max((abs(e) for e in self.entries), default=0)

    def _np(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.rows, self.cols)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        # int64 fast path only when no partial sum can overflow
        a, b = self.max_abs(), other.max_abs()
        if max(a, b) < 2**62 and a * b * max(self.cols, 1) < 2**62:
            prod_ = self._np() @ other._np()
            return IntMatrix(self.rows, other.cols, tuple(int(x) for x in prod_.ravel()))
        ocols = other.columns()
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), oc)) for oc in ocols] for i in range(self.rows)],
            other.cols,
        )

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + other.scale(-1)

    def __neg__(self) -> IntMatrix:
        return self.scale(-1)

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def hstack(self, *others: IntMatrix) -> IntMatrix:
        mats = (self,) + others
        for m in mats:
            if m.rows != self.rows:
                raise ValueError("row count mismatch")
        return IntMatrix.from_rows(
            [sum((m.row(i) for m in mats), []) for i in range(self.rows)],
            sum(m.cols for m in mats),
        )

    def vstack(self, *others: IntMatrix) -> IntMatrix:
        mats = (self,) + others
        for m in mats:
            if m.cols != self.cols:
                raise ValueError("column count mismatch")
        return IntMatrix(sum(m.rows for m in mats), self.cols, sum((m.entries for m in mats), ()))

    def kron(self, other: IntMatrix) -> IntMatrix:
        r, c = self.rows * other.rows, self.cols * other.cols
        a, b = self.max_abs(), other.max_abs()
        if max(a, b) < 2**62 and a * b < 2**62:
            k = np.kron(self._np(), other._np())
            return IntMatrix(r, c, tuple(int(x) for x in k.ravel()))
        out = [0] * (r * c)
        for i, j in product(range(self.rows), range(self.cols)):
            a = self[i, j]
            if not a:
                continue
            for k, l in product(range(other.rows), range(other.cols)):
                out[(i * other.rows + k) * c + j * other.cols + l] = a * other[k, l]
        return IntMatrix(r, c, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def sparse_rows(self) -> list[dict[int, int]]:
        c = self.cols
        return [{j: v for j, v in enumerate(self.entries[i * c:(i + 1) * c]) if v} for i in range(self.rows)]

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1] if n else 1


class SmithForm:
    """Smith decomposition ``U M V = D`` of a (possibly sparse) integer matrix.

    ``U`` and ``V`` are never materialised unless asked for; they are kept as
    logs of elementary operations and replayed on vectors.
    """

    def __init__(self, rows: list[dict[int, int]], ncols: int, *, track_rows=True, track_cols=True):
        self.nrows = len(rows)
        self.ncols = ncols
        work = [dict(r) for r in rows]
        self.diag, self.row_ops, self.col_ops = _kernel.smith_sparse(work, ncols, track_rows, track_cols)
        self.rank = len(self.diag)

    @classmethod
    def of(cls, m: IntMatrix, **kw) -> SmithForm:
        return cls(m.sparse_rows(), m.cols, **kw)

    def u(self, v: Sequence[int]) -> Vector:
        return _kernel.replay_rows(self.row_ops, list(v))

    def u_inv(self, v: Sequence[int]) -> Vector:
        return _kernel.replay_rows_inverse(self.row_ops, list(v))

    def v(self, x: Sequence[int]) -> Vector:
        return _kernel.replay_cols(self.col_ops, list(x))

    def v_inv(self, x: Sequence[int]) -> Vector:
        return _kernel.replay_cols_inverse(self.col_ops, list(x))

    def unit(self, n: int, i: int) -> Vector:
        e = [0] * n
        e[i] = 1
        return e

    def u_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns([self.u(self.unit(self.nrows, i)) for i in range(self.nrows)], self.nrows)

    def v_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns([self.v(self.unit(self.ncols, i)) for i in range(self.ncols)], self.ncols)

    def d_matrix(self) -> IntMatrix:
        return IntMatrix.diagonal(self.diag, self.nrows, self.ncols)

    def nullspace(self) -> list[Vector]:
        """A basis of the integer kernel ``{x : M x = 0}``."""
        return [self.v(self.unit(self.ncols, j)) for j in range(self.rank, self.ncols)]

    def solve(self, b: Sequence[int]) -> Vector | None:
        """Some integer ``x`` with ``M x = b``, or ``None``."""
        y = self.u(b)
        z = [0] * self.ncols
        for t, d in enumerate(self.diag):
            if y[t] % d:
                return None
            z[t] = y[t] // d
        if any(y[self.rank:]):
            return None
        return self.v(z)


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular ``U``, ``V`` and diagonal ``D`` with ``U @ m @ V == D``."""
    sf = SmithForm.of(m)
    return sf.u_matrix(), sf.d_matrix(), sf.v_matrix()


def invariant_factors(m: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    return SmithForm.of(m, track_rows=False, track_cols=False).diag


def integer_nullspace(m: IntMatrix) -> list[Vector]:
    return SmithForm.of(m, track_rows=False).nullspace()


@dataclass(frozen=True, eq=False)
class FgAbGroup:
    """The abelian group ``Z^ngens`` modulo the columns of ``relations``.

    Canonical data is computed eagerly: ``torsion`` holds the invariant
    factors ``d_i >= 2`` with ``d_i | d_{i+1}`` and ``free_rank`` the rank.
    Canonical coordinates of an element list its torsion coordinates (each
    reduced modulo ``d_i``) followed by its free coordinates.
    """

    ngens: int
    relations: IntMatrix
    torsion: tuple[int, ...] = field(init=False)
    free_rank: int = field(init=False)
    _proj: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    _lift: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.relations.rows != self.ngens:
            raise ValueError("relation matrix must have one row per generator")
        sf = SmithForm.of(self.relations, track_cols=False)
        diag = sf.diag + [0] * (self.ngens - sf.rank)
        keep = [t for t, d in enumerate(diag) if d != 1]
        n = self.ngens
        ucols = [sf.u([int(i == j) for j in range(n)]) for i in range(n)]
        proj = tuple(tuple(ucols[i][t] for t in keep) for i in range(n))
        lift = [tuple(sf.u_inv([int(t == j) for j in range(n)])) for t in keep]
        object.__setattr__(self, "torsion", tuple(diag[t] for t in keep if diag[t] != 0))
        object.__setattr__(self, "free_rank", sum(1 for t in keep if diag[t] == 0))
        object.__setattr__(self, "_proj", proj)
        object.__setattr__(self, "_lift", tuple(lift))

    # construction helpers

    @classmethod
    def free(cls, rank: int) -> FgAbGroup:
        return cls(rank, IntMatrix.zeros(rank, 0))

    @classmethod
    def from_invariants(cls, torsion: Iterable[int] = (), free_rank: int = 0) -> FgAbGroup:
        """The group ``Z/d_1 + ... + Z/d_k + Z^free_rank`` on its canonical generators.

        Factors equal to 1 are dropped; the list need not be a divisibility chain.
        """
        ds = [abs(d) for d in torsion if abs(d) != 1]
        n = len(ds) + free_rank
        return cls(n, IntMatrix.diagonal(ds, n, len(ds)))

    @classmethod
    def cyclic(cls, n: int) -> FgAbGroup:
        return cls.from_invariants([n]) if n else cls.free(1)

    # canonical structure

    @property
    def canonical_moduli(self) -> tuple[int, ...]:
        """Modulus per canonical coordinate; 0 marks a free coordinate."""
        return self.torsion + (0,) * self.free_rank

    @property
    def canonical_rank(self) -> int:
        return len(self.torsion) + self.free_rank

    def invariants(self) -> tuple[tuple[int, ...], int]:
        return self.torsion, self.free_rank

    def invariants_dict(self) -> dict:
        return {"torsion": list(self.torsion), "free_rank": self.free_rank, "pretty": str(self)}

    def __eq__(self, other):
        if not isinstance(other, FgAbGroup):
            return NotImplemented
        return self.invariants() == other.invariants()

    def __hash__(self):
        return hash(self.invariants())

    def is_trivial(self) -> bool:
        return not self.torsion and not self.free_rank

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        """Group order, or ``None`` when infinite."""
        if self.free_rank:
            return None
        return reduce(lambda a, b: a * b, self.torsion, 1)

    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        return self.torsion[-1] if self.torsion else 1

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"FgAbGroup({self})"

    # elements

    def canonical_coords(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.ngens:
            raise ValueError("element has the wrong number of coordinates")
        out = []
        for t, m in enumerate(self.canonical_moduli):
            s = sum(self._proj[i][t] * x[i] for i in range(self.ngens) if x[i])
            out.append(s % m if m else s)
        return tuple(out)

    def lift(self, coords: Sequence[int]) -> Vector:
        """A generator-coordinate representative of canonical coordinates."""
        if len(coords) != self.canonical_rank:
            raise ValueError("wrong number of canonical coordinates")
        x = [0] * self.ngens
        for t, c in enumerate(coords):
            if c:
                for i, v in enumerate(self._lift[t]):
                    x[i] += c * v
        return x

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.canonical_coords(x))

    def equal_elements(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.is_zero([a - b for a, b in zip(x, y)])

    def element_order(self, x: Sequence[int]) -> int | None:
        c = self.canonical_coords(x)
        o = 1
        for v, m in zip(c, self.canonical_moduli):
            if v == 0:
                continue
            if m == 0:
                return None
            o = o * (m // gcd(v, m)) // gcd(o, m // gcd(v, m))
        return o

    def canonical(self) -> FgAbGroup:
        """The same group presented on its canonical generators."""
        return FgAbGroup.from_invariants(self.torsion, self.free_rank)

    def to_canonical(self) -> AbHom:
        """Isomorphism from this presentation onto :meth:`canonical`."""
        m = IntMatrix.from_rows(
            [[self._proj[i][t] for i in range(self.ngens)] for t in range(self.canonical_rank)], self.ngens
        )
        return AbHom(self, self.canonical(), m)

    def from_canonical(self) -> AbHom:
        m = IntMatrix.from_columns([list(c) for c in self._lift], self.ngens)
        return AbHom(self.canonical(), self, m)

    def elements(self) -> list[tuple[int, ...]]:
        """All elements as canonical coordinates (finite groups only)."""
        if self.free_rank:
            raise ValueError("infinite group")
        return list(product(*(range(d) for d in self.torsion)))


@dataclass(frozen=True, eq=False)
class AbHom:
    """Homomorphism given by an integer matrix on the chosen generators."""

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        m = self.matrix
        if (m.rows, m.cols) != (self.target.ngens, self.source.ngens):
            raise ValueError(
                f"matrix shape {m.rows}x{m.cols} does not fit "
                f"{self.source.ngens} -> {self.target.ngens} generators"
            )
        for j in range(self.source.relations.cols):
            image = m.apply(self.source.relations.column(j))
            if not self.target.is_zero(image):
                raise WellDefinednessError(f"relator {j} of the source does not map to zero")

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.matrix.apply(x)

    def then(self, g: AbHom) -> AbHom:
        """``g`` after ``self``."""
        if g.source.ngens != self.target.ngens or g.source.relations != self.target.relations:
            raise ValueError("composition of non-matching homomorphisms")
        return AbHom(self.source, g.target, g.matrix @ self.matrix)

    def canonical_matrix(self) -> IntMatrix:
        """Matrix of the map between canonical generators (target coords reduced)."""
        cols = []
        for t in range(self.source.canonical_rank):
            e = [int(t == s) for s in range(self.source.canonical_rank)]
            cols.append(list(self.target.canonical_coords(self(self.source.lift(e)))))
        return IntMatrix.from_columns(cols, self.target.canonical_rank)

    def is_zero(self) -> bool:
        return all(self.target.is_zero(self.matrix.column(j)) for j in range(self.source.ngens))

    def is_injective(self) -> bool:
        return kernel(self)[0].is_trivial()

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_surjective() and self.is_injective()

    def equals(self, other: AbHom) -> bool:
        if self.source != other.source or self.target != other.target:
            return False
        return all(
            self.target.equal_elements(self.matrix.column(j), other.matrix.column(j))
            for j in range(self.source.ngens)
        )

    @classmethod
    def identity(cls, a: FgAbGroup) -> AbHom:
        return cls(a, a, IntMatrix.identity(a.ngens))

    @classmethod
    def zero(cls, a: FgAbGroup, b: FgAbGroup) -> AbHom:
        return cls(a, b, IntMatrix.zeros(b.ngens, a.ngens))


def cokernel(f: AbHom) -> tuple[FgAbGroup, AbHom]:
    """``target / f(source)`` with its projection from the target."""
    t = f.target
    q = FgAbGroup(t.ngens, t.relations.hstack(f.matrix))
    return q, AbHom(t, q, IntMatrix.identity(t.ngens))


def _kernel_vectors(m: IntMatrix, target_relations: IntMatrix) -> list[Vector]:
    """Generators of ``{x : m x in colspan(target_relations)}``."""
    n = m.cols
    big = m.hstack(target_relations)
    if big.cols == 0:
        return []
    return [v[:n] for v in integer_nullspace(big) if any(v[:n])]


def kernel(f: AbHom) -> tuple[FgAbGroup, AbHom]:
    """The kernel of ``f`` with its inclusion into the source."""
    s = f.source
    vecs = _kernel_vectors(f.matrix, f.target.relations)
    k = IntMatrix.from_columns(vecs, s.ngens)
    rel = _kernel_vectors(k, s.relations)
    kg = FgAbGroup(len(vecs), IntMatrix.from_columns(rel, len(vecs)))
    return kg, AbHom(kg, s, k)


def image(f: AbHom) -> tuple[FgAbGroup, AbHom]:
    """The image of ``f`` with its inclusion into the target."""
    s = f.source
    vecs = _kernel_vectors(f.matrix, f.target.relations)
    ig = FgAbGroup(s.ngens, IntMatrix.from_columns(vecs, s.ngens))
    return ig, AbHom(ig, f.target, f.matrix)


def torsion_subgroup(a: FgAbGroup) -> tuple[FgAbGroup, AbHom]:
    """The finite-order elements with their inclusion."""
    t = FgAbGroup.from_invariants(a.torsion)
    cols = [list(a._lift[i]) for i in range(len(a.torsion))]
    return t, AbHom(t, a, IntMatrix.from_columns(cols, a.ngens))


def direct_sum(*groups: FgAbGroup) -> FgAbGroup:
    n = sum(g.ngens for g in groups)
    cols = []
    off = 0
    for g in groups:
        for c in g.relations.columns():
            v = [0] * n
            v[off:off + g.ngens] = c
            cols.append(v)
        off += g.ngens
    return FgAbGroup(n, IntMatrix.from_columns(cols, n))


def block_diagonal(*mats: IntMatrix) -> IntMatrix:
    r = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = [[0] * c for _ in range(r)]
    ro = co = 0
    for m in mats:
        for i in range(m.rows):
            out[ro + i][co:co + m.cols] = m.row(i)
        ro += m.rows
        co += m.cols
    return IntMatrix.from_rows(out, c)


def tensor(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    """``a (x) b``; generator ``(i, j)`` sits at index ``i * b.ngens + j``."""
    rel = a.relations.kron(IntMatrix.identity(b.ngens)).hstack(
        IntMatrix.identity(a.ngens).kron(b.relations)
    )
    return FgAbGroup(a.ngens * b.ngens, rel)


def tensor_maps(f: AbHom, g: AbHom) -> AbHom:
    return AbHom(tensor(f.source, g.source), tensor(f.target, g.target), f.matrix.kron(g.matrix))


def hom(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    """``Hom(a, b)`` in canonical form, from the cyclic decompositions."""
    tors = []
    free = a.free_rank * b.free_rank
    for d in a.torsion:
        tors.extend(gcd(d, e) for e in b.torsion)
    for _ in range(a.free_rank):
        tors.extend(b.torsion)
    return FgAbGroup.from_invariants(tors, free)


@dataclass(frozen=True, eq=False)
class Subquotient:
    """``(span(cycles) + R) / (span(boundaries) + R)`` inside ``Z^n / R``.

    ``cycles`` and ``boundaries`` are lists of vectors in ``Z^n``; the caller
    guarantees every boundary is congruent to a combination of cycles.
    """

    ambient: FgAbGroup
    cycles: tuple[tuple[int, ...], ...]
    boundaries: tuple[tuple[int, ...], ...]
    group: FgAbGroup = field(init=False)
    _solver: SmithForm = field(init=False, repr=False)

    def __post_init__(self):
        n = self.ambient.ngens
        k = len(self.cycles)
        zmat = IntMatrix.from_columns([list(c) for c in self.cycles], n)
        bmat = IntMatrix.from_columns([list(b) for b in self.boundaries], n)
        big = zmat.hstack(bmat, self.ambient.relations)
        rel = [v[:k] for v in integer_nullspace(big)] if big.cols else []
        object.__setattr__(self, "group", FgAbGroup(k, IntMatrix.from_columns(rel, k)))
        object.__setattr__(self, "_solver", SmithForm.of(zmat.hstack(self.ambient.relations)))

    def classify(self, z: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of the class of the cycle ``z``."""
        sol = self._solver.solve(z)
        if sol is None:
            raise ValueError("vector is not a cycle of this subquotient")
        return self.group.canonical_coords(sol[:len(self.cycles)])

    def representative(self, coords: Sequence[int]) -> Vector:
        y = self.group.lift(coords)
        n = self.ambient.ngens
        out = [0] * n
        for c, cyc in zip(y, self.cycles):
            if c:
                for i in range(n):
                    out[i] += c * cyc[i]
        return out
