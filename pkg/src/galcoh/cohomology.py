"""Tate cohomology of finite groups via the inhomogeneous bar complex.

Coordinates
-----------
A degree ``r >= 0`` cochain with values in a module on ``n`` generators is a
flat list of length ``|G|^r * n``: the value at ``(g_1, ..., g_r)`` occupies
``idx * n .. idx * n + n - 1`` where ``idx`` reads the tuple as base-``|G|``
digits, ``g_1`` most significant. Chains in ``C_q = M (x)_G B_q`` use the
same layout. Tate degree ``0`` and ``-1`` classes are plain module elements
and degree ``r <= -2`` classes are chains in ``C_{-r-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Callable, Sequence

from .errors import CocycleError, CrossCheckError, SizeGuardError, UnsupportedDegreeError
from .gmodule import GModule, hom_module, norm_matrix
from .groups import FiniteGroup
from .zlattice import (
    AbHom,
    FgAbGroup,
    IntMatrix,
    SmithForm,
    Subquotient,
    _kernel_vectors,
    integer_nullspace,
)

DEFAULT_WINDOW = (-3, 3)
DEFAULT_MAX_ORDER = 24
# largest number of cochain coordinates a single complex may touch
MAX_COORDINATES = 600_000


@dataclass(frozen=True)
class Limits:
    window: tuple[int, int] = DEFAULT_WINDOW
    max_order: int = DEFAULT_MAX_ORDER
    max_coordinates: int = MAX_COORDINATES

    def check_degree(self, r: int) -> None:
        lo, hi = self.window
        if not lo <= r <= hi:
            raise UnsupportedDegreeError(f"degree {r} is outside the supported window [{lo}, {hi}]")

    def check_size(self, m: GModule, r: int) -> None:
        g = m.group.order
        if g > self.max_order:
            raise SizeGuardError(f"group order {g} exceeds the limit {self.max_order}")
        span = r + 1 if r >= 0 else -r
        coords = g ** span * max(m.ngens, 1)
        if coords > self.max_coordinates:
            raise SizeGuardError(
                f"degree {r} over a group of order {g} needs {coords} coordinates "
                f"(limit {self.max_coordinates})"
            )


DEFAULT_LIMITS = Limits()


# cochains


@dataclass(frozen=True, eq=False)
class Cochain:
    """An inhomogeneous cochain: one module element per ``degree``-tuple."""

    group: FiniteGroup
    width: int
    degree: int
    values: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("cochain degree must be nonnegative")
        if len(self.values) != self.group.order ** self.degree:
            raise ValueError("wrong number of cochain values")
        if any(len(v) != self.width for v in self.values):
            raise ValueError("cochain value of the wrong width")

    @classmethod
    def from_function(cls, group: FiniteGroup, width: int, degree: int, fn: Callable[..., Sequence[int]]) -> Cochain:
        vals = tuple(tuple(int(x) for x in fn(*gs)) for gs in product(range(group.order), repeat=degree))
        return cls(group, width, degree, vals)

    @classmethod
    def from_flat(cls, group: FiniteGroup, width: int, degree: int, flat: Sequence[int]) -> Cochain:
        vals = tuple(tuple(flat[i * width:(i + 1) * width]) for i in range(group.order ** degree))
        return cls(group, width, degree, vals)

    def flat(self) -> list[int]:
        return [x for v in self.values for x in v]

    def at(self, *gs: int) -> tuple[int, ...]:
        return self.values[_index(gs, self.group.order)]

    def __add__(self, other: Cochain) -> Cochain:
        return Cochain(self.group, self.width, self.degree,
                       tuple(tuple(a + b for a, b in zip(u, v)) for u, v in zip(self.values, other.values)))

    def scale(self, k: int) -> Cochain:
        return Cochain(self.group, self.width, self.degree, tuple(tuple(k * a for a in v) for v in self.values))

    def restrict(self, sub: FiniteGroup, emb: Sequence[int]) -> Cochain:
        """Pull back along the inclusion ``emb`` of ``sub`` into the group."""
        return Cochain.from_function(sub, self.width, self.degree, lambda *gs: self.at(*(emb[g] for g in gs)))


def _index(gs: Sequence[int], order: int) -> int:
    idx = 0
    for g in gs:
        idx = idx * order + g
    return idx


def _sparse_action(m: GModule) -> list[list[list[tuple[int, int]]]]:
    """``act[g][j]`` lists ``(k, coeff)`` with ``g e_k`` having coefficient on ``e_j``."""
    out = []
    n = m.ngens
    for a in m.action:
        out.append([[(k, a[j, k]) for k in range(n) if a[j, k]] for j in range(n)])
    return out


# bar complexes


def coboundary_rows(m: GModule, r: int) -> list[dict[int, int]]:
    """Sparse rows of ``d_r : C^r -> C^{r+1}``."""
    G = m.group
    o = G.order
    n = m.ngens
    act = _sparse_action(m)
    t = G.table
    rows: list[dict[int, int]] = []
    sign_last = -1 if (r + 1) % 2 else 1
    for gs in product(range(o), repeat=r + 1):
        g1 = gs[0]
        tail = _index(gs[1:], o)
        head = _index(gs[:-1], o)
        merged = []
        for i in range(r):
            mg = gs[:i] + (t[gs[i]][gs[i + 1]],) + gs[i + 2:]
            merged.append((_index(mg, o), -1 if (i + 1) % 2 else 1))
        for j in range(n):
            row: dict[int, int] = {}
            for k, c in act[g1][j]:
                col = tail * n + k
                row[col] = row.get(col, 0) + c
            for idx, s in merged:
                col = idx * n + j
                row[col] = row.get(col, 0) + s
            col = head * n + j
            row[col] = row.get(col, 0) + sign_last
            rows.append({c: v for c, v in row.items() if v})
    return rows


def boundary_rows(m: GModule, q: int) -> list[dict[int, int]]:
    """Sparse rows of ``del_q : C_q -> C_{q-1}`` for ``C_q = M (x)_G B_q``.

    ``del(m [g_1|...|g_q]) = g_1^{-1} m [g_2|...] + sum_i (-1)^i m [...|g_i g_{i+1}|...]
    + (-1)^q m [g_1|...|g_{q-1}]``.
    """
    G = m.group
    o = G.order
    n = m.ngens
    act = _sparse_action(m)
    t = G.table
    rows: list[dict[int, int]] = [dict() for _ in range(o ** (q - 1) * n)]
    sign_last = -1 if q % 2 else 1
    for gs in product(range(o), repeat=q):
        ginv = G.inv(gs[0])
        tail = _index(gs[1:], o)
        head = _index(gs[:-1], o)
        src = _index(gs, o)
        merged = []
        for i in range(q - 1):
            mg = gs[:i] + (t[gs[i]][gs[i + 1]],) + gs[i + 2:]
            merged.append((_index(mg, o), -1 if (i + 1) % 2 else 1))
        for j in range(n):
            col = src * n + j
            # column e_j maps under g^-1 to sum_k a[k][j] e_k
            for k in range(n):
                for kk, c in act[ginv][k]:
                    if kk == j:
                        row = rows[tail * n + k]
                        row[col] = row.get(col, 0) + c
            for idx, s in merged:
                row = rows[idx * n + j]
                row[col] = row.get(col, 0) + s
            row = rows[head * n + j]
            row[col] = row.get(col, 0) + sign_last
    return [{c: v for c, v in row.items() if v} for row in rows]


def apply_sparse(rows: list[dict[int, int]], v: Sequence[int]) -> list[int]:
    return [sum(c * v[j] for j, c in row.items()) for row in rows]


@lru_cache(maxsize=128)
def _coboundary_cached(m: GModule, r: int) -> list[dict[int, int]]:
    return coboundary_rows(m, r)


@lru_cache(maxsize=128)
def _boundary_cached(m: GModule, q: int) -> list[dict[int, int]]:
    return boundary_rows(m, q)


def coboundary(m: GModule, r: int, v: Sequence[int]) -> list[int]:
    return apply_sparse(_coboundary_cached(m, r), v)


def boundary(m: GModule, q: int, v: Sequence[int]) -> list[int]:
    return apply_sparse(_boundary_cached(m, q), v)


def _columns_of(rows: list[dict[int, int]], ncols: int) -> list[list[int]]:
    cols = [[0] * len(rows) for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            cols[j][i] = v
    return cols


def _block_relations(m: GModule, blocks: int) -> IntMatrix:
    return IntMatrix.identity(blocks).kron(m.underlying.relations)


# Tate groups


class TateGroup:
    """``H^r(G, M)`` (Tate) with class representatives and a classifier.

    ``group`` is presented on its canonical generators. ``representative``
    returns a cocycle/cycle in the coordinates described in the module
    docstring and ``classify`` maps such a cycle to canonical coordinates.
    """

    def __init__(self, module: GModule, degree: int, group: FgAbGroup,
                 classify: Callable[[Sequence[int]], tuple[int, ...]],
                 represent: Callable[[Sequence[int]], list[int]], method: str):
        self.module = module
        self.degree = degree
        self.group = group
        self._classify = classify
        self._represent = represent
        self.method = method

    def classify(self, z: Sequence[int]) -> tuple[int, ...]:
        return self._classify(z)

    def representative(self, coords: Sequence[int]) -> list[int]:
        return self._represent(coords)

    def generator(self, t: int) -> list[int]:
        return self.representative([int(t == s) for s in range(self.group.canonical_rank)])

    def __repr__(self) -> str:
        return f"TateGroup(degree={self.degree}, {self.group}, via {self.method})"


def _from_torsion_cokernel(m: GModule, r: int, rows: list[dict[int, int]], ncols: int) -> TateGroup:
    # For a lattice complex whose homology is finite, the cycles are the
    # saturation of the boundaries, so H = torsion of the cokernel.
    sf = SmithForm(rows, ncols, track_cols=False)
    tors = [(t, d) for t, d in enumerate(sf.diag) if d > 1]
    grp = FgAbGroup.from_invariants([d for _, d in tors])
    length = len(rows)
    rank = sf.rank

    def classify(z):
        if len(z) != length:
            raise ValueError("cycle has the wrong length")
        y = sf.u(z)
        if any(y[rank:]):
            raise ValueError(f"not a cycle in degree {r}")
        return tuple(y[t] % d for t, d in tors)

    def represent(coords):
        y = [0] * length
        for (t, _), c in zip(tors, coords):
            y[t] = c
        return sf.u_inv(y)

    return TateGroup(m, r, grp, classify, represent, "bar complex (torsion of cokernel)")


def _from_subquotient(m: GModule, r: int, sq: Subquotient, method: str) -> TateGroup:
    # Subquotient coordinates are already canonical coordinates of sq.group
    return TateGroup(m, r, sq.group.canonical(), sq.classify, sq.representative, method)


def _row_lattice_basis(rows: list[tuple[tuple[int, int], ...]], a: int, d: int) -> list[list[int]]:
    """At most ``a`` vectors spanning ``span(rows) + d Z^a``; rows are sparse ``(index, value)`` pairs."""
    cols = [dict(r) for r in rows]
    if d:
        cols.extend({i: d} for i in range(a))
    sparse: list[dict[int, int]] = [dict() for _ in range(a)]
    for c, col in enumerate(cols):
        for i, v in col.items():
            sparse[i][c] = v
    sf = SmithForm(sparse, len(cols), track_cols=False)
    out = []
    for t, e in enumerate(sf.diag):
        y = [0] * a
        y[t] = e
        out.append(sf.u_inv(y))
    return out


def _honest_presentation(m: GModule) -> tuple[GModule, IntMatrix, IntMatrix] | None:
    """A presentation whose action matrices form a representation of ``Z^n``.

    Returns the module with maps into and out of its coordinates, or ``None``
    when neither the given nor the canonical presentation qualifies.
    """
    G = m.group
    ident_orig = IntMatrix.identity(m.ngens)
    to_c = m.underlying.to_canonical().matrix
    from_c = m.underlying.from_canonical().matrix
    for cand, fwd, back in ((m, ident_orig, ident_orig), (m.canonical()[0], to_c, from_c)):
        mats = cand.action
        if mats[0] != IntMatrix.identity(cand.ngens):
            continue
        if all(mats[a] @ mats[b] == mats[G.mul(a, b)] for a in range(G.order) for b in range(G.order)):
            return cand, fwd, back
    return None


def _cone_bar(m: GModule, r: int) -> TateGroup | None:
    """Homology through the mapping cone of ``R -> L`` for ``M = L / R``.

    When the action matrices are an honest representation on ``L = Z^n``,
    the relation lattice ``R`` is a sublattice stable under the group, and
    the cone of ``C(R) -> C(L)`` is a complex of lattices quasi-isomorphic to
    ``C(M)``. Its homology in degree ``r`` is finite, hence the torsion of the
    cokernel of the incoming differential, exactly as for lattices.
    """
    found = _honest_presentation(m)
    if found is None:
        return None
    pres, fwd, back = found
    G = pres.group
    o, n = G.order, pres.ngens
    rel = SmithForm.of(pres.underlying.relations)
    basis = []
    for t, e in enumerate(rel.diag):
        y = [0] * n
        y[t] = e
        basis.append(rel.u_inv(y))
    k = len(basis)

    def rel_coords(v):
        y = rel.u(v)
        if any(y[k:]) or any(y[t] % e for t, e in enumerate(rel.diag)):
            raise ValueError("vector is not in the relation lattice")
        return [y[t] // e for t, e in enumerate(rel.diag)]

    rb = IntMatrix.from_columns(basis, n)
    sub = GModule.lattice(G, [IntMatrix.from_columns([rel_coords(a.apply(b)) for b in basis], k)
                              for a in pres.action])
    lat = GModule.lattice(G, pres.action)

    if r >= 1:
        a_rows, b_in = _coboundary_cached(sub, r), _coboundary_cached(lat, r - 1)
        a_blocks, b_blocks, a_cols = o ** (r + 1), o ** r, o ** r * k
    else:
        q = -r - 1
        a_rows, b_in = (_boundary_cached(sub, q) if q >= 1 else []), _boundary_cached(lat, q + 1)
        a_blocks, b_blocks, a_cols = o ** (q - 1) if q >= 1 else 0, o ** q, o ** q * k
    na = a_blocks * k
    rows: list[dict[int, int]] = [{c: -v for c, v in row.items()} for row in a_rows]
    rows.extend({c + a_cols: v for c, v in row.items()} for row in b_in)
    # the inclusion of the relation lattice, block by block
    for blk in range(b_blocks):
        for i in range(n):
            row = rows[na + blk * n + i]
            for j in range(k):
                if rb[i, j]:
                    row[blk * k + j] = row.get(blk * k + j, 0) + rb[i, j]
    ncols = a_cols + (o ** (r - 1) * n if r >= 1 else o ** (-r) * n)
    sf = SmithForm(rows, ncols, track_cols=False)
    tors = [(t, d) for t, d in enumerate(sf.diag) if d > 1]
    grp = FgAbGroup.from_invariants([d for _, d in tors])
    width = b_blocks * m.ngens

    def cone_cycle(z):
        if len(z) != width:
            raise ValueError("cycle has the wrong length")
        b = _blockwise(fwd, z)
        v = coboundary(lat, r, b) if r >= 1 else (boundary(lat, -r - 1, b) if -r - 1 >= 1 else [])
        a = []
        for blk in range(len(v) // n if n else 0):
            a.extend(-x for x in rel_coords(v[blk * n:(blk + 1) * n]))
        return a + b

    def classify(z):
        try:
            y = sf.u(cone_cycle(z))
        except ValueError:
            raise ValueError(f"not a cycle in degree {r}") from None
        if any(y[sf.rank:]):
            raise ValueError(f"not a cycle in degree {r}")
        return tuple(y[t] % d for t, d in tors)

    def represent(coords):
        y = [0] * len(rows)
        for (t, _), c in zip(tors, coords):
            y[t] = c
        x = sf.u_inv(y)
        return _blockwise(back, x[na:])

    return TateGroup(m, r, grp, classify, represent, "bar complex (cone of a lattice presentation)")


def _generic_bar(m: GModule, r: int) -> TateGroup:
    """Homology of the bar complex for modules with torsion.

    With ``Q = C / boundaries`` the homology is the kernel of the outgoing
    differential restricted to ``Q[|G|]``, since ``|G|`` kills it. Only the
    small group ``Q[|G|]`` is ever handled densely. Works on the canonical
    presentation so module relations are diagonal.
    """
    orig = m
    m, to_c = m.canonical()
    from_c = orig.underlying.from_canonical().matrix
    o = m.group.order
    n = m.ngens
    if r >= 1:
        out_rows, in_rows, blocks = _coboundary_cached(m, r), _coboundary_cached(m, r - 1), o ** r
        in_cols = o ** (r - 1) * n
    else:
        q = -r - 1
        out_rows, in_rows, blocks = _boundary_cached(m, q), _boundary_cached(m, q + 1), o ** q
        in_cols = o ** (q + 1) * n
    length = blocks * n
    moduli = m.underlying.canonical_moduli
    rows = [dict(row) for row in in_rows]
    ncols = in_cols
    for i in range(length):
        d = moduli[i % n]
        if d:
            rows[i][ncols] = d
            ncols += 1
    sf = SmithForm(rows, ncols, track_cols=False)
    gens = [(t, e // gcd(e, o), gcd(e, o)) for t, e in enumerate(sf.diag) if gcd(e, o) > 1]
    out_cols: list[list[tuple[int, int]]] = [[] for _ in range(length)]
    for j, row in enumerate(out_rows):
        for k, v in row.items():
            out_cols[k].append((j, v))
    # images[j][i]: coordinate j of the differential applied to generator i
    images: dict[int, dict[int, int]] = {}
    for i, (t, step, _) in enumerate(gens):
        y = [0] * length
        y[t] = step
        for k, xk in enumerate(sf.u_inv(y)):
            if xk:
                for j, v in out_cols[k]:
                    slot = images.setdefault(j, {})
                    slot[i] = slot.get(i, 0) + xk * v
    a = len(gens)
    by_modulus: dict[int, set[tuple[tuple[int, int], ...]]] = {}
    for j, entries in images.items():
        d = moduli[j % n]
        row = tuple(sorted((i, v % d if d else v) for i, v in entries.items() if (v % d if d else v)))
        if row:
            by_modulus.setdefault(d, set()).add(row)
    big = []
    slack = a
    for d in sorted(by_modulus):
        for row in _row_lattice_basis(sorted(by_modulus[d]), a, d):
            entry = {i: v for i, v in enumerate(row) if v}
            if d:
                entry[slack] = d
                slack += 1
            big.append(entry)
    if big:
        lattice = [tuple(v[:a]) for v in SmithForm(big, slack, track_rows=False).nullspace() if any(v[:a])]
    else:
        lattice = [tuple(int(i == j) for j in range(a)) for i in range(a)]
    ambient = FgAbGroup.from_invariants([g for _, _, g in gens]) if a else FgAbGroup.free(0)
    sq = Subquotient(ambient, tuple(lattice), ())
    grp = sq.group.canonical()

    def classify(z):
        if len(z) != blocks * orig.ngens:
            raise ValueError("cycle has the wrong length")
        y = sf.u(_blockwise(to_c.matrix, z))
        if any(y[sf.rank:]):
            raise ValueError(f"not a cycle in degree {r}")
        c = []
        for t, step, g in gens:
            yt = y[t] % sf.diag[t]
            if yt % step:
                raise ValueError(f"not a cycle in degree {r}")
            c.append(yt // step)
        return sq.classify(c)

    def represent(coords):
        c = sq.representative(coords)
        y = [0] * length
        for (t, step, _), ct in zip(gens, c):
            y[t] = ct * step
        return _blockwise(from_c, sf.u_inv(y))

    return TateGroup(orig, r, grp, classify, represent, "bar complex (bounded torsion of cokernel)")


@lru_cache(maxsize=512)
def _tate_group_cached(m: GModule, r: int) -> TateGroup:
    n = m.ngens
    o = m.group.order
    if r == 0:
        ident = IntMatrix.identity(n)
        diffs = [m.action[g] - ident for g in range(1, o)]
        if diffs:
            cyc = _kernel_vectors(diffs[0].vstack(*diffs[1:]), _block_relations(m, o - 1))
        else:
            cyc = [[int(i == j) for j in range(n)] for i in range(n)]
        bnd = norm_matrix(m).columns()
        sq = Subquotient(m.underlying, tuple(map(tuple, cyc)), tuple(map(tuple, bnd)))
        return _from_subquotient(m, 0, sq, "invariants modulo norms")
    if r == -1:
        cyc = _kernel_vectors(norm_matrix(m), m.underlying.relations)
        ident = IntMatrix.identity(n)
        bnd = [c for g in range(1, o) for c in (m.action[g] - ident).columns()]
        sq = Subquotient(m.underlying, tuple(map(tuple, cyc)), tuple(map(tuple, bnd)))
        return _from_subquotient(m, -1, sq, "norm kernel modulo augmentation")
    if not m.is_lattice():
        return _cone_bar(m, r) or _generic_bar(m, r)
    if r >= 1:
        return _from_torsion_cokernel(m, r, _coboundary_cached(m, r - 1), o ** (r - 1) * n)
    q = -r - 1
    return _from_torsion_cokernel(m, r, _boundary_cached(m, q + 1), o ** (q + 1) * n)


def clear_caches() -> None:
    """Drop memoised complexes and Tate groups (e.g. after switching kernels)."""
    _tate_group_cached.cache_clear()
    _coboundary_cached.cache_clear()
    _boundary_cached.cache_clear()


def tate_group(m: GModule, r: int, limits: Limits = DEFAULT_LIMITS) -> TateGroup:
    """Tate cohomology in degree ``r`` with representatives and classifier."""
    limits.check_degree(r)
    limits.check_size(m, r)
    return _tate_group_cached(m, r)


def tate_cohomology(m: GModule, r: int, limits: Limits = DEFAULT_LIMITS) -> FgAbGroup:
    """``H^r(G, M)`` in canonical form."""
    return tate_group(m, r, limits).group


def tate_cohomology_generic(m: GModule, r: int) -> FgAbGroup:
    """Same groups via ``ker / im`` for every degree; an independent route for tests."""
    if r in (0, -1):
        return _tate_group_cached(m, r).group
    return _generic_bar(m, r).group


# short exact sequences and connecting maps


@dataclass(frozen=True, eq=False)
class ShortExactSequence:
    """``0 -> sub -> mid -> quo -> 0`` of lattices, split over the integers.

    ``section`` is a Z-linear right inverse of ``proj`` and ``retract`` a
    left inverse of ``inc`` with ``inc retract + section proj = 1``.
    """

    sub: GModule
    mid: GModule
    quo: GModule
    inc: IntMatrix
    proj: IntMatrix
    section: IntMatrix
    retract: IntMatrix

    def __post_init__(self):
        for mod in (self.sub, self.mid, self.quo):
            if not mod.is_lattice():
                raise ValueError("short exact sequences are supported for lattices only")
        a, b, c = self.sub.ngens, self.mid.ngens, self.quo.ngens
        if not (self.proj @ self.inc).is_zero():
            raise CrossCheckError("proj . inc is not zero")
        if self.proj @ self.section != IntMatrix.identity(c):
            raise CrossCheckError("section is not a right inverse of proj")
        if self.retract @ self.inc != IntMatrix.identity(a):
            raise CrossCheckError("retract is not a left inverse of inc")
        if self.inc @ self.retract + self.section @ self.proj != IntMatrix.identity(b):
            raise CrossCheckError("the sequence is not exact")
        for g in range(self.mid.group.order):
            if self.mid.action[g] @ self.inc != self.inc @ self.sub.action[g]:
                raise CrossCheckError(f"inclusion is not equivariant for element {g}")
            if self.proj @ self.mid.action[g] != self.quo.action[g] @ self.proj:
                raise CrossCheckError(f"projection is not equivariant for element {g}")


def _blockwise(mat: IntMatrix, v: Sequence[int]) -> list[int]:
    w = mat.cols
    if w == 0:
        return []
    out = []
    for b in range(len(v) // w):
        out.extend(mat.apply(v[b * w:(b + 1) * w]))
    return out


def connecting_map(ses: ShortExactSequence, s: int, limits: Limits = DEFAULT_LIMITS) -> AbHom:
    """The connecting homomorphism ``H^s(quo) -> H^{s+1}(sub)`` in canonical coordinates."""
    src = tate_group(ses.quo, s, limits)
    tgt = tate_group(ses.sub, s + 1, limits)
    cols = []
    for t in range(src.group.canonical_rank):
        lifted = _blockwise(ses.section, src.generator(t))
        if s >= 0:
            pushed = coboundary(ses.mid, s, lifted)
        elif s == -1:
            pushed = norm_matrix(ses.mid).apply(lifted)
        else:
            pushed = boundary(ses.mid, -s - 1, lifted)
        pulled = _blockwise(ses.retract, pushed)
        if _blockwise(ses.inc, pulled) != pushed:
            raise CrossCheckError("connecting map: boundary of the lift leaves the submodule")
        cols.append(list(tgt.classify(pulled)))
    return AbHom(src.group, tgt.group, IntMatrix.from_columns(cols, tgt.group.canonical_rank))


def syzygy_shift(m: GModule) -> ShortExactSequence:
    """``0 -> M' -> Z[G] (x) M -> M -> 0`` with ``Z[G] (x) M`` induced.

    ``F = Z[G] (x) M`` has basis ``(h, j)`` at index ``h * n + j`` with ``G``
    acting on the first factor; ``M'`` has basis
    ``b_{h,j} = (h, e_j) - (1, h e_j)`` for ``h != 1``.
    """
    if not m.is_lattice():
        m2, _ = m.canonical()
        if not m2.is_lattice():
            raise ValueError("syzygy shifting needs a torsion-free module")
        m = m2
    G = m.group
    o, n = G.order, m.ngens
    N = o * n
    f_mats = []
    for g in range(o):
        e = [0] * (N * N)
        for h in range(o):
            gh = G.mul(g, h)
            for j in range(n):
                e[(gh * n + j) * N + h * n + j] = 1
        f_mats.append(IntMatrix(N, N, tuple(e)))
    F = GModule.lattice(G, f_mats)
    proj = IntMatrix.from_rows([[m.action[h][i, j] for h in range(o) for j in range(n)] for i in range(n)], N)
    section = IntMatrix.from_rows([[int(r == c) for c in range(n)] for r in range(N)], n)
    k = N - n
    inc_rows = [[0] * k for _ in range(N)]
    for h in range(1, o):
        for j in range(n):
            col = (h - 1) * n + j
            inc_rows[h * n + j][col] = 1
            for i in range(n):
                inc_rows[i][col] -= m.action[h][i, j]
    inc = IntMatrix.from_rows(inc_rows, k)
    retract = IntMatrix.from_rows([[int(c == r + n) for c in range(N)] for r in range(k)], N)
    sub = GModule.lattice(G, [retract @ fm @ inc for fm in f_mats])
    return ShortExactSequence(sub, F, m, inc, proj, section, retract)


# cup products


def cochain_matrix(alpha: Cochain, x: GModule, a: GModule, *gs: int) -> IntMatrix:
    v = alpha.at(*gs)
    return IntMatrix(a.ngens, x.ngens, tuple(v))


def check_cocycle(alpha: Cochain, x: GModule, a: GModule) -> None:
    """Raise :class:`CocycleError` naming a failing triple unless ``d alpha = 0``."""
    hm = hom_module(x, a)
    if alpha.group.table != x.group.table or alpha.width != hm.ngens or alpha.degree != 2:
        raise ValueError("alpha must be a degree-2 cochain valued in Hom(X, A)")
    d = coboundary(hm, 2, alpha.flat())
    o = x.group.order
    w = hm.ngens
    for idx, gs in enumerate(product(range(o), repeat=3)):
        if not hm.underlying.is_zero(d[idx * w:(idx + 1) * w]):
            raise CocycleError(f"2-cocycle identity fails at {gs}", witness=gs)


def carry_cocycle(n: int, multiple: int = 1) -> Cochain:
    """``c(i, j) = multiple * floor((i + j) / n)`` on ``Z/n`` with values in ``Z``."""
    return Cochain.from_function(FiniteGroup.cyclic(n), 1, 2, lambda i, j: [multiple * ((i + j) // n)])


def splitting_module(alpha: Cochain, x: GModule, a: GModule,
                     syz: ShortExactSequence | None = None) -> ShortExactSequence:
    """The extension ``0 -> A -> E -> X' -> 0`` whose class maps to ``alpha``.

    ``X'`` is the syzygy of ``x``. The twisting cocycle is
    ``c_g(b_{h,j}) = h.alpha(h^-1, g) e_j - alpha(1, g) (h e_j)``, obtained by
    splitting ``alpha`` on the induced module ``Hom(Z[G] (x) X, A)``.
    """
    syz = syz or syzygy_shift(x)
    xp = syz.sub
    G = x.group
    o, na, nx = G.order, a.ngens, x.ngens
    k = xp.ngens
    mats = []
    for g in range(o):
        c = [[0] * k for _ in range(na)]
        base = cochain_matrix(alpha, x, a, 0, g)
        for h in range(1, o):
            left = a.action[h] @ cochain_matrix(alpha, x, a, G.inv(h), g)
            right = base @ x.action[h]
            for j in range(nx):
                col = (h - 1) * nx + j
                for i in range(na):
                    c[i][col] = left[i, j] - right[i, j]
        twist = IntMatrix.from_rows(c, k) @ xp.action[g]
        top = a.action[g].hstack(twist)
        bottom = IntMatrix.zeros(k, na).hstack(xp.action[g])
        mats.append(top.vstack(bottom))
    e = GModule.lattice(G, mats)
    inc = IntMatrix.identity(na).vstack(IntMatrix.zeros(k, na))
    proj = IntMatrix.zeros(k, na).hstack(IntMatrix.identity(k))
    section = IntMatrix.zeros(na, k).vstack(IntMatrix.identity(k))
    retract = IntMatrix.identity(na).hstack(IntMatrix.zeros(na, k))
    return ShortExactSequence(a, e, xp, inc, proj, section, retract)


def cup_product_cochain(alpha: Cochain, x: GModule, a: GModule, z: Sequence[int], r: int) -> list[int]:
    """``(alpha u z)(g_1..g_{r+2}) = alpha(g_1, g_2)((g_1 g_2) z(g_3..g_{r+2}))``."""
    G = x.group
    o = G.order
    nx = x.ngens
    out: list[int] = []
    mats = {}
    for gs in product(range(o), repeat=r + 2):
        key = (gs[0], gs[1])
        if key not in mats:
            mats[key] = cochain_matrix(alpha, x, a, *key) @ x.action[G.mul(*key)]
        idx = _index(gs[2:], o)
        out.extend(mats[key].apply(z[idx * nx:(idx + 1) * nx]))
    return out


def cup_with_2cocycle(alpha: Cochain, x: GModule, a: GModule, r: int,
                      limits: Limits = DEFAULT_LIMITS, method: str = "auto") -> AbHom:
    """Cup product with ``alpha`` as a map ``H^r(G, X) -> H^{r+2}(G, A)``.

    ``method="formula"`` evaluates the cochain-level cup product (``r >= 0``);
    ``method="yoneda"`` composes the connecting maps of ``0 -> X' -> F -> X -> 0``
    and the splitting extension ``0 -> A -> E -> X' -> 0`` (any ``r``).
    ``"auto"`` picks the formula for ``r >= 0``. The two agree up to sign.
    """
    limits.check_degree(r)
    limits.check_degree(r + 2)
    check_cocycle(alpha, x, a)
    if method == "auto":
        method = "formula" if r >= 0 else "yoneda"
    if method == "formula":
        if r < 0:
            raise UnsupportedDegreeError("the cochain formula needs r >= 0")
        src = tate_group(x, r, limits)
        tgt = tate_group(a, r + 2, limits)
        cols = [list(tgt.classify(cup_product_cochain(alpha, x, a, src.generator(t), r)))
                for t in range(src.group.canonical_rank)]
        return AbHom(src.group, tgt.group, IntMatrix.from_columns(cols, tgt.group.canonical_rank))
    if method != "yoneda":
        raise ValueError(f"unknown method {method!r}")
    if not (x.is_lattice() and a.is_lattice()):
        raise ValueError("dimension shifting is supported for lattice modules only")
    syz = syzygy_shift(x)
    ext = splitting_module(alpha, x, a, syz)
    first = connecting_map(syz, r, limits)
    second = connecting_map(ext, r + 1, limits)
    f = first.then(second)
    return AbHom(f.source, f.target, f.canonical_matrix())


def restrict_triple(alpha: Cochain, x: GModule, a: GModule, elems: Sequence[int]):
    """Restrict ``(alpha, X, A)`` to the subgroup on ``elems``."""
    from .gmodule import restriction

    xs = restriction(x, elems)
    as_ = GModule(xs.group, a.underlying, tuple(a.action[g] for g in sorted(set(elems))))
    emb = tuple(sorted(set(elems)))
    return alpha.restrict(xs.group, emb), xs, as_


def coboundary_of(beta: Cochain, m: GModule) -> Cochain:
    return Cochain.from_flat(m.group, m.ngens, beta.degree + 1, coboundary(m, beta.degree, beta.flat()))


def annihilated_by_order(m: GModule, r: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    h = tate_cohomology(m, r, limits)
    return all(m.group.order % d == 0 for d in h.torsion) and h.free_rank == 0


__all__ = [
    "Cochain",
    "Limits",
    "ShortExactSequence",
    "TateGroup",
    "boundary_rows",
    "carry_cocycle",
    "check_cocycle",
    "coboundary_rows",
    "connecting_map",
    "cup_with_2cocycle",
    "integer_nullspace",
    "splitting_module",
    "syzygy_shift",
    "tate_cohomology",
    "tate_group",
]
