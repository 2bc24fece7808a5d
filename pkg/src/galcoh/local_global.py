"""Divisor modules on places, the global group ``A``, localization and towers.

Points of a :class:`PlaceSet` are the places of the top field; orbits are the
places of the base field, ordered by their smallest point. The degree-zero
module has basis ``v_k = x_k - x_{k+1}`` and ``A`` is the coinvariant group of
``Lambda (x) Z[V]_0`` whose generator ``(i, k)`` sits at ``i * (m - 1) + k``.
All group elements handed to or returned by this module are canonical
coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .errors import CrossCheckError, ScenarioError
from .fundgroup import FundamentalGroup
from .gmodule import GModule, permutation_module, tensor_module, validate_gset
from .groups import FiniteGroup
from .zlattice import (
    AbHom,
    FgAbGroup,
    IntMatrix,
    SmithForm,
    block_diagonal,
    direct_sum,
    kernel,
    torsion_subgroup,
)


@dataclass(frozen=True, eq=False)
class PlaceSet:
    """A finite set of places permuted by the Galois group.

    ``perms[g][p]`` is the image of point ``p`` under ``g``. ``degrees`` is
    optional per-orbit metadata that no computation reads.
    """

    group: FiniteGroup
    perms: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()
    degrees: tuple[int | None, ...] = ()

    def __post_init__(self):
        if not self.perms or not self.perms[0]:
            raise ScenarioError("a place set needs at least one point")
        validate_gset(self.group, self.perms)
        if self.labels and len(self.labels) != self.npoints:
            raise ScenarioError("need one label per point")
        if self.degrees and len(self.degrees) != len(self.orbits):
            raise ScenarioError("need one degree entry per orbit")

    @classmethod
    def from_generators(cls, group: FiniteGroup, npoints: int, gens: Sequence[int],
                        images: Sequence[Sequence[int]], labels: Sequence[str] = (),
                        degrees: Sequence[int | None] = ()) -> PlaceSet:
        """Extend the permutations of generating elements to the whole group."""
        imgs = [tuple(p) for p in images]
        for g, p in zip(gens, imgs):
            if sorted(p) != list(range(npoints)):
                raise ScenarioError(f"image of generator {g} is not a permutation of {npoints} points")
        perms = group.word_map(list(gens), imgs, lambda p, q: tuple(p[s] for s in q), tuple(range(npoints)))
        return cls(group, tuple(perms), tuple(labels), tuple(degrees))

    @classmethod
    def from_cosets(cls, group: FiniteGroup, stabilizers: Sequence[Sequence[int]]) -> PlaceSet:
        """Disjoint union of the coset spaces ``G/H`` for each listed ``H``."""
        perms: list[list[int]] = [[] for _ in range(group.order)]
        off = 0
        for h in stabilizers:
            act = group.coset_action(h)
            for g in range(group.order):
                perms[g].extend(off + x for x in act[g])
            off += len(act[0])
        return cls(group, tuple(tuple(p) for p in perms))

    @property
    def npoints(self) -> int:
        return len(self.perms[0])

    def label(self, p: int) -> str:
        return self.labels[p] if self.labels else str(p)

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        seen: set[int] = set()
        out = []
        for p in range(self.npoints):
            if p in seen:
                continue
            orb = tuple(sorted({self.perms[g][p] for g in range(self.group.order)}))
            seen.update(orb)
            out.append(orb)
        return tuple(out)

    def orbit_index(self, p: int) -> int:
        for u, orb in enumerate(self.orbits):
            if p in orb:
                return u
        raise ScenarioError(f"point {p} does not exist")

    def stabilizer(self, p: int) -> tuple[int, ...]:
        return tuple(g for g in range(self.group.order) if self.perms[g][p] == p)

    def local_degree(self, p: int) -> int:
        """Order of the decomposition group of ``p``."""
        return len(self.stabilizer(p))

    def transporter(self, w: int, p: int) -> int:
        """The smallest element moving ``w`` to ``p``."""
        for g in range(self.group.order):
            if self.perms[g][w] == p:
                return g
        raise ScenarioError(f"points {w} and {p} lie in different orbits")


def divisor_module(places: PlaceSet) -> GModule:
    """``Z[V]``: the permutation module on the points."""
    return permutation_module(places.group, places.perms)


def degree_zero_coordinates(x: Sequence[int]) -> list[int]:
    """Coordinates of a degree-zero divisor in the basis ``x_k - x_{k+1}``."""
    if sum(x) != 0:
        raise ValueError("divisor does not have degree zero")
    out = []
    acc = 0
    for v in x[:-1]:
        acc += v
        out.append(acc)
    return out


def degree_zero_module(places: PlaceSet) -> tuple[GModule, IntMatrix]:
    """``Z[V]_0`` with its inclusion matrix into ``Z[V]``."""
    m = places.npoints
    inc_rows = [[0] * (m - 1) for _ in range(m)]
    for k in range(m - 1):
        inc_rows[k][k] = 1
        inc_rows[k + 1][k] = -1
    inc = IntMatrix.from_rows(inc_rows, m - 1)
    mats = []
    for perm in places.perms:
        cols = []
        for k in range(m - 1):
            x = [0] * m
            x[perm[k]] += 1
            x[perm[k + 1]] -= 1
            cols.append(degree_zero_coordinates(x))
        mats.append(IntMatrix.from_columns(cols, m - 1))
    return GModule.lattice(places.group, mats), inc


def degree_map(places: PlaceSet) -> IntMatrix:
    return IntMatrix.from_rows([[1] * places.npoints])


@dataclass(frozen=True, eq=False)
class GlobalScenario:
    places: PlaceSet
    lam: FundamentalGroup

    def __post_init__(self):
        if self.lam.group.table != self.places.group.table:
            raise ScenarioError("the fundamental group and the places use different groups")

    @property
    def group(self) -> FiniteGroup:
        return self.places.group

    @cached_property
    def lam_module(self) -> GModule:
        m = self.lam.module
        if m.group is self.places.group:
            return m
        return GModule(self.places.group, m.underlying, m.action)

    @cached_property
    def tensor(self) -> GModule:
        return tensor_module(self.lam_module, degree_zero_module(self.places)[0])

    @cached_property
    def a_raw(self) -> FgAbGroup:
        return _coinvariants_raw(self.tensor)

    @cached_property
    def lam_coinvariants(self) -> FgAbGroup:
        return _coinvariants_raw(self.lam_module)

    def local_raw(self, stab: Sequence[int]) -> FgAbGroup:
        """``Lambda`` modulo ``(h - 1)`` for ``h`` in ``stab``, on the generators of ``Lambda``."""
        lm = self.lam_module
        n = lm.ngens
        ident = IntMatrix.identity(n)
        diffs = [lm.action[h] - ident for h in stab if h != 0]
        rel = lm.underlying.relations.hstack(*diffs)
        return FgAbGroup(n, rel)


def _coinvariants_raw(m: GModule) -> FgAbGroup:
    ident = IntMatrix.identity(m.ngens)
    diffs = [m.action[g] - ident for g in range(1, m.group.order)]
    return FgAbGroup(m.ngens, m.underlying.relations.hstack(*diffs))


def _canonical_hom(src_raw: FgAbGroup, tgt_raw: FgAbGroup, mat: IntMatrix) -> AbHom:
    """``mat`` on raw generators, rewritten between canonical forms."""
    cols = [list(tgt_raw.canonical_coords(mat.apply(src_raw.lift([int(t == s) for s in range(src_raw.canonical_rank)]))))
            for t in range(src_raw.canonical_rank)]
    return AbHom(src_raw.canonical(), tgt_raw.canonical(), IntMatrix.from_columns(cols, tgt_raw.canonical_rank))


@dataclass(frozen=True)
class GlobalA:
    group: FgAbGroup
    raw: FgAbGroup
    tensor: GModule

    def project(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of the class of a tensor element."""
        return self.raw.canonical_coords(x)

    def lift(self, coords: Sequence[int]) -> list[int]:
        return self.raw.lift(coords)


def global_A(s: GlobalScenario) -> GlobalA:
    """``A = (Lambda (x) Z[V]_0)`` coinvariants, with projection and lift."""
    return GlobalA(s.a_raw.canonical(), s.a_raw, s.tensor)


def global_h1(s: GlobalScenario) -> FgAbGroup:
    """Torsion of ``A``."""
    return torsion_subgroup(s.a_raw)[0]


@dataclass(frozen=True)
class Localization:
    """The localization map at one orbit, with the representative used."""

    orbit: int
    points: tuple[int, ...]
    representative: int
    stabilizer: tuple[int, ...]
    target: FgAbGroup
    hom: AbHom
    tensor_matrix: IntMatrix
    target_raw: FgAbGroup = field(repr=False)


def _check_orbit(s: GlobalScenario, u: int) -> tuple[int, ...]:
    if not isinstance(u, int) or not 0 <= u < len(s.places.orbits):
        raise ScenarioError(f"{u!r} is not an orbit index (there are {len(s.places.orbits)} orbits)")
    return s.places.orbits[u]


def shapiro_matrix(s: GlobalScenario, u: int, w: int) -> IntMatrix:
    """``lambda (x) x_p -> g_p^-1 lambda`` from ``Lambda (x) Z[orbit]`` to ``Lambda``.

    ``g_p`` is the smallest element carrying ``w`` to ``p``; generator
    ``(i, p)`` sits at ``i * |orbit| + position of p``.
    """
    pts = _check_orbit(s, u)
    lm = s.lam_module
    n = lm.ngens
    k = len(pts)
    G = s.group
    cols: list[list[int]] = [[] for _ in range(n * k)]
    for pi, p in enumerate(pts):
        a = lm.action[G.inv(s.places.transporter(w, p))]
        for i in range(n):
            cols[i * k + pi] = a.column(i)
    return IntMatrix.from_columns(cols, n)


def localize(s: GlobalScenario, u: int, representative: int | None = None) -> Localization:
    """The composite ``A -> (Lambda (x) Z[V_u]) coinvariants = Lambda_{Gamma_w}``."""
    pts = _check_orbit(s, u)
    w = pts[0] if representative is None else representative
    if w not in pts:
        raise ScenarioError(f"representative {w} does not lie in orbit {u}")
    lm = s.lam_module
    n = lm.ngens
    m = s.places.npoints
    G = s.group
    # image of each point's Lambda-copy in Lambda, by point
    per_point: dict[int, IntMatrix] = {p: lm.action[G.inv(s.places.transporter(w, p))] for p in pts}
    cols = []
    for i in range(n):
        for k in range(m - 1):
            col = [0] * n
            for p, sign in ((k, 1), (k + 1, -1)):
                if p in per_point:
                    for r, v in enumerate(per_point[p].column(i)):
                        col[r] += sign * v
            cols.append(col)
    mat = IntMatrix.from_columns(cols, n)
    stab = s.places.stabilizer(w)
    tgt_raw = s.local_raw(stab)
    return Localization(u, pts, w, stab, tgt_raw.canonical(), _canonical_hom(s.a_raw, tgt_raw, mat), mat, tgt_raw)


def localizations(s: GlobalScenario) -> list[Localization]:
    return [localize(s, u) for u in range(len(s.places.orbits))]


def change_of_representative(s: GlobalScenario, u: int, w: int, w2: int) -> AbHom:
    """The recorded identification ``Lambda_{Gamma_w} -> Lambda_{Gamma_w2}``, ``lambda -> g lambda``.

    ``g`` is the smallest element carrying ``w`` to ``w2``; localizing with
    ``w2`` equals this map after localizing with ``w``.
    """
    pts = _check_orbit(s, u)
    if w not in pts or w2 not in pts:
        raise ScenarioError("both representatives must lie in the orbit")
    g = s.places.transporter(w, w2)
    src = s.local_raw(s.places.stabilizer(w))
    tgt = s.local_raw(s.places.stabilizer(w2))
    return _canonical_hom(src, tgt, s.lam_module.action[g])


def shapiro_check(s: GlobalScenario, u: int, representative: int | None = None) -> tuple[bool, FgAbGroup, FgAbGroup]:
    """Whether ``lambda (x) x_p -> g_p^-1 lambda`` induces an isomorphism on coinvariants.

    Returns the verdict with the orbit-module coinvariants and ``Lambda_{Gamma_w}``.
    """
    pts = _check_orbit(s, u)
    w = pts[0] if representative is None else representative
    perms = [[pts.index(s.places.perms[g][p]) for p in pts] for g in range(s.group.order)]
    orbit_mod = tensor_module(s.lam_module, permutation_module(s.group, perms))
    src = _coinvariants_raw(orbit_mod)
    tgt = s.local_raw(s.places.stabilizer(w))
    f = _canonical_hom(src, tgt, shapiro_matrix(s, u, w))
    return f.is_isomorphism(), src.canonical(), tgt.canonical()


def _normalize_locals(s: GlobalScenario, locs: Mapping[int, Sequence[int]] | Sequence[Sequence[int] | None],
                      loc_maps: list[Localization]) -> dict[int, tuple[int, ...]]:
    if isinstance(locs, Mapping):
        items = dict(locs)
    else:
        items = {u: v for u, v in enumerate(locs) if v is not None}
    out = {}
    for u, loc in enumerate(loc_maps):
        out[u] = tuple(0 for _ in range(loc.target.canonical_rank))
    for u, coords in items.items():
        if not isinstance(u, int) or not 0 <= u < len(loc_maps):
            raise ScenarioError(f"local class given for {u!r}, which is not an orbit index")
        tgt = loc_maps[u].target
        coords = tuple(int(c) for c in coords)
        if len(coords) != tgt.canonical_rank:
            raise ScenarioError(f"local class at orbit {u} needs {tgt.canonical_rank} coordinates for {tgt}")
        for c, d in zip(coords, tgt.canonical_moduli):
            if d and not 0 <= c < d:
                raise ScenarioError(f"coordinate {c} at orbit {u} is out of range for {tgt}")
        out[u] = coords
    return out


def sum_to_global(s: GlobalScenario, locs) -> tuple[int, ...]:
    """Sum of the natural projections ``Lambda_{Gamma_w} -> Lambda_Gamma``.

    ``locs`` maps orbit indices to canonical coordinates; missing orbits are zero.
    """
    loc_maps = localizations(s)
    norm = _normalize_locals(s, locs, loc_maps)
    n = s.lam_module.ngens
    total = [0] * n
    for u, coords in norm.items():
        lam = loc_maps[u].target_raw.lift(coords)
        total = [a + b for a, b in zip(total, lam)]
    return s.lam_coinvariants.canonical_coords(total)


@dataclass(frozen=True)
class ObstructionReport:
    locals: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    local_groups: tuple[FgAbGroup, ...]
    global_group: FgAbGroup
    sum_image: tuple[int, ...]
    in_image: bool
    certificate: tuple[int, ...] | None
    obstruction: tuple[int, ...] | None

    def to_dict(self) -> dict:
        return {
            "locals": [list(x) for x in self.locals],
            "representatives": list(self.representatives),
            "local_groups": [g.invariants_dict() for g in self.local_groups],
            "coinvariants": self.global_group.invariants_dict(),
            "sum_image": list(self.sum_image),
            "in_image": self.in_image,
            "certificate": list(self.certificate) if self.certificate is not None else None,
            "obstruction": list(self.obstruction) if self.obstruction is not None else None,
        }


def _stacked(s: GlobalScenario, loc_maps: list[Localization]) -> tuple[IntMatrix, FgAbGroup]:
    mat = loc_maps[0].tensor_matrix.vstack(*(l.tensor_matrix for l in loc_maps[1:]))
    return mat, direct_sum(*(l.target_raw for l in loc_maps))


def check_in_image(s: GlobalScenario, locs) -> ObstructionReport:
    """Decide whether local classes come from ``A``, by two independent methods.

    (a) their sum in ``Lambda_Gamma`` vanishes; (b) the stacked localization
    equation is solved exactly over the integers. A disagreement raises
    :class:`CrossCheckError`.
    """
    loc_maps = localizations(s)
    norm = _normalize_locals(s, locs, loc_maps)
    total = sum_to_global(s, norm)
    by_sum = not any(total)

    mat, dsum = _stacked(s, loc_maps)
    rhs = [x for u in range(len(loc_maps)) for x in loc_maps[u].target_raw.lift(norm[u])]
    system = mat.hstack(dsum.relations)
    sol = SmithForm.of(system).solve(rhs)
    by_lattice = sol is not None
    if by_sum != by_lattice:
        raise CrossCheckError(
            f"image criterion disagrees: sum test says {by_sum}, lattice membership says {by_lattice}"
        )
    cert = obstruction = None
    if by_lattice:
        a = sol[:mat.cols]
        cert = s.a_raw.canonical_coords(a)
        for u, loc in enumerate(loc_maps):
            if tuple(loc.target.canonical_coords(loc.hom(list(cert)))) != norm[u]:
                raise CrossCheckError(f"certificate does not localize to the given class at orbit {u}")
    else:
        obstruction = total
    return ObstructionReport(
        tuple(norm[u] for u in range(len(loc_maps))),
        tuple(l.representative for l in loc_maps),
        tuple(l.target for l in loc_maps),
        s.lam_coinvariants.canonical(),
        total, by_lattice, cert, obstruction,
    )


@dataclass(frozen=True)
class ExactnessReport:
    image_in_kernel: bool
    kernel_in_image: bool

    @property
    def exact(self) -> bool:
        return self.image_in_kernel and self.kernel_in_image


def verify_exactness(s: GlobalScenario) -> ExactnessReport:
    """Image of the stacked localizations against the kernel of the sum map."""
    loc_maps = localizations(s)
    mat, dsum = _stacked(s, loc_maps)
    n = s.lam_module.ngens
    summ = IntMatrix.identity(n).hstack(*([IntMatrix.identity(n)] * (len(loc_maps) - 1)))
    sum_hom = AbHom(dsum, s.lam_coinvariants, summ)
    image_in_kernel = all(s.lam_coinvariants.is_zero(summ.apply(c)) for c in mat.columns())
    ker_grp, ker_inc = kernel(sum_hom)
    solver = SmithForm.of(mat.hstack(dsum.relations))
    kernel_in_image = all(solver.solve(c) is not None for c in ker_inc.matrix.columns())
    return ExactnessReport(image_in_kernel, kernel_in_image)


# towers


@dataclass(frozen=True)
class TransitionMap:
    """``p(v) = sum over w above v of deg(w) w`` on divisors, and on degree zero."""

    relative_degree: int
    local_degrees: tuple[int, ...]
    matrix: IntMatrix
    degree_zero_matrix: IntMatrix


def _check_quotient(big: FiniteGroup, small: FiniteGroup, quotient: Sequence[int]) -> None:
    if not big.is_homomorphism(small, quotient):
        raise ScenarioError("quotient map is not a group homomorphism")
    if set(quotient) != set(range(small.order)):
        raise ScenarioError("quotient map is not surjective")


def transition_p(source: PlaceSet, target: PlaceSet, cover: Sequence[int], quotient: Sequence[int],
                 local_degrees: Sequence[int] | None = None) -> TransitionMap:
    """The transition ``Z[V_K] -> Z[V_L]`` and its restriction to degree zero.

    ``cover[w]`` is the point below ``w`` and ``quotient[g]`` the image of
    ``g`` in the smaller group. Local degrees default to the stabilizer index
    ``|Stab_L(w)| / |Stab_K(cover(w))|``.
    """
    big, small = target.group, source.group
    _check_quotient(big, small, quotient)
    if len(cover) != target.npoints or set(cover) != set(range(source.npoints)):
        raise ScenarioError("cover must map the upper points onto the lower points")
    for g in range(big.order):
        for w in range(target.npoints):
            if cover[target.perms[g][w]] != source.perms[quotient[g]][cover[w]]:
                raise ScenarioError(f"cover is not equivariant for element {g} at point {w}")
    rel = big.order // small.order
    if local_degrees is None:
        degs = []
        for w in range(target.npoints):
            a, b = target.local_degree(w), source.local_degree(cover[w])
            if a % b:
                raise ScenarioError(f"stabilizer of point {w} does not map onto a subgroup of index dividing it")
            degs.append(a // b)
    else:
        degs = [int(d) for d in local_degrees]
        if len(degs) != target.npoints:
            raise ScenarioError("need one local degree per upper point")
    for v in range(source.npoints):
        total = sum(d for w, d in enumerate(degs) if cover[w] == v)
        if total != rel:
            raise ScenarioError(f"local degrees above point {v} sum to {total}, not {rel}")
    rows = [[0] * source.npoints for _ in range(target.npoints)]
    for w, d in enumerate(degs):
        rows[w][cover[w]] = d
    p = IntMatrix.from_rows(rows, source.npoints)
    for g in range(big.order):
        pk = _perm_matrix(source.perms[quotient[g]])
        pl = _perm_matrix(target.perms[g])
        if p @ pk != pl @ p:
            raise ScenarioError(f"transition map is not equivariant for element {g}")
    mk, ml = source.npoints, target.npoints
    cols = []
    for k in range(mk - 1):
        x = [0] * mk
        x[k], x[k + 1] = 1, -1
        cols.append(degree_zero_coordinates(p.apply(x)))
    p0 = IntMatrix.from_columns(cols, ml - 1)
    return TransitionMap(rel, tuple(degs), p, p0)


def _perm_matrix(perm: Sequence[int]) -> IntMatrix:
    m = len(perm)
    e = [0] * (m * m)
    for s, t in enumerate(perm):
        e[t * m + s] = 1
    return IntMatrix(m, m, tuple(e))


def _pushforward_degree_zero(source: PlaceSet, target: PlaceSet, cover: Sequence[int]) -> IntMatrix:
    ml, mk = target.npoints, source.npoints
    cols = []
    for k in range(ml - 1):
        x = [0] * mk
        x[cover[k]] += 1
        x[cover[k + 1]] -= 1
        cols.append(degree_zero_coordinates(x))
    return IntMatrix.from_columns(cols, mk - 1)


@dataclass(frozen=True)
class SquareCheck:
    orbit: int
    lower_representative: int
    upper_representative: int
    commutes_identity: bool
    commutes_scaled: bool


@dataclass(frozen=True)
class TowerReport:
    """Comparison of ``A`` for ``K`` and for ``L``.

    ``induced`` is the map from the transition ``p``; on local groups it
    agrees with multiplication by ``relative_degree`` (``commutes_scaled``),
    and with the identity only when that is the identity. ``pushforward`` is
    the map induced by ``w -> cover(w)`` in the other direction.
    """

    relative_degree: int
    source: FgAbGroup
    target: FgAbGroup
    induced: AbHom
    bijective: bool
    squares: tuple[SquareCheck, ...]
    pushforward: AbHom
    pushforward_bijective: bool
    pushforward_squares_commute: bool

    @property
    def squares_commute(self) -> bool:
        return all(sq.commutes_identity for sq in self.squares)

    @property
    def stable(self) -> bool:
        return self.bijective and self.squares_commute

    def findings(self) -> list[str]:
        out = []
        if not self.bijective:
            out.append(f"induced map {self.source} -> {self.target} is not bijective")
        for sq in self.squares:
            if not sq.commutes_identity:
                out.append(f"localization square at orbit {sq.orbit} commutes only up to "
                           f"multiplication by {self.relative_degree}" if sq.commutes_scaled
                           else f"localization square at orbit {sq.orbit} does not commute")
        return out


def tower_compare(sK: GlobalScenario, sL: GlobalScenario, quotient: Sequence[int], cover: Sequence[int],
                  local_degrees: Sequence[int] | None = None) -> TowerReport:
    """Transport ``A`` up the tower and test bijectivity and the localization squares."""
    K, L = sK.places, sL.places
    _check_quotient(L.group, K.group, quotient)
    lk, ll = sK.lam_module, sL.lam_module
    if lk.ngens != ll.ngens or lk.underlying.relations != ll.underlying.relations:
        raise ScenarioError("the upper fundamental group is not the inflation of the lower one")
    for g in range(L.group.order):
        if ll.action[g] != lk.action[quotient[g]]:
            raise ScenarioError(f"the upper action of element {g} is not inflated from the lower group")
    tp = transition_p(K, L, cover, quotient, local_degrees)
    kernel_elems = [g for g in range(L.group.order) if quotient[g] == 0]
    for v in range(K.npoints):
        fiber = {w for w in range(L.npoints) if cover[w] == v}
        w0 = min(fiber)
        if {L.perms[g][w0] for g in kernel_elems} != fiber:
            raise ScenarioError(f"the upper points above {v} are not one orbit of the relative group")
    n = lk.ngens
    ind_mat = IntMatrix.identity(n).kron(tp.degree_zero_matrix)
    induced = _canonical_hom(sK.a_raw, sL.a_raw, ind_mat)
    push_mat = IntMatrix.identity(n).kron(_pushforward_degree_zero(K, L, cover))
    push = _canonical_hom(sL.a_raw, sK.a_raw, push_mat)

    squares = []
    push_ok = True
    for u, orb in enumerate(K.orbits):
        v0 = orb[0]
        w0 = min(w for w in range(L.npoints) if cover[w] == v0)
        uL = L.orbit_index(w0)
        lk_loc = localize(sK, u, v0)
        ll_loc = localize(sL, uL, w0)
        ident = _canonical_hom(lk_loc.target_raw, ll_loc.target_raw, IntMatrix.identity(n))
        scaled = _canonical_hom(lk_loc.target_raw, ll_loc.target_raw, IntMatrix.identity(n).scale(tp.relative_degree))
        up = induced.then(ll_loc.hom)
        squares.append(SquareCheck(u, v0, w0, up.equals(lk_loc.hom.then(ident)), up.equals(lk_loc.hom.then(scaled))))
        back = _canonical_hom(ll_loc.target_raw, lk_loc.target_raw, IntMatrix.identity(n))
        push_ok = push_ok and push.then(lk_loc.hom).equals(ll_loc.hom.then(back))
    return TowerReport(tp.relative_degree, sK.a_raw.canonical(), sL.a_raw.canonical(), induced,
                       induced.is_isomorphism(), tuple(squares), push, push.is_isomorphism(), push_ok)


# random scenarios for self-tests


def small_groups(max_order: int = 8) -> list[FiniteGroup]:
    from .groups import catalog_groups

    return catalog_groups(max_order)


def random_lambda(rng: random.Random, group: FiniteGroup, max_rank: int = 3, max_factor: int = 6) -> FundamentalGroup:
    """A random module: sums of trivial, sign and permutation pieces, some made finite, in a scrambled basis."""
    pieces: list[tuple[list[IntMatrix], list[int]]] = []
    rank = rng.randint(1, max_rank)
    used = 0
    index_two = [sorted(h) for h in group.subgroups() if 2 * len(h) == group.order]
    while used < rank:
        kind = rng.choice(["trivial", "sign", "perm"])
        size = 1
        if kind == "sign" and index_two:
            ker = set(rng.choice(index_two))
            mats = [IntMatrix.from_rows([[1 if g in ker else -1]]) for g in range(group.order)]
        elif kind == "perm":
            subs = [h for h in group.subgroups() if group.order // len(h) <= rank - used]
            h = rng.choice(subs)
            act = group.coset_action(sorted(h))
            size = len(act[0])
            mats = [_perm_matrix(p) for p in act]
        else:
            mats = [IntMatrix.identity(1) for _ in range(group.order)]
        d = rng.choice([0, 0, rng.randint(2, max_factor)])
        pieces.append((mats, [d] * size))
        used += size
    mats = [block_diagonal(*(p[0][g] for p in pieces)) for g in range(group.order)]
    mods = [d for p in pieces for d in p[1]]
    n = len(mods)
    rel_cols = [[d if i == j else 0 for i in range(n)] for j, d in enumerate(mods) if d]
    # relations must be stable: a permutation piece with modulus d has rel d*e_i for each basis vector
    b = _random_unimodular(rng, n)
    binv = _inverse_unimodular(b)
    mats = [b @ m @ binv for m in mats]
    rel = b @ IntMatrix.from_columns(rel_cols, n) if rel_cols else IntMatrix.zeros(n, 0)
    return FundamentalGroup(GModule(group, FgAbGroup(n, rel), tuple(mats)), "random")


def _random_unimodular(rng: random.Random, n: int) -> IntMatrix:
    m = IntMatrix.identity(n)
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            e = IntMatrix.identity(n).tolist()
            e[i][j] = rng.choice([-1, 1])
            m = IntMatrix.from_rows(e, n) @ m
    return m


def _inverse_unimodular(m: IntMatrix) -> IntMatrix:
    from .zlattice import SmithForm

    n = m.rows
    sf = SmithForm.of(m)
    cols = [sf.solve([int(i == j) for i in range(n)]) for j in range(n)]
    return IntMatrix.from_columns(cols, n)


def random_scenario(rng: random.Random, max_order: int = 8, max_points: int = 6, max_rank: int = 3,
                    max_factor: int = 6) -> GlobalScenario:
    group = rng.choice(small_groups(max_order))
    stabs = []
    total = 0
    subs = list(group.subgroups())
    for _ in range(rng.randint(1, 3)):
        fits = [h for h in subs if total + group.order // len(h) <= max_points]
        if not fits:
            break
        h = rng.choice(fits)
        stabs.append(sorted(h))
        total += group.order // len(h)
    places = PlaceSet.from_cosets(group, stabs)
    return GlobalScenario(places, random_lambda(rng, group, max_rank, max_factor))


@dataclass(frozen=True)
class Tower:
    lower: GlobalScenario
    upper: GlobalScenario
    quotient: tuple[int, ...]
    cover: tuple[int, ...]


def random_tower(rng: random.Random, max_order: int = 8, max_points: int = 6, max_rank: int = 3,
                 max_factor: int = 6) -> Tower:
    """A tower ``F < K < L`` with ``Gamma(L/K)`` normal and places built from cosets."""
    big = rng.choice(small_groups(max_order))
    normals = [sorted(h) for h in big.subgroups() if big.is_normal(sorted(h))]
    nsub = rng.choice(normals)
    small, q = big.quotient(nsub)
    upper_stabs = []
    total = 0
    for _ in range(rng.randint(1, 3)):
        fits = [h for h in big.subgroups() if total + big.order // len(h) <= max_points]
        if not fits:
            break
        h = sorted(rng.choice(fits))
        upper_stabs.append(h)
        total += big.order // len(h)
    lower_stabs = [sorted({q[t] for t in h}) for h in upper_stabs]
    L = PlaceSet.from_cosets(big, upper_stabs)
    K = PlaceSet.from_cosets(small, lower_stabs)
    cover = []
    off_l = off_k = 0
    for hu, hl in zip(upper_stabs, lower_stabs):
        ucos = big.left_cosets(hu)
        kcos = small.left_cosets(hl)
        kidx = {x: i for i, c in enumerate(kcos) for x in c}
        cover.extend(off_k + kidx[q[c[0]]] for c in ucos)
        off_l += len(ucos)
        off_k += len(kcos)
    lamk = random_lambda(rng, small, max_rank, max_factor)
    lm = lamk.module
    laml = FundamentalGroup(GModule(big, lm.underlying, tuple(lm.action[q[g]] for g in range(big.order))), "inflated")
    return Tower(GlobalScenario(K, lamk), GlobalScenario(L, laml), tuple(q), tuple(cover))


__all__ = [
    "GlobalA",
    "GlobalScenario",
    "Localization",
    "ObstructionReport",
    "PlaceSet",
    "TowerReport",
    "TransitionMap",
    "check_in_image",
    "degree_zero_module",
    "divisor_module",
    "global_A",
    "global_h1",
    "localize",
    "localizations",
    "shapiro_check",
    "change_of_representative",
    "random_scenario",
    "random_tower",
    "sum_to_global",
    "tower_compare",
    "transition_p",
    "verify_exactness",
]
