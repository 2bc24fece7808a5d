"""Finite groups given by multiplication tables.

Elements are the integers ``0 .. order-1``; the identity is always ``0``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Callable, Hashable, Sequence, TypeVar

from .errors import GroupLawError, SizeGuardError

T = TypeVar("T")


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group law, verified at construction.

    ``table[a][b]`` is the index of ``a * b``. ``name`` is cosmetic.
    Subgroups are enumerated eagerly so instances stay immutable.
    """

    table: tuple[tuple[int, ...], ...]
    name: str = ""
    inverse: tuple[int, ...] = field(init=False)
    _subgroups: tuple[frozenset[int], ...] = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.table)
        if n == 0:
            raise GroupLawError("a group has at least one element")
        for a, row in enumerate(self.table):
            if len(row) != n or sorted(row) != list(range(n)):
                raise GroupLawError(f"row {a} of the table is not a permutation of the elements")
        for a in range(n):
            if self.table[0][a] != a or self.table[a][0] != a:
                raise GroupLawError("element 0 must be the identity")
        t = self.table
        for a, b, c in product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupLawError(f"associativity fails at ({a}, {b}, {c})")
        inv = tuple(t[a].index(0) for a in range(n))
        object.__setattr__(self, "inverse", inv)
        object.__setattr__(self, "_subgroups", self._enumerate_subgroups())

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        out = 0
        for _ in range(k):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def closure(self, gens: Sequence[int]) -> frozenset[int]:
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def is_subgroup(self, elems: Sequence[int]) -> bool:
        s = set(elems)
        if 0 not in s:
            return False
        return all(self.table[a][b] in s for a in s for b in s)

    def _enumerate_subgroups(self) -> tuple[frozenset[int], ...]:
        # cyclic extension: every subgroup arises as <S, g> from a smaller one
        found = {frozenset({0})}
        frontier = [frozenset({0})]
        while frontier:
            nxt = []
            for s in frontier:
                for g in range(self.order):
                    if g in s:
                        continue
                    h = self.closure(sorted(s) + [g])
                    if h not in found:
                        found.add(h)
                        nxt.append(h)
            frontier = nxt
        return tuple(sorted(found, key=lambda h: (len(h), sorted(h))))

    def subgroups(self) -> tuple[frozenset[int], ...]:
        """Every subgroup exactly once, ordered by size then elements."""
        return self._subgroups

    def subgroup(self, elems: Sequence[int]) -> tuple[FiniteGroup, tuple[int, ...]]:
        """The subgroup on ``elems`` as a group in its own right.

        Returns the group and the tuple mapping its element ``i`` to the
        corresponding element of ``self``.
        """
        if not self.is_subgroup(elems):
            raise GroupLawError(f"{sorted(set(elems))} is not closed under the group law")
        emb = tuple(sorted(set(elems)))
        pos = {g: i for i, g in enumerate(emb)}
        table = tuple(tuple(pos[self.table[a][b]] for b in emb) for a in emb)
        return FiniteGroup(table, name=f"subgroup of {self.name or 'G'}"), emb

    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by element index."""
        gens: list[int] = []
        cur = frozenset({0})
        while len(cur) < self.order:
            best = max(
                (x for x in range(self.order) if x not in cur),
                key=lambda x: (len(self.closure(gens + [x])), -x),
            )
            gens.append(best)
            cur = self.closure(gens)
        return tuple(gens)

    def is_normal(self, elems: Sequence[int]) -> bool:
        s = set(elems)
        return self.is_subgroup(elems) and all(
            self.table[self.table[g][h]][self.inverse[g]] in s for g in range(self.order) for h in s
        )

    def left_cosets(self, elems: Sequence[int]) -> list[tuple[int, ...]]:
        """Left cosets ``gH`` ordered by their smallest element; each sorted."""
        h = sorted(set(elems))
        seen: set[int] = set()
        out = []
        for g in range(self.order):
            if g in seen:
                continue
            c = tuple(sorted(self.table[g][x] for x in h))
            seen.update(c)
            out.append(c)
        return out

    def coset_action(self, elems: Sequence[int]) -> list[list[int]]:
        """``perms[g][i]`` is the index of ``g`` times coset ``i``."""
        cosets = self.left_cosets(elems)
        index = {x: i for i, c in enumerate(cosets) for x in c}
        return [[index[self.table[g][c[0]]] for c in cosets] for g in range(self.order)]

    def quotient(self, normal: Sequence[int]) -> tuple[FiniteGroup, tuple[int, ...]]:
        """``G / N`` with the projection ``q`` as an element map."""
        if not self.is_normal(normal):
            raise GroupLawError(f"{sorted(set(normal))} is not a normal subgroup")
        cosets = self.left_cosets(normal)
        index = {x: i for i, c in enumerate(cosets) for x in c}
        table = tuple(tuple(index[self.table[a[0]][b[0]]] for b in cosets) for a in cosets)
        q = tuple(index[g] for g in range(self.order))
        return FiniteGroup(table, name=f"{self.name or 'G'}/N"), q

    def is_homomorphism(self, other: FiniteGroup, f: Sequence[int]) -> bool:
        if len(f) != self.order or any(not 0 <= x < other.order for x in f):
            return False
        return all(
            f[self.table[a][b]] == other.table[f[a]][f[b]] for a in range(self.order) for b in range(self.order)
        )

    def word_map(self, gens: Sequence[int], images: Sequence[T], mul: Callable[[T, T], T], one: T) -> list[T]:
        """Extend generator images to every element along a spanning tree.

        The result is not checked for multiplicativity; callers verify it.
        """
        out: list[T | None] = [None] * self.order
        out[0] = one
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g, img in zip(gens, images):
                y = self.table[x][g]
                if out[y] is None:
                    out[y] = mul(out[x], img)
                    queue.append(y)
        if any(v is None for v in out):
            raise GroupLawError("the given elements do not generate the group")
        return out  # type: ignore[return-value]

    # constructors

    @classmethod
    def from_elements(cls, elems: Sequence[Hashable], mul: Callable, name: str = "") -> FiniteGroup:
        """Build the table of a concrete group; ``elems[0]`` must be the identity."""
        pos = {e: i for i, e in enumerate(elems)}
        try:
            table = tuple(tuple(pos[mul(a, b)] for b in elems) for a in elems)
        except KeyError as exc:
            raise GroupLawError(f"product {exc} escapes the element list") from None
        return cls(table, name=name)

    @classmethod
    def from_permutations(cls, gens: Sequence[Sequence[int]], max_order: int = 24, name: str = "") -> FiniteGroup:
        """The permutation group generated by ``gens`` (tuples of images)."""
        return cls.from_elements(permutation_closure(gens, max_order), _compose, name=name)

    @classmethod
    def trivial(cls) -> FiniteGroup:
        return cls(((0,),), name="1")

    @classmethod
    def cyclic(cls, n: int) -> FiniteGroup:
        return cls(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)), name=f"C{n}")

    @classmethod
    def direct_product(cls, g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
        elems = [(a, b) for a in range(g.order) for b in range(h.order)]
        return cls.from_elements(
            elems, lambda x, y: (g.table[x[0]][y[0]], h.table[x[1]][y[1]]), name=f"{g.name}x{h.name}"
        )

    @classmethod
    def klein_four(cls) -> FiniteGroup:
        g = cls.direct_product(cls.cyclic(2), cls.cyclic(2))
        return cls(g.table, name="V4")

    @classmethod
    def dihedral(cls, n: int) -> FiniteGroup:
        """Symmetries of the n-gon (order ``2n``)."""
        elems = [(r, s) for s in range(2) for r in range(n)]

        def mul(x, y):
            r1, s1 = x
            r2, s2 = y
            return ((r1 + (-r2 if s1 else r2)) % n, (s1 + s2) % 2)

        return cls.from_elements(elems, mul, name=f"D{2 * n}")

    @classmethod
    def symmetric(cls, n: int) -> FiniteGroup:
        elems = sorted(permutations(range(n)))
        return cls.from_elements(elems, lambda p, q: tuple(p[x] for x in q), name=f"S{n}")

    @classmethod
    def alternating(cls, n: int) -> FiniteGroup:
        def even(p):
            inv = sum(1 for i in range(n) for j in range(i) if p[j] > p[i])
            return inv % 2 == 0

        elems = [p for p in sorted(permutations(range(n))) if even(p)]
        return cls.from_elements(elems, lambda p, q: tuple(p[x] for x in q), name=f"A{n}")

    @classmethod
    def quaternion(cls) -> FiniteGroup:
        # unit quaternions +-1, +-i, +-j, +-k as (sign, axis) with axis 0 = real part
        axes = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
                (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
                (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
                (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}

        def mul(x, y):
            if x[1] == 0 or y[1] == 0:
                return (x[0] * y[0], x[1] or y[1])
            s, ax = axes[(x[1], y[1])]
            return (x[0] * y[0] * s, ax)

        elems = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
        return cls.from_elements(elems, mul, name="Q8")


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(p[x] for x in q)


def permutation_closure(gens: Sequence[Sequence[int]], max_order: int = 24) -> list[tuple[int, ...]]:
    """Elements of the group generated by ``gens``, identity first, in discovery order.

    ``p * q`` is ``p`` after ``q``. Raises :class:`SizeGuardError` past ``max_order``.
    """
    gens = [tuple(g) for g in gens]
    if not gens:
        return [()]
    deg = len(gens[0])
    for g in gens:
        if len(g) != deg or sorted(g) != list(range(deg)):
            raise GroupLawError(f"{list(g)} is not a permutation of 0..{deg - 1}")
    ident = tuple(range(deg))
    elems = [ident]
    seen = {ident}
    i = 0
    while i < len(elems):
        for g in gens:
            h = _compose(elems[i], g)
            if h not in seen:
                if len(elems) >= max_order:
                    raise SizeGuardError(f"generated group exceeds the order limit {max_order}")
                seen.add(h)
                elems.append(h)
        i += 1
    return elems


def catalog_groups(max_order: int = 12) -> list[FiniteGroup]:
    """The built-in groups of order at most ``max_order``."""
    out = [FiniteGroup.cyclic(n) for n in range(1, max_order + 1)]
    extra = [FiniteGroup.klein_four(), FiniteGroup.symmetric(3), FiniteGroup.dihedral(4),
             FiniteGroup.quaternion(), FiniteGroup.alternating(4), FiniteGroup.dihedral(5),
             FiniteGroup.dihedral(6),
             FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(4))]
    out.extend(g for g in extra if g.order <= max_order)
    return out
