"""Fundamental-group modules: cocharacters modulo coroots with a Galois action.

The module is ``Z^rank / <coroots>`` where the group acts through integer
matrices on the cocharacter lattice. Coinvariants and their torsion are the
local classification targets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import GroupLawError, RootDatumError
from .gmodule import GModule, coinvariants
from .groups import FiniteGroup
from .zlattice import FgAbGroup, IntMatrix, torsion_subgroup


@dataclass(frozen=True)
class RootDatumInput:
    """Cocharacter rank, coroots, and the action of chosen group generators.

    ``generators[k]`` is a group element and ``action[k]`` its matrix on the
    cocharacter lattice (acting on column vectors).
    """

    rank: int
    coroots: tuple[tuple[int, ...], ...]
    generators: tuple[int, ...] = ()
    action: tuple[IntMatrix, ...] = ()

    @classmethod
    def make(cls, rank: int, coroots: Sequence[Sequence[int]], generators: Sequence[int] = (),
             action: Sequence[Sequence[Sequence[int]] | IntMatrix] = ()) -> RootDatumInput:
        mats = tuple(m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m, rank) for m in action)
        return cls(rank, tuple(tuple(c) for c in coroots), tuple(generators), mats)


@dataclass(frozen=True, eq=False)
class FundamentalGroup:
    module: GModule
    label: str = "custom"

    @property
    def group(self) -> FiniteGroup:
        return self.module.group

    def __str__(self) -> str:
        return f"{self.label}: {self.module.underlying}"


def _validate(rd: RootDatumInput, group: FiniteGroup) -> None:
    if rd.rank < 0:
        raise RootDatumError("cocharacter rank must be nonnegative")
    for c in rd.coroots:
        if len(c) != rd.rank:
            raise RootDatumError(f"coroot {list(c)} does not have length {rd.rank}")
    if len(rd.generators) != len(rd.action):
        raise RootDatumError("need one action matrix per listed generator")
    roots = Counter(rd.coroots)
    for g, m in zip(rd.generators, rd.action):
        if not 0 <= g < group.order:
            raise RootDatumError(f"generator {g} is not an element of the group")
        if (m.rows, m.cols) != (rd.rank, rd.rank):
            raise RootDatumError(f"action of generator {g} is not a {rd.rank}x{rd.rank} matrix")
        if abs(m.det()) != 1:
            raise RootDatumError(f"action of generator {g} is not invertible over the integers")
        if Counter(tuple(m.apply(c)) for c in rd.coroots) != roots:
            raise RootDatumError(f"action of generator {g} does not permute the coroots")


def fundamental_group(rd: RootDatumInput, group: FiniteGroup, label: str = "custom") -> FundamentalGroup:
    """``Z^rank / <coroots>`` with the induced action, verified as a module."""
    _validate(rd, group)
    n = rd.rank
    rel = IntMatrix.from_columns([list(c) for c in rd.coroots], n)
    lattice = FgAbGroup(n, rel)
    gens = list(rd.generators)
    images = list(rd.action)
    # elements not reached by the listed generators have no defined action
    try:
        mats = group.word_map(gens, images, lambda x, y: x @ y, IntMatrix.identity(n))
    except GroupLawError:
        raise RootDatumError("the listed generators do not generate the group") from None
    try:
        raw = GModule(group, lattice, tuple(mats))
    except GroupLawError as exc:
        raise RootDatumError(f"action does not respect the group law: {exc}") from None
    module, _ = raw.canonical()
    return FundamentalGroup(module, label)


def trivial_action(group: FiniteGroup, rank: int) -> tuple[tuple[int, ...], tuple[IntMatrix, ...]]:
    gens = group.generators()
    return gens, tuple(IntMatrix.identity(rank) for _ in gens)


def type_a_coroots(n: int, form: str) -> tuple[int, list[list[int]]]:
    """Rank and coroots of a type ``A_{n-1}`` datum.

    ``form`` is ``"gl"`` (lattice ``Z^n``), ``"sc"`` (coroot lattice, basis of
    simple coroots) or ``"adjoint"`` (coweight lattice, basis of fundamental
    coweights). All coroots, positive and negative, are listed.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if form == "gl":
        rank = n
        pos = []
        for i in range(n):
            for j in range(i + 1, n):
                v = [0] * n
                v[i], v[j] = 1, -1
                pos.append(v)
    else:
        rank = n - 1
        if form == "sc":
            simple = [[int(i == j) for j in range(rank)] for i in range(rank)]
        elif form == "adjoint":
            # simple coroot i in the fundamental-coweight basis is column i of the Cartan matrix
            simple = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(rank)] for i in range(rank)]
        else:
            raise ValueError(f"unknown form {form!r}")
        pos = []
        for i in range(rank):
            acc = [0] * rank
            for j in range(i, rank):
                acc = [a + b for a, b in zip(acc, simple[j])]
                pos.append(list(acc))
    return rank, pos + [[-x for x in v] for v in pos]


CATALOG_NAMES = ("split_torus", "gl", "sl", "pgl", "norm_one_torus")


def catalog(name: str, group: FiniteGroup | None = None, n: int | None = None,
            rank: int | None = None, kernel: Sequence[int] | None = None) -> FundamentalGroup:
    """Built-in fundamental groups, written down directly.

    ``split_torus(rank)`` gives ``Z^rank``, ``gl(n)`` gives ``Z``, ``sl(n)``
    gives ``0`` and ``pgl(n)`` gives ``Z/n``, all with trivial action over
    ``group`` (default trivial). ``norm_one_torus`` gives ``Z`` with elements
    outside the index-2 subgroup ``kernel`` acting by ``-1``; the default group
    is ``Z/2``.
    """
    if name == "norm_one_torus":
        g = group or FiniteGroup.cyclic(2)
        if kernel is None:
            halves = [h for h in g.subgroups() if 2 * len(h) == g.order]
            if len(halves) != 1:
                raise RootDatumError("norm_one_torus needs an explicit index-2 kernel for this group")
            kernel = sorted(halves[0])
        ker = set(kernel)
        if not g.is_subgroup(sorted(ker)) or 2 * len(ker) != g.order:
            raise RootDatumError("norm_one_torus kernel must be a subgroup of index 2")
        return FundamentalGroup(GModule.sign(g, [1 if x in ker else -1 for x in range(g.order)]),
                                "norm_one_torus")
    g = group or FiniteGroup.trivial()
    if name == "split_torus":
        r = 1 if rank is None else rank
        return FundamentalGroup(GModule.trivial(g, FgAbGroup.free(r)), f"split_torus({r})")
    if n is None or n < 1:
        raise RootDatumError(f"{name} needs a positive parameter n")
    if name == "gl":
        return FundamentalGroup(GModule.trivial(g, FgAbGroup.free(1)), f"gl({n})")
    if name == "sl":
        return FundamentalGroup(GModule.trivial(g, FgAbGroup.free(0)), f"sl({n})")
    if name == "pgl":
        return FundamentalGroup(GModule.trivial(g, FgAbGroup.from_invariants([n])), f"pgl({n})")
    raise RootDatumError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG_NAMES)}")


def type_a(n: int, form: str, group: FiniteGroup | None = None) -> FundamentalGroup:
    """The split type ``A_{n-1}`` group of the given form from its root datum."""
    g = group or FiniteGroup.trivial()
    rank, roots = type_a_coroots(n, form)
    gens, mats = trivial_action(g, rank)
    return fundamental_group(RootDatumInput.make(rank, roots, gens, mats), g, label=f"{form}({n})")


def local_basic_classes(lam: FundamentalGroup) -> FgAbGroup:
    """Coinvariants of the fundamental group, in canonical form."""
    return coinvariants(lam.module)[0].canonical()


def local_h1(lam: FundamentalGroup) -> FgAbGroup:
    """Torsion of the coinvariants."""
    return torsion_subgroup(coinvariants(lam.module)[0])[0]
