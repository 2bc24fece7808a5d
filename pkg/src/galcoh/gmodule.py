"""Modules over the integral group ring of a finite group."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import GroupLawError, WellDefinednessError
from .groups import FiniteGroup
from .zlattice import AbHom, FgAbGroup, IntMatrix, cokernel, kernel, tensor

Matrix = IntMatrix


@dataclass(frozen=True, eq=False)
class GModule:
    """A finitely generated abelian group with a verified group action.

    ``action[g]`` is the integer matrix of ``g`` on the generators of
    ``underlying``. Construction checks that each matrix respects the
    relations, that the identity acts trivially and that
    ``action[g] action[h] = action[gh]`` modulo relations.
    """

    group: FiniteGroup
    underlying: FgAbGroup
    action: tuple[IntMatrix, ...]

    def __post_init__(self):
        g = self.group
        u = self.underlying
        n = u.ngens
        if len(self.action) != g.order:
            raise GroupLawError("need one action matrix per group element")
        for a, m in enumerate(self.action):
            if (m.rows, m.cols) != (n, n):
                raise GroupLawError(f"action matrix of element {a} has the wrong shape")
            try:
                AbHom(u, u, m)
            except WellDefinednessError:
                raise GroupLawError(f"element {a} does not preserve the relations") from None
        if not self._congruent(self.action[0], IntMatrix.identity(n)):
            raise GroupLawError("the identity does not act trivially")
        for a in range(g.order):
            for b in range(g.order):
                if not self._congruent(self.action[a] @ self.action[b], self.action[g.mul(a, b)]):
                    raise GroupLawError(f"action is not multiplicative at ({a}, {b})")

    def _congruent(self, m1: IntMatrix, m2: IntMatrix) -> bool:
        if self.underlying.relations.is_zero():
            return m1 == m2
        d = m1 - m2
        return all(self.underlying.is_zero(d.column(j)) for j in range(d.cols))

    @property
    def ngens(self) -> int:
        return self.underlying.ngens

    def is_lattice(self) -> bool:
        """True when the generators form a Z-basis (no relations at all)."""
        return self.underlying.relations.is_zero()

    def act(self, g: int, x: Sequence[int]) -> list[int]:
        return self.action[g].apply(x)

    def __str__(self) -> str:
        return f"GModule({self.underlying} over {self.group.name or 'G'} of order {self.group.order})"

    # constructors

    @classmethod
    def trivial(cls, group: FiniteGroup, underlying: FgAbGroup | None = None) -> GModule:
        u = underlying if underlying is not None else FgAbGroup.free(1)
        ident = IntMatrix.identity(u.ngens)
        return cls(group, u, (ident,) * group.order)

    @classmethod
    def lattice(cls, group: FiniteGroup, matrices: Sequence[IntMatrix]) -> GModule:
        """``Z^n`` with ``matrices[g]`` acting; one matrix per element."""
        n = matrices[0].rows if matrices else 0
        return cls(group, FgAbGroup.free(n), tuple(matrices))

    @classmethod
    def from_generators(
        cls,
        group: FiniteGroup,
        underlying: FgAbGroup,
        gens: Sequence[int],
        images: Sequence[IntMatrix],
    ) -> GModule:
        """Extend matrices given on generators of the group to all elements."""
        n = underlying.ngens
        mats = group.word_map(gens, list(images), lambda x, y: x @ y, IntMatrix.identity(n))
        return cls(group, underlying, tuple(mats))

    @classmethod
    def sign(cls, group: FiniteGroup, character: Sequence[int]) -> GModule:
        """``Z`` with ``g`` acting by ``character[g]`` in ``{+1, -1}``."""
        return cls.lattice(group, [IntMatrix.from_rows([[c]]) for c in character])

    def canonical(self) -> tuple[GModule, AbHom]:
        """The same module on the canonical generators of its underlying group."""
        to_c = self.underlying.to_canonical()
        from_c = self.underlying.from_canonical()
        mats = tuple(to_c.matrix @ m @ from_c.matrix for m in self.action)
        return GModule(self.group, to_c.target, mats), to_c


def validate_gset(group: FiniteGroup, perms: Sequence[Sequence[int]]) -> None:
    """Raise :class:`GroupLawError` unless ``perms`` is an action of ``group``."""
    if len(perms) != group.order:
        raise GroupLawError("need one permutation per group element")
    m = len(perms[0]) if perms else 0
    for g, p in enumerate(perms):
        if sorted(p) != list(range(m)):
            raise GroupLawError(f"element {g} does not permute the set")
    for s in range(m):
        if perms[0][s] != s:
            raise GroupLawError("the identity moves a point")
    for a in range(group.order):
        for b in range(group.order):
            ab = group.mul(a, b)
            if any(perms[a][perms[b][s]] != perms[ab][s] for s in range(m)):
                raise GroupLawError(f"the set action is not multiplicative at ({a}, {b})")


def permutation_module(group: FiniteGroup, perms: Sequence[Sequence[int]]) -> GModule:
    """``Z[S]`` for the G-set ``S = {0..m-1}``; ``perms[g][s]`` is ``g . s``."""
    validate_gset(group, perms)
    m = len(perms[0]) if perms else 0
    mats = []
    for p in perms:
        e = [0] * (m * m)
        for s in range(m):
            e[p[s] * m + s] = 1
        mats.append(IntMatrix(m, m, tuple(e)))
    return GModule.lattice(group, mats)


def regular_module(group: FiniteGroup) -> GModule:
    """``Z[G]`` with left multiplication."""
    return permutation_module(group, [list(group.table[g]) for g in range(group.order)])


def coset_module(group: FiniteGroup, subgroup: Sequence[int]) -> GModule:
    """``Z[G/H]`` for the left cosets of ``subgroup``."""
    if not group.is_subgroup(subgroup):
        raise GroupLawError(f"{sorted(set(subgroup))} is not a subgroup")
    return permutation_module(group, group.coset_action(subgroup))


def restriction(m: GModule, elems: Sequence[int]) -> GModule:
    """Restrict the action to the subgroup on ``elems``."""
    sub, emb = m.group.subgroup(elems)
    return GModule(sub, m.underlying, tuple(m.action[g] for g in emb))


def tensor_module(a: GModule, b: GModule) -> GModule:
    """``a (x) b`` with the diagonal action."""
    if a.group is not b.group:
        raise GroupLawError("tensor factors live over different groups")
    return GModule(a.group, tensor(a.underlying, b.underlying),
                   tuple(x.kron(y) for x, y in zip(a.action, b.action)))


def hom_module(x: GModule, a: GModule) -> GModule:
    """``Hom(x, a)`` for a lattice ``x``, acting by ``phi -> a_g phi x_g^-1``.

    A homomorphism is stored as its ``a.ngens x x.ngens`` matrix flattened
    row-major: entry ``(i, j)`` sits at index ``i * x.ngens + j``.
    """
    if x.group is not a.group:
        raise GroupLawError("modules live over different groups")
    if not x.is_lattice():
        raise ValueError("Hom(X, A) is only supported for a lattice X")
    g = x.group
    n = x.ngens
    under = FgAbGroup(a.ngens * n, a.underlying.relations.kron(IntMatrix.identity(n)))
    mats = []
    for el in range(g.order):
        xinv = x.action[g.inv(el)]
        # vec(A phi B) = (A kron B^T) vec(phi) for row-major vec
        mats.append(a.action[el].kron(xinv.T))
    return GModule(g, under, tuple(mats))


def direct_sum_module(*mods: GModule) -> GModule:
    from .zlattice import block_diagonal, direct_sum

    g = mods[0].group
    return GModule(g, direct_sum(*(m.underlying for m in mods)),
                   tuple(block_diagonal(*(m.action[el] for m in mods)) for el in range(g.order)))


def _stacked_differences(m: GModule) -> IntMatrix:
    n = m.ngens
    ident = IntMatrix.identity(n)
    cols = []
    for el in range(1, m.group.order):
        cols.append(m.action[el] - ident)
    return cols[0].hstack(*cols[1:]) if cols else IntMatrix.zeros(n, 0)


def coinvariants(m: GModule) -> tuple[FgAbGroup, AbHom]:
    """``M_G = M / sum (g - 1) M`` with its projection."""
    diffs = _stacked_differences(m)
    f = AbHom(FgAbGroup.free(diffs.cols), m.underlying, diffs)
    return cokernel(f)


def invariants_part(m: GModule) -> tuple[FgAbGroup, AbHom]:
    """``M^G`` as the kernel of the stacked maps ``g - 1``, with its inclusion."""
    from .zlattice import direct_sum

    g = m.group
    ident = IntMatrix.identity(m.ngens)
    blocks = [m.action[el] - ident for el in range(1, g.order)]
    if not blocks:
        return m.underlying, AbHom.identity(m.underlying)
    stacked = blocks[0].vstack(*blocks[1:])
    tgt = direct_sum(*([m.underlying] * len(blocks)))
    return kernel(AbHom(m.underlying, tgt, stacked))


def norm_matrix(m: GModule) -> IntMatrix:
    out = IntMatrix.zeros(m.ngens, m.ngens)
    for a in m.action:
        out = out + a
    return out


def norm_endomorphism(m: GModule) -> AbHom:
    """``N = sum_g g`` as an endomorphism of the underlying group."""
    return AbHom(m.underlying, m.underlying, norm_matrix(m))


def fixed_points(m: GModule, x: Sequence[int]) -> bool:
    return all(m.underlying.equal_elements(m.act(g, x), x) for g in range(m.group.order))
