"""Weak and rigid Tate-Nakayama conditions for a triple ``(X, A, alpha)``.

The weak condition asks that cup product with the restriction of ``alpha``
to every subgroup ``H`` is bijective ``H^r(H, X) -> H^{r+2}(H, A)``; only a
finite window of degrees can be certified and reports state which one.
Rigidity asks that ``H^1(H, Hom(X, A))`` vanishes for every subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cohomology import (
    DEFAULT_LIMITS,
    Cochain,
    Limits,
    carry_cocycle,
    check_cocycle,
    cup_with_2cocycle,
    restrict_triple,
    tate_cohomology,
)
from .errors import SizeGuardError
from .gmodule import GModule, hom_module, restriction
from .groups import FiniteGroup

DEFAULT_TN_WINDOW = (-2, 1)


@dataclass(frozen=True, eq=False)
class TNTripleCandidate:
    """A group, two modules and a 2-cocycle valued in ``Hom(X, A)``; checked at construction."""

    group: FiniteGroup
    x: GModule
    a: GModule
    alpha: Cochain

    def __post_init__(self):
        if self.x.group is not self.group or self.a.group is not self.group:
            raise ValueError("X and A must be modules over the triple's group")
        check_cocycle(self.alpha, self.x, self.a)


def cyclic_triple(n: int, multiple: int = 1) -> TNTripleCandidate:
    """``(Z, Z, multiple * carry)`` over ``Z/n`` with trivial actions."""
    c = carry_cocycle(n, multiple)
    z = GModule.trivial(c.group)
    return TNTripleCandidate(c.group, z, z, c)


@dataclass(frozen=True)
class CupRow:
    subgroup: tuple[int, ...]
    generators: tuple[int, ...]
    degree: int
    source: str
    target: str
    matrix: tuple[tuple[int, ...], ...]
    is_isomorphism: bool


@dataclass(frozen=True)
class RigidityRow:
    subgroup: tuple[int, ...]
    generators: tuple[int, ...]
    h1: str
    is_trivial: bool


@dataclass(frozen=True)
class Omission:
    subgroup: tuple[int, ...]
    degree: int | None
    reason: str


@dataclass(frozen=True)
class TNReport:
    """Row-level results. Verdicts are conjunctions over the computed rows.

    ``complete`` is false when size guards forced omissions; the verdicts then
    cover only the computed rows.
    """

    window: tuple[int, int] | None
    rows: tuple[CupRow, ...] = ()
    rigidity: tuple[RigidityRow, ...] = ()
    omissions: tuple[Omission, ...] = ()
    weak_tn: bool | None = None
    rigid: bool | None = None

    @property
    def complete(self) -> bool:
        return not self.omissions

    def to_dict(self) -> dict:
        return {
            "window": list(self.window) if self.window else None,
            "weak_tn": self.weak_tn,
            "rigid": self.rigid,
            "complete": self.complete,
            "rows": [
                {"subgroup": list(r.subgroup), "generators": list(r.generators), "degree": r.degree,
                 "source": r.source, "target": r.target, "matrix": [list(x) for x in r.matrix],
                 "is_isomorphism": r.is_isomorphism}
                for r in self.rows
            ],
            "rigidity": [
                {"subgroup": list(r.subgroup), "generators": list(r.generators), "h1": r.h1,
                 "is_trivial": r.is_trivial}
                for r in self.rigidity
            ],
            "omissions": [
                {"subgroup": list(o.subgroup), "degree": o.degree, "reason": o.reason} for o in self.omissions
            ],
        }


def _subgroup_generators(g: FiniteGroup, elems: frozenset[int]) -> tuple[int, ...]:
    sub, emb = g.subgroup(sorted(elems))
    return tuple(emb[i] for i in sub.generators())


def check_weak_tn(t: TNTripleCandidate, window: tuple[int, int] = DEFAULT_TN_WINDOW,
                  limits: Limits = DEFAULT_LIMITS) -> TNReport:
    """Cup-product bijectivity on every subgroup and every degree in ``window``."""
    lo, hi = window
    if lo > hi:
        raise ValueError(f"empty window [{lo}, {hi}]")
    limits.check_degree(lo)
    limits.check_degree(hi + 2)
    g = t.group
    rows: list[CupRow] = []
    omissions: list[Omission] = []
    for h in g.subgroups():
        elems = tuple(sorted(h))
        gens = _subgroup_generators(g, h)
        alpha, x, a = restrict_triple(t.alpha, t.x, t.a, elems)
        for r in range(lo, hi + 1):
            try:
                f = cup_with_2cocycle(alpha, x, a, r, limits)
            except SizeGuardError as exc:
                omissions.append(Omission(elems, r, str(exc)))
                continue
            rows.append(CupRow(elems, gens, r, str(f.source), str(f.target),
                               tuple(tuple(row) for row in f.matrix.tolist()), f.is_isomorphism()))
    return TNReport(window, rows=tuple(rows), omissions=tuple(omissions),
                    weak_tn=all(r.is_isomorphism for r in rows))


def check_rigidity(t: TNTripleCandidate, limits: Limits = DEFAULT_LIMITS) -> TNReport:
    """``H^1(H, Hom(X, A))`` for every subgroup ``H``."""
    g = t.group
    hm = hom_module(t.x, t.a)
    out: list[RigidityRow] = []
    omissions: list[Omission] = []
    for h in g.subgroups():
        elems = tuple(sorted(h))
        gens = _subgroup_generators(g, h)
        try:
            h1 = tate_cohomology(restriction(hm, elems), 1, limits)
        except SizeGuardError as exc:
            omissions.append(Omission(elems, 1, str(exc)))
            continue
        out.append(RigidityRow(elems, gens, str(h1), h1.is_trivial()))
    return TNReport(None, rigidity=tuple(out), omissions=tuple(omissions),
                    rigid=all(r.is_trivial for r in out))


def check_tate_nakayama(t: TNTripleCandidate, window: tuple[int, int] = DEFAULT_TN_WINDOW,
                        limits: Limits = DEFAULT_LIMITS) -> TNReport:
    """Both checks in one report."""
    weak = check_weak_tn(t, window, limits)
    rig = check_rigidity(t, limits)
    return TNReport(window, rows=weak.rows, rigidity=rig.rigidity,
                    omissions=weak.omissions + rig.omissions, weak_tn=weak.weak_tn, rigid=rig.rigid)
