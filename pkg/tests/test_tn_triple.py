import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galcoh.cohomology import Cochain, Limits, carry_cocycle, coboundary_of
from galcoh.errors import CocycleError
from galcoh.gmodule import GModule
from galcoh.groups import FiniteGroup
from galcoh.tn_triple import (
    TNTripleCandidate,
    check_rigidity,
    check_tate_nakayama,
    check_weak_tn,
    cyclic_triple,
)
from galcoh.zlattice import IntMatrix


def _zero_alpha(x: GModule, a: GModule) -> Cochain:
    w = x.ngens * a.ngens
    return Cochain.from_function(x.group, w, 2, lambda g, h: [0] * w)


class TestWeak:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_carry_generator_passes(self, n):
        rep = check_weak_tn(cyclic_triple(n), (-2, 1))
        assert rep.weak_tn and rep.complete
        # one row per subgroup and degree
        assert len(rep.rows) == len(cyclic_triple(n).group.subgroups()) * 4

    def test_zero_alpha_fails_on_z2(self):
        g = FiniteGroup.cyclic(2)
        z = GModule.trivial(g)
        rep = check_weak_tn(TNTripleCandidate(g, z, z, _zero_alpha(z, z)), (-2, 1))
        assert rep.weak_tn is False
        bad = [r for r in rep.rows if not r.is_isomorphism]
        assert any(r.degree == 0 and r.source == "Z/2" and r.target == "Z/2" for r in bad)

    def test_multiple_of_generator_fails_when_not_a_unit(self):
        assert not check_weak_tn(cyclic_triple(4, multiple=2)).weak_tn
        assert check_weak_tn(cyclic_triple(5, multiple=2)).weak_tn

    def test_trivial_group_vacuous(self):
        rep = check_tate_nakayama(cyclic_triple(1))
        assert rep.weak_tn and rep.rigid
        assert all(r.source == "0" and r.target == "0" for r in rep.rows)

    def test_empty_window_rejected(self):
        with pytest.raises(ValueError):
            check_weak_tn(cyclic_triple(2), (1, 0))

    def test_size_guard_lists_omissions(self):
        rep = check_weak_tn(cyclic_triple(6), (-2, 1), Limits(max_order=3))
        assert not rep.complete
        assert {o.subgroup for o in rep.omissions} == {tuple(range(6))}
        assert all(r.subgroup != tuple(range(6)) for r in rep.rows)


class TestRigidity:
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 6])
    def test_trivial_z_is_rigid(self, n):
        rep = check_rigidity(cyclic_triple(n))
        assert rep.rigid and all(r.h1 == "0" for r in rep.rigidity)

    def test_sign_hom_module_not_rigid(self):
        g = FiniteGroup.cyclic(2)
        z = GModule.trivial(g)
        sgn = GModule.sign(g, [1, -1])
        rep = check_rigidity(TNTripleCandidate(g, z, sgn, _zero_alpha(z, sgn)))
        assert rep.rigid is False
        whole = [r for r in rep.rigidity if r.subgroup == (0, 1)]
        assert whole[0].h1 == "Z/2"
        assert [r for r in rep.rigidity if r.subgroup == (0,)][0].is_trivial


class TestCandidate:
    def test_non_cocycle_rejected(self):
        g = FiniteGroup.cyclic(3)
        z = GModule.trivial(g)
        bad = Cochain.from_function(g, 1, 2, lambda a, b: [1 if (a, b) == (1, 1) else 0])
        with pytest.raises(CocycleError):
            TNTripleCandidate(g, z, z, bad)

    def test_wrong_width_rejected(self):
        g = FiniteGroup.cyclic(2)
        z = GModule.trivial(g)
        with pytest.raises(ValueError):
            TNTripleCandidate(g, z, z, Cochain.from_function(g, 2, 2, lambda a, b: [0, 0]))

    def test_report_dict_shape(self):
        d = check_tate_nakayama(cyclic_triple(2)).to_dict()
        assert set(d) == {"window", "weak_tn", "rigid", "complete", "rows", "rigidity", "omissions"}
        assert d["window"] == [-2, 1]


def test_cohomologous_alphas_same_flags():
    t = cyclic_triple(4)
    z = t.x
    for beta_fn in (lambda g: [g * g - 3], lambda g: [5 * g], lambda g: [1]):
        beta = Cochain.from_function(t.group, 1, 1, beta_fn)
        t2 = TNTripleCandidate(t.group, z, z, t.alpha + coboundary_of(beta, z))
        f1 = [(r.subgroup, r.degree, r.is_isomorphism) for r in check_weak_tn(t).rows]
        f2 = [(r.subgroup, r.degree, r.is_isomorphism) for r in check_weak_tn(t2).rows]
        assert f1 == f2


# basis change


def _elementary(n: int, i: int, j: int, k: int) -> tuple[IntMatrix, IntMatrix]:
    e = [[int(a == b) for b in range(n)] for a in range(n)]
    f = [row[:] for row in e]
    e[i][j] += k
    f[i][j] -= k
    return IntMatrix.from_rows(e), IntMatrix.from_rows(f)


@st.composite
def unimodular(draw, n):
    p = q = IntMatrix.identity(n)
    for _ in range(draw(st.integers(0, 4))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if i == j:
            continue
        e, einv = _elementary(n, i, j, draw(st.integers(-2, 2)))
        p, q = e @ p, q @ einv
    return p, q


def _mixed_triple(n: int, sign_weight: int):
    """``X = A = Z + Z(sign)`` over ``Z/n`` (sign trivial for odd ``n``) with a diagonal alpha."""
    g = FiniteGroup.cyclic(n)
    chi = [1 if e % 2 == 0 else -1 for e in range(n)] if n % 2 == 0 else [1] * n
    x = GModule.lattice(g, [IntMatrix.from_rows([[1, 0], [0, c]]) for c in chi])
    carry = carry_cocycle(n)
    alpha = Cochain.from_function(g, 4, 2, lambda a, b: [carry.at(a, b)[0], 0, 0, sign_weight * carry.at(a, b)[0]])
    return TNTripleCandidate(g, x, x, alpha)


def _conjugate(t: TNTripleCandidate, px, pxinv, pa, painv) -> TNTripleCandidate:
    g = t.group
    x = GModule.lattice(g, [px @ m @ pxinv for m in t.x.action])
    a = GModule.lattice(g, [pa @ m @ painv for m in t.a.action])
    w = x.ngens * a.ngens

    def val(s, u):
        phi = IntMatrix(t.a.ngens, t.x.ngens, t.alpha.at(s, u))
        return list((pa @ phi @ pxinv).entries)

    return TNTripleCandidate(g, x, a, Cochain.from_function(g, w, 2, val))


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.sampled_from([0, 1]), unimodular(2), unimodular(2))
def test_verdicts_invariant_under_basis_change(n, weight, bx, ba):
    t = _mixed_triple(n, weight)
    t2 = _conjugate(t, bx[0], bx[1], ba[0], ba[1])
    r1 = check_tate_nakayama(t, (-1, 0))
    r2 = check_tate_nakayama(t2, (-1, 0))
    assert r1.weak_tn == r2.weak_tn and r1.rigid == r2.rigid
    assert [x.is_isomorphism for x in r1.rows] == [x.is_isomorphism for x in r2.rows]
    assert [x.h1 for x in r1.rigidity] == [x.h1 for x in r2.rigidity]


@pytest.mark.parametrize("n", range(1, 13))
def test_cyclic_family_passes_both(n):
    rep = check_tate_nakayama(cyclic_triple(n), (-2, 1))
    assert rep.weak_tn and rep.rigid and rep.complete
