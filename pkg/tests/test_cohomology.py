import random

import pytest

from galcoh.cohomology import (
    Cochain,
    Limits,
    carry_cocycle,
    coboundary,
    coboundary_of,
    connecting_map,
    cup_with_2cocycle,
    syzygy_shift,
    tate_cohomology,
    tate_cohomology_generic,
    tate_group,
)
from galcoh.errors import CocycleError, SizeGuardError, UnsupportedDegreeError
from galcoh.gmodule import GModule, direct_sum_module, regular_module
from galcoh.groups import FiniteGroup, catalog_groups
from galcoh.local_global import random_lambda
from galcoh.zlattice import FgAbGroup, IntMatrix

from oracles import crossed_hom_count

WINDOW = range(-3, 4)


def cyc(n):
    return FgAbGroup.cyclic(n)


class TestExamples:
    def test_z3_trivial(self, backend):
        m = GModule.trivial(FiniteGroup.cyclic(3))
        assert tate_cohomology(m, 0) == cyc(3)
        assert tate_cohomology(m, 1).is_trivial()
        assert tate_cohomology(m, 2) == cyc(3)

    def test_regular_s3_vanishes(self, backend):
        m = regular_module(FiniteGroup.symmetric(3))
        for r in WINDOW:
            assert tate_cohomology(m, r).is_trivial()

    def test_sign_minus_one(self):
        assert tate_cohomology(GModule.sign(FiniteGroup.cyclic(2), [1, -1]), -1) == cyc(2)

    def test_window_enforced(self):
        m = GModule.trivial(FiniteGroup.cyclic(2))
        with pytest.raises(UnsupportedDegreeError):
            tate_cohomology(m, 4)
        assert tate_cohomology(m, 4, Limits(window=(-4, 4))) == cyc(2)

    def test_size_guard(self):
        m = GModule.trivial(FiniteGroup.symmetric(4))
        with pytest.raises(SizeGuardError):
            tate_cohomology(m, 1, Limits(max_order=12))

    def test_known_nonabelian(self):
        # H^2(G, Z) is the abelianised dual: S3 -> Z/2, Q8 -> Z/2 + Z/2, A4 -> Z/3
        for g, h2 in [(FiniteGroup.symmetric(3), [2]), (FiniteGroup.quaternion(), [2, 2]),
                      (FiniteGroup.alternating(4), [3])]:
            z = GModule.trivial(g)
            assert tate_cohomology(z, 2) == FgAbGroup.from_invariants(h2)
            assert tate_cohomology(z, 0) == cyc(g.order)
            assert tate_cohomology(z, 1).is_trivial()
            assert tate_cohomology(z, -1).is_trivial()


def _crossed_oracle(g, mats, modulus):
    dim = len(mats[0])
    z1, b1 = crossed_hom_count(g.order, g.mul, mats, modulus, dim)
    return z1 // b1


@pytest.mark.parametrize("case", ["z4_sign_on_z4", "z3_on_f2_squared", "s3_sign_on_z3", "v4_trivial_f2_squared"])
def test_h1_matches_crossed_hom_count(case):
    if case == "z4_sign_on_z4":
        g, mats, mod = FiniteGroup.cyclic(4), [[[1]], [[-1]], [[1]], [[-1]]], 4
    elif case == "z3_on_f2_squared":
        g = FiniteGroup.cyclic(3)
        a = [[0, 1], [1, 1]]
        a2 = [[1, 1], [1, 0]]
        mats, mod = [[[1, 0], [0, 1]], a, a2], 2
    elif case == "s3_sign_on_z3":
        g = FiniteGroup.symmetric(3)
        sign = [1 if sum(1 for i in range(3) for j in range(i) if p[j] > p[i]) % 2 == 0 else -1
                for p in sorted(__import__("itertools").permutations(range(3)))]
        mats, mod = [[[s]] for s in sign], 3
    else:
        g, mats, mod = FiniteGroup.klein_four(), [[[1, 0], [0, 1]]] * 4, 2
    dim = len(mats[0])
    under = FgAbGroup(dim, IntMatrix.diagonal([mod] * dim))
    m = GModule(g, under, tuple(IntMatrix.from_rows(x) for x in mats))
    assert tate_cohomology(m, 1).order() == _crossed_oracle(g, mats, mod)


def _modules(rng, g, count):
    return [random_lambda(rng, g, max_rank=3, max_factor=4).module for _ in range(count)]


def test_cyclic_periodicity(backend):
    rng = random.Random(2024)
    for n in range(1, 13):
        g = FiniteGroup.cyclic(n)
        for m in _modules(rng, g, 2):
            lo, hi = (-3, 3) if n <= 9 else (-2, 2)
            hs = {r: tate_cohomology(m, r) for r in range(lo, hi + 1)}
            for r in range(lo, hi - 1):
                assert hs[r] == hs[r + 2], (n, r, str(m))


def test_order_annihilates():
    rng = random.Random(99)
    for g in catalog_groups(8):
        for m in _modules(rng, g, 2):
            for r in range(-2, 3):
                h = tate_cohomology(m, r)
                assert h.free_rank == 0
                assert all(g.order % d == 0 for d in h.torsion)


def test_free_modules_vanish():
    for g in catalog_groups(12):
        for k in (1, 2):
            m = direct_sum_module(*([regular_module(g)] * k))
            for r in WINDOW if g.order <= 6 else range(-2, 3):
                assert tate_cohomology(m, r).is_trivial(), (g.name, k, r)


def test_generic_route_agrees():
    rng = random.Random(7)
    for g in catalog_groups(6):
        for m in _modules(rng, g, 2):
            lat, _ = m.canonical()
            for r in (-3, -2, 1, 2):
                assert tate_cohomology_generic(lat, r) == tate_cohomology(lat, r)


def test_generic_representatives_round_trip():
    rng = random.Random(17)
    for g in catalog_groups(6):
        for m in _modules(rng, g, 2):
            if m.is_lattice():
                continue
            for r in (-2, 1, 2):
                tg = tate_group(m, r)
                for t in range(tg.group.canonical_rank):
                    z = tg.generator(t)
                    assert tg.classify(z) == tuple(int(s == t) for s in range(tg.group.canonical_rank))
                    if r >= 1:
                        d = coboundary(m, r, z)
                        n = m.ngens
                        assert all(m.underlying.is_zero(d[i:i + n]) for i in range(0, len(d), n))


class TestSyzygy:
    def test_trivial_z2(self):
        ses = syzygy_shift(GModule.trivial(FiniteGroup.cyclic(2)))
        assert ses.sub.ngens == 1 and ses.sub.action[1].tolist() == [[-1]]
        assert tate_cohomology(ses.sub, 0) == tate_cohomology(GModule.trivial(FiniteGroup.cyclic(2)), -1)

    def test_shift_matches_norm_formulas(self):
        rng = random.Random(3)
        for g in catalog_groups(6):
            for m in _modules(rng, g, 2):
                lat, _ = m.canonical()
                if not lat.is_lattice():
                    continue
                once = syzygy_shift(lat)
                twice = syzygy_shift(once.sub)
                assert tate_cohomology(once.sub, 1) == tate_cohomology(lat, 0)
                assert tate_cohomology(twice.sub, 1) == tate_cohomology(lat, -1)

    def test_connecting_maps_are_isomorphisms(self):
        g = FiniteGroup.cyclic(4)
        m = GModule.sign(g, [1, -1, 1, -1])
        ses = syzygy_shift(m)
        for s in range(-3, 3):
            assert connecting_map(ses, s).is_isomorphism()


class TestCup:
    def test_zero_cocycle_gives_zero(self):
        z = GModule.trivial(FiniteGroup.cyclic(2))
        zero = carry_cocycle(2, 0)
        for r in (-2, -1, 0, 1):
            assert cup_with_2cocycle(zero, z, z, r).is_zero()

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_carry_generator_isomorphism(self, n):
        c = carry_cocycle(n)
        z = GModule.trivial(c.group)
        f = cup_with_2cocycle(c, z, z, 0)
        assert f.source == cyc(n) and f.target == cyc(n) and f.is_isomorphism()

    def test_twice_generator_index_two(self):
        c = carry_cocycle(4, 2)
        z = GModule.trivial(c.group)
        f = cup_with_2cocycle(c, z, z, 0)
        assert not f.is_isomorphism()
        assert f.matrix.tolist() == [[2]]

    def test_formula_and_yoneda_agree(self):
        for n in (2, 3, 4, 6):
            c = carry_cocycle(n)
            z = GModule.trivial(c.group)
            for r in (0, 1):
                a = cup_with_2cocycle(c, z, z, r, method="formula")
                b = cup_with_2cocycle(c, z, z, r, method="yoneda")
                assert a.equals(b)

    def test_cohomologous_cocycles_same_map(self):
        c = carry_cocycle(4)
        z = GModule.trivial(c.group)
        beta = Cochain.from_function(c.group, 1, 1, lambda g: [g * g - 3])
        c2 = c + coboundary_of(beta, z)
        for r in (-2, -1, 0, 1):
            assert cup_with_2cocycle(c, z, z, r).equals(cup_with_2cocycle(c2, z, z, r))

    def test_non_cocycle_rejected_with_witness(self):
        c = carry_cocycle(3)
        vals = list(c.values)
        vals[4] = (5,)
        bad = Cochain(c.group, 1, 2, tuple(vals))
        z = GModule.trivial(c.group)
        with pytest.raises(CocycleError) as exc:
            cup_with_2cocycle(bad, z, z, 0)
        assert len(exc.value.witness) == 3
