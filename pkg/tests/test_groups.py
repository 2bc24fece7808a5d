import pytest

from galcoh.errors import GroupLawError, SizeGuardError
from galcoh.groups import FiniteGroup, catalog_groups, permutation_closure

# subgroup counts of small groups, listed by hand
SUBGROUP_COUNTS = {
    "C1": 1, "C6": 4, "C12": 6, "V4": 5, "S3": 6, "D8": 10, "Q8": 6, "A4": 10, "D12": 16,
}


def test_catalog_is_group_laws():
    for g in catalog_groups(12):
        assert g.order <= 12
        assert all(g.mul(a, g.inv(a)) == 0 for a in g.elements())


@pytest.mark.parametrize("name,count", sorted(SUBGROUP_COUNTS.items()))
def test_subgroup_counts(name, count):
    g = {x.name: x for x in catalog_groups(12)}[name]
    subs = g.subgroups()
    assert len(subs) == count
    assert len(set(subs)) == len(subs)
    assert all(g.is_subgroup(sorted(h)) for h in subs)


def test_subgroup_order_divides():
    g = FiniteGroup.alternating(4)
    assert sorted({len(h) for h in g.subgroups()}) == [1, 2, 3, 4, 12]


def test_corrupted_table_rejected():
    t = [list(r) for r in FiniteGroup.cyclic(4).table]
    t[1][1], t[1][2] = t[1][2], t[1][1]
    with pytest.raises(GroupLawError):
        FiniteGroup(tuple(map(tuple, t)))


def test_non_associative_latin_square_rejected():
    # a loop of order 5 that is not a group
    t = ((0, 1, 2, 3, 4), (1, 0, 3, 4, 2), (2, 4, 0, 1, 3), (3, 2, 4, 0, 1), (4, 3, 1, 2, 0))
    with pytest.raises(GroupLawError, match="associativity"):
        FiniteGroup(t)


def test_identity_must_be_zero():
    t = ((1, 0), (0, 1))
    with pytest.raises(GroupLawError):
        FiniteGroup(t)


def test_permutation_closure_and_guard():
    elems = permutation_closure([(1, 2, 0), (1, 0, 2)])
    assert len(elems) == 6 and elems[0] == (0, 1, 2)
    with pytest.raises(SizeGuardError):
        permutation_closure([(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)], max_order=24)
    with pytest.raises(GroupLawError):
        permutation_closure([(0, 0, 1)])


def test_quotient_and_cosets():
    g = FiniteGroup.dihedral(4)
    center = [h for h in g.subgroups() if len(h) == 2 and g.is_normal(sorted(h))]
    assert len(center) == 1
    q, proj = g.quotient(sorted(center[0]))
    assert q.order == 4 and not any(q.element_order(x) == 4 for x in q.elements())
    assert g.is_homomorphism(q, proj)
    s3 = FiniteGroup.symmetric(3)
    non_normal = next(h for h in s3.subgroups() if len(h) == 2)
    assert not s3.is_normal(sorted(non_normal))
    with pytest.raises(GroupLawError):
        s3.quotient(sorted(non_normal))
    cosets = s3.left_cosets(sorted(non_normal))
    assert len(cosets) == 3 and sorted(x for c in cosets for x in c) == list(range(6))


def test_generators_generate():
    for g in catalog_groups(12):
        assert g.closure(list(g.generators())) == frozenset(g.elements())
