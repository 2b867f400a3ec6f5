from genrep import catalog, direct_sum, get_catalog, iso_test, zn
from genrep.catalog import classify

from conftest import cyclic


def sizes_by_length(classes):
    return sorted((c.length, c.size, c.aut_order) for c in classes)


def test_f2_catalog(F2):
    assert sizes_by_length(catalog(F2, 2)) == [(0, 1, 1), (1, 2, 1), (2, 4, 6)]


def test_z4_catalog(Z4):
    assert sizes_by_length(catalog(Z4, 2)) == [(0, 1, 1), (1, 2, 1), (2, 4, 2), (2, 4, 6)]


def test_depth_zero(Z4):
    cls = catalog(Z4, 0)
    assert len(cls) == 1 and cls[0].size == 1


def test_classes_pairwise_non_isomorphic(dual_numbers):
    cls = catalog(dual_numbers, 2)
    for i, a in enumerate(cls):
        for b in cls[i + 1:]:
            if a.size == b.size:
                assert iso_test(a.representative, b.representative) is None


def test_classify_returns_isomorphism(Z4):
    X = direct_sum(cyclic(Z4, 2), cyclic(Z4, 2))
    cls, phi = classify(X)
    assert cls.length == 2 and cls.aut_order == 6
    rep = cls.representative
    for a in range(len(X)):
        for r in range(4):
            assert phi[X.act[a, r]] == rep.act[phi[a], r]


def test_class_ids_deterministic():
    a = [c.class_id for c in catalog(zn(9), 2)]
    b = [c.class_id for c in get_catalog(zn(9), 2).upto(2)]
    assert a == b
    assert all(cid.startswith(f"L{c.length}-{c.size}-") for cid, c in zip(a, catalog(zn(9), 2)))


def test_lengths_match_lattice(Z4):
    for c in catalog(Z4, 3):
        assert c.representative.length == c.length
