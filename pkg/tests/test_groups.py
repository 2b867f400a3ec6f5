import numpy as np
import pytest

from genrep import aut_group, free_module, gf
from genrep.errors import InvariantViolation
from genrep.groups import (PermGroup, character_table, closure, inner_product,
                           parabolic_transport, perm_character)


@pytest.fixture(scope="module")
def gl2():
    return aut_group(free_module(gf(2), 2))


@pytest.fixture(scope="module")
def gl3():
    return aut_group(free_module(gf(2), 3))


def c2():
    return closure([np.array([1, 0])])


def test_closure_orders(Z4, gl2):
    assert aut_group(free_module(Z4, 1)).order == 2
    assert gl2.order == 6
    assert PermGroup(3, []).order == 1


def test_conjugacy_classes(gl2, gl3):
    assert len(gl2.classes) == 3
    assert len(PermGroup(2, []).classes) == 1
    assert len(gl3.classes) == 6
    assert sum(gl3.class_sizes) == 168


def test_character_degrees(gl2, gl3):
    assert sorted(character_table(gl2).degrees) == [1, 1, 2]
    assert sorted(character_table(gl3).degrees) == [1, 3, 3, 6, 7, 8]
    T = character_table(c2())
    assert T.degrees == [1, 1]
    assert sorted(tuple(T.lift(v, signed=True) for v in row) for row in T.rows) == [(1, -1), (1, 1)]


def test_tables_pass_orthogonality(gl2, gl3):
    character_table(gl2).check()
    character_table(gl3).check()


def test_poisoned_table_fails_check(gl2):
    T = character_table(gl2)
    bad = type(T)(T.group, T.q, [list(r) for r in T.rows], list(T.degrees))
    bad.rows[-1][-1] = (bad.rows[-1][-1] + 1) % T.q
    with pytest.raises(InvariantViolation):
        bad.check()


def test_permutation_characters(Z4):
    G = c2()
    T = character_table(G)
    reg = perm_character(T, [np.array([1, 0])])
    assert [T.lift(v) for v in reg.values] == [2, 0]
    triv = perm_character(T, [np.arange(5)])
    assert [T.lift(v) for v in triv.values] == [5, 5]
    # Aut(Z/4) on the generators {1, 3}
    A = aut_group(free_module(Z4, 1))
    TA = character_table(A)
    gens_perm = perm_character(TA, lambda g: np.array([0 if g[1] == 1 else 1, 1 if g[1] == 1 else 0]))
    assert [TA.lift(v) for v in gens_perm.values] == [2, 0]


def test_inner_products(gl2):
    T = character_table(gl2)
    for i in range(len(T)):
        assert inner_product(T.regular(), T.irreducible(i)) == T.degrees[i]
        for j in range(len(T)):
            assert inner_product(T.irreducible(i), T.irreducible(j)) == (i == j)
    # S3 acting on itself by left multiplication is free on 6 points
    free = perm_character(T, lambda g: gl2.lookup(g[gl2.elements]))
    assert free.degree() == 6
    two = T.degrees.index(2)
    assert inner_product(free, T.irreducible(two)) == 2


def test_transport_identity(gl2):
    T = character_table(gl2)
    gens = gl2.generator_indices
    for i in range(len(T)):
        out = parabolic_transport(T.irreducible(i), T, gens, lambda g: g, [])
        assert out == T.irreducible(i)


def test_transport_rejects_bad_kernel(gl2):
    T = character_table(gl2)
    gens = gl2.generator_indices
    with pytest.raises(ValueError):
        parabolic_transport(T.irreducible(0), T, gens, lambda g: g, gens)


def test_transport_through_quotient(Z4):
    # Aut(Z/4) acting on Z/4 / {0,2} = Z/2: the whole group is the kernel
    G = aut_group(free_module(Z4, 1))
    T = character_table(G)
    H = PermGroup(2, [])
    TH = character_table(H, q=T.q)
    gens = G.generator_indices
    out = parabolic_transport(T.regular(), TH, gens, lambda g: 0, gens)
    # K acts regularly, so the fixed part has dimension |H| * deg / |Pi| = 1
    assert out.degree() == 1
    for i in range(len(T)):
        piece = parabolic_transport(T.irreducible(i), TH, gens, lambda g: 0, gens)
        assert piece.degree() == (1 if T.irreducible(i) == T.trivial() else 0)
