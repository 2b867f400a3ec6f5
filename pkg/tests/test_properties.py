import numpy as np
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from genrep import (aut_group, dual_module, free_module, iso_test, quotient_module, s_count,
                    submodule_generated, surjection_count_bruteforce, zn)
from genrep.calculus import dim_Q_of_A, dim_Qupper, fd_membership
from genrep.catalog import classify
from genrep.modules import FiniteModule

RINGS = {"Z4": zn(4), "Z9": zn(9), "Z6": zn(6), "Z8": zn(8)}

settings.register_profile("ci", max_examples=25, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


@st.composite
def small_modules(draw):
    R = RINGS[draw(st.sampled_from(sorted(RINGS)))]
    rank = draw(st.integers(1, 2))
    F = free_module(R, rank)
    rels = draw(st.lists(st.integers(0, len(F) - 1), max_size=2))
    M, _ = quotient_module(F, submodule_generated(F, rels))
    return M


@given(small_modules())
def test_surjection_counts_match_bruteforce(M):
    s = s_count(M)
    for n in range(3):
        if len(M.ring) ** n * len(M) > 5000:
            break
        assert s.value(n) == surjection_count_bruteforce(free_module(M.ring, n), M)


@given(small_modules())
def test_aut_acts_freely_on_surjections(M):
    order = aut_group(M).order
    assert all(s_count(M).value(n) % order == 0 for n in range(4))


@given(small_modules(), st.randoms(use_true_random=False))
def test_iso_test_finds_relabelled_copy(M, rnd):
    perm = np.arange(len(M))
    tail = perm[1:].tolist()
    rnd.shuffle(tail)
    perm[1:] = tail
    inv = np.argsort(perm)
    N = FiniteModule(M.ring, perm[M.add[np.ix_(inv, inv)]], perm[M.act[inv]])
    phi = iso_test(M, N)
    assert phi is not None
    for a in range(len(M)):
        for b in range(len(M)):
            assert phi[M.add[a, b]] == N.add[phi[a], phi[b]]


@given(small_modules())
def test_double_dual_and_shadow(M):
    D = dual_module(M)
    assert len(D) == len(M)
    assert iso_test(dual_module(D), M) is not None
    assert dim_Qupper(M) == s_count(D)


@given(small_modules())
def test_two_routes_agree(M):
    assert dim_Q_of_A(M, check=False).agree


@given(small_modules(), st.integers(-1, 3))
def test_fd_threshold(M, d):
    assert fd_membership(M, d).member == (M.length <= d)


@given(small_modules())
def test_classify_is_isomorphism(M):
    # the catalog builds quotients of R^length
    assume(len(M.ring) ** M.length <= 256)
    cls, phi = classify(M)
    assert cls.size == len(M)
    assert len(set(phi.tolist())) == len(M)
