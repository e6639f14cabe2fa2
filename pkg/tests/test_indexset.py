import math
from fractions import Fraction
from itertools import permutations, product

from hypothesis import given, settings
from hypothesis import strategies as st

from gradedmat.indexset import (
    canonicalize,
    commutation_factor,
    enumerate_multi_indices,
    extraction_prefactor,
    index_count,
    index_parity,
    multiplicities,
    permutation_sign,
    self_evaluation_factor,
    tuple_parity,
)

NE, NO = 4, 4  # the (2|1) split


def test_counts_for_small_split():
    assert [index_count(NE, NO, p) for p in range(5)] == [1, 8, 32, 88, 192]
    for p in range(5):
        assert len(enumerate_multi_indices(NE, NO, p)) == index_count(NE, NO, p)


def test_enumeration_is_canonical_and_sorted():
    for p in range(4):
        keys = enumerate_multi_indices(NE, NO, p)
        assert keys == sorted(keys)
        for key in keys:
            assert list(key) == sorted(key)
            assert canonicalize(key, NE) == (tuple(key), 1)


def test_canonicalize_rules():
    # repeated even index kills the tuple
    assert canonicalize((1, 1), NE) is None
    # swapping two evens is antisymmetric
    assert canonicalize((2, 0), NE) == ((0, 2), -1)
    # odd-odd swaps are symmetric, repeats allowed
    assert canonicalize((5, 4), NE) == ((4, 5), 1)
    assert canonicalize((5, 5), NE) == ((5, 5), 1)
    # even past odd picks up the plain alternating sign
    assert canonicalize((4, 0), NE) == ((0, 4), -1)


def _self_factor_oracle(indices):
    """Sum of sgn times gamma over the permutations fixing the tuple."""
    p = len(indices)
    degs = [index_parity(i, NE) for i in indices]
    total = 0
    for sigma in permutations(range(p)):
        if tuple(indices[sigma[l]] for l in range(p)) != tuple(indices):
            continue
        total += permutation_sign(sigma) * commutation_factor(sigma, degs)
    return total


def test_self_evaluation_factor_matches_stabilizer_sum():
    # the factor is the stabilizer sum twisted by the odd-pair sign
    for p in range(5):
        for key in enumerate_multi_indices(NE, NO, p):
            odd = sum(1 for i in key if index_parity(i, NE))
            twist = (-1) ** (odd * (odd - 1) // 2)
            want = twist * _self_factor_oracle(key)
            assert self_evaluation_factor(key, NE) == want, key


def test_extraction_prefactor_inverts_self_factor():
    for p in range(4):
        for key in enumerate_multi_indices(NE, NO, p):
            pre = extraction_prefactor(key, NE)
            assert pre * self_evaluation_factor(key, NE) == Fraction(1)
            mult = math.prod(math.factorial(k) for k in multiplicities(key))
            assert abs(pre) == Fraction(1, mult)


def test_parities():
    assert [index_parity(i, NE) for i in range(8)] == [0, 0, 0, 0, 1, 1, 1, 1]
    assert tuple_parity((0, 4), NE) == 1
    assert tuple_parity((4, 5), NE) == 0


perm_and_parities = st.integers(min_value=1, max_value=5).flatmap(
    lambda p: st.tuples(
        st.permutations(list(range(p))),
        st.tuples(*[st.integers(min_value=0, max_value=1) for _ in range(p)]),
    )
)


@settings(max_examples=120, deadline=None)
@given(perm_and_parities)
def test_commutation_factor_crossing_count(sp):
    sigma, degs = sp
    word = list(sigma)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                x, y = word[i], word[i + 1]
                if degs[x] and degs[y]:
                    sign = -sign
                word[i], word[i + 1] = y, x
                changed = True
    assert commutation_factor(sigma, degs) == sign


@settings(max_examples=120, deadline=None)
@given(perm_and_parities, st.randoms(use_true_random=False))
def test_commutation_factor_composition(sp, rnd):
    sigma, degs = sp
    p = len(sigma)
    tau = list(range(p))
    rnd.shuffle(tau)
    st_perm = tuple(sigma[tau[i]] for i in range(p))
    pulled = tuple(degs[sigma[i]] for i in range(p))
    assert commutation_factor(st_perm, degs) == commutation_factor(
        sigma, degs
    ) * commutation_factor(tau, pulled)


def test_permutation_sign_matches_parity_of_inversions():
    for p in range(1, 5):
        for sigma in permutations(range(p)):
            inv = sum(
                1
                for r in range(p)
                for s in range(r + 1, p)
                if sigma[r] > sigma[s]
            )
            assert permutation_sign(sigma) == (-1) ** inv
