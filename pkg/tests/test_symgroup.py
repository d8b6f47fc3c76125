from math import comb, factorial

import pytest
import sympy as sp
from hypothesis import given, strategies as st
from sympy.combinatorics import Permutation as SymPerm

from pvalab.exact_linalg import rank
from pvalab.symgroup import (
    GroupAlgebraElement, all_permutations, compose, count_check, drop_sign, eigenvalues,
    eulerian_idempotents, harrison_fixed_space, harrison_operator, harrison_projector,
    identity, inverse, monotone, right_image, same_subspace, shuffles, sign,
)

perms = st.integers(1, 6).flatmap(lambda n: st.permutations(list(range(1, n + 1)))).map(tuple)


@given(perms)
def test_sign_matches_sympy(p):
    assert sign(p) == SymPerm([x - 1 for x in p]).signature()


@given(perms)
def test_inverse(p):
    assert compose(p, inverse(p)) == identity(len(p))
    assert compose(inverse(p), p) == identity(len(p))


@given(perms, st.data())
def test_sign_is_multiplicative(p, data):
    q = tuple(data.draw(st.permutations(list(range(1, len(p) + 1)))))
    assert sign(compose(p, q)) == sign(p) * sign(q)


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (2, 2), (3, 2), (1, 4)])
def test_shuffle_count(m, n):
    sh = shuffles(m, n)
    assert len(sh) == comb(m + n, m)
    assert len(set(sh)) == len(sh)


@pytest.mark.parametrize("n", range(1, 8))
def test_monotone_counts(n):
    for k in range(1, n + 1):
        assert count_check(n, k)
    assert sum(len(monotone(n, k)) for k in range(1, n + 1)) == 2 ** (n - 1)


@pytest.mark.parametrize("n", range(1, 8))
def test_drop_identity(n):
    for k in range(1, n + 1):
        for p in monotone(n, k):
            assert drop_sign(p) == (-1) ** (k - 1) * sign(p)


def test_drop_sign_rejects_non_monotone():
    with pytest.raises(ValueError):
        drop_sign((2, 3, 1, 4)[::-1])


# image dimensions of the Eulerian idempotents are the unsigned Stirling
# numbers of the first kind c(n, k), the Harrison piece being (n-1)!
@pytest.mark.parametrize("n", range(1, 6))
def test_eulerian_images_are_stirling(n):
    es = eulerian_idempotents(n)
    dims = sorted(rank(right_image(e)) for e in es)
    stirling = sorted(int(sp.functions.combinatorial.numbers.stirling(n, k, kind=1)) for k in range(1, n + 1))
    assert dims == stirling
    assert sum(dims) == factorial(n)


@pytest.mark.parametrize("n", range(2, 6))
def test_eulerian_idempotent_algebra(n):
    es = eulerian_idempotents(n)
    total = GroupAlgebraElement(n)
    for e in es:
        total = total + e
        assert e * e == e
    assert total == GroupAlgebraElement.one(n)
    for i, a in enumerate(es):
        for b in es[i + 1:]:
            assert (a * b).is_zero() and (b * a).is_zero()


def test_eigenvalues_of_shuffle_element():
    # 2^k - 2, k = 1..n
    assert eigenvalues(5) == [0, 2, 6, 14, 30]


@pytest.mark.parametrize("n", range(2, 5))
def test_harrison_projector_is_fixed_space(n):
    pos, e = harrison_projector(n)
    fix = harrison_fixed_space(n)
    assert len(fix) == factorial(n - 1)
    assert same_subspace(right_image(e), fix)


def test_harrison_operator_support():
    L = harrison_operator(4, 2)
    assert set(L.terms) == set(monotone(4, 2))
    with pytest.raises(ValueError):
        harrison_operator(3, 1)


def test_group_algebra_associative():
    n = 3
    ps = all_permutations(n)
    a = GroupAlgebraElement(n, {ps[1]: 1, ps[2]: 2})
    b = GroupAlgebraElement(n, {ps[3]: -1, ps[0]: 3})
    c = GroupAlgebraElement(n, {ps[4]: 5})
    assert (a * b) * c == a * (b * c)
