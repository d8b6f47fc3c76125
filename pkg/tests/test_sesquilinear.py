import random
from itertools import permutations

import pytest

from pvalab.sesquilinear import (
    SesqCochain, TruncationError, act_Ss, compositions, d_t, d_total, harrison_violations,
    invariance_violations, symmetrize,
)
from pvalab.symgroup import compose


def random_sesq(s, n, W, delta, seed, shapes=None):
    F = SesqCochain(s, n, (1,), W, delta, shapes=shapes)
    rng = random.Random(seed)
    return F.specialize({tag: rng.randint(-2, 2) for tag in F.unknowns()})


def test_compositions():
    assert compositions(3, 2) == [(1, 2), (2, 1)]
    assert len(compositions(4, 2, allow_zero=True)) == 5


@pytest.mark.parametrize("s,n", [(s, n) for s in (1, 2, 3) for n in (1, 2, 3) if n >= s])
def test_partial_differentials_anticommute(s, n):
    for seed in range(2):
        F = random_sesq(s, n, 4, seed - 1, seed)
        for a in range(1, s + 1):
            for b in range(a, s + 1):
                assert (d_t(d_t(F, a), b) + d_t(d_t(F, b), a)).is_zero()
        assert d_total(d_total(F)).is_zero()


def test_d_squared_zero_at_n4():
    F = random_sesq(2, 3, 4, 0, 3)
    assert d_total(d_total(F)).is_zero()


def test_swap_is_an_involution():
    F = random_sesq(2, 3, 3, 0, 1)
    swap = (2, 1)
    back = act_Ss(swap, act_Ss(swap, F))
    back._shapes = F.shapes()
    assert (back - F).is_zero()


def test_action_is_a_left_action():
    F = random_sesq(3, 3, 3, 0, 5)
    ps = list(permutations((1, 2, 3)))
    for p in ps:
        for q in ps:
            lhs = act_Ss(p, act_Ss(q, F))
            rhs = act_Ss(compose(p, q), F)
            lhs._shapes = rhs._shapes = F.shapes()
            assert (lhs - rhs).is_zero()


def test_symmetrize_is_invariant_and_idempotent():
    F = random_sesq(2, 3, 3, 0, 2)
    S = symmetrize(F)
    assert not invariance_violations(S)
    assert (symmetrize(S) - S).is_zero()


def test_harrison_violation_detected():
    F = random_sesq(1, 2, 3, 0, 4)
    assert harrison_violations(F)


def test_truncation_error_above_cap():
    F = random_sesq(1, 2, 2, 0, 0)
    u3 = ((0, 0), (0, 0), (0, 0))
    with pytest.raises(TruncationError):
        F.value((2,), (u3, u3))
