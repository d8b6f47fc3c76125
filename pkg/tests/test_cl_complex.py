import json
import random

import pytest

from pvalab.cl_complex import (
    ClCochain, adX_bracket, bracket_XX, chain_sign, cochain_from_dict, cochain_to_dict, d_cl,
    d_cl_residual_zero, dcl_value, evaluate_on_graph, filtration_level, from_harrison, gr_d,
    load_cochain, master_X, partitions, to_Lambda, to_harrison, violations,
)
from pvalab.cohomology import TruncatedComplex, random_element
from pvalab.diffpoly import LambdaPoly, normal_form
from pvalab.exact_linalg import pm
from pvalab.graphs import Digraph, reduce_graph
from pvalab.pva import broken_pair, constant_bracket, gfz, virasoro
from pvalab.sesquilinear import d_total, harrison_violations, invariance_violations

SPECS = [(gfz, 4), (virasoro, 6)]


def sample(spec, W, n, delta, seed, level=None):
    tc = TruncatedComplex("classical", spec, W, delta - n * spec.shift)
    return random_element(tc.slice(n, level=level), random.Random(seed))


def test_partitions():
    assert partitions(4) == [(1, 1, 1, 1), (1, 1, 2), (1, 3), (2, 2), (4,)]


@pytest.mark.parametrize("make", [gfz, virasoro])
def test_master_cochain_is_closed(make):
    spec = make()
    assert d_cl_residual_zero(spec, master_X(spec))["ok"]
    assert bracket_XX(spec)["ok"]


@pytest.mark.parametrize("make", [broken_pair, constant_bracket])
def test_master_cochain_not_closed_for_non_pva(make):
    spec = make()
    assert not d_cl_residual_zero(spec, master_X(spec))["ok"]
    assert not bracket_XX(spec)["ok"]


@pytest.mark.parametrize("make,W", SPECS)
@pytest.mark.parametrize("n", [0, 1, 2])
def test_d_equals_bracket_with_X(make, W, n):
    spec = make()
    for d in range(-1, 2):
        Y = sample(spec, W, n, d, 10 * n + d)
        assert (adX_bracket(spec, Y) - d_cl(Y)).is_zero()


@pytest.mark.parametrize("make,W", [(gfz, 4), (virasoro, 5)])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_d_squared_zero(make, W, n):
    spec = make()
    Y = sample(spec, W, n, 0, n)
    dY = d_cl(Y)
    assert not violations(dY)
    assert d_cl(dY).is_zero()


def test_differential_respects_graph_relations():
    # d Y evaluated directly on an arbitrary graph equals its proper-line expansion
    spec = gfz()
    Y = sample(spec, 4, 2, 0, 3)
    dY = d_cl(Y)
    u = ((0, 0),)
    for edges in [((2, 1), (3, 2)), ((1, 3),), ((3, 1), (3, 2)), ((2, 1), (1, 3))]:
        G = Digraph(3, edges)
        v = (u, u, ((0, 1),))
        direct = dcl_value(Y, G, v, spec)
        via = LambdaPoly(3)
        for line, c in reduce_graph(G).items():
            via.iadd(evaluate_on_graph(dY, line, v), c)
        assert direct == normal_form(via)


def test_cyclic_graph_gives_zero():
    spec = gfz()
    Y = sample(spec, 4, 2, 0, 1)
    u = ((0, 0),)
    assert evaluate_on_graph(Y, Digraph(2, ((1, 2), (2, 1))), (u, u)).is_zero()


def test_reversed_arrow_changes_sign():
    spec = gfz()
    Y = sample(spec, 4, 2, 1, 2)
    a, b = ((0, 0),), ((0, 1),)
    lhs = evaluate_on_graph(Y, Digraph(2, ((2, 1),)), (a, b))
    rhs = evaluate_on_graph(Y, Digraph(2, ((1, 2),)), (a, b))
    assert lhs == rhs.scale(-1)


@pytest.mark.parametrize("make,W", SPECS)
def test_filtration_is_preserved(make, W):
    spec = make()
    for n in (1, 2, 3):
        for s in range(1, n + 1):
            Y = sample(spec, W if n < 3 else 4, n, 0, n + s, level=s)
            assert filtration_level(Y) >= s
            dY = d_cl(Y)
            assert dY.is_zero() or filtration_level(dY) >= s
            rest = dY - gr_d(Y, s)
            assert rest.is_zero() or filtration_level(rest) > s


@pytest.mark.parametrize("make,W", SPECS)
def test_harrison_maps(make, W):
    spec = make()
    for n in (1, 2, 3):
        for s in range(1, n + 1):
            Y = sample(spec, min(W, 5), n, 1, 3 * n + s, level=s)
            F = to_harrison(Y, s)
            assert not harrison_violations(F) and not invariance_violations(F)
            assert (to_harrison(from_harrison(F, spec), s) - F).is_zero()
            lhs = to_harrison(gr_d(Y, s), s)
            # the literal identity carries (-1)^(n+1); chain_sign absorbs it
            assert (lhs - d_total(F).scale(pm(n + 1))).is_zero()
            assert (lhs.scale(chain_sign(n + 1)) - d_total(F).scale(chain_sign(n))).is_zero()


def test_to_lambda_rejects_non_group_values():
    p = LambdaPoly.lam(0, 3)  # λ_1 alone is not a function of λ_1 + λ_2
    with pytest.raises(ArithmeticError):
        to_Lambda(p, (2, 1))
    q = LambdaPoly.lam(0, 3) + LambdaPoly.lam(1, 3)
    assert to_Lambda(q, (2, 1)) == LambdaPoly.lam(0, 2)


def test_invalid_cochain_is_reported():
    spec = gfz()
    Y = cochain_from_dict(spec, {"arity": 2, "weight_cap": 4, "delta": 0,
                                 "shapes": {"2": {"u,u": "1"}}})
    assert violations(Y)


def test_file_roundtrip(tmp_path):
    spec = virasoro()
    Y = sample(spec, 5, 2, 0, 4)
    p = tmp_path / "y.json"
    p.write_text(json.dumps(cochain_to_dict(Y)))
    Z = load_cochain(spec, p)
    assert isinstance(Z, ClCochain) and (Z - Y).is_zero()
