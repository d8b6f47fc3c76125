import json
import random

import pytest

from pvalab.cl_complex import d_cl
from pvalab.cohomology import TruncatedComplex, random_element
from pvalab.diffpoly import LambdaPoly
from pvalab.pv_complex import (
    VarCochain, cochain_from_dict, cochain_to_dict, d_var, integral, load_cochain, phi,
    scaling_derivation, skew_constraints,
)
from pvalab.pva import gfz, virasoro

SPECS = [(gfz, 4), (virasoro, 6)]


def test_scaling_derivation_differential():
    spec = gfz()
    dE = d_var(scaling_derivation(spec))
    assert dE.values == {(0, 0): LambdaPoly.lam(0, 2).scale(2)}


def test_casimir_is_closed():
    spec = gfz()
    assert d_var(integral(spec, LambdaPoly.gen(0))).is_zero()


def test_d_is_weight_cap_independent():
    spec = gfz()
    f = scaling_derivation(spec)
    assert d_var(f) == d_var(VarCochain(spec, 1, dict(f.values)))


@pytest.mark.parametrize("make,W", SPECS)
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_d_squared_zero(make, W, n):
    spec = make()
    rng = random.Random(n)
    for d in range(-1, 3):
        tc = TruncatedComplex("variational", spec, W, d - n * spec.shift)
        f = random_element(tc.slice(n), rng)
        df = d_var(f)
        assert df.is_valid()
        assert d_var(df).is_zero()


@pytest.mark.parametrize("make,W", SPECS)
def test_phi_is_a_chain_map(make, W):
    spec = make()
    rng = random.Random(7)
    for n in (0, 1, 2):
        for d in range(-1, 2):
            tc = TruncatedComplex("variational", spec, W, d - n * spec.shift)
            f = random_element(tc.slice(n), rng)
            assert (d_cl(phi(f, W)) - phi(d_var(f), W)).is_zero()


def test_skewsymmetry_constraints():
    spec = gfz()
    bad = VarCochain(spec, 2, {(0, 0): LambdaPoly.const(1, 2)})
    assert not bad.is_valid()
    good = VarCochain(spec, 2, {(0, 0): LambdaPoly.lam(0, 2)})
    assert good.is_valid()
    generic = VarCochain(spec, 2, {(0, 0): LambdaPoly.const(1, 2).with_tag("a")})
    assert skew_constraints(generic) == [{"a": 2}]


def test_file_roundtrip(tmp_path):
    spec = gfz()
    f = cochain_from_dict(spec, {"arity": 2, "values": {"u,u": "L1 - L2"}})
    d = cochain_to_dict(f)
    p = tmp_path / "f.json"
    p.write_text(json.dumps(d))
    assert load_cochain(spec, p).values == f.values
