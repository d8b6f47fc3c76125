import random

import pytest

from pvalab import cohomology
from pvalab.cl_complex import d_cl, filtration_level
from pvalab.cohomology import (
    NotClosed, TruncatedComplex, TruncationInfeasible, coords, in_image, random_cocycle,
    random_element, slice_report, straighten, vanishing_grid, verify_vanishing,
)
from pvalab.pv_complex import phi
from pvalab.pva import gfz, virasoro

# frozen from the exact computation; the classical column is a second route
# (different cochains, different differential) that must agree
H_GFZ_W4 = {-1: [0, 0, 0], 0: [1, 1, 0], 1: [1, 0, 0], 2: [0, 0, 0]}
H_VIR_W6 = {-1: [0, 0, 0], 0: [1, 0, 0], 1: [0, 0, 1], 2: [0, 0, 0]}


@pytest.mark.parametrize("make,W,table", [(gfz, 4, H_GFZ_W4), (virasoro, 6, H_VIR_W6)])
def test_variational_and_classical_cohomology_agree(make, W, table):
    spec = make()
    for d, dims in table.items():
        tv = TruncatedComplex("variational", spec, W, d)
        tc = TruncatedComplex("classical", spec, W, d)
        assert [tv.cohomology(n)["dim_H"] for n in range(3)] == dims
        assert [tc.cohomology(n)["dim_H"] for n in range(3)] == dims


@pytest.mark.parametrize("kind", ["variational", "classical"])
def test_d_squared_certificate(kind):
    tc = TruncatedComplex(kind, gfz(), 4, 0)
    for n in range(3):
        assert tc.d_squared_zero(n)


def test_sesquilinear_d_squared_certificate():
    tc = TruncatedComplex("sesquilinear", gfz(), 4, 0, 2)
    for n in (2, 3):
        assert tc.d_squared_zero(n)


def test_report_fields():
    rep = TruncatedComplex("variational", gfz(), 4, 0).cohomology(1)
    assert set(rep) >= {"n", "delta", "W", "dim_ker", "dim_im", "dim_H"}
    assert rep["dim_H"] == rep["dim_ker"] - rep["dim_im"]


@pytest.mark.parametrize("make,W", [(gfz, 4), (virasoro, 5)])
def test_filtered_slice_matches_harrison_complex(make, W):
    spec = make()
    from pvalab.cl_complex import sesq_shift
    for n in (1, 2, 3):
        tc = TruncatedComplex("classical", spec, W, -n * spec.shift)
        for s in range(1, n + 1):
            gr = tc.slice(n, level=s).dim - (tc.slice(n, level=s + 1).dim if s < n else 0)
            proto = tc.slice(n, level=s).proto
            sq = TruncatedComplex("sesquilinear", spec, W, sesq_shift(proto, s), s)
            assert gr == sq.slice(n).dim


def test_vanishing_grid():
    reps = vanishing_grid(gfz())
    assert len(reps) == 3 * 4 * 13
    assert all(r["status"] in ("zero", "retry") for r in reps)


def test_negative_control_is_nonzero():
    rep = slice_report(gfz(), 1, 1, 4, 0)
    assert rep["dim_H"] == 1
    assert rep["status"] == "nonzero"
    assert rep["retry"] == {"W": 5, "surviving_classes": 1}


def test_vanishing_precondition():
    with pytest.raises(ValueError):
        verify_vanishing(gfz(), 1, 1, 4, 0)
    with pytest.raises(ValueError):
        verify_vanishing(gfz(), 2, 2, 4, 0)


def _closed(spec, W, d, seed):
    rng = random.Random(seed)
    tc = TruncatedComplex("classical", spec, W, d - 2 * spec.shift)
    tv = TruncatedComplex("variational", spec, W, d - 2 * spec.shift)
    Z0 = random_element(tc.slice(1), rng)
    f = random_cocycle(tv, 2, rng)
    return tc, Z0, f, d_cl(Z0) + phi(f, W)


@pytest.mark.parametrize("make,W", [(gfz, 4), (virasoro, 6)])
@pytest.mark.parametrize("d", [-1, 0, 1])
def test_straighten(make, W, d):
    spec = make()
    tc, Z0, f, Y = _closed(spec, W, d, d + 5)
    Z, Yt = straighten(spec, Y)
    assert (Y - d_cl(Z) - Yt).is_zero()
    assert Yt.support() in ([], [(1, 1)])
    assert d_cl(Yt).is_zero()
    assert in_image(tc, 2, coords(Yt - phi(f, W)))


def test_straighten_three_cochain():
    spec = gfz()
    tc = TruncatedComplex("classical", spec, 3, 1 - 3 * spec.shift)
    Y = d_cl(random_element(tc.slice(2), random.Random(2)))
    Z, Yt = straighten(spec, Y)
    assert (Y - d_cl(Z) - Yt).is_zero()
    assert Yt.is_zero() or filtration_level(Yt) == 3


def test_straighten_refuses_open_cochain():
    spec = gfz()
    tc = TruncatedComplex("classical", spec, 4, 0 - 2 * spec.shift)
    Y = random_element(tc.slice(2), random.Random(0))
    assert not d_cl(Y).is_zero()
    with pytest.raises(NotClosed):
        straighten(spec, Y)


def test_straighten_reports_infeasible_level(monkeypatch):
    spec = gfz()
    _, Z0, _, Y = _closed(spec, 4, 0, 1)
    if filtration_level(Y) > 1:
        pytest.fail("sample should have a level-1 part")
    monkeypatch.setattr(cohomology, "_solve", lambda images, target: None)
    with pytest.raises(TruncationInfeasible) as info:
        straighten(spec, Y)
    assert info.value.level == 1
