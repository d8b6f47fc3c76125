import random

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from conftest import D, L, U, to_sympy
from pvalab.diffpoly import LambdaPoly, ParseError, monomials
from pvalab.pva import (
    bracket_monos, broken_pair, check_jacobi, check_pva, check_skewsymmetry, constant_bracket,
    extend_bracket, gfz, jacobi_residual, load_spec, skew_residual, spec_from_dict, virasoro,
)


def _apply_lam_plus_d(expr, power):
    """(λ+∂)^power acting on expr; λ commutes."""
    out = expr
    for _ in range(power):
        out = sp.expand(L * out + D(out))
    return out


def master_formula(table, f, g, order=6):
    """{f_λ g} for one generator from the bracket table {u_λ u} = table(L)."""
    table = sp.Poly(table, L)
    out = 0
    for m in range(order + 1):
        df = sp.diff(f, U[m])
        if df == 0:
            continue
        # (-λ-∂)^m ∂f/∂u^(m)
        right = df
        for _ in range(m):
            right = sp.expand(-L * right - D(right))
        # {u_{λ+∂} u}_→ right
        inner = 0
        for (k,), b in table.terms():
            inner += sp.expand(b * _apply_lam_plus_d(right, k))
        for n in range(order + 1):
            dg = sp.diff(g, U[n])
            if dg == 0:
                continue
            out += sp.expand(dg * _apply_lam_plus_d(inner, n))
    return sp.expand(out)


def _mono_sympy(m):
    return to_sympy(LambdaPoly.mono(m))


SPECS = {"GFZ": gfz, "Virasoro": virasoro}


@pytest.mark.parametrize("name", ["GFZ", "Virasoro"])
def test_bracket_matches_master_formula(name):
    make = SPECS[name]
    spec = make()
    table = to_sympy(spec.table[(0, 0)], [L])
    rng = random.Random(1)
    low = spec.weights[0]
    ms = [m for w in range(low, low + 4) for m in monomials(w, spec.weights) if m]
    for _ in range(12):
        a, b = rng.choice(ms), rng.choice(ms)
        ours = to_sympy(bracket_monos(spec, a, b), [L])
        assert ours == master_formula(table, _mono_sympy(a), _mono_sympy(b))


def test_sesquilinearity():
    spec = virasoro()
    a, b = ((0, 0), (0, 1)), ((0, 2),)
    # ∂(T T') = T'^2 + T T''
    lhs = bracket_monos(spec, ((0, 1), (0, 1)), b) + bracket_monos(spec, ((0, 0), (0, 2)), b)
    ours = to_sympy(lhs, [L])
    assert ours == sp.expand(-L * to_sympy(bracket_monos(spec, a, b), [L]))


@pytest.mark.parametrize("make", [gfz, virasoro])
def test_axioms_hold(make):
    rep = check_pva(make(), 25, 0)
    assert rep["ok"], rep


def test_broken_pair_fails_jacobi_only():
    rep = check_pva(broken_pair(), 25, 0)
    assert rep["skewsymmetry"]["ok"]
    assert not rep["jacobi"]["ok"]
    assert rep["jacobi"]["failures"][0]["residual"] != "0"
    assert not rep["dX"]["ok"]


def test_constant_bracket_fails_skewsymmetry():
    rep = check_skewsymmetry(constant_bracket(), 10)
    assert not rep["ok"]
    u = ((0, 0),)
    assert skew_residual(constant_bracket(), u, u) == LambdaPoly.const(2, 1)


def test_jacobi_residual_zero_for_gfz():
    spec = gfz()
    u = ((0, 0),)
    uu = ((0, 0), (0, 0))
    assert jacobi_residual(spec, u, uu, ((0, 1),)).is_zero()
    assert check_jacobi(spec, 10)["ok"]


def test_extend_bracket_is_bilinear():
    spec = gfz()
    f = LambdaPoly.mono(((0, 0),), 0, 2) + LambdaPoly.mono(((0, 0), (0, 1)), 0, -1)
    g = LambdaPoly.mono(((0, 2),), 0, 3)
    lhs = extend_bracket(spec, f, g)
    rhs = bracket_monos(spec, ((0, 0),), ((0, 2),)).scale(6) - bracket_monos(spec, ((0, 0), (0, 1)), ((0, 2),)).scale(3)
    assert lhs == rhs


def test_shift_detection():
    assert gfz().shift == -1 and virasoro().shift == -1
    assert broken_pair().shift == 0 and constant_bracket().shift == -2


def test_spec_validation(tmp_path):
    with pytest.raises(ValueError):
        spec_from_dict({"generators": ["u"], "brackets": {"u,u": "L + u^2"}})
    with pytest.raises(ParseError):
        spec_from_dict({"generators": ["L"], "brackets": {}})
    p = tmp_path / "s.json"
    p.write_text('{"generators": ["u"],\n "brackets": {"u,u": "L*"}}')
    with pytest.raises(ParseError) as info:
        load_spec(p)
    assert info.value.line == 2


@given(st.integers(0, 3), st.integers(0, 3))
def test_gfz_generator_brackets(p, q):
    # {u^(p)_λ u^(q)} = (-λ)^p (λ+∂)^q λ = (-1)^p λ^{p+q+1}
    spec = gfz()
    got = to_sympy(bracket_monos(spec, ((0, p),), ((0, q),)), [L])
    assert got == (-1) ** p * L ** (p + q + 1)
