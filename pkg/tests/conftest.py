import sympy as sp
from hypothesis import settings

from pvalab.diffpoly import LambdaPoly

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

L = sp.Symbol("L")
JET = 12  # u^(0..JET) as sympy symbols
U = sp.symbols(f"u0:{JET + 1}")


def to_sympy(p: LambdaPoly, lams=None):
    """One-generator LambdaPoly -> sympy expression in u0, u1, ... and lambdas."""
    lams = lams or sp.symbols(f"l1:{p.nvars + 1}")
    out = 0
    for (e, m, _), c in p.terms.items():
        term = sp.Rational(int(c.numerator), int(c.denominator))
        for k, lam in zip(e, lams):
            term *= lam**k
        for g, o in m:
            assert g == 0
            term *= U[o]
        out += term
    return sp.expand(out)


def D(expr):
    """Total derivative on jet variables."""
    return sp.expand(sum(U[k + 1] * sp.diff(expr, U[k]) for k in range(JET)))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
