from fractions import Fraction

import sympy
from hypothesis import settings, strategies as st

from reglab.mpoly import MPoly

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

X, Y = sympy.symbols("x y")

small_int = st.integers(min_value=-5, max_value=5)
small_rational = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))


@st.composite
def plane_polys(draw, max_degree=4, max_terms=5):
    """Random sparse polynomials in x, y with small rational coefficients."""
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        i = draw(st.integers(0, max_degree))
        j = draw(st.integers(0, max_degree - i))
        terms[(i, j)] = draw(small_rational)
    return MPoly(("x", "y"), terms)


def to_sympy(p):
    """Independent re-expression of an MPoly (rational coefficients) in sympy."""
    symbols = sympy.symbols(list(p.vars))
    out = sympy.Integer(0)
    for exp, c in p.terms.items():
        mono = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(symbols, exp):
            mono *= s**e
        out += mono
    return sympy.expand(out)


def from_sympy(expr, vars):
    poly = sympy.Poly(sympy.expand(expr), *sympy.symbols(list(vars)))
    terms = {}
    for exp, c in poly.terms():
        c = sympy.Rational(c)
        terms[exp] = Fraction(int(c.p), int(c.q))
    return MPoly(tuple(vars), terms)


# acceptance verdicts, one line each, printed after the run
ACCEPTANCE = {}


def record_criterion(number, title, ok, detail=""):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
