from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import assume, given, strategies as st

from conftest import plane_polys, small_int, small_rational, to_sympy
from reglab import upoly
from reglab.maps import PolyMap
from reglab.mpoly import MPoly, exact_div, gcd, squarefree_part
from reglab.parser import parse_expression, parse_ratfunc
from reglab.ratfunc import (
    NotRationalFunction,
    RatFunc,
    homogeneous_components,
    mult_at,
    normalize_nonneg,
    reduce,
    substitute,
)
from reglab.roots import count_roots, isolate_real_roots, refine
from reglab.scalar import (
    ExtensionNeeded,
    FieldError,
    compositum,
    embed_common,
    field_adjoin,
    minimal_polynomial,
    sign,
    sqrt_exact,
    to_mpf,
)
from reglab.series import TruncSeries, series_sqrt

XY = ("x", "y")
UV = ("u", "v")


def P(text, vars=XY):
    return parse_expression(text, vars)


def R(text, vars=XY):
    return parse_ratfunc(text, vars)


# polynomials -----------------------------------------------------------------------


@given(plane_polys(), plane_polys(), plane_polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert a - a == MPoly.zero(XY)


@given(plane_polys(), plane_polys())
def test_product_matches_sympy(a, b):
    assert to_sympy(a * b) == sympy.expand(to_sympy(a) * to_sympy(b))


@given(plane_polys(max_degree=3), plane_polys(max_degree=3), plane_polys(max_degree=2))
def test_gcd_matches_sympy(a, b, c):
    assume(not c.is_zero())
    f, g = a * c, b * c
    assume(not f.is_zero() and not g.is_zero())
    ours = to_sympy(gcd(f, g))
    theirs = sympy.gcd(to_sympy(f), to_sympy(g))
    # equal up to a nonzero constant factor
    ratio = sympy.cancel(ours / theirs)
    assert ratio.is_number and ratio != 0


@given(plane_polys(max_degree=3), plane_polys(max_degree=3))
def test_exact_division_recovers_factor(a, b):
    assume(not b.is_zero())
    assert exact_div(a * b, b) == a


@given(plane_polys(max_degree=3))
def test_squarefree_part_matches_sympy(a):
    assume(not a.is_zero() and not a.is_constant())
    sq = squarefree_part(a * a * (a + 1))
    theirs = sympy.sqf_part(to_sympy(a * a * (a + 1)))
    assert sympy.cancel(to_sympy(sq) / theirs).is_number


def test_evaluation_and_composition():
    p = P("x^2*y - 3*x + 1/2")
    assert p.evaluate((2, 3)) == Fraction(12 - 6) + Fraction(1, 2)
    q = p.compose([P("x+y"), P("x-y")])
    assert to_sympy(q) == sympy.expand(to_sympy(p).subs({sympy.Symbol("x"): sympy.Symbol("x") + sympy.Symbol("y"),
                                                         sympy.Symbol("y"): sympy.Symbol("x") - sympy.Symbol("y")},
                                                        simultaneous=True))


def test_homogeneous_components_examples():
    comps = homogeneous_components(P("x^2 + y^2 + x^3"))
    assert [str(c) for c in comps] == ["0", "0", "x^2 + y^2", "x^3"]
    assert homogeneous_components(MPoly.zero(XY)) == []
    comps = homogeneous_components(P("(x-1)^2"))
    assert comps == [P("1"), P("-2*x"), P("x^2")]


@given(plane_polys())
def test_homogeneous_components_sum_back(q):
    comps = homogeneous_components(q)
    total = MPoly.zero(XY)
    for k, c in enumerate(comps):
        assert all(sum(e) == k for e in c.terms)
        total = total + c
    assert total == q


# rational functions -----------------------------------------------------------------


def test_reduce_examples():
    x, y = MPoly.gens(XY)
    assert reduce(x**3, x) == RatFunc.from_poly(x**2)
    f = reduce(x**2 * (x**2 + y**2), (x**2 + y**2) ** 2)
    assert f.num == x**2 and f.den == x**2 + y**2
    g = reduce(x**3, x**2 + y**2)
    assert g.num == x**3 and g.den == x**2 + y**2
    with pytest.raises(NotRationalFunction):
        reduce(x, MPoly.zero(XY))


@given(plane_polys(max_degree=3), plane_polys(max_degree=3), plane_polys(max_degree=2))
def test_reduce_matches_sympy_cancel(a, b, c):
    assume(not b.is_zero() and not c.is_zero())
    f = reduce(a * c, b * c)
    assert reduce(f.num, f.den) == f
    assert sympy.simplify(to_sympy(f.num) * to_sympy(b) - to_sympy(a) * to_sympy(f.den)) == 0
    assert sympy.Poly(sympy.gcd(to_sympy(f.num), to_sympy(f.den)), *sympy.symbols("x y")).total_degree() == 0
    # canonical normalisation: the leading denominator coefficient is positive
    assert f.den.leading_term()[1] > 0


def test_substitute_examples():
    phi = parse_expression("(u*(u^2+v^2), v*(u^2+v^2))", UV)
    assert substitute(R("x^3/(x^2+y^2)"), phi) == R("u^3", UV)
    phi2 = parse_expression("(v^3*(u*v+1), v*(u*v-1))", UV)
    expected = R("v*(u*v+1)/(v^4*(u*v+1)^2+(u*v-1)^2)", UV)
    assert substitute(R("x/(x^2+y^2)"), phi2) == expected
    f = R("(x^2*y+1)/(1+x^4)")
    assert substitute(f, PolyMap.identity(XY)) == f


@st.composite
def small_maps(draw):
    comps = [draw(plane_polys(max_degree=2, max_terms=3)) for _ in range(2)]
    return PolyMap(XY, comps)


@given(small_maps(), small_maps())
def test_substitute_respects_composition(m1, m2):
    f = R("(x*y+1)/(x^2+y^2+1)")
    composed = PolyMap(XY, [substitute(c, m2) for c in m1.components])
    assert substitute(f, composed) == substitute(substitute(f, m1), m2)


def test_mult_at_examples():
    assert mult_at(P("x^2+y^2"), (0, 0)) == 2
    assert mult_at(P("(x^2+y^2)^2"), (0, 0)) == 4
    assert mult_at(P("x^2+y^2"), (1, 0)) == 0
    with pytest.raises(ValueError):
        mult_at(MPoly.zero(XY), (0, 0))


@given(plane_polys(), small_int, small_int, small_int, small_int, small_int, small_int)
def test_multiplicity_is_affine_invariant(q, a, b, c, d, e, f):
    assume(not q.is_zero() and a * d - b * c != 0)
    point = (Fraction(1), Fraction(-2))
    # A(u) = M u + shift and A^{-1}(point) is the new centre
    affine = PolyMap(XY, [P(f"{a}*x + {b}*y + {e}".replace("+ -", "- ")),
                          P(f"{c}*x + {d}*y + {f}".replace("+ -", "- "))])
    pulled = substitute(RatFunc.from_poly(q), affine).num
    det = Fraction(a * d - b * c)
    px, py = point[0] - e, point[1] - f
    pre = ((d * px - b * py) / det, (-c * px + a * py) / det)
    assert mult_at(pulled, pre) == mult_at(q, point)


def test_normalize_nonneg_examples():
    f = normalize_nonneg(R("x/(x^2+y^2)"))
    assert f.num == P("x*(x^2+y^2)") and f.den == P("(x^2+y^2)^2")
    g = normalize_nonneg(R("x^3/(x^2+y^2)"))
    assert g.num == P("x^3*(x^2+y^2)") and g.den == P("(x^2+y^2)^2")
    h = RatFunc(P("x"), P("(x^2+1)^2"))
    assert normalize_nonneg(h) == h


@given(plane_polys(max_degree=3), plane_polys(max_degree=3),
       st.lists(st.tuples(small_rational, small_rational), min_size=100, max_size=100))
def test_normalize_nonneg_preserves_values(a, b, points):
    assume(not b.is_zero())
    f = reduce(a, b)
    g = normalize_nonneg(f)
    for p in points:
        d = f.den.evaluate(p)
        if d == 0:
            continue
        assert g.num.evaluate(p) / g.den.evaluate(p) == f.num.evaluate(p) / d


# univariate roots --------------------------------------------------------------------


def test_root_isolation_examples():
    p = [Fraction(-2), 0, 1]
    ivs = isolate_real_roots(p)
    assert len(ivs) == 2
    for iv, expected in zip(ivs, (-1.4142135623730951, 1.4142135623730951)):
        lo, hi = refine(p, iv.lo, iv.hi, Fraction(1, 10**12))
        assert upoly.evaluate(p, lo) * upoly.evaluate(p, hi) < 0
        assert abs(float(lo) - expected) < 1e-11
    assert isolate_real_roots([Fraction(1), 0, 1]) == []
    (triple,) = isolate_real_roots([0, 0, 0, Fraction(1)])
    assert triple.multiplicity == 3 and triple.lo <= 0 <= triple.hi


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=7))
def test_root_isolation_matches_sympy(coeffs):
    assume(any(coeffs[1:]))
    p = [Fraction(c) for c in coeffs]
    t = sympy.Symbol("t")
    expr = sum(sympy.Integer(c) * t**i for i, c in enumerate(coeffs))
    theirs = sympy.Poly(expr, t).real_roots()
    distinct = sorted(set(theirs), key=lambda r: float(r))
    ours = isolate_real_roots(p)
    assert len(ours) == len(distinct)
    for iv, r in zip(ours, distinct):
        assert iv.lo <= sympy.Rational(str(sympy.N(r, 40))) + sympy.Rational(1, 10**30)
        assert iv.hi >= sympy.Rational(str(sympy.N(r, 40))) - sympy.Rational(1, 10**30)
        assert iv.multiplicity == theirs.count(r)
    # the open intervals are disjoint and ordered
    for a, b in zip(ours, ours[1:]):
        assert a.hi <= b.lo


def _sylvester_determinant(a, b):
    """Resultant as the determinant of the Sylvester matrix (coefficients lowest first)."""
    m, n = len(a) - 1, len(b) - 1
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(a)) + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(b)) + [0] * (m - 1 - i))
    return sympy.Matrix(rows).det()


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=6), st.lists(st.integers(-6, 6), min_size=2, max_size=6))
def test_resultant_matches_sylvester_determinant(a, b):
    a, b = upoly.trim([Fraction(c) for c in a]), upoly.trim([Fraction(c) for c in b])
    assume(len(a) >= 2 and len(b) >= 2)
    ours = upoly.resultant(a, b)
    expected = _sylvester_determinant([int(c) for c in a], [int(c) for c in b])
    assert sympy.Rational(ours.numerator, ours.denominator) == expected


def test_sturm_counts():
    p = [Fraction(c) for c in (-6, 11, -6, 1)]  # (t-1)(t-2)(t-3)
    assert count_roots(p, Fraction(0), Fraction(4)) == 3
    assert count_roots(p, Fraction(3, 2), Fraction(5, 2)) == 1


# algebraic scalars -----------------------------------------------------------------------


@pytest.fixture
def sqrt2():
    return field_adjoin([-2, 0, 1], (1, 2)).gen


def test_field_adjoin_examples(sqrt2):
    assert sqrt2 * sqrt2 == 2
    assert sign(sqrt2 - Fraction(3, 2)) < 0
    phi = field_adjoin([-1, -1, 1], (1, 2)).gen
    assert phi * phi - phi - 1 == 0
    with pytest.raises(FieldError):
        field_adjoin([-1, 0, 1], (0, 2))  # reducible
    with pytest.raises(FieldError):
        field_adjoin([-2, 0, 1], (-2, 2))  # two roots inside


def _numeric(x, dps=40):
    return to_mpf(x, dps)


@given(st.lists(small_rational, min_size=3, max_size=3), st.lists(small_rational, min_size=3, max_size=3))
def test_cubic_field_arithmetic_matches_numerics(u, v):
    field = field_adjoin([-2, 0, 0, 1], (1, 2))  # the real cube root of 2
    a, b = field.element(u), field.element(v)
    with mpmath.workdps(40):
        alpha = mpmath.cbrt(2)
        na = sum(mpmath.mpf(c.numerator) / c.denominator * alpha**i for i, c in enumerate(u))
        nb = sum(mpmath.mpf(c.numerator) / c.denominator * alpha**i for i, c in enumerate(v))
        assert abs(_numeric(a * b) - na * nb) < mpmath.mpf(10) ** -30
        assert abs(_numeric(a + b) - (na + nb)) < mpmath.mpf(10) ** -30
        if nb != 0:
            assert abs(_numeric(a / b) - na / nb) < mpmath.mpf(10) ** -25
        assert sign(a - b) == (1 if na > nb else -1 if na < nb else 0)


def test_minimal_polynomial_matches_sympy(sqrt2):
    x = sqrt2 + Fraction(1, 3)
    ours = minimal_polynomial(x)
    t = sympy.Symbol("t")
    theirs = sympy.Poly(sympy.minimal_polynomial(sympy.sqrt(2) + sympy.Rational(1, 3), t), t).monic()
    assert [sympy.Rational(c.numerator, c.denominator) for c in reversed(ours)] == theirs.all_coeffs()


def test_sqrt_exact():
    assert sqrt_exact(Fraction(9, 4)) == Fraction(3, 2)
    f = field_adjoin([-2, 0, 1], (1, 2))
    r = f.gen
    # (1 + sqrt 2)^2 = 3 + 2 sqrt 2
    assert sqrt_exact(3 + 2 * r) == 1 + r


def test_compositum_and_common_embedding():
    f2 = field_adjoin([-2, 0, 1], (1, 2))
    f3 = field_adjoin([-3, 0, 1], (1, 2))
    big, e1, e2 = compositum(f2, f3)
    assert big.degree == 4
    s = e1(f2.gen) + e2(f3.gen)
    with mpmath.workdps(30):
        assert abs(to_mpf(s, 30) - (mpmath.sqrt(2) + mpmath.sqrt(3))) < mpmath.mpf(10) ** -25
    assert e1(f2.gen) * e1(f2.gen) == 2
    vals = embed_common([f2.gen, f3.gen, Fraction(1, 2)])
    assert vals[0] * vals[1] * vals[0] * vals[1] == 6


# truncated series -------------------------------------------------------------------------


def test_series_sqrt_examples():
    r = series_sqrt(TruncSeries([1, 1], 3))
    assert r.coeffs == (1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16))
    assert series_sqrt(TruncSeries([0, 0, 4], 4)).coeffs[:2] == (0, 2)
    with pytest.raises(ExtensionNeeded):
        series_sqrt(TruncSeries([0, 1], 4))


def test_series_sqrt_binomial_oracle():
    s = sympy.Symbol("s")
    expected = sympy.series(sympy.sqrt(1 + s), s, 0, 8).removeO()
    got = series_sqrt(TruncSeries([1, 1], 7))
    assert [sympy.Rational(c.numerator, c.denominator) for c in got.coeffs] == [
        expected.coeff(s, i) for i in range(8)]


@given(st.lists(small_rational, min_size=1, max_size=8), st.integers(1, 4), st.integers(0, 2))
def test_series_sqrt_squares_back(tail, c, shift):
    s = TruncSeries([Fraction(c * c)] + tail, 8).shift_up(2 * shift).truncate(8)
    r = series_sqrt(s)
    assert (r * r).truncate(r.order) == s.truncate(r.order)
    assert r.order == 8 - shift


@given(st.lists(small_rational, min_size=1, max_size=6), st.lists(small_rational, min_size=1, max_size=6))
def test_series_division_matches_sympy(a, b):
    assume(b[0] != 0)
    s = sympy.Symbol("s")
    sa = sum(sympy.Rational(c.numerator, c.denominator) * s**i for i, c in enumerate(a))
    sb = sum(sympy.Rational(c.numerator, c.denominator) * s**i for i, c in enumerate(b))
    q = TruncSeries(a, 6) / TruncSeries(b, 6)
    expected = sympy.series(sa / sb, s, 0, 7).removeO()
    assert [sympy.Rational(c.numerator, c.denominator) for c in q.coeffs] == [expected.coeff(s, i) for i in range(7)]


def test_series_order_is_minimum_of_operands():
    a, b = TruncSeries([1, 2, 3], 5), TruncSeries([1, 1], 3)
    assert (a + b).order == 3 and (a * b).order == 3
