import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import sympy_zero_free
from reglab.arclift import adjoin_sqrt
from reglab.blowup import BLOWUP_VARS, double_blowup_at
from reglab.images import quadrant_maps
from reglab.mpoly import MPoly
from reglab.parser import parse_expression, parse_ratfunc
from reglab.ratfunc import reduce
from reglab.realsolve import is_real_zero_free
from reglab.resolution import (
    BOUNDED,
    EXTENSION_CAP,
    NOT_LOCALLY_BOUNDED,
    REGULAR,
    STEP_CAP,
    RegularizationError,
    ResolutionConfig,
    boundedness_probe,
    regularize_map,
    resolve,
)

XY = ("x", "y")

REGULAR_INPUTS = [
    "x^2/(x^2+y^2)",
    "x^2*y^2/(x^2+y^2)",
    "x^2*y^2/(x^2+y^2)^2",
    "x^2*y^2/(x^4+y^4)",
    "x^3/(x^2+y^2)",
    "x^4/(x^4+y^2)",
    "x^2*y/(x^4+y^2)",
    "(x^2*((x-1)^2+y^2) + y^2*(x^2+y^2))/((x^2+y^2)*((x-1)^2+y^2))",
]


def same_function(f, g):
    return f.num * g.den == g.num * f.den


def sample_points(rng, count, height=12):
    return [(Fraction(rng.randint(-height * 4, height * 4), rng.randint(1, 4)),
             Fraction(rng.randint(-height * 4, height * 4), rng.randint(1, 4))) for _ in range(count)]


@pytest.fixture(scope="module")
def traces():
    return {text: resolve(parse_ratfunc(text, XY)) for text in REGULAR_INPUTS}


def test_single_blowup_example(traces):
    trace = traces["x^2/(x^2+y^2)"]
    assert trace.status == REGULAR and trace.blowups == 1
    expected = reduce(parse_expression("4*t^2", BLOWUP_VARS), parse_expression("4*t^2+(t^2-1)^2", BLOWUP_VARS))
    assert reduce(trace.final.num, trace.final.den) == expected


def test_regular_input_needs_no_blowup():
    f = parse_ratfunc("1/(1+x^2+y^2)", XY)
    trace = resolve(f)
    assert trace.status == REGULAR and trace.blowups == 0
    assert trace.composite.is_identity()
    assert same_function(trace.final, f)


@pytest.mark.parametrize("text", REGULAR_INPUTS)
def test_inputs_resolve_and_are_certified(text, traces):
    trace = traces[text]
    assert trace.status == REGULAR
    assert trace.blowups <= 64
    assert trace.certificate and trace.certificate.zero_free
    assert sympy_zero_free(trace.final.den)


@pytest.mark.parametrize("text", REGULAR_INPUTS)
def test_final_is_the_pullback_along_the_composite(text, traces):
    trace = traces[text]
    assert same_function(trace.final, trace.composite.pullback(trace.input))


@pytest.mark.parametrize("text", REGULAR_INPUTS)
def test_every_step_is_a_substitution_of_the_previous(text, traces):
    trace = traces[text]
    rng = random.Random(3)
    for prev, step in zip(trace.steps, trace.steps[1:]):
        for u in sample_points(rng, 10):
            image = step.map.evaluate(u)
            if prev.function.den.evaluate(image) == 0 or step.function.den.evaluate(u) == 0:
                continue
            assert step.function.evaluate(u) == prev.function.evaluate(image)
            assert step.function.den.evaluate(u) > 0


@pytest.mark.parametrize("text", REGULAR_INPUTS)
def test_composite_agrees_pointwise(text, traces):
    trace = traces[text]
    rng = random.Random(len(text))
    checked = 0
    for u in sample_points(rng, 100):
        image = trace.composite.evaluate(u)
        if trace.input.den.evaluate(image) == 0:
            continue
        assert trace.input.evaluate(image) == trace.final.evaluate(u)
        checked += 1
    assert checked >= 90


def test_indeterminacy_points_are_recorded(traces):
    trace = traces[REGULAR_INPUTS[-1]]
    first = trace.steps[0].points
    assert sorted(tuple(p.coords) for p, _ in first) == [(0, 0), (1, 0)]
    assert [m for _, m in first] == [2, 2]
    assert trace.diagnostics["multiplicity_ledger"] == [[2, 2], [2, 1]]


@pytest.mark.parametrize("text", ["x/(x^2+y^2)", "(x^2+y^2)/(x^4+y^4)", "1/(x^2+y^2)"])
def test_unbounded_functions_are_flagged(text):
    trace = resolve(parse_ratfunc(text, XY))
    assert trace.status == NOT_LOCALLY_BOUNDED
    assert "reason" in trace.diagnostics
    assert trace.certificate is None


def test_step_cap():
    trace = resolve(parse_ratfunc("x^4/(x^4+y^2)", XY), ResolutionConfig(max_steps=1))
    assert trace.status == STEP_CAP and trace.blowups == 1
    trace = resolve(parse_ratfunc("x^4/(x^4+y^2)", XY), ResolutionConfig(max_den_degree=6))
    assert trace.status == STEP_CAP and "denominator degree" in trace.diagnostics["reason"]


def test_extension_cap():
    # the indeterminacy points (+-2^(1/4), 0) need a quartic field
    f = parse_ratfunc("y^2/((x^4-2)^2+y^2)", XY)
    assert resolve(f, ResolutionConfig(max_ext_degree=2)).status == EXTENSION_CAP


def test_irrational_indeterminacy_points_resolve():
    trace = resolve(parse_ratfunc("y^2/((x^2-2)^2+y^2)", XY))
    assert trace.status == REGULAR and trace.blowups == 2
    assert sympy_zero_free(trace.final.den)


def test_config_validation():
    with pytest.raises(ValueError):
        ResolutionConfig(max_steps=0)
    with pytest.raises(ValueError):
        ResolutionConfig(tol=0)
    with pytest.raises(ValueError):
        resolve(parse_ratfunc("x*y*z"))


def test_boundedness_probe_examples():
    assert boundedness_probe(parse_ratfunc("x^2/(x^2+y^2)", XY), (0, 0))[0] == BOUNDED
    for text in ["1/(x^2+y^2)", "(x^2+y^2)/(x^4+y^4)"]:
        verdict, maxima = boundedness_probe(parse_ratfunc(text, XY), (0, 0))
        assert verdict != BOUNDED and maxima[-1] > 1e6


@st.composite
def bounded_quotients(draw):
    """``N/(x^2+y^2)`` with ``N`` vanishing to order two at the origin."""
    terms = draw(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-4, 4).filter(bool)),
                          min_size=1, max_size=3))
    x, y = MPoly.gens(XY)
    num = MPoly.zero(XY)
    for i, j, c in terms:
        if 2 <= i + j <= 3:
            num = num + c * x**i * y**j
    if num.is_zero():
        num = x * y
    return reduce(num, x * x + y * y)


@settings(max_examples=10)
@given(bounded_quotients())
def test_locally_bounded_quotients_resolve(f):
    trace = resolve(f)
    assert trace.status == REGULAR
    assert is_real_zero_free(trace.final.den)
    assert same_function(trace.final, trace.composite.pullback(f))


# regularizing maps ------------------------------------------------------------------


def test_regularize_polynomial_map_is_identity():
    comps = [parse_expression("x^2+y", XY), parse_expression("x*y-1", XY)]
    chain, pulled, traces = regularize_map(comps)
    assert chain.is_identity()
    assert [p.as_poly() for p in pulled] == comps
    assert all(t.blowups == 0 for t in traces)


@pytest.mark.parametrize("comps", [
    ["x^2/(x^2+y^2)", "y^2/(x^2+y^2)"],
    ["x^2/(x^2+y^2)", "y"],
])
def test_regularize_map_examples(comps):
    chain, pulled, traces = regularize_map([parse_ratfunc(c, XY) for c in comps])
    for g in pulled:
        assert is_real_zero_free(g.den) and sympy_zero_free(g.den)


def test_regularize_quadrant_map():
    f, _ = quadrant_maps()
    chain, pulled, traces = regularize_map(list(f.components))
    assert [t.status for t in traces] == [REGULAR, REGULAR]
    rng = random.Random(9)
    for u in sample_points(rng, 40):
        image = chain.evaluate(u)
        if any(c.den.evaluate(image) == 0 for c in f.components):
            continue
        assert tuple(f.evaluate(image)) == tuple(g.evaluate(u) for g in pulled)
        assert all(g.evaluate(u) > 0 for g in pulled)


def test_regularize_map_reports_failing_component():
    with pytest.raises(RegularizationError) as info:
        regularize_map([parse_ratfunc("x^2/(x^2+y^2)", XY), parse_ratfunc("x/(x^2+y^2)", XY)])
    assert info.value.index == 1 and info.value.trace.status == NOT_LOCALLY_BOUNDED


# surjectivity of the double oriented blow-up ------------------------------------------


@settings(max_examples=30)
@given(st.tuples(st.integers(-20, 20), st.integers(-20, 20)))
def test_blowup_is_onto(target):
    x, y = (Fraction(c) for c in target)
    pi = double_blowup_at()
    if x == 0:
        source = (-y, Fraction(0))
    else:
        r2 = x * x + y * y
        root, _ = adjoin_sqrt(r2, 4)
        source = (root, (root + y) / x)
    assert tuple(pi.evaluate(source)) == (x, y)
