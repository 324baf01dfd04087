import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from oracles import newton_preimage
from reglab.images import (
    PipelineError,
    WitnessError,
    WitnessRequest,
    base_map,
    base_preimage,
    complement_map,
    dense_image_compose,
    in_open_cone,
    lines_recover_points,
    punctured_plane_certificate,
    punctured_plane_map,
    punctured_preimage,
    quadrant_maps,
    quadrant_witness,
    regular_positivity_certificate,
    to_fraction,
)
from reglab.mpoly import divides
from reglab.parser import parse_expression, parse_ratfunc
from reglab.ratfunc import RatFunc, substitute

XY = ("x", "y")


# punctured plane ------------------------------------------------------------------------


def test_punctured_plane_map_formula():
    h = punctured_plane_map()
    assert h.evaluate((1, 1)) == (0, -1)
    assert h.components == parse_expression("(x*y-1, (x*y-1)*x^2-y)", XY).components


def test_punctured_plane_misses_origin():
    assert punctured_plane_certificate()
    h = punctured_plane_map()
    rng = random.Random(0)
    for _ in range(10_000):
        p = (Fraction(rng.randint(-50, 50), rng.randint(1, 9)), Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
        assert h.evaluate(p) != (0, 0)


def test_punctured_plane_attains_targets():
    rng = random.Random(1)
    with mpmath.workdps(50):
        for _ in range(100):
            target = (Fraction(rng.randint(-40, 40), 7), Fraction(rng.randint(-40, 40), 3))
            if target == (0, 0):
                continue
            x, y = punctured_preimage(target)
            a, b = x * y - 1, (x * y - 1) * x * x - y
            assert abs(a - target[0].numerator / mpmath.mpf(target[0].denominator)) < 1e-30
            assert abs(b - target[1].numerator / mpmath.mpf(target[1].denominator)) < 1e-30
    with pytest.raises(PipelineError):
        punctured_preimage((0, 0))


# base map onto the complement of the open cone -----------------------------------------


def test_base_map_image_avoids_open_cone():
    base = base_map()
    rng = random.Random(2)
    for _ in range(2000):
        p = (Fraction(rng.randint(-60, 60), rng.randint(1, 6)), Fraction(rng.randint(-60, 60), rng.randint(1, 6)))
        assert not in_open_cone(base.evaluate(p))


def test_base_map_attains_targets_outside_cone():
    base = base_map()
    rng = random.Random(3)
    hits = 0
    with mpmath.workdps(60):
        while hits < 200:
            y = (Fraction(rng.randint(-90, 90), 9), Fraction(rng.randint(-90, 90), 9))
            if in_open_cone(y):
                continue
            hits += 1
            src = base_preimage(y, 60)
            got = [c.num.evaluate(src) / c.den.evaluate(src) for c in base.components]
            assert max(abs(g - mpmath.mpf(t.numerator) / t.denominator) for g, t in zip(got, y)) < 1e-20


# complement pipeline --------------------------------------------------------------------


@pytest.fixture(scope="module")
def origin_pipeline():
    return complement_map([(0, 0)], seed=0)


@pytest.fixture(scope="module")
def three_point_pipeline():
    return complement_map([(2, 0), (-2, 0), (0, 5)], seed=0)


def test_origin_pipeline_symbolic_checks(origin_pipeline):
    checks = origin_pipeline.verify_symbolic()
    assert all(checks.values()), checks
    assert len(origin_pipeline.directions) <= 3


def test_three_point_pipeline_symbolic_checks(three_point_pipeline):
    checks = three_point_pipeline.verify_symbolic()
    assert all(checks.values()), checks
    for stage in three_point_pipeline.stages:
        # last coordinate of f' - id is divisible by G^2
        comps = stage.stage_prime.components
        diff = comps[-1].num - comps[-1].den * parse_expression("y", XY)
        assert divides(stage.G * stage.G, diff)


def test_stage_fixes_projected_lines(three_point_pipeline):
    for stage in three_point_pipeline.stages:
        for q in stage.projected:
            for h in (Fraction(-3), Fraction(1, 2), Fraction(7)):
                point = tuple(q) + (h,)
                assert tuple(stage.stage_prime.evaluate(point)) == point


def test_pipeline_avoids_points(origin_pipeline, three_point_pipeline):
    for pipe in (origin_pipeline, three_point_pipeline):
        certified, hits = pipe.avoidance_sample(500, seed=4)
        assert certified == 500 and hits == []


def test_pipeline_attains_targets(three_point_pipeline):
    rng = random.Random(5)
    targets = [(Fraction(rng.randint(-50, 50), 5), Fraction(rng.randint(-50, 50), 5)) for _ in range(15)]
    targets = [t for t in targets if t not in three_point_pipeline.points]
    residuals = three_point_pipeline.attain(targets, dps=80)
    assert max(residuals) < 1e-6


def test_pipeline_exact_evaluation_matches_numeric(origin_pipeline):
    p = (Fraction(1, 3), Fraction(-2, 5))
    exact = origin_pipeline.evaluate(p)
    with mpmath.workdps(60):
        approx = origin_pipeline.evaluate_numeric(tuple(mpmath.mpf(c.numerator) / c.denominator for c in p))
        for e, a in zip(exact, approx):
            assert abs(mpmath.mpf(e.numerator) / e.denominator - a) < mpmath.mpf(10) ** -40


def test_empty_set_uses_single_direction():
    pipe = complement_map([], n=2, seed=0)
    assert len(pipe.stages) == 1
    assert all(pipe.verify_symbolic().values())


def test_complement_requires_plane_base():
    with pytest.raises(PipelineError):
        complement_map([(0, 0, 0)])


@settings(max_examples=5)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=4, unique=True),
       st.integers(0, 1000))
def test_direction_validation_recovers_points(points, seed):
    pipe = complement_map(points, seed=seed)
    assert lines_recover_points(pipe.squeezed, pipe.directions)
    assert len(pipe.directions) <= pipe.n + 1
    assert all(s.lam > 0 and s.mu > 0 for s in pipe.stages)


# open quadrant maps ---------------------------------------------------------------------


def test_quadrant_special_values():
    f, g = quadrant_maps()
    assert f.evaluate((0, 0)) == (1, 1)
    assert g.evaluate((1, 1)) == (Fraction(4, 5), Fraction(4, 5))
    assert f.swap_symmetric() and g.swap_symmetric()


def test_f_on_the_x_axis():
    f, _ = quadrant_maps()
    edge = parse_expression("(t, 0)", ("t",))
    expected = parse_ratfunc("1/(t^2+1)", ("t",))
    assert [substitute(c, edge) for c in f.components] == [expected, expected]


def test_g_positivity_certificate():
    cert = regular_positivity_certificate()
    assert cert == {"denominator_zero_free": True, "first": True, "second": True, "ok": True}


def test_components_positive_on_random_points():
    f, g = quadrant_maps()
    rng = random.Random(6)
    for _ in range(5000):
        p = (Fraction(rng.randint(-99, 99), rng.randint(1, 9)), Fraction(rng.randint(-99, 99), rng.randint(1, 9)))
        assert all(v > 0 for v in f.evaluate(p))
        assert all(v > 0 for v in g.evaluate(p))


@pytest.mark.parametrize("target,which", [((1, 1), "f"), ((1, 2), "f"), ((Fraction(3), Fraction(1, 2)), "g"),
                                          ((5, 1), "f"), ((1, 5), "g"), ((Fraction(1, 3), Fraction(1, 3)), "g")])
def test_witness_examples(target, which):
    res = quadrant_witness(WitnessRequest(target, map=which, tol=1e-9))
    assert res.residual < 1e-9
    assert all(isinstance(c, Fraction) for c in res.point)
    f, g = quadrant_maps()
    value = (f if which == "f" else g).evaluate(res.point)
    assert max(abs(float(v - Fraction(t))) for v, t in zip(value, target)) < 1e-9


def test_witness_bracket_shrinks_monotonically():
    res = quadrant_witness(WitnessRequest((Fraction(7, 2), Fraction(2, 3)), map="f"))
    assert all(b <= a for a, b in zip(res.widths, res.widths[1:]))


def test_witness_agrees_with_newton_oracle():
    # an independent solver started at the witness converges to a point with the same value
    f, _ = quadrant_maps()
    target = (Fraction(2), Fraction(7))
    res = quadrant_witness(WitnessRequest(target, map="f"))

    def fn(p):
        x, y = p
        c = (x * y + 1) ** 2 / ((x + y) ** 2 + 1)
        core = x * x * y * y / (x * x + y * y)
        return [core * x * x + c, core * y * y + c]

    start = [float(c) + 0.01 for c in res.point]
    p = newton_preimage(fn, [float(c) for c in target], start)
    with mpmath.workdps(50):
        assert max(abs(v - float(t)) for v, t in zip(fn(p), target)) < 1e-20
    assert max(abs(float(a) - float(b)) for a, b in zip(p, res.point)) < 1e-6


def test_witness_errors():
    with pytest.raises(WitnessError):
        quadrant_witness(WitnessRequest((0, 1), map="f"))
    with pytest.raises(WitnessError):
        quadrant_witness(WitnessRequest((3, 1), map="f", max_iter=5))
    with pytest.raises(ValueError):
        WitnessRequest((1, 1), tol=0)


def test_to_fraction_is_exact():
    with mpmath.workdps(30):
        x = mpmath.mpf(1) / 3
        q = to_fraction(x)
        assert mpmath.mpf(q.numerator) / q.denominator == x


# composing with a map onto the complement of the indeterminacy --------------------------


def test_compose_quadrant_map_with_punctured_plane():
    f, _ = quadrant_maps()
    report = dense_image_compose(f.components, [(0, 0)], samples=100, seed=7)
    assert report.regular
    assert report.max_residual < 1e-9


def test_compose_with_empty_indeterminacy_is_identity():
    _, g = quadrant_maps()
    report = dense_image_compose(g.components, [])
    assert report.regular and list(report.components) == list(g.components)


def test_compose_bounded_function():
    comps = [parse_ratfunc("x^2/(x^2+y^2)", XY), RatFunc.from_poly(parse_expression("y", XY))]
    report = dense_image_compose(comps, [(0, 0)], samples=20, seed=8)
    assert report.regular and report.max_residual < 1e-9


def test_compose_needs_inner_map_for_other_sets():
    with pytest.raises(PipelineError):
        dense_image_compose([parse_ratfunc("1/(x^2+(y-1)^2)", XY)], [(0, 1)])
