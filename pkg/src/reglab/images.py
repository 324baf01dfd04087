"""Polynomial and regular maps with prescribed images.

Three constructions live here:

* a polynomial map of the plane whose image avoids a finite set ``X``,
  built from a base map onto the complement of an open cone and one
  stage per projection direction;
* the punctured plane map and two maps onto the open quadrant, with
  solvers that produce explicit preimages of quadrant targets;
* the composition of a map with isolated indeterminacy and a map onto
  the complement of that indeterminacy.
"""

import functools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import mpoly
from .blowup import cone_squeeze
from .maps import MapChain, PolyMap
from .mpoly import MPoly
from .ratfunc import RatFunc, substitute
from .realsolve import is_real_zero_free
from .scalar import as_scalar


class PipelineError(RuntimeError):
    pass


class WitnessError(RuntimeError):
    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


# numeric evaluation ------------------------------------------------------------


def to_fraction(x):
    """Exact value of an mpmath real as a Fraction."""
    x = mpmath.mpf(x)
    man, exp = x.man_exp
    if man == 0:
        return Fraction(0)
    return Fraction(man) * Fraction(2) ** exp


def _mpf(c):
    """An mpmath real from a rational or an mpmath real."""
    if isinstance(c, mpmath.mpf):
        return c
    c = Fraction(as_scalar(c))
    return mpmath.mpf(c.numerator) / c.denominator


def _num(ctx, c):
    return _constant(ctx, getattr(ctx, "prec", None), Fraction(c))


@functools.lru_cache(maxsize=8192)
def _constant(ctx, prec, c):
    # prec is part of the key because interval endpoints depend on it
    return ctx.mpf(c.numerator) / c.denominator


class NumericMap:
    """A rational map compiled for evaluation in an mpmath context (``mp`` or ``iv``)."""

    def __init__(self, polymap):
        self.terms = []
        for comp in polymap.components:
            self.terms.append((list(comp.num.terms.items()), list(comp.den.terms.items())))

    def evaluate(self, point, ctx=mpmath.mp):
        pows = [dict() for _ in point]

        def poly(terms):
            acc = ctx.mpf(0)
            for e, c in terms:
                t = _num(ctx, c)
                for i, k in enumerate(e):
                    if k:
                        p = pows[i].get(k)
                        if p is None:
                            p = pows[i][k] = point[i] ** k
                        t = t * p
                acc = acc + t
            return acc

        return tuple(poly(n) / poly(d) for n, d in self.terms)


def _excludes(box, point, ctx):
    """Whether an interval box certainly misses a rational point."""
    for b, p in zip(box, point):
        p = _num(ctx, p)
        if b.b < p.a or b.a > p.b:
            return True
    return False


# the base map onto the complement of the open cone ---------------------------


def base_map(vars=("x", "y")):
    """A polynomial map of the plane onto ``R^2 minus {|y| < x}``.

    It is ``L o cube o square``: ``(a, b) -> (a^2, b^2)`` fills the closed
    quadrant, the complex cube ``(p + iq)^3`` spreads it over the angles
    ``[0, 3 pi/2]`` and ``L(X, Y) = (X - Y, X + Y)`` turns the missing open
    quadrant into the open cone.
    """
    a, b = MPoly.gens(vars)
    p, q = a * a, b * b
    re = p * p * p - p * q * q * 3
    im = p * p * q * 3 - q * q * q
    return PolyMap(vars, [re - im, re + im], label="base")


def in_open_cone(point):
    return -point[-2] < point[-1] < point[-2]


def base_preimage(target, dps=50):
    """A point mapped by :func:`base_map` to ``target`` (outside the open cone)."""
    with mpmath.workdps(dps):
        x, y = (_mpf(c) for c in target)
        X, Y = (x + y) / 2, (y - x) / 2
        r = mpmath.hypot(X, Y)
        if r == 0:
            return (mpmath.mpf(0), mpmath.mpf(0))
        angle = mpmath.atan2(Y, X)
        if angle < 0:
            angle += 2 * mpmath.pi
        if angle > 3 * mpmath.pi / 2:
            if angle < 2 * mpmath.pi - mpmath.mpf(10) ** (-dps // 2):
                raise PipelineError("target lies in the open cone, outside the base image")
            angle = mpmath.mpf(0)
        root = mpmath.cbrt(r)
        p, q = root * mpmath.cos(angle / 3), root * mpmath.sin(angle / 3)
        return (mpmath.sqrt(max(p, 0)), mpmath.sqrt(max(q, 0)))


# directions and projections ------------------------------------------------------


def direction_isomorphism(v, vars):
    """The linear isomorphism fixing ``{x_n = 0}`` and sending ``v`` to ``e_n``."""
    v = [as_scalar(c) for c in v]
    if v[-1] == 0:
        raise ValueError("direction must leave the hyperplane x_n = 0")
    gens = MPoly.gens(vars)
    last = gens[-1]
    fwd = PolyMap(vars, [g - last * (c / v[-1]) for g, c in zip(gens[:-1], v)] + [last * (1 / v[-1])],
                  label="direction")
    inv = PolyMap(vars, [g + last * c for g, c in zip(gens[:-1], v)] + [last * v[-1]], label="direction")
    fwd.inverse, inv.inverse = inv, fwd
    fwd.verified = inv.verified = True
    return fwd


def project_along(v, p):
    """Projection of ``p`` onto ``{x_n = 0}`` parallel to ``v`` (first ``n-1`` coordinates)."""
    s = Fraction(p[-1]) / v[-1]
    return tuple(Fraction(c) - s * w for c, w in zip(p[:-1], v[:-1]))


def draw_direction(rng, n, height=9):
    """A random rational vector in ``{x_n > |x_(n-1)|}``."""

    def rat():
        return Fraction(rng.randint(-height, height), rng.randint(1, height))

    v = [rat() for _ in range(n - 1)]
    v.append(abs(v[-1]) + Fraction(rng.randint(1, height), rng.randint(1, height)))
    return tuple(v)


def _line_meet(p, v, q, w):
    # p + s v = q + t w, solved exactly; None if the lines do not meet in one point
    n = len(p)
    rhs = [Fraction(q[i]) - p[i] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            det = -v[i] * w[j] + v[j] * w[i]
            if det == 0:
                continue
            s = (-rhs[i] * w[j] + rhs[j] * w[i]) / det
            t = (v[i] * rhs[j] - v[j] * rhs[i]) / det
            if all(p[k] + s * v[k] == q[k] + t * w[k] for k in range(n)):
                return tuple(Fraction(p[k]) + s * v[k] for k in range(n))
            return None
    return None


def lines_recover_points(points, directions):
    """Exact test that the lines through ``points`` along every direction meet only in ``points``."""
    points = {tuple(Fraction(c) for c in p) for p in points}
    if not points:
        return len(directions) >= 1
    if len(directions) < 2:
        return False
    v, w = directions[0], directions[1]
    if all(a * w[-1] == b * v[-1] for a, b in zip(v, w)):
        return False  # parallel directions
    projections = [{project_along(d, p) for p in points} for d in directions]
    for p in points:
        for q in points:
            z = _line_meet(p, v, q, w)
            if z is None or z in points:
                continue
            if all(project_along(d, z) in proj for d, proj in zip(directions, projections)):
                return False
    return True


# the stages ----------------------------------------------------------------------


@dataclass
class ComplementStage:
    direction: tuple
    lam: Fraction
    mu: Fraction
    projected: list  # projections of the squeezed points, without repetitions
    H: MPoly
    G: MPoly
    iso: PolyMap  # phi_v
    stage_prime: PolyMap  # (x', x_n (1 - H^2 G^2))

    @property
    def chain(self):
        return MapChain([self.iso, self.stage_prime, self.iso.inverse], label="stage")

    def fixes_zero_set(self):
        """``stage_prime`` is the identity on ``{G = 0}``: its last coordinate
        differs from ``x_n`` by a multiple of ``G^2`` and the others are coordinates."""
        vars = self.iso.domain_vars
        gens = MPoly.gens(vars)
        comps = [c.as_poly() for c in self.stage_prime.components]
        if any(c != g for c, g in zip(comps[:-1], gens[:-1])):
            return False
        diff = comps[-1] - gens[-1]
        return diff.is_zero() or mpoly.divides(self.G * self.G, diff)

    def apply(self, point, ctx=mpmath.mp):
        """Structural evaluation of ``iso^-1 o stage_prime o iso``."""
        v = [_num(ctx, c) for c in self.direction]
        n = len(point)
        s = point[-1] / v[-1]
        w = [point[i] - s * v[i] for i in range(n - 1)] + [s]
        g = ctx.mpf(1)
        for q in self.projected:
            d = ctx.mpf(0)
            for wi, qi in zip(w[:-1], q):
                d = d + (wi - _num(ctx, qi)) ** 2
            g = g * d
        h = (w[-2] - _num(ctx, self.lam) * w[-1]) * (w[-2] + _num(ctx, self.mu) * w[-1])
        w[-1] = w[-1] * (1 - h * h * g * g)
        return tuple(w[i] + w[-1] * v[i] for i in range(n - 1)) + (w[-1] * v[-1],)

    def preimage(self, point, dps=50):
        """A preimage of ``point`` lying outside the interior of the cone, or the point itself
        when it sits over a projected point."""
        with mpmath.workdps(dps):
            v = [_mpf(c) for c in self.direction]
            n = len(point)
            s = point[-1] / v[-1]
            w = [point[i] - s * v[i] for i in range(n - 1)]
            g = mpmath.mpf(1)
            for q in self.projected:
                g *= sum((wi - _mpf(qi)) ** 2 for wi, qi in zip(w, q))
            lam, mu = _mpf(self.lam), _mpf(self.mu)
            a = w[-1]
            # H(a, t) = a^2 + (mu - lam) a t - lam mu t^2
            h = [a * a, (mu - lam) * a, -lam * mu]
            h2 = [sum(h[i] * h[k - i] for i in range(3) if 0 <= k - i < 3) for k in range(5)]
            # Q(t) - s = t - g^2 t H^2 - s, coefficients from the top degree down
            coeffs = [-(g * g) * c for c in reversed(h2)] + [mpmath.mpf(0)]
            coeffs[-2] += 1
            coeffs[-1] -= s
            while coeffs and abs(coeffs[0]) == 0:
                coeffs.pop(0)
            found = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps) if len(coeffs) > 1 else []
            best, margin = None, None
            for r in found:
                if abs(mpmath.im(r)) > mpmath.mpf(10) ** (-dps // 3) * (1 + abs(r)):
                    continue
                t = mpmath.re(r)
                # outside the interior of the transformed cone
                m = -min(a - lam * t, a + mu * t)
                if margin is None or m > margin:
                    best, margin = t, m
            if best is None or margin < -mpmath.mpf(10) ** (-dps // 3):
                if g < mpmath.mpf(10) ** (-dps // 3):
                    return tuple(point)
                raise PipelineError("no stage preimage outside the cone")
            return tuple(w[i] + best * v[i] for i in range(n - 1)) + (best * v[-1],)


def to_fraction_any(c):
    return c if isinstance(c, Fraction) else to_fraction(c)


def build_stage(direction, points, vars):
    """The stage for one direction and the squeezed points."""
    n = len(vars)
    lam = direction[-1] - direction[-2]
    mu = direction[-1] + direction[-2]
    if lam <= 0 or mu <= 0:
        raise PipelineError("direction is outside the admissible open cone")
    iso = direction_isomorphism(direction, vars)
    gens = MPoly.gens(vars)
    projected = []
    for p in points:
        q = project_along(direction, p)
        if q not in projected:
            projected.append(q)
    projected.sort()
    G = MPoly.const(1, vars)
    for q in projected:
        G = G * sum(((gens[i] - q[i]) ** 2 for i in range(n - 1)), MPoly.zero(vars))
    H = (gens[-2] - gens[-1] * lam) * (gens[-2] + gens[-1] * mu)
    last = gens[-1] * (MPoly.const(1, vars) - H * H * G * G)
    stage_prime = PolyMap(vars, list(gens[:-1]) + [last], label="stage")
    return ComplementStage(tuple(direction), lam, mu, projected, H, G, iso, stage_prime)


# the pipeline --------------------------------------------------------------------


@dataclass
class ComplementPipeline:
    points: list
    n: int
    vars: tuple
    squeeze: PolyMap
    eps: Fraction
    squeezed: list
    directions: list
    stages: list
    base: PolyMap
    composite: MapChain
    draws: int = 0
    checks: dict = field(default_factory=dict)

    @property
    def lam_mu(self):
        return [(s.lam, s.mu) for s in self.stages]

    def evaluate(self, point):
        return self.composite.evaluate(tuple(as_scalar(c) for c in point))

    def evaluate_numeric(self, point, ctx=mpmath.mp):
        p = self._base_numeric.evaluate(point, ctx)
        for s in self.stages:
            p = s.apply(p, ctx)
        return self._unsqueeze_numeric.evaluate(p, ctx)

    def __post_init__(self):
        self._base_numeric = NumericMap(self.base)
        self._unsqueeze_numeric = NumericMap(self.squeeze.inverse)

    def verify_symbolic(self):
        """Exact checks of every stage identity and inverse."""
        checks = {
            "squeeze_inverse": self.squeeze.check_inverse(),
            "points_in_cone": all(in_open_cone(p) for p in self.squeezed),
            "lines_recover_points": lines_recover_points(self.squeezed, self.directions),
            "direction_inverses": all(s.iso.check_inverse() for s in self.stages),
            "stages_fix_zero_sets": all(s.fixes_zero_set() for s in self.stages),
            "directions_admissible": all(s.lam > 0 and s.mu > 0 for s in self.stages),
            "direction_count_bound": len(self.directions) <= self.n + 1,
        }
        rng = random.Random(1)
        agree = True
        for _ in range(3):
            pt = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(self.n))
            for s in self.stages:
                exact = s.chain.evaluate(pt)
                structural = s.apply(pt, _FractionContext)
                agree = agree and tuple(exact) == tuple(structural)
        checks["structural_matches_symbolic"] = agree
        self.checks.update(checks)
        return checks

    def preimage(self, target, dps=50):
        """A point of the source mapped near ``target`` (must avoid the point set)."""
        with mpmath.workdps(dps):
            pt = tuple(_mpf(c)
                       for c in target)
            p = NumericMap(self.squeeze).evaluate(pt)
            for s in reversed(self.stages):
                p = s.preimage(p, dps)
            return base_preimage(p, dps)

    def avoidance_sample(self, count, seed=0, height=20, prec=256):
        """Evaluate at random rational points and certify the image misses every point of X.

        Interval evaluation decides almost every sample; the rest are
        decided exactly.  Returns ``(certified, hits)``.
        """
        rng = random.Random(seed)
        hits = []
        certified = 0
        saved = mpmath.iv.prec
        mpmath.iv.prec = prec
        try:
            for _ in range(count):
                pt = tuple(Fraction(rng.randint(-height * 8, height * 8), 8) for _ in range(self.n))
                box = self.evaluate_numeric(tuple(mpmath.iv.mpf(c.numerator) / c.denominator for c in pt),
                                            mpmath.iv)
                if all(_excludes(box, x, mpmath.iv) for x in self.points):
                    certified += 1
                    continue
                exact = self.evaluate(pt)
                if tuple(exact) in {tuple(x) for x in self.points}:
                    hits.append(pt)
                else:
                    certified += 1
        finally:
            mpmath.iv.prec = saved
        return certified, hits

    def attain(self, targets, dps=50, goal=1e-12, max_dps=400):
        """Residuals ``|composite(preimage(y)) - y|`` for each target.

        The composite is badly conditioned near the stage hypersurfaces, so
        the working precision doubles until the residual reaches ``goal``.
        Residuals are measured with extra guard digits.
        """
        out = []
        for y in targets:
            work = dps
            while True:
                with mpmath.workdps(work):
                    a = self.preimage(y, work)
                with mpmath.workdps(2 * work):
                    got = self.evaluate_numeric(a)
                    res = float(max(abs(g - _mpf(as_scalar(c))) for g, c in zip(got, y)))
                if res < goal or 2 * work > max_dps:
                    break
                work *= 2
            out.append(res)
        return out


class _FractionContext:
    """Just enough of an mpmath context to run structural evaluation exactly."""

    @staticmethod
    def mpf(x):
        return Fraction(x)


def complement_map(X, base=None, seed=0, n=None, max_draws=64, vars=None):
    """A polynomial map onto the complement of the finite set ``X``.

    ``base`` must map onto the complement of ``{|x_n| < x_(n-1)}``; the
    bundled :func:`base_map` is used in the plane.
    """
    X = [tuple(as_scalar(c) for c in p) for p in X]
    if n is None:
        if not X:
            raise PipelineError("dimension is needed for an empty point set")
        n = len(X[0])
    if n < 2:
        raise PipelineError("the complement pipeline needs n >= 2")
    vars = tuple(vars) if vars else (("x", "y") if n == 2 else tuple(f"x{i + 1}" for i in range(n)))
    if base is None:
        if n != 2:
            raise PipelineError("no base map onto the cone complement is bundled for n != 2")
        base = base_map(vars)
    if len(set(X)) != len(X):
        X = list(dict.fromkeys(X))
    squeeze, eps = cone_squeeze(X, n, vars)
    squeezed = [tuple(squeeze.evaluate(p)) for p in X]
    rng = random.Random(seed)
    directions = []
    draws = 0
    while not lines_recover_points(squeezed, directions):
        if draws >= max_draws:
            raise PipelineError(f"no valid set of directions after {max_draws} draws")
        if len(directions) >= n + 1:
            directions.pop()
        directions.append(draw_direction(rng, n))
        draws += 1
    stages = [build_stage(d, squeezed, vars) for d in directions]
    factors = [base] + [s.chain for s in stages] + [squeeze.inverse]
    composite = MapChain.of(factors, vars, label="complement")
    return ComplementPipeline(X, n, vars, squeeze, eps, squeezed, directions, stages, base, composite, draws)


# the punctured plane ------------------------------------------------------------


def punctured_plane_map(vars=("x", "y")):
    """``(x, y) -> (xy - 1, (xy - 1) x^2 - y)``, whose image is the plane minus the origin."""
    x, y = MPoly.gens(vars)
    first = x * y - 1
    return PolyMap(vars, [first, first * x * x - y], label="punctured")


def punctured_plane_certificate(h=None):
    """Exact argument that the origin is not attained.

    ``h2 - x^2 h1 = -y``, so a common zero has ``y = 0``, where
    ``h1 = -1``.
    """
    h = h or punctured_plane_map()
    h1, h2 = (c.as_poly() for c in h.components)
    x, y = MPoly.gens(h.domain_vars)
    combination = h2 - x * x * h1
    on_axis = h1.compose([x, MPoly.zero(h.domain_vars)])
    return combination == -y and on_axis.is_constant() and on_axis.constant_value() != 0


def punctured_preimage(target, dps=50):
    """A real point mapped by the punctured plane map to ``target`` (not the origin)."""
    with mpmath.workdps(dps):
        a, b = (_mpf(c) for c in target)
        if a == 0 and b == 0:
            raise PipelineError("the origin is not in the image")
        if a == 0:
            x = -1 / b
            return x, -b
        # y = a x^2 - b and x y = a + 1 give a x^3 - b x - (a + 1) = 0
        best = None
        for r in mpmath.polyroots([a, 0, -b, -(a + 1)], maxsteps=200, extraprec=2 * dps):
            if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 3):
                best = mpmath.re(r)
                break
        if best is None:
            raise PipelineError("cubic has no real root")
        return best, a * best * best - b


# maps onto the open quadrant ---------------------------------------------------


class RegulousMap:
    """Rational components with prescribed values at their indeterminacy points."""

    def __init__(self, components, special_values=None, label=""):
        self.components = tuple(components)
        self.special_values = {
            tuple(as_scalar(c) for c in k): tuple(as_scalar(c) for c in v)
            for k, v in (special_values or {}).items()
        }
        self.label = label

    @property
    def vars(self):
        return self.components[0].vars

    def evaluate(self, point):
        point = tuple(as_scalar(c) for c in point)
        if point in self.special_values:
            return self.special_values[point]
        return tuple(c.evaluate(point) for c in self.components)

    def __call__(self, *point):
        return self.evaluate(point)

    def swap_symmetric(self):
        """``F(y, x)`` is ``F(x, y)`` with its coordinates exchanged."""
        x, y = MPoly.gens(self.vars)
        swapped = [substitute(c, [y, x]) for c in self.components]
        return swapped[0] == self.components[1] and swapped[1] == self.components[0]


def _quadrant_common(x, y):
    return RatFunc((x * y + 1) ** 2, (x + y) ** 2 + 1)


def quadrant_maps(vars=("x", "y")):
    """The regulous map ``f`` and the regular map ``g`` onto the open quadrant."""
    x, y = MPoly.gens(vars)
    common = _quadrant_common(x, y)
    core = RatFunc(x * x * y * y, x * x + y * y)
    f = RegulousMap(
        [core * RatFunc.from_poly(x * x) + common, core * RatFunc.from_poly(y * y) + common],
        {(0, 0): (1, 1)},
        label="f",
    )
    g = RegulousMap(
        [RatFunc.from_poly((x * (x * y - 1)) ** 2) + common,
         RatFunc.from_poly((y * (x * y - 1)) ** 2) + common],
        label="g",
    )
    return f, g


def regular_positivity_certificate(vars=("x", "y")):
    """Exact certificate that both components of ``g`` are positive everywhere.

    Each component is ``S^2 + (xy+1)^2 / (1 + (x+y)^2)``.  The denominator
    has no real zero, and a polynomial combination of ``S`` and ``xy + 1``
    equals the constant 2, so they never vanish together.
    """
    x, y = MPoly.gens(vars)
    _, g = quadrant_maps(vars)
    common = _quadrant_common(x, y)
    den_free = bool(is_real_zero_free(common.den))
    out = {"denominator_zero_free": den_free}
    for name, comp, base, mult in (
        ("first", g.components[0], x * (x * y - 1), y),
        ("second", g.components[1], y * (x * y - 1), x),
    ):
        decomposition = comp == RatFunc.from_poly(base * base) + common
        combination = base * mult - (x * y + 1) * (x * y - 2)
        out[name] = decomposition and combination == MPoly.const(2, vars)
    out["ok"] = all(out.values())
    return out


@dataclass
class WitnessRequest:
    target: tuple
    map: str = "f"  # "f" (regulous) or "g" (regular)
    tol: float = 1e-9
    max_iter: int = 10_000
    dps: int = 40

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.map not in ("f", "g"):
            raise ValueError("map must be 'f' or 'g'")
        self.target = tuple(as_scalar(c) for c in self.target)


@dataclass
class WitnessResult:
    point: tuple  # exact rationals
    residual: float
    iterations: int
    family: str
    widths: list = field(default_factory=list)  # bracket width after each bisection step

    def __iter__(self):
        return iter(self.point)


def _bisect(fn, lo, hi, req, family):
    """Bisect a sign change of ``fn`` on ``[lo, hi]`` (``fn(lo) <= 0 <= fn(hi)`` or the reverse)."""
    flo = fn(lo)
    widths = []
    it = 0
    stop = mpmath.mpf(2) ** (-3 * req.dps)
    while abs(hi - lo) > stop * (1 + abs(lo)):
        if it >= req.max_iter:
            raise WitnessError(f"bisection cap {req.max_iter} reached for {family}", (lo, hi))
        mid = (lo + hi) / 2
        fm = fn(mid)
        if fm == 0:
            lo = hi = mid
        elif (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
        widths.append(float(abs(hi - lo)))
        it += 1
    return (lo + hi) / 2, it, widths


def quadrant_witness(req):
    """An exact rational point mapped within ``req.tol`` of the target."""
    a, b = req.target
    if a <= 0 or b <= 0:
        raise WitnessError("target is outside the open quadrant")
    f, g = quadrant_maps()
    fmap = f if req.map == "f" else g
    swap = (req.map == "f" and a > b) or (req.map == "g" and a < b)
    if swap:
        a, b = b, a
    with mpmath.workdps(req.dps):
        A, B = _mpf(a), _mpf(b)
        if a == b:
            x0, y0, it, widths, family = _diagonal_witness(req.map, A, req)
        elif req.map == "f":
            x0, y0, it, widths, family = _regulous_witness(A, B, req)
        else:
            x0, y0, it, widths, family = _regular_witness(A, B, req)
        point = (to_fraction(x0), to_fraction(y0))
    if swap:
        point = (point[1], point[0])
    value = fmap.evaluate(point)
    residual = max(abs(float(v - t)) for v, t in zip(value, req.target))
    if residual > req.tol:
        raise WitnessError(f"residual {residual:.3g} exceeds tolerance {req.tol}")
    return WitnessResult(point, residual, it, family, widths)


def _diagonal_witness(which, A, req):
    if which == "f":
        if A <= 1:
            t = mpmath.sqrt(1 / A - 1)  # f(t, 0) = 1/(t^2 + 1)
            return t, mpmath.mpf(0), 0, [], "axis"

        def fn(t):
            return t**4 / 2 + (t * t + 1) ** 2 / (1 + 4 * t * t) - A

        hi = mpmath.mpf(2)
        while fn(hi) < 0:
            hi *= 2
        t, it, widths = _bisect(fn, mpmath.mpf(0), hi, req, "diagonal")
        return t, t, it, widths, "diagonal"
    four_fifths = mpmath.mpf(4) / 5
    if A >= four_fifths:

        def fn(t):
            return t * t * (t * t - 1) ** 2 + (t * t + 1) ** 2 / (1 + 4 * t * t) - A

        hi = mpmath.mpf(2)
        while fn(hi) < 0:
            hi *= 2
        t, it, widths = _bisect(fn, mpmath.mpf(1), hi, req, "diagonal")
        return t, t, it, widths, "diagonal"

    def fn(t):
        return 4 * t * t / (t * t + (t * t + 1) ** 2) - A

    t, it, widths = _bisect(fn, mpmath.mpf(0), mpmath.mpf(1), req, "hyperbola")
    return t, 1 / t, it, widths, "hyperbola"


def _regulous_witness(A, B, req):
    # a < b: y = lam x with x^4 = (1 + lam^2)(b - a) / (lam^2 (lam^2 - 1)), lam > 1
    f, _ = quadrant_maps()
    first = NumericMap(PolyMap(f.vars, f.components))

    def point(lam):
        x = mpmath.root((1 + lam * lam) * (B - A) / (lam * lam * (lam * lam - 1)), 4)
        return x, lam * x

    def fn(lam):
        return first.evaluate(point(lam))[0] - A

    lo = mpmath.mpf(2)
    while fn(lo) <= 0:
        lo = 1 + (lo - 1) / 2
        if lo - 1 < mpmath.mpf(2) ** (-2 * req.dps):
            raise WitnessError("could not bracket near lambda = 1", (lo, None))
    hi = mpmath.mpf(4)
    while fn(hi) >= 0:
        hi *= 2
        if hi > mpmath.mpf(2) ** (2 * req.dps):
            raise WitnessError("could not bracket at large lambda", (lo, hi))
    lam, it, widths = _bisect(fn, lo, hi, req, "line")
    x, y = point(lam)
    return x, y, it, widths, "line"


def _regular_witness(A, B, req):
    # a > b: y = lam / x with x^2 = r(lam), lam > 1
    def r(lam):
        c = (A - B) / (lam - 1) ** 2
        return (c + mpmath.sqrt(c * c + 4 * lam * lam)) / 2

    def fn(lam):
        x2 = r(lam)
        return (lam - 1) ** 2 * x2 + (lam + 1) ** 2 * x2 / (x2 + (x2 + lam) ** 2) - A

    lo = mpmath.mpf(2)
    while fn(lo) >= 0:
        lo = 1 + (lo - 1) / 2
        if lo - 1 < mpmath.mpf(2) ** (-2 * req.dps):
            raise WitnessError("could not bracket near lambda = 1", (lo, None))
    hi = mpmath.mpf(4)
    while fn(hi) <= 0:
        hi *= 2
    lam, it, widths = _bisect(fn, lo, hi, req, "hyperbola")
    x = mpmath.sqrt(r(lam))
    return x, lam / x, it, widths, "hyperbola"


# composing with a map onto the complement of the indeterminacy ----------------------


@dataclass
class ComposeReport:
    components: list  # RatFunc components of g = f o h
    inner: object  # the polynomial map h
    regular: bool
    certificates: list
    samples: list = field(default_factory=list)  # (target, residual)

    @property
    def max_residual(self):
        return max((r for _, r in self.samples), default=0.0)


def dense_image_compose(f, X, h=None, samples=0, seed=0, witness=None):
    """``g = f o h`` where ``h`` maps onto the plane minus the finite set ``X``.

    ``h`` defaults to the identity when ``X`` is empty and to the punctured
    plane map when ``X`` is the origin.  Every denominator of ``g`` is
    certified to have no real zero.  Sampling evidence: random points
    ``u`` off ``X`` give targets ``f(u)``, which ``g`` attains at a preimage
    of ``u`` under ``h``; ``witness`` may instead supply preimages under ``f``
    of random targets.
    """
    components = list(f.components if hasattr(f, "components") else f)
    vars = components[0].vars
    X = [tuple(as_scalar(c) for c in p) for p in X]
    preimage = None
    if h is None:
        if not X:
            h = PolyMap.identity(vars)
            preimage = lambda u, dps=50: tuple(_mpf(c) for c in u)  # noqa: E731
        elif X == [(0, 0)]:
            h = punctured_plane_map(vars)
            preimage = punctured_preimage
        else:
            raise PipelineError("supply a map onto the complement of X for this point set")
    pulled = [substitute(c, h) for c in components]
    certificates = [is_real_zero_free(c.den) for c in pulled]
    regular = all(bool(c) for c in certificates)
    report = ComposeReport(pulled, h, regular, certificates)
    if samples and preimage is not None:
        numeric_g = NumericMap(PolyMap(vars, pulled))
        numeric_f = NumericMap(PolyMap(vars, components))
        rng = random.Random(seed)
        with mpmath.workdps(50):
            while len(report.samples) < samples:
                if witness is not None:
                    target = (Fraction(rng.randint(1, 1000), 100), Fraction(rng.randint(1, 1000), 100))
                    u = tuple(_mpf(c) for c in witness(target))
                else:
                    u = (Fraction(rng.randint(-400, 400), 40), Fraction(rng.randint(-400, 400), 40))
                    if u in X:
                        continue
                    u = tuple(_mpf(c) for c in u)
                    target = numeric_f.evaluate(u)
                src = preimage(u)
                got = numeric_g.evaluate(src)
                res = max(abs(gv - (_mpf(t) if isinstance(t, Fraction) else t))
                          for gv, t in zip(got, target))
                report.samples.append((target, float(res)))
    return report
