"""Resolving the indeterminacy of locally bounded rational functions on the plane.

Each outer iteration finds the real zeros of the denominator, picks a
point of maximal multiplicity, moves it to the origin with an alignment
isomorphism (other zeros onto the negative ``y``-axis, a real tangent onto
the ``y``-axis) and pulls the function back through the double oriented
blow-up.  The loop stops when the denominator has no real zero.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .blowup import BLOWUP_VARS, AlignmentError, IsomorphismSpec, align_isomorphism, double_blowup_at
from .maps import MapChain, PolyMap
from .ratfunc import RatFunc, mult_at, normalize_nonneg, reduce
from .realsolve import (
    AlgebraicPoint,
    ZeroSetNotFinite,
    tangent_cone,
    zero_set_certificate,
)
from .scalar import DegreeCapExceeded, ExtensionNeeded, FieldError, sign

REGULAR = "regular"
STEP_CAP = "step-cap"
EXTENSION_CAP = "extension-cap"
NOT_LOCALLY_BOUNDED = "not-locally-bounded-suspected"


@dataclass
class ResolutionConfig:
    max_steps: int = 64
    max_ext_degree: int = 16
    seed: int = 0
    max_den_degree: int = 512
    progress_window: int = 16
    series_order: int = 12
    tol: float = 1e-9

    def __post_init__(self):
        for name in ("max_steps", "max_ext_degree", "max_den_degree", "progress_window", "series_order"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass
class ResolutionStep:
    """One recorded step.

    ``map`` is the substitution map from the new coordinates to the old
    ones, so ``function = substitute(previous function, map)``.
    """

    kind: str  # "nonneg_normalize" | "isomorphism" | "double_blowup"
    map: object
    function: RatFunc
    points: list = field(default_factory=list)  # (AlgebraicPoint, multiplicity)
    info: dict = field(default_factory=dict)


@dataclass
class ResolutionTrace:
    input: RatFunc
    steps: list
    final: RatFunc
    composite: MapChain
    status: str
    diagnostics: dict = field(default_factory=dict)
    certificate: object = None

    @property
    def blowups(self):
        return sum(1 for s in self.steps if s.kind == "double_blowup")

    @property
    def regular(self):
        return self.status == REGULAR


class RegularizationError(RuntimeError):
    def __init__(self, index, trace):
        super().__init__(f"component {index} did not resolve (status {trace.status})")
        self.index = index
        self.trace = trace


def _indeterminacy(f, cfg):
    """Real zeros of the reduced denominator with their multiplicities, and the certificate."""
    den = f.den
    cert = zero_set_certificate(den, cfg.max_ext_degree)
    return [(p, mult_at(den, p.coords)) for p in cert.zeros], cert


def _pick_center(points):
    top = max(m for _, m in points)
    best = [p for p, m in points if m == top]
    best.sort(key=lambda p: p.midpoint)
    return best[0], top, len(best)


def _alignment_spec(points, center, cone, vars):
    real = cone.real_lines
    tangent = None
    avoid = None
    if real:
        # the line of highest multiplicity, ties broken by listing order
        line = max(real, key=lambda l: l.multiplicity)
        tangent = line.direction
        if cone.complex_pairs:
            avoid = cone.lowest_form
    pts = [p for p, _ in points]
    index = pts.index(center)
    return IsomorphismSpec(pts, index, tangent=tangent, avoid_form=avoid, vars=vars)


def _den_degree(f):
    return f.den.total_degree()


def resolve(f, cfg=None):
    """Resolve the indeterminacy of ``f`` by isomorphisms and double blow-ups."""
    cfg = cfg or ResolutionConfig()
    if len(f.vars) != 2:
        raise ValueError("resolution works with rational functions of two variables")
    f_in = f
    current = reduce(f.num, f.den)
    vars = current.vars
    steps = [ResolutionStep("nonneg_normalize", PolyMap.identity(vars), normalize_nonneg(current))]
    maps = []
    ledger = []
    diagnostics = {}
    status = None
    best = None
    since_best = 0
    blowups = 0
    try:
        while True:
            points, cert = _indeterminacy(current, cfg)
            steps[-1].points = points
            if not points:
                status = REGULAR
                certificate = cert
                break
            if blowups >= cfg.max_steps:
                status = STEP_CAP
                diagnostics["reason"] = f"step cap {cfg.max_steps} reached"
                break
            if _den_degree(current) > cfg.max_den_degree:
                status = STEP_CAP
                diagnostics["reason"] = (
                    f"denominator degree {_den_degree(current)} exceeds {cfg.max_den_degree}"
                )
                break
            center, M, count = _pick_center(points)
            ledger.append((M, count))
            if best is None or (M, count) < best:
                best, since_best = (M, count), 0
            else:
                since_best += 1
                if since_best > cfg.progress_window:
                    status = STEP_CAP
                    diagnostics["reason"] = f"no progress of (multiplicity, count) in {cfg.progress_window} steps"
                    break
            cone = tangent_cone(current.den, center, cfg.max_ext_degree)
            spec = _alignment_spec(points, center, cone, current.vars)
            phi = align_isomorphism(spec, seed=cfg.seed * 1000003 + blowups, max_degree=cfg.max_ext_degree)
            info = {
                "center": str(center),
                "multiplicity": M,
                "tangent_lines": [l.as_dict() for l in cone.lines],
            }
            if not phi.is_identity():
                sub = phi.inverse
                current = sub.pullback(current)
                maps.append(sub)
                steps.append(ResolutionStep("isomorphism", sub, normalize_nonneg(current), info=info))
                info = {}
            blow = double_blowup_at((0, 0), BLOWUP_VARS)
            current = blow.pullback(current)
            maps.append(blow)
            blowups += 1
            steps.append(ResolutionStep("double_blowup", blow, normalize_nonneg(current), info=info))
    except ZeroSetNotFinite as exc:
        status = NOT_LOCALLY_BOUNDED
        diagnostics["reason"] = str(exc)
    except (DegreeCapExceeded, ExtensionNeeded) as exc:
        status = EXTENSION_CAP
        diagnostics["reason"] = str(exc)
    except (AlignmentError, FieldError) as exc:
        status = STEP_CAP
        diagnostics["reason"] = str(exc)
    diagnostics["multiplicity_ledger"] = [list(x) for x in ledger]
    composite = MapChain.of(list(reversed(maps)), vars, label="resolution")
    trace = ResolutionTrace(f_in, steps, current, composite, status, diagnostics)
    if status == REGULAR:
        trace.certificate = certificate
    return trace


def regularize_map(components, cfg=None):
    """Pull every component back to a regular function along one composite.

    Components are resolved one after the other: the ``k``-th component is
    first pulled back along the composite built so far, then resolved, and
    its resolution is appended to the composite.  Earlier pullbacks stay
    regular because regular functions pull back to regular functions.
    """
    cfg = cfg or ResolutionConfig()
    components = [c if isinstance(c, RatFunc) else RatFunc.from_poly(c) for c in components]
    if not components:
        raise ValueError("no components to regularize")
    vars = components[0].vars
    chain = MapChain.of([], vars)
    traces = []
    for k, comp in enumerate(components):
        pulled = chain.pullback(comp)
        trace = resolve(pulled, cfg)
        traces.append(trace)
        if trace.status != REGULAR:
            raise RegularizationError(k, trace)
        if not trace.composite.is_identity():
            chain = MapChain.of([trace.composite, chain], vars)
    pulled = [chain.pullback(c) for c in components]
    return chain, pulled, traces


# boundedness probe ------------------------------------------------------------------

BOUNDED = "bounded-evidence"
UNBOUNDED = "unbounded-evidence"


def _circle_points(count=16):
    # rational points on the unit circle from the parametrisation by tan(theta/2)
    pts = [(Fraction(-1), Fraction(0))]
    for k in range(count - 1):
        theta = 2 * math.pi * (k + 0.5) / count - math.pi
        u = Fraction(math.tan(theta / 2)).limit_denominator(1000)
        d = 1 + u * u
        pts.append(((1 - u * u) / d, 2 * u / d))
    return pts


def boundedness_probe(f, p, radii=None, threshold=1e6):
    """Advisory check of boundedness of ``f`` near ``p`` by sampling circles.

    Returns ``(verdict, maxima)`` where ``maxima`` lists the largest
    ``|f|`` seen on each circle.
    """
    if radii is None:
        radii = [Fraction(1, 2**k) for k in range(2, 22, 2)]
    coords = p.coords if isinstance(p, AlgebraicPoint) else tuple(p)
    maxima = []
    for r in radii:
        best = 0.0
        for cx, cy in _circle_points():
            pt = (coords[0] + r * cx, coords[1] + r * cy)
            d = f.den.evaluate(pt)
            if d == 0:
                continue
            v = f.num.evaluate(pt) / d
            best = max(best, abs(float(v)) if sign(v) else 0.0)
        maxima.append(best)
    growing = all(b > a for a, b in zip(maxima, maxima[1:]))
    verdict = UNBOUNDED if growing and maxima and maxima[-1] > threshold else BOUNDED
    return verdict, maxima
