"""The double oriented blow-up and the isomorphisms used around it.

The blow-up is ``pi(rho, t) = (2 rho t/(t^2+1), rho (t^2-1)/(t^2+1))``.
Its restriction to the axis ``t = 0`` is ``rho -> (0, -rho)``, which is
why the alignment isomorphisms park the remaining indeterminacy points
on the nonpositive ``y``-axis before each blow-up.
"""

import random
from dataclasses import dataclass, replace
from fractions import Fraction

from . import upoly
from .maps import MapChain, PolyMap, linear_map, translation
from .mpoly import MPoly
from .ratfunc import RatFunc, substitute
from .realsolve import AlgebraicPoint
from .scalar import DEFAULT_MAX_DEGREE, as_scalar, embed_common, sign

BLOWUP_VARS = ("rho", "t")


class AlignmentError(RuntimeError):
    pass


def _coords(p):
    return tuple(p.coords) if isinstance(p, AlgebraicPoint) else tuple(as_scalar(c) for c in p)


def double_blowup_at(p=(0, 0), vars=BLOWUP_VARS):
    """The blow-up map centred at ``p``: ``p + pi(rho, t)``."""
    a, b = _coords(p)
    rho, t = MPoly.gens(vars)
    den = t * t + 1
    comps = [
        RatFunc(rho * t * 2 + den * a, den),
        RatFunc(rho * (t * t - 1) + den * b, den),
    ]
    return PolyMap(vars, comps, label="double_blowup")


def jacobian_matrix(m):
    return [[c.diff(v) for v in m.domain_vars] for c in m.components]


def jacobian_det(m):
    if m.n != 2 or m.m != 2:
        raise ValueError("jacobian determinant needs a map from the plane to the plane")
    (a, b), (c, d) = jacobian_matrix(m)
    return a * d - b * c


# alignment isomorphisms --------------------------------------------------------


@dataclass
class IsomorphismSpec:
    """Constraints for an isomorphism of the plane.

    ``points[index]`` must go to ``target_point``; every other point must
    land on the open half-line ``target_point + s * target_direction``
    (``s > 0``).  If ``tangent`` (a direction vector at the distinguished
    point) is given, the differential must carry it onto the target line.
    If ``avoid_form`` (a binary form at the distinguished point) is given,
    none of its complex linear factors may be carried onto ``x +- i y``.
    """

    points: list
    index: int = 0
    target_point: tuple = (Fraction(0), Fraction(0))
    target_direction: tuple = (Fraction(0), Fraction(-1))
    tangent: tuple = None
    avoid_form: MPoly = None
    vars: tuple = ("x", "y")

    def __post_init__(self):
        self.points = [_coords(p) for p in self.points]
        if not 0 <= self.index < len(self.points):
            raise ValueError("distinguished index outside the point list")
        self.target_point = tuple(as_scalar(c) for c in self.target_point)
        self.target_direction = tuple(as_scalar(c) for c in self.target_direction)
        if all(c == 0 for c in self.target_direction):
            raise ValueError("target direction must be nonzero")
        if self.tangent is not None:
            self.tangent = tuple(as_scalar(c) for c in self.tangent)
            if all(c == 0 for c in self.tangent):
                raise ValueError("tangent direction must be nonzero")


def _gauss_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _form_at_complex(form, z):
    """Value of a binary form at a point with Gaussian coordinates ``z``."""
    re, im = 0, 0
    for e, c in form.terms.items():
        acc = (Fraction(1), Fraction(0))
        for zi, k in zip(z, e):
            for _ in range(k):
                acc = _gauss_mul(acc, zi)
        re = re + c * acc[0]
        im = im + c * acc[1]
    return re, im


def _inverse_2x2(m):
    (a, b), (c, d) = m
    det = a * d - b * c
    return [[d / det, -b / det], [-c / det, a / det]]


def verify_alignment(phi, spec):
    """Check every post-condition of an alignment isomorphism exactly.

    Returns a list of violated conditions (empty when ``phi`` is valid).
    """
    bad = []
    if phi.inverse is None or not phi.check_inverse():
        bad.append("inverse")
    q = spec.target_point
    d = spec.target_direction
    p0 = spec.points[spec.index]
    if tuple(phi.evaluate(p0)) != q:
        bad.append("distinguished point")
    for i, p in enumerate(spec.points):
        if i == spec.index:
            continue
        w = [c - qc for c, qc in zip(phi.evaluate(p), q)]
        cross = w[0] * d[1] - w[1] * d[0]
        dot = w[0] * d[0] + w[1] * d[1]
        if cross != 0 or sign(dot) <= 0:
            bad.append(f"point {i} off the half-line")
    D = phi.differential(p0)
    if spec.tangent is not None:
        l = spec.tangent
        img = (D[0][0] * l[0] + D[0][1] * l[1], D[1][0] * l[0] + D[1][1] * l[1])
        if img[0] * d[1] - img[1] * d[0] != 0:
            bad.append("tangent")
    if spec.avoid_form is not None:
        Dinv = _inverse_2x2(D)
        # old-coordinate direction of the new isotropic direction (1, i)
        z = ((Dinv[0][0], Dinv[0][1]), (Dinv[1][0], Dinv[1][1]))
        re, im = _form_at_complex(spec.avoid_form, z)
        if re == 0 and im == 0:
            bad.append("isotropic avoidance")
    return bad


def _interpolate_through_origin(nodes, values, slope):
    """Polynomial ``P`` with ``P(0) = 0``, ``P'(0) = slope`` and ``P(n_i) = v_i``."""
    xs = [Fraction(0)] + list(nodes)
    ys = [slope] + [v / n for n, v in zip(nodes, values)]
    return upoly.mul([Fraction(0), Fraction(1)], upoly.interpolate(xs, ys))


def _shear(poly, vars, along):
    """``(x, y) -> (x, y - P(x))`` (``along=1``) or ``(x - P(y), y)`` (``along=0``)."""
    x, y = MPoly.gens(vars)
    P = MPoly.from_univariate(poly, vars[1 - along], vars) if poly else MPoly.zero(vars)
    if along == 1:
        fwd = PolyMap(vars, [x, y - P], label="shear")
        inv = PolyMap(vars, [x, y + P], label="shear")
    else:
        fwd = PolyMap(vars, [x - P, y], label="shear")
        inv = PolyMap(vars, [x + P, y], label="shear")
    fwd.inverse, inv.inverse = inv, fwd
    fwd.verified = inv.verified = True
    return fwd


def _apply_matrix(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def _draw_matrix(rng, attempt, tangent):
    if attempt == 0:
        if tangent is None or tangent[0] == 0:
            return ((1, 0), (0, 1))
        # a rotation-scaling carrying the tangent to the vertical direction
        l1, l2 = tangent
        return ((l2, -l1), (l1, l2))
    while True:
        m = tuple(tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(2))
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0:
            return m


def _ray_matrices(others, p0, rng, count=8):
    """Linear maps sending a common ray of the other points onto the negative ``y``-axis.

    Yields nothing unless every other point lies on one open ray from ``p0``;
    an affine alignment then avoids the degree growth of the shears.
    """
    if not others:
        return
    rays = [(p[0] - p0[0], p[1] - p0[1]) for p in others]
    r = rays[0]
    for w in rays[1:]:
        if w[0] * r[1] - w[1] * r[0] != 0 or sign(w[0] * r[0] + w[1] * r[1]) <= 0:
            return
    # columns: r -> (0, -1) and the normal (-r1, r0) -> (a, b) with a != 0
    inv = _inverse_2x2(((r[0], -r[1]), (r[1], r[0])))
    for k in range(count):
        a, b = (Fraction(1), Fraction(0)) if k == 0 else (Fraction(rng.choice([-3, -2, -1, 1, 2, 3])),
                                                          Fraction(rng.randint(-3, 3)))
        image = ((0, a), (-1, b))
        yield tuple(tuple(sum(image[i][j] * inv[j][c] for j in range(2)) for c in range(2)) for i in range(2))


def _draw_int(rng, attempt, avoid=None):
    v = Fraction(0) if attempt == 0 else Fraction(rng.randint(-4, 4))
    while avoid is not None and v == avoid:
        v = Fraction(rng.randint(-4, 4))
    return v


def align_isomorphism(spec, seed=0, retries=32, max_degree=DEFAULT_MAX_DEGREE):
    """An isomorphism of the plane meeting ``spec``, with its exact inverse.

    The construction is: translate the distinguished point to the origin,
    apply a linear change making the other abscissae distinct, nonzero and
    of distinct squares, shear ``y`` so that they sit on the parabola
    ``y = -x^2``, then shear ``x`` to move them onto the negative
    ``y``-axis.  The free slopes of the two interpolants decide where the
    tangent goes.  A final similarity moves the negative ``y``-axis onto
    the requested half-line.  Candidates are verified exactly and redrawn
    from ``seed`` on failure.
    """
    vars = spec.vars
    ident = MapChain.of([], vars, label="alignment")
    if not verify_alignment(ident, spec):
        return ident
    rng = random.Random(seed)
    flat = [c for p in spec.points for c in p] + list(spec.tangent or ())
    flat = embed_common(flat, max_degree)
    pts = [tuple(flat[2 * i: 2 * i + 2]) for i in range(len(spec.points))]
    tangent = tuple(flat[2 * len(pts):]) or None
    # candidates carry coefficients of the common field, so verify against the embedded points
    spec = replace(spec, points=pts, tangent=tangent)
    p0 = pts[spec.index]
    others = [p for i, p in enumerate(pts) if i != spec.index]
    d = spec.target_direction
    final = linear_map(((-d[1], -d[0]), (d[0], -d[1])), vars, shift=spec.target_point)
    last = None
    for A in _ray_matrices(others, p0, rng):
        steps = [translation([-p0[0], -p0[1]], vars), linear_map(A, vars), final]
        phi = MapChain.of(steps, vars, label="alignment")
        if not verify_alignment(phi, spec):
            return phi
    for attempt in range(retries):
        A = _draw_matrix(rng, attempt, tangent)
        moved = [_apply_matrix(A, (p[0] - p0[0], p[1] - p0[1])) for p in others]
        abscissae = [m[0] for m in moved]
        squares = [a * a for a in abscissae]
        if any(a == 0 for a in abscissae) or len(set(squares)) != len(squares):
            last = "abscissae"
            continue
        if tangent is not None:
            l = _apply_matrix(A, tangent)
            if l[0] == 0:
                p_slope, r_slope = _draw_int(rng, attempt), Fraction(0)
            else:
                p_slope = _draw_int(rng, attempt, avoid=l[1] / l[0])
                r_slope = l[0] / (l[1] - p_slope * l[0])
        else:
            p_slope = _draw_int(rng, attempt)
            r_slope = _draw_int(rng, attempt)
        P = _interpolate_through_origin(abscissae, [m[1] + a * a for m, a in zip(moved, abscissae)], p_slope)
        R = _interpolate_through_origin([-s for s in squares], abscissae, r_slope)
        steps = [
            translation([-p0[0], -p0[1]], vars),
            linear_map(A, vars),
            _shear(P, vars, 1),
            _shear(R, vars, 0),
            final,
        ]
        phi = MapChain.of(steps, vars, label="alignment")
        problems = verify_alignment(phi, spec)
        if not problems:
            return phi
        last = ", ".join(problems)
    raise AlignmentError(f"avoidance constraint unsatisfied after {retries} draws ({last})")


# the cone squeeze ---------------------------------------------------------------


def cone_squeeze(X, n=None, vars=None):
    """A polynomial automorphism moving ``X`` into the cone ``|x_n| < x_(n-1)``.

    Returns ``(phi, eps)`` with
    ``phi(x) = (x_1..x_(n-2), x_(n-1) + (2/eps)(5/4 + x_1^2+..+x_(n-2)^2 + x_n^2), x_n)``.
    """
    X = [tuple(as_scalar(c) for c in p) for p in X]
    if n is None:
        if not X:
            raise ValueError("dimension is needed for an empty point set")
        n = len(X[0])
    if n < 2:
        raise ValueError("the cone squeeze needs n >= 2")
    vars = tuple(vars) if vars else tuple(f"x{i + 1}" for i in range(n))
    gens = MPoly.gens(vars)
    eps = Fraction(1, 2)
    if not X:
        return PolyMap.identity(vars), eps
    while True:
        bump = MPoly.const(Fraction(5, 4), vars) + gens[n - 1] * gens[n - 1]
        for g in gens[: n - 2]:
            bump = bump + g * g
        bump = bump * (2 / eps)
        fwd = PolyMap(vars, gens[: n - 2] + [gens[n - 2] + bump, gens[n - 1]], label="cone_squeeze")
        inv = PolyMap(vars, gens[: n - 2] + [gens[n - 2] - bump, gens[n - 1]], label="cone_squeeze")
        fwd.inverse, inv.inverse = inv, fwd
        fwd.verified = inv.verified = True
        if all(_in_open_cone(fwd.evaluate(p)) for p in X):
            return fwd, eps
        eps /= 2


def _in_open_cone(p):
    return -p[-2] < p[-1] < p[-2]


# the classical blow-up factorisation --------------------------------------------


@dataclass
class IdentityCheck:
    ok: bool
    failures: list

    def __bool__(self):
        return self.ok


def classical_factorization_check():
    """Verify symbolically that the blow-up factors through the classical one.

    ``psi(rho, t) = (pi(rho, t), [2t : t^2 - 1])`` must land on
    ``{x v = y u}``, project onto ``pi``, and be invariant under
    ``(rho, t) -> (-rho, -1/t)``.
    """
    vars = BLOWUP_VARS
    rho, t = MPoly.gens(vars)
    pi = double_blowup_at((0, 0), vars)
    x, y = pi.components
    u = RatFunc.from_poly(t * 2)
    v = RatFunc.from_poly(t * t - 1)
    failures = []
    incidence = x * v - y * u
    if incidence != 0:
        failures.append(f"x v - y u = {incidence}")
    sigma_psi = (x, y)
    if tuple(sigma_psi) != tuple(pi.components):
        failures.append("first factor differs from pi")
    flip = [RatFunc.from_poly(-rho), RatFunc(MPoly.const(-1, vars), t)]
    for name, comp in (("x", x), ("y", y)):
        moved = substitute(comp, flip)
        if moved != comp:
            failures.append(f"{name} not invariant: {moved - comp}")
    u2, v2 = substitute(u, flip), substitute(v, flip)
    cross = u2 * v - v2 * u
    if cross != 0:
        failures.append(f"projective factor not invariant: {cross}")
    return IdentityCheck(not failures, failures)
