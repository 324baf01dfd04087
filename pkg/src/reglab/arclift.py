"""Lifting analytic arcs through the double oriented blow-up.

An arc is a pair of truncated power series.  At the blow-up center the
lift solves ``rho^2 = g1^2 + g2^2`` and ``t = g1 / (rho - g2)``; the sign
of ``rho`` is free (two lifts) unless the second coordinate vanishes to
lower order than the first, in which case only ``rho ~ -b s^l`` lifts.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import roots, upoly
from .blowup import BLOWUP_VARS
from .scalar import (
    DEFAULT_MAX_DEGREE,
    ExtensionNeeded,
    FieldError,
    as_scalar,
    compositum,
    factor_rational,
    field_adjoin,
    field_of,
    minimal_polynomial,
    sign,
    sqrt_exact,
    to_float,
)
from .series import SeriesError, TruncSeries, series_sqrt


class ArcLiftError(ValueError):
    pass


class ArcGerm:
    """A plane arc ``s -> (g1(s), g2(s))`` known modulo ``s^(order+1)``.

    Arcs built from polynomials are ``exact``: their coefficients past the
    truncation order are known to vanish, so they can be re-expanded at any
    precision.
    """

    __slots__ = ("_coeffs", "order", "var", "exact", "vars")

    def __init__(self, components, order=None, var="s", exact=False, vars=("x", "y")):
        comps = [c if isinstance(c, TruncSeries) else None for c in components]
        if len(components) != 2:
            raise ArcLiftError("an arc has exactly two components")
        if order is None:
            orders = [c.order for c in comps if c is not None]
            if not orders:
                raise ArcLiftError("truncation order is required for coefficient lists")
            order = min(orders)
        self._coeffs = tuple(
            tuple(c.coeffs) if isinstance(c, TruncSeries) else tuple(as_scalar(x) for x in c)
            for c in components
        )
        self.order = order
        self.var = var
        self.exact = exact
        self.vars = tuple(vars)

    @classmethod
    def from_polys(cls, polys, order, var="s", vars=("x", "y")):
        """An exact arc from two univariate polynomials (``MPoly`` or coefficient lists)."""
        lists = []
        for p in polys:
            if hasattr(p, "univariate_coeffs"):
                lists.append(p.univariate_coeffs(var) if p.occurring_vars() else [p.constant_value()])
            else:
                lists.append([as_scalar(c) for c in p])
        return cls(lists, order, var, exact=True, vars=vars)

    def components(self, order=None):
        """The two series at ``order`` (only exact arcs can exceed their own order)."""
        order = self.order if order is None else order
        if order > self.order and not self.exact:
            raise ArcLiftError(f"arc is only known to order {self.order}")
        return tuple(TruncSeries(c, order, self.var) for c in self._coeffs)

    @property
    def base(self):
        return tuple(c[0] if c else Fraction(0) for c in self._coeffs)

    def valuations(self, center=(0, 0)):
        """Orders of vanishing of ``g - center`` per coordinate (None if zero to known order)."""
        out = []
        for s, p in zip(self.components(), center):
            out.append((s - p).valuation())
        return tuple(out)

    def __eq__(self, other):
        return isinstance(other, ArcGerm) and self.components() == other.components()

    __hash__ = None

    def __repr__(self):
        a, b = self.components()
        return f"ArcGerm({a}, {b})"


@dataclass
class Lift:
    arc: ArcGerm  # in the blow-up coordinates (rho, t)
    epsilon: object  # sign of rho, None for the designated lifts of axis arcs
    delta: object


@dataclass
class LiftSet:
    arc: ArcGerm
    lifts: list
    case: str  # which branch of the case analysis produced the lifts
    valuations: tuple = (None, None)
    notes: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.lifts)

    def __iter__(self):
        return iter(self.lifts)


# square roots -----------------------------------------------------------------


def adjoin_sqrt(c, max_degree=DEFAULT_MAX_DEGREE):
    """The positive square root of a positive scalar, adjoining it if needed.

    Returns ``(root, embed)`` where ``embed`` carries scalars of ``c``'s
    field into the field of ``root``.
    """
    try:
        return sqrt_exact(c), lambda x: x
    except ExtensionNeeded:
        pass
    if sign(c) <= 0:
        raise ArcLiftError("square root of a nonpositive number")
    m = minimal_polynomial(c)
    squared = [Fraction(0)] * (2 * len(m) - 1)
    for i, a in enumerate(m):
        squared[2 * i] = a
    target = to_float(c) ** 0.5
    for fac, _ in factor_rational(squared):
        for iv in roots.isolate_real_roots(fac):
            if iv.hi <= 0:
                continue
            lo, hi = roots.refine(fac, iv.lo, iv.hi, Fraction(1, 2**50))
            if abs(float(lo) - target) > 1e-9 * max(1.0, target):
                continue
            if upoly.deg(fac) == 1:
                continue  # a rational root would have been found by sqrt_exact
            new = field_adjoin(fac, (lo, hi), max_degree, name="r")
            base = field_of(c)
            if base is None:
                root, embed = new.gen, (lambda x: x)
            else:
                _, embed, embed_new = compositum(base, new, max_degree)
                root = embed_new(new.gen)
            if root * root == embed(c) and sign(root) > 0:
                return root, embed
    raise FieldError("could not adjoin the square root")


def _embed_series(s, embed):
    return TruncSeries([embed(c) for c in s.coeffs], s.order, s.var)


def _sqrt_series(s, max_degree):
    """``series_sqrt`` that adjoins the root of the leading coefficient when needed."""
    v = s.valuation()
    lead = s.coeffs[v]
    root, embed = adjoin_sqrt(lead, max_degree)
    return series_sqrt(_embed_series(s, embed), root=root), embed


# lifting ------------------------------------------------------------------------


def _lift_germ(rho, t, order, var):
    return ArcGerm([rho.truncate(order), t.truncate(order)], order, var, vars=BLOWUP_VARS)


def lift_arc(gamma, order=None, center=(0, 0), max_degree=DEFAULT_MAX_DEGREE):
    """All analytic lifts of ``gamma`` through the double oriented blow-up at ``center``.

    Output arcs are known to ``order`` (default: the arc's order) when the
    input arc is exact; otherwise to the precision the series operations
    can honestly carry.
    """
    N = gamma.order if order is None else order
    if N < 0:
        raise ArcLiftError("order must be nonnegative")
    center = tuple(as_scalar(c) for c in center)
    if tuple(gamma.base) != center:
        return _lift_off_center(gamma, N, center, max_degree)
    k, l = gamma.valuations(center)
    var = gamma.var
    if k is None or l is None:
        g1, g2 = [s - c for s, c in zip(gamma.components(N if gamma.exact else None), center)]
        if k is None:
            # the first coordinate vanishes: t = 0, rho = -g2
            lift = _lift_germ(-g2, TruncSeries([0], g2.order, var), g2.order, var)
            return LiftSet(gamma, [Lift(lift, None, None)], "first-zero", (k, l))
        lift = _lift_germ(g1, TruncSeries([1], g1.order, var), g1.order, var)
        return LiftSet(gamma, [Lift(lift, None, None)], "second-zero", (k, l))
    if N < max(k, l) + 2:
        raise ArcLiftError(f"order {N} too small for valuations ({k}, {l}); need at least {max(k, l) + 2}")
    work = N + 2 * max(k, l) + 2 if gamma.exact else gamma.order
    g1, g2 = [s - c for s, c in zip(gamma.components(work), center)]
    a = g1.coeffs[k]
    b = g2.coeffs[l]
    root, embed = _sqrt_series(g1 * g1 + g2 * g2, max_degree)
    g1, g2 = _embed_series(g1, embed), _embed_series(g2, embed)
    a, b = embed(a), embed(b)
    if k < l:
        # the root whose leading coefficient is a
        root = root * sign(a)
        choices = [(1, 1), (-1, -1)]
        case = "k<l"
    elif k == l:
        choices = [(1, sign(a)), (-1, -sign(a))]
        case = "k=l"
    else:
        choices = [(-sign(b), -1)]
        case = "k>l"
    lifts = []
    for eps, delta in choices:
        rho = root * eps
        t = g1 / (rho - g2)
        out = min(N, rho.order, t.order)
        lifts.append(Lift(_lift_germ(rho, t, out, var), eps, delta))
    return LiftSet(gamma, lifts, case, (k, l))


def _lift_off_center(gamma, N, center, max_degree):
    # pi is a local diffeomorphism at both preimages of a point off the center
    work = N if gamma.exact else gamma.order
    g1, g2 = [s - c for s, c in zip(gamma.components(work), center)]
    root, embed = _sqrt_series(g1 * g1 + g2 * g2, max_degree)
    g1, g2 = _embed_series(g1, embed), _embed_series(g2, embed)
    lifts = []
    for eps in (1, -1):
        rho = root * eps
        den = rho - g2
        if den.coeffs[0] == 0:
            continue  # this sign would need t = infinity
        t = g1 / den
        delta = sign(t.coeffs[0]) or 1
        out = min(N, rho.order, t.order)
        lifts.append(Lift(_lift_germ(rho, t, out, gamma.var), eps, delta))
    return LiftSet(gamma, lifts, "off-center", (None, None))


def blowup_series(rho, t, center=(0, 0)):
    """``pi(rho, t)`` for series arguments."""
    den = t * t + 1
    first = rho * t * 2 / den
    second = rho * (t * t - 1) / den
    return first + center[0], second + center[1]


def verify_lift(gamma, lift, center=(0, 0), order=None):
    """Whether ``pi o lift`` agrees with ``gamma`` coefficientwise up to the common order."""
    if isinstance(lift, Lift):
        lift = lift.arc
    rho, t = lift.components()
    try:
        image = blowup_series(rho, t, center)
    except (SeriesError, ZeroDivisionError):
        return False
    n = min(gamma.order, lift.order) if order is None else order
    if n > lift.order or (n > gamma.order and not gamma.exact):
        return False
    target = gamma.components(max(n, gamma.order) if gamma.exact else None)
    for got, want in zip(image, target):
        for i in range(n + 1):
            try:
                if got.coeffs[i] - want.coeffs[i] != 0:
                    return False
            except FieldError:
                if _differ_across_fields(got.coeffs[i], want.coeffs[i]):
                    return False
    return True


def _differ_across_fields(x, y):
    fx, fy = field_of(x), field_of(y)
    _, ex, ey = compositum(fx, fy)
    return ex(x) != ey(y)


def series_compose(f, arc):
    """The rational function ``f`` along ``arc``: a Laurent-free series or an error.

    Returns ``(valuation_of_numerator, valuation_of_denominator, series)``;
    the series is ``None`` when the quotient has a pole at ``s = 0``.
    """
    comps = arc.components()
    num = f.num.evaluate(comps)
    den = f.den.evaluate(comps)
    num = num if isinstance(num, TruncSeries) else TruncSeries([num], arc.order, arc.var)
    den = den if isinstance(den, TruncSeries) else TruncSeries([den], arc.order, arc.var)
    vn, vd = num.valuation(), den.valuation()
    if vd is None:
        raise ArcLiftError("denominator vanishes along the arc to the known order")
    if vn is not None and vn < vd:
        return vn, vd, None
    return vn, vd, num / den


def lift_through_chain(chain, gamma, max_degree=DEFAULT_MAX_DEGREE):
    """Lift ``gamma`` through every factor of a resolution composite.

    Isomorphism factors are inverted exactly; blow-up factors take the
    first lift.  The factors map from the final chart to the original
    plane, so they are traversed from last to first.
    """
    arc = gamma
    for fac in reversed(chain.factors):
        if tuple(fac.domain_vars) == BLOWUP_VARS and fac.label.startswith("double"):
            lifted = lift_arc(arc, max_degree=max_degree)
            if not lifted.lifts:
                raise ArcLiftError("blow-up factor admits no lift")
            arc = lifted.lifts[0].arc
        else:
            inv = fac.inverse
            if inv is None:
                raise ArcLiftError("isomorphism factor carries no inverse")
            comps = arc.components()
            image = []
            for c in inv.components:
                v = c.num.evaluate(comps)
                v = v if isinstance(v, TruncSeries) else TruncSeries([v], arc.order, arc.var)
                image.append(v * (1 / c.den.constant_value()))
            arc = ArcGerm(image, arc.order, arc.var, vars=fac.domain_vars)
    return arc
