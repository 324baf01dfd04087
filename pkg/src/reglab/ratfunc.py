"""Rational functions as reduced fractions of polynomials."""

from .mpoly import MPoly, _merge_vars, exact_div, gcd, is_square
from .scalar import as_scalar


class NotRationalFunction(ValueError):
    pass


def _canonical_scale(den):
    """Scalar making the denominator canonical.

    Rational denominators become primitive integer polynomials with a
    positive leading coefficient in graded-lex order; denominators with
    algebraic coefficients become monic.
    """
    _, lead = den.leading_term()
    if den.is_rational():
        c = den.scale_to_integral()
        return c if lead > 0 else -c
    return 1 / lead


class RatFunc:
    """A quotient ``num/den`` of polynomials in the same variables.

    Instances made by :func:`reduce` have coprime parts; instances made
    by :func:`normalize_nonneg` deliberately keep a square denominator.
    Either way the scaling of the pair is canonical.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        if not den.terms:
            raise NotRationalFunction("not a rational function: zero denominator")
        num, den = num._unify(den)
        c = _canonical_scale(den)
        self.num = num * c
        self.den = den * c

    @classmethod
    def from_poly(cls, p):
        return cls(p, MPoly.const(1, p.vars))

    @property
    def vars(self):
        return self.num.vars

    def with_vars(self, vars):
        return RatFunc(self.num.with_vars(vars), self.den.with_vars(vars))

    def is_polynomial(self):
        return self.den.is_constant()

    def as_poly(self):
        if not self.den.is_constant():
            raise ValueError("rational function is not a polynomial")
        return self.num * (1 / self.den.constant_value())

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            a, b = self._unify(other)
            return a.num * b.den == b.num * a.den
        if isinstance(other, MPoly):
            return self.num == other * self.den
        try:
            c = as_scalar(other)
        except TypeError:
            return NotImplemented
        return self.num == self.den * c

    def __hash__(self):
        r = reduce(self.num, self.den)
        return hash((r.num, r.den))

    def same_representation(self, other):
        """Exact equality of the stored pairs (not just of the functions)."""
        a, b = self._unify(other)
        return a.num == b.num and a.den == b.den

    def _unify(self, other):
        if self.vars == other.vars:
            return self, other
        vars = _merge_vars(self.vars, other.vars)
        return self.with_vars(vars), other.with_vars(vars)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return self._unify(other)
        if isinstance(other, MPoly):
            other = RatFunc.from_poly(other)
            return self._unify(other)
        c = as_scalar(other)
        return self, RatFunc(MPoly.const(c, self.vars), MPoly.const(1, self.vars))

    def __add__(self, other):
        a, b = self._coerce(other)
        return reduce(a.num * b.den + b.num * a.den, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        return reduce(a.num * b.num, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if not b.num.terms:
            raise ZeroDivisionError("division by the zero function")
        return reduce(a.num * b.den, a.den * b.num)

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        return b / a

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return reduce(self.den ** (-e), self.num ** (-e))
        return RatFunc(self.num ** e, self.den ** e)

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("rational function undefined at point")
        return self.num.evaluate(point) / d

    def __call__(self, *point):
        return self.evaluate(point)

    def diff(self, var):
        return reduce(
            self.num.diff(var) * self.den - self.num * self.den.diff(var),
            self.den * self.den,
        )

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"


def reduce(num, den):
    """Cancel the gcd of ``num`` and ``den`` and normalise the scaling."""
    if not isinstance(num, MPoly):
        num = MPoly.const(num, den.vars if isinstance(den, MPoly) else ())
    if not isinstance(den, MPoly):
        den = MPoly.const(den, num.vars)
    if not den.terms:
        raise NotRationalFunction("not a rational function: zero denominator")
    num, den = num._unify(den)
    if not num.terms:
        return RatFunc(num, MPoly.const(1, num.vars))
    g = gcd(num, den)
    if not g.is_constant():
        num = exact_div(num, g)
        den = exact_div(den, g)
    return RatFunc(num, den)


def normalize_nonneg(f):
    """Rewrite ``P/Q`` as ``(P*Q)/Q^2`` so the denominator is nonnegative.

    Common factors are not cancelled; only the canonical scaling applies.
    """
    return RatFunc(f.num * f.den, f.den * f.den)


def has_square_denominator(f):
    return is_square(f.den) is not None


def _as_ratfunc(c, vars):
    if isinstance(c, RatFunc):
        return c.with_vars(vars) if c.vars != vars else c
    if isinstance(c, MPoly):
        return RatFunc.from_poly(c.with_vars(vars) if c.vars != vars else c)
    return RatFunc(MPoly.const(c, vars), MPoly.const(1, vars))


def compose_parts(p, components, vars):
    """Numerator and denominator of ``p(components)`` over a common denominator.

    ``components`` are rational functions in ``vars`` sharing the
    denominator ``D``; the result is ``(N, D^deg p)`` with ``N`` the
    homogenised evaluation.  Returns ``(N, D, deg p)``.
    """
    comps = [_as_ratfunc(c, vars) for c in components]
    common = MPoly.const(1, vars)
    for c in comps:
        if not c.den.is_constant():
            g = gcd(common, c.den)
            common = common * exact_div(c.den, g)
    nums = []
    for c in comps:
        factor = exact_div(common, c.den)
        nums.append(c.num * factor)
    d = max(p.total_degree(), 0)
    if common.is_constant():
        inv = 1 / common.constant_value()
        return p.compose([n * inv for n in nums], vars), MPoly.const(1, vars), 0
    # homogenise: p^h(x, w) = w^d p(x/w)
    cache = {}

    def dpow(k):
        got = cache.get(k)
        if got is None:
            got = MPoly.const(1, vars) if k == 0 else dpow(k - 1) * common
            cache[k] = got
        return got

    pows = [dict() for _ in nums]

    def npow(i, k):
        got = pows[i].get(k)
        if got is None:
            got = MPoly.const(1, vars) if k == 0 else npow(i, k - 1) * nums[i]
            pows[i][k] = got
        return got

    acc = MPoly.zero(vars)
    for e, c in p.terms.items():
        t = dpow(d - sum(e)) * c
        for i, k in enumerate(e):
            if k:
                t = t * npow(i, k)
        acc = acc + t
    return acc, common, d


def substitute(f, m):
    """Pull ``f`` back along a map: the reduced rational function ``f o m``.

    ``m`` is a :class:`~reglab.maps.PolyMap` or a sequence of components
    (polynomials or rational functions in common variables).  Components
    are matched with ``f``'s variables by position.
    """
    comps, vars = _components(m)
    if len(comps) != len(f.vars):
        raise ValueError(
            f"map has {len(comps)} components but the function has {len(f.vars)} variables"
        )
    n, dn, kn = compose_parts(f.num, comps, vars)
    d, dd, kd = compose_parts(f.den, comps, vars)
    # f o m = (n / D^kn) / (d / D^kd) = n D^(kd - kn) / d
    if kd >= kn:
        num, den = n * dn ** (kd - kn), d
    else:
        num, den = n, d * dn ** (kn - kd)
    if not den.terms:
        raise NotRationalFunction("pullback denominator vanishes identically")
    return reduce(num, den)


def _components(m):
    if hasattr(m, "components"):
        return list(m.components), tuple(m.domain_vars)
    comps = list(m)
    vars = ()
    for c in comps:
        if isinstance(c, (MPoly, RatFunc)):
            vars = _merge_vars(vars, c.vars)
    return comps, vars


def homogeneous_components(q):
    return q.homogeneous_components()


def translate(q, point):
    return q.translate(point)


def mult_at(q, point):
    """Multiplicity of ``q`` at ``point``: lowest degree of ``q(p + x)``."""
    if not q.terms:
        raise ValueError("multiplicity of the zero polynomial is undefined")
    shifted = q.translate(point)
    return min(sum(e) for e in shifted.terms)


def lowest_form(q, point):
    """The nonzero homogeneous component of least degree of ``q(p + x)``."""
    shifted = q.translate(point)
    m = min(sum(e) for e in shifted.terms)
    return MPoly(shifted.vars, {e: c for e, c in shifted.terms.items() if sum(e) == m}), m
