"""Polynomial and regular maps between affine spaces."""

from .mpoly import MPoly
from .ratfunc import RatFunc, substitute
from .scalar import as_scalar


def _as_component(c, vars):
    if isinstance(c, RatFunc):
        return c.with_vars(vars) if c.vars != vars else c
    if isinstance(c, MPoly):
        return RatFunc.from_poly(c.with_vars(vars) if c.vars != vars else c)
    return RatFunc(MPoly.const(as_scalar(c), vars), MPoly.const(1, vars))


class PolyMap:
    """A map given by rational-function components in ``domain_vars``.

    Components with constant denominators make a polynomial map; the
    blow-up uses components over the nowhere-zero denominator ``t^2+1``.
    An optional exact inverse can be attached; ``verified`` records that
    both compositions were checked to be the identity.
    """

    __slots__ = ("domain_vars", "components", "inverse", "verified", "label")

    def __init__(self, domain_vars, components, inverse=None, verified=False, label=""):
        self.domain_vars = tuple(domain_vars)
        self.components = tuple(_as_component(c, self.domain_vars) for c in components)
        self.inverse = inverse
        self.verified = verified
        self.label = label

    @property
    def factors(self):
        return (self,)

    @classmethod
    def identity(cls, vars):
        vars = tuple(vars)
        m = cls(vars, MPoly.gens(vars), label="identity")
        m.inverse = m
        m.verified = True
        return m

    @property
    def n(self):
        return len(self.domain_vars)

    @property
    def m(self):
        return len(self.components)

    def is_polynomial(self):
        return all(c.is_polynomial() for c in self.components)

    def polys(self):
        return [c.as_poly() for c in self.components]

    def is_identity(self):
        if self.n != self.m:
            return False
        gens = MPoly.gens(self.domain_vars)
        return all(c == g for c, g in zip(self.components, gens))

    def evaluate(self, point):
        return tuple(c.evaluate(point) for c in self.components)

    def __call__(self, *point):
        return self.evaluate(point)

    def compose(self, other):
        """The map ``self o other`` (apply ``other`` first)."""
        if other.m != self.n:
            raise ValueError(f"cannot compose: inner map has {other.m} components, outer needs {self.n}")
        comps = [substitute(c, other) for c in self.components]
        out = PolyMap(other.domain_vars, comps, label=_join(self.label, other.label))
        if self.inverse is not None and other.inverse is not None:
            inv = other.inverse.compose_raw(self.inverse)
            out.inverse = inv
            inv.inverse = out
            out.verified = inv.verified = self.verified and other.verified
        return out

    def compose_raw(self, other):
        comps = [substitute(c, other) for c in self.components]
        return PolyMap(other.domain_vars, comps, label=_join(self.label, other.label))

    def pullback(self, f):
        """``f o self`` for a rational function ``f`` on the codomain."""
        return substitute(f, self)

    def differential(self, point):
        """Jacobian matrix evaluated at ``point``."""
        return [[c.diff(v).evaluate(point) for v in self.domain_vars] for c in self.components]

    def expand(self):
        return self

    def with_inverse(self, inverse, verify=True):
        self.inverse = inverse
        inverse.inverse = self
        if verify:
            ok = self.check_inverse()
            if not ok:
                raise ValueError("claimed inverse does not invert the map")
            self.verified = inverse.verified = True
        return self

    def check_inverse(self):
        """Exact check that both compositions with the inverse are the identity."""
        inv = self.inverse
        if inv is None or self.n != self.m or inv.n != inv.m:
            return False
        a = self.compose_raw(inv)
        b = inv.compose_raw(self)
        return a.is_identity_in(inv.domain_vars) and b.is_identity_in(self.domain_vars)

    def is_identity_in(self, vars):
        gens = MPoly.gens(vars)
        return len(self.components) == len(gens) and all(
            c == g for c, g in zip(self.components, gens)
        )

    def rename(self, domain_vars):
        return PolyMap(
            domain_vars,
            [RatFunc(c.num.rename(dict(zip(self.domain_vars, domain_vars))),
                     c.den.rename(dict(zip(self.domain_vars, domain_vars))))
             for c in self.components],
            label=self.label,
        )

    def __eq__(self, other):
        return (
            isinstance(other, PolyMap)
            and self.domain_vars == other.domain_vars
            and self.components == other.components
        )

    __hash__ = None

    def __repr__(self):
        return f"PolyMap({self})"

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


class MapChain:
    """The composite ``f_k o ... o f_1`` kept as its factors ``f_1 .. f_k``.

    Evaluation, pullback and differentials go factor by factor, so the
    (often huge) expanded composite is only built on request.
    """

    __slots__ = ("factors", "label", "_inverse", "_expanded")

    def __init__(self, factors, label=""):
        flat = []
        for f in factors:
            flat.extend(f.factors)
        if not flat:
            raise ValueError("a map chain needs at least one factor")
        for a, b in zip(flat, flat[1:]):
            if a.m != b.n:
                raise ValueError("consecutive factors have incompatible arities")
        self.factors = tuple(flat)
        self.label = label
        self._inverse = None
        self._expanded = None

    @classmethod
    def of(cls, factors, vars, label=""):
        """A chain of the non-identity ``factors``; the identity on ``vars`` if none remain."""
        kept = [f for g in factors for f in g.factors if not f.is_identity()]
        if not kept:
            ident = PolyMap.identity(vars)
            ident.label = label or ident.label
            return cls([ident], label)
        return cls(kept, label)

    @property
    def domain_vars(self):
        return self.factors[0].domain_vars

    @property
    def n(self):
        return self.factors[0].n

    @property
    def m(self):
        return self.factors[-1].m

    @property
    def inverse(self):
        if self._inverse is None:
            if any(f.inverse is None for f in self.factors):
                return None
            self._inverse = MapChain([f.inverse for f in reversed(self.factors)], self.label)
            self._inverse._inverse = self
        return self._inverse

    @property
    def verified(self):
        return self.inverse is not None and all(f.verified for f in self.factors)

    def is_identity(self):
        return all(f.is_identity() for f in self.factors)

    def evaluate(self, point):
        for f in self.factors:
            point = f.evaluate(point)
        return tuple(point)

    def __call__(self, *point):
        return self.evaluate(point)

    def pullback(self, f):
        for fac in reversed(self.factors):
            f = substitute(f, fac)
        return f

    def differential(self, point):
        """Jacobian matrix at ``point`` by the chain rule."""
        total = None
        for fac in self.factors:
            d = fac.differential(point)
            total = d if total is None else _matmul(d, total)
            point = fac.evaluate(point)
        return total

    def check_inverse(self):
        """Every factor carries an exactly verified inverse."""
        return all(f.inverse is not None and f.check_inverse() for f in self.factors)

    def then(self, other):
        """The chain ``other o self``."""
        return MapChain([self, other])

    def expand(self):
        """The composite as a single explicit map."""
        if self._expanded is None:
            acc = self.factors[0]
            for f in self.factors[1:]:
                acc = f.compose_raw(acc)
            self._expanded = acc
        return self._expanded

    @property
    def components(self):
        return self.expand().components

    def __len__(self):
        return len(self.factors)

    def __repr__(self):
        return f"MapChain({' o '.join(f.label or '?' for f in reversed(self.factors))})"


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), 0) for j in range(len(b[0]))]
            for i in range(len(a))]


def _join(a, b):
    if a and b:
        return f"{a} o {b}"
    return a or b


def translation(vector, vars):
    """``x -> x + vector`` with its exact inverse."""
    gens = MPoly.gens(vars)
    fwd = PolyMap(vars, [g + as_scalar(c) for g, c in zip(gens, vector)], label="translation")
    inv = PolyMap(vars, [g - as_scalar(c) for g, c in zip(gens, vector)], label="translation")
    fwd.inverse, inv.inverse = inv, fwd
    fwd.verified = inv.verified = True
    return fwd


def linear_map(matrix, vars, shift=None):
    """``x -> matrix x (+ shift)`` for an invertible 2x2 matrix, with inverse."""
    (a, b), (c, d) = [[as_scalar(e) for e in row] for row in matrix]
    det = a * d - b * c
    if det == 0:
        raise ValueError("linear map is singular")
    x, y = MPoly.gens(vars)
    s = [as_scalar(c) for c in shift] if shift else (0, 0)
    fwd = PolyMap(vars, [x * a + y * b + s[0], x * c + y * d + s[1]], label="affine")
    # inverse: M^{-1} (x - s)
    ia, ib, ic, id_ = d / det, -b / det, -c / det, a / det
    u, v = x - s[0], y - s[1]
    inv = PolyMap(vars, [u * ia + v * ib, u * ic + v * id_], label="affine")
    fwd.inverse, inv.inverse = inv, fwd
    fwd.verified = inv.verified = True
    return fwd
