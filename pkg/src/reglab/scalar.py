"""Exact scalars: rationals and elements of simple real algebraic extensions.

Rationals are plain ``fractions.Fraction`` values.  An element of
``Q(alpha)`` is an :class:`AlgElem`, a coefficient vector in the power
basis of ``alpha`` reduced modulo its minimal polynomial.  Arithmetic
whose result happens to be rational returns a ``Fraction``, so an
``AlgElem`` is always genuinely irrational and the two kinds never
compare equal.

Signs are decided by evaluating the element on a rational interval
around ``alpha`` and bisecting that interval until the enclosure
excludes zero.  Since the minimal polynomial is irreducible, a nonzero
coefficient vector is a nonzero real number and the loop terminates.
"""

import math
from fractions import Fraction

from . import roots, upoly

DEFAULT_MAX_DEGREE = 16


class ExtensionNeeded(ArithmeticError):
    """Raised when a square root does not exist in the current field."""

    def __init__(self, radicand, message="requires field extension"):
        super().__init__(f"{message}: radicand {radicand}")
        self.radicand = radicand


class FieldError(ValueError):
    pass


class DegreeCapExceeded(FieldError):
    pass


def _is_irreducible(poly):
    # Univariate factorization over Q is infrastructure; defer to sympy.
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(poly))
    factors = sympy.factor_list(expr, t)[1]
    return len(factors) == 1 and factors[0][1] == 1


def factor_rational(poly):
    """Irreducible monic factors over Q of a rational univariate polynomial."""
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(poly))
    out = []
    for fac, mult in sympy.factor_list(expr, t)[1]:
        coeffs = sympy.Poly(fac, t).all_coeffs()[::-1]
        coeffs = [Fraction(int(c.p), int(c.q)) for c in coeffs]
        out.append((upoly.monic(coeffs), mult))
    return out


class AlgebraicField:
    """The real field ``Q(alpha)`` for one real root ``alpha`` of ``minpoly``.

    ``minpoly`` is given lowest degree first.  ``lo``/``hi`` isolate the
    chosen root; they are tightened once at construction.
    """

    __slots__ = ("minpoly", "lo", "hi", "degree", "index", "name")

    def __init__(self, minpoly, lo, hi, name="a", check=True):
        p = upoly.monic([Fraction(c) for c in upoly.trim(minpoly)])
        if upoly.deg(p) < 1:
            raise FieldError("minimal polynomial must have positive degree")
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise FieldError("empty isolating interval")
        if check:
            if upoly.deg(upoly.gcd(p, upoly.derivative(p))) > 0:
                raise FieldError("minimal polynomial is not square-free")
            if not _is_irreducible(p):
                raise FieldError("minimal polynomial is reducible")
        if lo == hi:
            if upoly.evaluate(p, lo) != 0:
                raise FieldError("interval does not contain a root")
        else:
            if upoly.evaluate(p, lo) == 0 or upoly.evaluate(p, hi) == 0:
                raise FieldError("ambiguous interval: endpoint is a root")
            if roots.count_roots(p, lo, hi) != 1:
                raise FieldError("ambiguous interval: it must contain exactly one root")
            lo, hi = roots.refine(p, lo, hi, Fraction(1, 2**64))
        self.minpoly = tuple(p)
        self.lo = lo
        self.hi = hi
        self.degree = upoly.deg(p)
        self.name = name
        if lo == hi:
            self.index = sum(1 for r in roots.isolate_squarefree(p) if r[1] < lo)
        else:
            self.index = roots.count_roots_below(p, lo)

    @property
    def key(self):
        return (self.minpoly, self.index)

    def __eq__(self, other):
        return isinstance(other, AlgebraicField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"AlgebraicField({list(map(str, self.minpoly))}, [{self.lo}, {self.hi}])"

    # element construction -------------------------------------------------

    def element(self, coeffs):
        coeffs = upoly.trim([Fraction(c) for c in coeffs])
        if len(coeffs) > self.degree:
            coeffs = upoly.rem(coeffs, list(self.minpoly))
        return _make(self, coeffs)

    @property
    def gen(self):
        return self.element([0, 1])

    def approx(self, width=Fraction(1, 2**64)):
        """Rational enclosure ``(lo, hi)`` of ``alpha`` of at most ``width``."""
        return roots.refine(list(self.minpoly), self.lo, self.hi, width)


def _make(field, coeffs):
    coeffs = upoly.trim(coeffs)
    if len(coeffs) <= 1:
        return coeffs[0] if coeffs else Fraction(0)
    return AlgElem(field, tuple(coeffs))


def _interval_eval(coeffs, lo, hi):
    # Horner's rule in rational interval arithmetic.
    a = b = Fraction(0)
    for c in reversed(coeffs):
        cands = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(cands) + c, max(cands) + c
    return a, b


class AlgElem:
    """A nonrational element of a real algebraic field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    # coercion -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, AlgElem):
            if other.field != self.field:
                raise FieldError("elements of different algebraic fields")
            return list(other.coeffs)
        if isinstance(other, (int, Fraction)):
            return [Fraction(other)]
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _make(self.field, upoly.add(list(self.coeffs), o))

    __radd__ = __add__

    def __neg__(self):
        return AlgElem(self.field, tuple(-c for c in self.coeffs))

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _make(self.field, upoly.sub(list(self.coeffs), o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _make(self.field, upoly.sub(o, list(self.coeffs)))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = upoly.mul(list(self.coeffs), o)
        return _make(self.field, upoly.rem(prod, list(self.field.minpoly)))

    __rmul__ = __mul__

    def inverse(self):
        g, s, _ = upoly.ext_gcd(list(self.coeffs), list(self.field.minpoly))
        # g == 1 because the minimal polynomial is irreducible
        return _make(self.field, upoly.rem(s, list(self.field.minpoly)))

    def __truediv__(self, other):
        if isinstance(other, AlgElem):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.inverse() * _make(self.field, o)

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = Fraction(1)
        base = self
        while e:
            if e & 1:
                result = base * result
            e >>= 1
            if e:
                base = base * base
        return result

    # comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, AlgElem):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field.key, self.coeffs))

    def sign(self):
        lo, hi = self.field.lo, self.field.hi
        p = list(self.field.minpoly)
        width = hi - lo
        while True:
            a, b = _interval_eval(self.coeffs, lo, hi)
            if a > 0:
                return 1
            if b < 0:
                return -1
            width /= 2**16
            lo, hi = roots.refine(p, lo, hi, width)
            if lo == hi:  # cannot happen for an irreducible minpoly of degree > 1
                v = upoly.evaluate(list(self.coeffs), lo)
                return (v > 0) - (v < 0)

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return True

    def enclosure(self, width):
        """Rational interval of width at most ``width`` containing the value."""
        lo, hi = self.field.lo, self.field.hi
        p = list(self.field.minpoly)
        w = hi - lo
        while True:
            a, b = _interval_eval(self.coeffs, lo, hi)
            if b - a <= width:
                return a, b
            w /= 2**16
            lo, hi = roots.refine(p, lo, hi, w)

    def __float__(self):
        a, b = self.enclosure(Fraction(1, 2**60))
        return float((a + b) / 2)

    def __repr__(self):
        return f"AlgElem({self})"

    def __str__(self):
        name = self.field.name
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return "(" + " + ".join(parts) + ")"


# free functions over both kinds of scalar ---------------------------------


def is_scalar(x):
    return isinstance(x, (int, Fraction, AlgElem))


def as_scalar(x):
    if isinstance(x, AlgElem):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def sign(x):
    if isinstance(x, AlgElem):
        return x.sign()
    return (x > 0) - (x < 0)


def field_of(x):
    return x.field if isinstance(x, AlgElem) else None


def common_field(values):
    """The single algebraic field used by ``values``, or None if all rational."""
    found = None
    for v in values:
        f = field_of(v)
        if f is None:
            continue
        if found is None:
            found = f
        elif f != found:
            raise FieldError("values live in different algebraic fields")
    return found


def enclosure(x, width=Fraction(1, 2**60)):
    if isinstance(x, AlgElem):
        return x.enclosure(width)
    x = Fraction(x)
    return x, x


def to_float(x):
    return float(x)


def to_mpf(x, dps=50):
    import mpmath

    with mpmath.workdps(dps + 10):
        if isinstance(x, AlgElem):
            a, b = x.enclosure(Fraction(1, 10 ** (dps + 5)))
            x = (a + b) / 2
        x = Fraction(x)
        return mpmath.mpf(x.numerator) / x.denominator


def scalar_str(x):
    if isinstance(x, AlgElem):
        return str(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_exact(x):
    """Exact nonnegative square root inside the field of ``x``.

    Raises :class:`ExtensionNeeded` when no such root exists there.
    Quadratic fields are solved in closed form; for larger fields only
    roots of rational squares and of squares of field generators are
    recognised.
    """
    if not isinstance(x, AlgElem):
        r = _rational_sqrt(x)
        if r is None:
            raise ExtensionNeeded(Fraction(x))
        return r
    if x.sign() < 0:
        raise ExtensionNeeded(x, "square root of a negative number")
    field = x.field
    if field.degree == 2:
        r = _quadratic_sqrt(x)
        if r is not None:
            return r
        raise ExtensionNeeded(x)
    raise ExtensionNeeded(x)


def _quadratic_sqrt(x):
    # (p + q a)^2 = u + v a with a^2 = -m1 a - m0
    field = x.field
    m0, m1 = field.minpoly[0], field.minpoly[1]
    u = x.coeffs[0]
    v = x.coeffs[1] if len(x.coeffs) > 1 else Fraction(0)
    # p^2 - m0 q^2 = u and 2 p q - m1 q^2 = v
    # q = 0 would make x rational, which AlgElem excludes, so q != 0 and
    # p = (v + m1 Y)/(2 q) with Y = q^2; substituting gives
    # (v + m1 Y)^2 - 4 m0 Y^2 - 4 u Y = 0, a quadratic in Y.
    a2 = m1 * m1 - 4 * m0
    a1 = 2 * v * m1 - 4 * u
    a0 = v * v
    cands = []
    if a2 == 0:
        if a1 != 0:
            cands.append(-a0 / a1)
    else:
        disc = a1 * a1 - 4 * a2 * a0
        r = _rational_sqrt(disc)
        if r is not None:
            cands.extend([(-a1 + r) / (2 * a2), (-a1 - r) / (2 * a2)])
    for Y in cands:
        q = _rational_sqrt(Y)
        if q is None or q == 0:
            continue
        for qq in (q, -q):
            p = (v + m1 * Y) / (2 * qq)
            cand = field.element([p, qq])
            if cand * cand == x:
                return cand if sign(cand) > 0 else -cand
    return None


# adjoining roots ------------------------------------------------------------


def field_adjoin(minpoly, interval, max_degree=DEFAULT_MAX_DEGREE, name="a"):
    """Adjoin the unique root of ``minpoly`` inside ``interval``.

    ``minpoly`` may be a coefficient list (lowest degree first) or a
    univariate polynomial object exposing ``univariate_coeffs``.
    """
    if hasattr(minpoly, "univariate_coeffs"):
        minpoly = minpoly.univariate_coeffs()
    lo, hi = interval
    p = upoly.trim([Fraction(c) for c in minpoly])
    if upoly.deg(p) > max_degree:
        raise DegreeCapExceeded(f"extension degree {upoly.deg(p)} exceeds cap {max_degree}")
    return AlgebraicField(p, lo, hi, name=name)


def real_root_field(poly, lo, hi, max_degree=DEFAULT_MAX_DEGREE, name="a"):
    """Exact value of the unique root of a rational ``poly`` in ``[lo, hi]``.

    The irreducible factor carrying the root is found, and the root is
    returned as a ``Fraction`` when rational or as the generator of the
    corresponding field otherwise.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo == hi:
        return lo
    for fac, _ in factor_rational(poly):
        if upoly.deg(fac) == 1:
            r = -fac[0] / fac[1]
            if lo <= r <= hi:
                return r
            continue
        if upoly.evaluate(fac, lo) == 0 or upoly.evaluate(fac, hi) == 0:
            continue
        if roots.count_roots(fac, lo, hi) == 1:
            if upoly.deg(fac) > max_degree:
                raise DegreeCapExceeded(
                    f"root needs an extension of degree {upoly.deg(fac)} > cap {max_degree}"
                )
            field = AlgebraicField(fac, lo, hi, name=name, check=False)
            return field.gen
    raise FieldError("no root of the polynomial in the interval")


def minimal_polynomial(x):
    """Monic minimal polynomial over Q of a scalar."""
    if not isinstance(x, AlgElem):
        return [-Fraction(x), Fraction(1)]
    field = x.field
    # power basis matrix; find the first linear dependency among 1, x, x^2, ...
    d = field.degree
    rows = []
    power = Fraction(1)
    for k in range(d + 1):
        vec = _coeff_vector(power, d)
        rows.append(vec)
        dep = _linear_dependency(rows)
        if dep is not None:
            return upoly.monic(dep)
        power = power * x
    raise AssertionError("minimal polynomial search failed")


def _coeff_vector(x, d):
    if isinstance(x, AlgElem):
        v = list(x.coeffs)
    else:
        v = [Fraction(x)]
    return v + [Fraction(0)] * (d - len(v))


def _linear_dependency(rows):
    # return coefficients c with sum c_i rows_i = 0 and c_last = 1, if any
    n = len(rows)
    if n == 1:
        return None
    d = len(rows[0])
    # solve sum_{i<n-1} c_i rows_i = -rows_{n-1}
    m = [[rows[i][j] for i in range(n - 1)] + [-rows[n - 1][j]] for j in range(d)]
    sol = _solve(m, n - 1)
    if sol is None:
        return None
    return sol + [Fraction(1)]


def _solve(aug, nvars):
    # Gaussian elimination on an augmented matrix; returns one solution or None
    m = [row[:] for row in aug]
    rows = len(m)
    piv_cols = []
    r = 0
    for c in range(nvars):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, rows):
        if m[i][nvars] != 0:
            return None
    sol = [Fraction(0)] * nvars
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][nvars]
    return sol


def compositum(f1, f2, max_degree=DEFAULT_MAX_DEGREE):
    """A primitive element field containing both ``f1`` and ``f2``.

    Returns ``(field, embed1, embed2)`` where ``embed_i`` maps scalars of
    ``f_i`` (or rationals) into ``field``.  Either input may be None,
    meaning Q.
    """
    if f1 is None and f2 is None:
        return None, _identity, _identity
    if f1 is None:
        return f2, _identity, _identity
    if f2 is None or f1 == f2:
        return f1, _identity, _identity
    m1, m2 = list(f1.minpoly), list(f2.minpoly)
    for k in (1, -1, 2, -2, 3, -3, 5, -5, 7, -7):
        # gamma = beta + k alpha, alpha root of m1, beta root of m2
        res = _shifted_resultant(m1, m2, k)
        for fac, _ in factor_rational(res):
            # locate gamma's value: enclose beta + k alpha
            g_lo, g_hi = _enclose_sum(f1, f2, k, fac)
            if g_lo is None:
                continue
            if upoly.deg(fac) > max_degree:
                raise DegreeCapExceeded(
                    f"compositum needs degree {upoly.deg(fac)} > cap {max_degree}"
                )
            field = AlgebraicField(fac, g_lo, g_hi, name="g", check=False)
            gamma = field.gen if upoly.deg(fac) > 1 else -fac[0]
            alpha = _express_root(m1, m2, k, gamma, field, f1)
            if alpha is None:
                continue
            beta = gamma - k * alpha
            return field, _embedder(f1, alpha), _embedder(f2, beta)
    raise FieldError("no primitive element found")


def _identity(x):
    return x


def _embedder(src, image_of_gen):
    def embed(x):
        if not isinstance(x, AlgElem):
            return x
        if x.field != src:
            raise FieldError("element does not belong to the embedded field")
        acc = Fraction(0)
        for c in reversed(x.coeffs):
            acc = acc * image_of_gen + c
        return acc

    return embed


def _shifted_resultant(m1, m2, k):
    # Res_y(m1(y), m2(z - k y)) as a polynomial in z, by interpolation
    d = upoly.deg(m1) * upoly.deg(m2)
    xs, ys = [], []
    z0 = 0
    while len(xs) < d + 1:
        z = Fraction(z0)
        # m2(z - k y) as a polynomial in y
        shifted = upoly.compose(m2, [z, Fraction(-k)])
        xs.append(z)
        ys.append(upoly.resultant(m1, shifted))
        z0 += 1
    return upoly.interpolate(xs, ys)


def _enclose_sum(f1, f2, k, fac):
    # isolate gamma = beta + k alpha among the roots of fac
    width = Fraction(1, 2**20)
    for _ in range(12):
        a_lo, a_hi = f1.approx(width)
        b_lo, b_hi = f2.approx(width)
        if k >= 0:
            g_lo, g_hi = b_lo + k * a_lo, b_hi + k * a_hi
        else:
            g_lo, g_hi = b_lo + k * a_hi, b_hi + k * a_lo
        if upoly.deg(fac) == 1:
            r = -fac[0] / fac[1]
            if g_lo <= r <= g_hi:
                return r, r
            return None, None
        if upoly.evaluate(fac, g_lo) != 0 and upoly.evaluate(fac, g_hi) != 0:
            n = roots.count_roots(fac, g_lo, g_hi)
            if n == 0:
                return None, None
            if n == 1:
                return g_lo, g_hi
        width /= 2**8
    return None, None


def _express_root(m1, m2, k, gamma, field, f1):
    # gcd over Q(gamma)[y] of m1(y) and m2(gamma - k y) is (y - alpha)
    p = [Fraction(c) for c in m1]
    shifted = upoly.compose(list(m2), [gamma, Fraction(-k)])
    g = upoly.gcd(p, shifted)
    if upoly.deg(g) != 1:
        return None
    alpha = -g[0]
    # confirm the choice against the enclosure of alpha
    a_lo, a_hi = enclosure(alpha, Fraction(1, 2**40))
    if a_hi < f1.lo or a_lo > f1.hi:
        return None
    return alpha


def embed_common(values, max_degree=DEFAULT_MAX_DEGREE):
    """Re-express scalars from possibly different fields in one common field."""
    current = None
    out = []
    for v in values:
        f = field_of(v)
        if f is not None and f != current:
            current, e_old, e_new = compositum(current, f, max_degree)
            out = [e_old(x) for x in out]
            v = e_new(v)
        out.append(v)
    return out
