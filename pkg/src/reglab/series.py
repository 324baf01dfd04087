"""Truncated power series in one variable over the exact scalars."""

from fractions import Fraction

from .scalar import ExtensionNeeded, as_scalar, scalar_str, sqrt_exact

DEFAULT_ORDER = 12


class SeriesError(ValueError):
    pass


class TruncSeries:
    """Coefficients ``c_0 .. c_N`` of a series known modulo ``s^(N+1)``."""

    __slots__ = ("coeffs", "order", "var")

    def __init__(self, coeffs, order=DEFAULT_ORDER, var="s"):
        if order < 0:
            raise SeriesError("truncation order must be nonnegative")
        cs = [as_scalar(c) for c in coeffs][: order + 1]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.order = order
        self.var = var

    @classmethod
    def from_poly(cls, p, order=DEFAULT_ORDER, var=None):
        """Series of a univariate polynomial (an ``MPoly`` or coefficient list)."""
        if hasattr(p, "univariate_coeffs"):
            if var is None:
                occ = p.occurring_vars()
                var = p.vars[occ[0]] if occ else (p.vars[0] if p.vars else "s")
            coeffs = p.univariate_coeffs(var) if p.vars else [p.constant_value()]
        else:
            coeffs = list(p)
        return cls(coeffs, order, var or "s")

    @classmethod
    def monomial(cls, c, k, order=DEFAULT_ORDER, var="s"):
        cs = [Fraction(0)] * (order + 1)
        if k <= order:
            cs[k] = as_scalar(c)
        return cls(cs, order, var)

    # queries ------------------------------------------------------------

    def valuation(self):
        """Index of the first nonzero coefficient, or None if all are zero."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def is_zero(self):
        return self.valuation() is None

    def leading(self):
        v = self.valuation()
        if v is None:
            raise SeriesError("zero series has no leading coefficient")
        return v, self.coeffs[v]

    def truncate(self, order):
        return TruncSeries(self.coeffs, min(order, self.order), self.var)

    def agrees_with(self, other, upto=None):
        n = min(self.order, other.order) if upto is None else upto
        if n > self.order or n > other.order:
            return False
        return all(self.coeffs[i] == other.coeffs[i] for i in range(n + 1))

    def __getitem__(self, i):
        return self.coeffs[i]

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            return other
        return TruncSeries([as_scalar(other)], self.order, self.var)

    def __add__(self, other):
        o = self._coerce(other)
        n = min(self.order, o.order)
        return TruncSeries([self.coeffs[i] + o.coeffs[i] for i in range(n + 1)], n, self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.order, self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            c = as_scalar(other)
            return TruncSeries([a * c for a in self.coeffs], self.order, self.var)
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            a = self.coeffs[i]
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] = out[i + j] + a * b
        return TruncSeries(out, n, self.var)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = TruncSeries([Fraction(1)], self.order, self.var)
        for _ in range(e):
            result = result * self
        return result

    def shift_down(self, k):
        """Divide by ``s^k``; the first ``k`` coefficients must vanish."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise SeriesError("series is not divisible by the requested power")
        return TruncSeries(self.coeffs[k:], self.order - k, self.var)

    def shift_up(self, k):
        return TruncSeries([Fraction(0)] * k + list(self.coeffs), self.order + k, self.var)

    def inverse(self):
        """Multiplicative inverse of a unit (nonzero constant term)."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise SeriesError("series is not a unit")
        inv0 = 1 / c0
        out = [inv0]
        for n in range(1, self.order + 1):
            acc = Fraction(0)
            for k in range(1, n + 1):
                a = self.coeffs[k]
                if a != 0:
                    acc = acc + a * out[n - k]
            out.append(-acc * inv0)
        return TruncSeries(out, self.order, self.var)

    def __truediv__(self, other):
        """Quotient with honest precision: dividing by ``s^w * unit`` costs ``w`` terms."""
        if not isinstance(other, TruncSeries):
            c = as_scalar(other)
            return self * (1 / c)
        w = other.valuation()
        if w is None:
            raise ZeroDivisionError("division by the zero series")
        num = self.shift_down(w) if w else self
        den = other.shift_down(w) if w else other
        n = min(num.order, den.order)
        return num.truncate(n) * den.truncate(n).inverse()

    def derivative(self):
        return TruncSeries(
            [i * self.coeffs[i] for i in range(1, self.order + 1)], max(self.order - 1, 0), self.var
        )

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def __repr__(self):
        return f"TruncSeries({self})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            cs = scalar_str(c)
            if i == 0:
                parts.append(cs)
            else:
                mono = self.var if i == 1 else f"{self.var}^{i}"
                parts.append(mono if c == 1 else f"({cs})*{mono}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.var}^{self.order + 1})"


def series_sqrt(s, root=None):
    """Square root of a series whose leading term is an even power times a square.

    For ``s = c s^(2m) (1 + u)`` the result is ``sqrt(c) s^m (1+u)^(1/2)``
    with ``sqrt(c) > 0``; it is known to order ``N - m``.  A caller that has
    adjoined ``sqrt(c)`` itself passes it as ``root``.
    """
    v = s.valuation()
    if v is None:
        return TruncSeries([], s.order // 2, s.var)
    if v % 2:
        raise ExtensionNeeded(s.coeffs[v], "requires field extension (odd valuation)")
    m = v // 2
    c = s.coeffs[v]
    if root is None:
        root = sqrt_exact(c)  # raises ExtensionNeeded with the radicand
    elif root * root != c:
        raise SeriesError("supplied root does not square to the leading coefficient")
    unit = s.shift_down(v) * (1 / c)  # 1 + u, known to order N - 2m
    n = unit.order
    # Newton-free recurrence for r = sqrt(1 + u): r_0 = 1, 2 r_k = u_k - sum r_i r_{k-i}
    r = [Fraction(1)]
    for k in range(1, n + 1):
        acc = unit.coeffs[k]
        for i in range(1, k):
            acc = acc - r[i] * r[k - i]
        r.append(acc / 2)
    body = TruncSeries(r, n, s.var) * root
    return body.shift_up(m)
