"""Real root isolation for univariate polynomials with rational coefficients.

Roots are isolated by Descartes' rule of signs with interval bisection
(the Vincent-Collins-Akritas scheme); every endpoint is rational.  Sturm
sequences are kept for exact root counting on arbitrary intervals.
"""

from dataclasses import dataclass
import math
from fractions import Fraction

from . import upoly


@dataclass(frozen=True)
class RootInterval:
    """An isolating interval ``[lo, hi]`` for one real root.

    ``lo == hi`` means the root is the rational number ``lo``.  Otherwise
    the root lies in the open interval and the endpoints are not roots.
    """

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    @property
    def exact(self):
        return self.lo == self.hi

    @property
    def midpoint(self):
        return (self.lo + self.hi) / 2

    def __contains__(self, x):
        return self.lo <= x <= self.hi


def _sign(c):
    return (c > 0) - (c < 0)


def sign_variations(coeffs, sign=_sign):
    count = 0
    last = 0
    for c in coeffs:
        s = sign(c)
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _as_fractions(p):
    return [Fraction(c) for c in upoly.trim(p)]


def root_bound(p):
    """A power of two strictly larger than the modulus of every root."""
    lead = abs(p[-1])
    m = max((abs(c) for c in p[:-1]), default=Fraction(0)) / lead
    bound = Fraction(1)
    while bound <= 1 + m:
        bound *= 2
    return bound


def _descartes_count(p, lo, hi):
    """Sign variations bounding the number of roots of ``p`` in ``(lo, hi)``.

    Works in integers: with ``D`` the common denominator of the endpoints,
    ``D^n p(y / D)`` is shifted by ``D lo`` and scaled by ``D (hi - lo)``,
    which multiplies the transformed polynomial by a positive constant.
    """
    scale = math.lcm(*(Fraction(c).denominator for c in p))
    ints = [int(Fraction(c) * scale) for c in p]
    lo, hi = Fraction(lo), Fraction(hi)
    D = math.lcm(lo.denominator, hi.denominator)
    n = len(ints) - 1
    ints = [c * D ** (n - i) for i, c in enumerate(ints)]
    q = upoly.taylor_shift(ints, int(lo * D))
    w = int((hi - lo) * D)
    q = [c * w**i for i, c in enumerate(q)]
    q = upoly.taylor_shift(upoly.reverse(q), 1)
    return sign_variations(q)


def _clean_endpoints(p, a, b):
    # shrink an isolating interval until neither endpoint is a root
    while upoly.evaluate(p, a) == 0 or upoly.evaluate(p, b) == 0:
        m = (a + b) / 2
        if upoly.evaluate(p, m) == 0:
            return m, m
        if _descartes_count(p, a, m) == 1:
            b = m
        else:
            a = m
    return a, b


def _isolate_squarefree(p, lo, hi, out):
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        v = _descartes_count(p, a, b)
        if v == 0:
            continue
        if v == 1:
            out.append(_clean_endpoints(p, a, b))
            continue
        m = (a + b) / 2
        if upoly.evaluate(p, m) == 0:
            out.append((m, m))
        stack.append((m, b))
        stack.append((a, m))


def isolate_squarefree(p):
    """Isolate the real roots of a square-free rational polynomial."""
    p = _as_fractions(p)
    if upoly.deg(p) < 1:
        return []
    bound = root_bound(p)
    found = []
    if upoly.evaluate(p, Fraction(0)) == 0:
        found.append((Fraction(0), Fraction(0)))
    _isolate_squarefree(p, -bound, Fraction(0), found)
    _isolate_squarefree(p, Fraction(0), bound, found)
    found = sorted(set(found))
    return found


def isolate_real_roots(p):
    """Isolate every real root of ``p`` and report its multiplicity.

    The input is reduced to its square-free part before bisection; each
    isolating interval is then matched against the square-free
    decomposition to recover the multiplicity.
    """
    p = _as_fractions(p)
    if not p:
        raise ValueError("cannot isolate the roots of the zero polynomial")
    if upoly.deg(p) < 1:
        return []
    factors = upoly.squarefree_decomposition(p)
    sqf = upoly.squarefree_part(p)
    result = []
    for lo, hi in isolate_squarefree(sqf):
        mult = None
        for f, k in factors:
            if lo == hi:
                if upoly.evaluate(f, lo) == 0:
                    mult = k
                    break
            elif _sign(upoly.evaluate(f, lo)) != _sign(upoly.evaluate(f, hi)):
                mult = k
                break
        assert mult is not None
        result.append(RootInterval(lo, hi, mult))
    return result


def refine(p, lo, hi, width):
    """Bisect an isolating interval of a simple root until ``hi - lo <= width``.

    Returns a new pair; collapses to a point if a rational root is hit.
    """
    if lo == hi:
        return lo, hi
    slo = _sign(upoly.evaluate(p, lo))
    while hi - lo > width:
        m = (lo + hi) / 2
        sm = _sign(upoly.evaluate(p, m))
        if sm == 0:
            return m, m
        if sm == slo:
            lo = m
        else:
            hi = m
    return lo, hi


def sturm_sequence(p):
    p = _as_fractions(p)
    seq = [p, upoly.derivative(p)]
    while seq[-1]:
        r = upoly.rem(seq[-2], seq[-1])
        seq.append(upoly.neg(r))
    seq.pop()
    return seq


def _variations_at(seq, x):
    return sign_variations([upoly.evaluate(s, x) for s in seq])


def count_roots(p, lo, hi):
    """Number of distinct real roots of ``p`` in the half-open ``(lo, hi]``."""
    seq = sturm_sequence(p)
    return _variations_at(seq, lo) - _variations_at(seq, hi)


def count_roots_below(p, x):
    """Number of distinct real roots strictly below ``x`` (``x`` not a root)."""
    seq = sturm_sequence(p)
    # variations at -infinity come from the leading coefficients
    at_minus_inf = sign_variations(
        [s[-1] * (-1) ** upoly.deg(s) for s in seq]
    )
    return at_minus_inf - _variations_at(seq, x)
