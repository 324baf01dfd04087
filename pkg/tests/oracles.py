"""Independent reference computations used by several test modules.

Everything here goes through sympy or direct enumeration, never through
the package's own algebra beyond reading coefficients.
"""

import random
from fractions import Fraction

import mpmath
import sympy

from conftest import to_sympy
from reglab.mpoly import MPoly

X, Y, Z = sympy.symbols("x y z")


def brute_multiplicity_and_form(q, point):
    """Expand ``q(p + (x, y))`` with sympy and keep the lowest nonzero degree."""
    px, py = (sympy.Rational(c.numerator, c.denominator) for c in point)
    shifted = sympy.Poly(sympy.expand(to_sympy(q).subs({X: X + px, Y: Y + py}, simultaneous=True)), X, Y)
    degrees = [sum(m) for m in shifted.monoms()]
    m = min(degrees)
    lowest = sum(c * X**i * Y**j for (i, j), c in shifted.terms() if i + j == m)
    return m, sympy.expand(lowest)


def brute_tangent_lines(lowest, m):
    """Real slopes with multiplicity, the vertical multiplicity and the number of conjugate pairs.

    The form is dehomogenised at ``x = 1``; roots come from sympy's real
    root isolation of the univariate polynomial.
    """
    uni = sympy.Poly(sympy.expand(lowest.subs({X: 1, Y: Z})), Z)
    vertical = m - uni.degree()
    real = uni.real_roots()
    slopes = {}
    for r in real:
        slopes[r] = slopes.get(r, 0) + 1
    pairs = (uni.degree() - len(real)) // 2
    return sorted(((float(r), k) for r, k in slopes.items())), vertical, pairs


def random_singular_poly(rng, max_degree=8):
    """A random polynomial with a zero of random multiplicity at a random integer point."""
    point = (Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3)))
    m = rng.randint(1, 4)
    d = rng.randint(m, max_degree)
    expr = sympy.Integer(0)
    for k in range(m, d + 1):
        if k > m and rng.random() < 0.4:
            continue
        for i in range(k + 1):
            if rng.random() < 0.6 or (k == m and i == 0):
                expr += rng.randint(-4, 4) * X**i * Y**(k - i)
    if sympy.Poly(expr, X, Y).is_zero or all(sum(mm) > m for mm in sympy.Poly(expr, X, Y).monoms()):
        expr += X**m
    expr = sympy.expand(expr.subs({X: X - point[0], Y: Y - point[1]}, simultaneous=True))
    return from_sympy_poly(expr), point


def from_sympy_poly(expr):
    poly = sympy.Poly(expr, X, Y)
    terms = {}
    for exp, c in poly.terms():
        c = sympy.Rational(c)
        terms[exp] = Fraction(int(c.p), int(c.q))
    return MPoly(("x", "y"), terms)


def sympy_real_zeros(q):
    """Real solutions of the critical system of a nonnegative polynomial, via sympy."""
    e = to_sympy(q)
    sols = sympy.solve([e, sympy.diff(e, X), sympy.diff(e, Y)], [X, Y], dict=True)
    out = set()
    for s in sols:
        vx, vy = s.get(X, X), s.get(Y, Y)
        if vx.free_symbols or vy.free_symbols:
            raise ValueError("positive-dimensional solution set")
        if vx.is_real and vy.is_real:
            out.add((float(vx), float(vy)))
    return sorted(out)


def newton_preimage(fn, target, start, dps=50, steps=80):
    """Damped Newton iteration for ``fn(p) = target`` in the plane (reference root finder)."""
    with mpmath.workdps(dps):
        p = [mpmath.mpf(c) for c in start]
        t = [mpmath.mpf(c) for c in target]
        for _ in range(steps):
            val = fn(p)
            r = [v - w for v, w in zip(val, t)]
            h = mpmath.mpf(10) ** (-dps // 2)
            J = []
            for j in range(2):
                q = list(p)
                q[j] += h
                vq = fn(q)
                J.append([(vq[i] - val[i]) / h for i in range(2)])
            a, c = J[0]
            b, d = J[1]
            det = a * d - b * c
            if det == 0:
                break
            dx = (d * r[0] - b * r[1]) / det
            dy = (-c * r[0] + a * r[1]) / det
            lam = mpmath.mpf(1)
            norm = max(abs(x) for x in r)
            while lam > mpmath.mpf(2) ** -30:
                cand = [p[0] - lam * dx, p[1] - lam * dy]
                vc = fn(cand)
                if max(abs(v - w) for v, w in zip(vc, t)) < norm:
                    p = cand
                    break
                lam /= 2
            else:
                break
        return p


def seeded(seed):
    return random.Random(seed)


def sympy_zero_free(q):
    """Independent check that a bivariate polynomial has no real zero.

    Cylindrical decomposition along the second variable: exact Sturm counts
    on fibres over sample points between the critical values, and
    high-precision complex roots on the critical fibres themselves.
    """
    a, b = sympy.symbols(list(q.vars))
    e = to_sympy(q)
    p = sympy.Poly(e, a, b)
    if p.degree(a) <= 0:
        return not sympy.real_roots(sympy.Poly(e, b))
    pa = sympy.Poly(e, a)
    lead = pa.LC()
    disc = sympy.discriminant(pa) if pa.degree() > 1 else sympy.Integer(1)
    crit = sympy.Poly(sympy.expand(lead * disc), b)
    roots = sorted({r.evalf(60) for r in sympy.real_roots(crit)}) if crit.degree() > 0 else []
    samples = []
    if roots:
        samples.append(sympy.floor(roots[0]) - 1)
        samples.append(sympy.ceiling(roots[-1]) + 1)
        for lo, hi in zip(roots, roots[1:]):
            samples.append(sympy.nsimplify((lo + hi) / 2, rational=True, tolerance=(hi - lo) / 8))
    else:
        samples.append(sympy.Integer(0))
    for s in samples:
        fibre = sympy.Poly(e.subs(b, s), a)
        if fibre.is_zero or fibre.count_roots() > 0:
            return False
    with mpmath.workdps(60):
        for r in roots:
            coeffs = [mpmath.mpf(sympy.N(c.subs(b, r), 60)) for c in pa.all_coeffs()]
            while coeffs and abs(coeffs[0]) < mpmath.mpf(10) ** -40:
                coeffs.pop(0)
            if len(coeffs) <= 1:
                if not coeffs:
                    return False
                continue
            for z in mpmath.polyroots(coeffs, maxsteps=500, extraprec=200):
                if abs(mpmath.im(z)) < mpmath.mpf(10) ** -20:
                    return False
    return True
