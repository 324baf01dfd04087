"""Dense univariate polynomials over an exact field.

A polynomial is a list of coefficients, lowest degree first, with no
trailing zeros; the zero polynomial is ``[]``.  Coefficients only need
the field operations and comparison with ``0``, so the helpers work for
``Fraction`` as well as for algebraic field elements.
"""

import math
from fractions import Fraction


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def deg(p):
    return len(p) - 1


def lc(p):
    return p[-1] if p else 0


def add(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else 0
        b = q[i] if i < len(q) else 0
        out.append(a + b)
    return trim(out)


def neg(p):
    return [-c for c in p]


def sub(p, q):
    return add(p, neg(q))


def scale(p, c):
    if c == 0:
        return []
    return trim([c * a for a in p])


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def power(p, e):
    result = [Fraction(1)]
    base = list(p)
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def divmod_(p, q):
    """Euclidean division ``p = quo*q + rem`` with ``deg rem < deg q``."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = deg(q)
    inv = 1 / Fraction(q[-1]) if isinstance(q[-1], int) else 1 / q[-1]
    quo = [0] * max(len(p) - dq, 0)
    while rem and deg(rem) >= dq:
        c = rem[-1] * inv
        shift = deg(rem) - dq
        quo[shift] = c
        for i, b in enumerate(q):
            rem[i + shift] = rem[i + shift] - c * b
        rem.pop()
        rem = trim(rem)
    return trim(quo), rem


def rem(p, q):
    return divmod_(p, q)[1]


def exact_div(p, q):
    quo, r = divmod_(p, q)
    if r:
        raise ArithmeticError("polynomial division is not exact")
    return quo


def monic(p):
    if not p:
        return []
    c = p[-1]
    if c == 1:
        return list(p)
    inv = 1 / c
    return [a * inv for a in p]


def _is_rational(p):
    return all(isinstance(c, (int, Fraction)) for c in p)


def primitive_int(p):
    """Primitive integer polynomial proportional to a rational ``p``."""
    p = trim(p)
    if not p:
        return []
    den = 1
    for c in p:
        d = Fraction(c).denominator
        den = den * d // math.gcd(den, d)
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints]


def _int_prem(a, b):
    # pseudo-remainder over the integers
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[i + shift] -= lr * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return r


def gcd(p, q):
    p, q = trim(p), trim(q)
    if _is_rational(p) and _is_rational(q):
        # primitive pseudo-remainder sequence over Z keeps coefficients small
        a, b = primitive_int(p), primitive_int(q)
        if len(a) < len(b):
            a, b = b, a
        while b:
            a, b = b, primitive_int(_int_prem(a, b))
        return monic([Fraction(c) for c in a])
    while q:
        p, q = q, rem(p, q)
    return monic(p)


def ext_gcd(p, q):
    """Return ``(g, s, t)`` with ``s*p + t*q = g`` and ``g`` monic."""
    r0, r1 = trim(p), trim(q)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        quo, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    if not r0:
        return [], [], []
    inv = 1 / r0[-1]
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def derivative(p):
    return trim([i * p[i] for i in range(1, len(p))])


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def compose(p, q):
    """Return ``p(q(t))``."""
    acc = []
    for c in reversed(p):
        acc = add(mul(acc, q), [c] if c != 0 else [])
    return acc


def taylor_shift(p, a):
    """Return ``p(t + a)``."""
    out = list(p)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + a * out[j + 1]
    return trim(out)


def reverse(p):
    """Return ``t^deg(p) * p(1/t)``."""
    return trim(list(reversed(p)))


def scale_var(p, c):
    """Return ``p(c*t)``."""
    out = []
    f = 1
    for a in p:
        out.append(a * f)
        f = f * c
    return trim(out)


def squarefree_part(p):
    p = trim(p)
    if deg(p) < 1:
        return monic(p)
    g = gcd(p, derivative(p))
    return monic(exact_div(p, g))


def squarefree_decomposition(p):
    """Yun's algorithm: list of ``(factor, multiplicity)``, factors monic."""
    p = monic(trim(p))
    if deg(p) < 1:
        return []
    out = []
    dp = derivative(p)
    a = gcd(p, dp)
    b = exact_div(p, a)
    c = exact_div(dp, a)
    d = sub(c, derivative(b))
    i = 1
    while deg(b) > 0:
        a = gcd(b, d)
        b = exact_div(b, a)
        c = exact_div(d, a)
        d = sub(c, derivative(b))
        if deg(a) > 0:
            out.append((a, i))
        i += 1
    return out


def resultant(p, q):
    """Resultant over a field, by the Euclidean recursion."""
    p, q = trim(p), trim(q)
    if not p or not q:
        return 0
    m, n = deg(p), deg(q)
    if m == 0:
        return p[0] ** n
    if n == 0:
        return q[0] ** m
    sign = 1
    if m < n:
        p, q, m, n = q, p, n, m
        if (m * n) % 2:
            sign = -sign
    # now deg p >= deg q
    r = rem(p, q)
    if not r:
        return 0
    d = deg(r)
    # Res(p, q) = (-1)^(m n) Res(q, p) = (-1)^(m n) lc(q)^(m - d) Res(q, r)
    if (m * n) % 2:
        sign = -sign
    return sign * q[-1] ** (m - d) * resultant(q, r)


def interpolate(xs, ys):
    """Lagrange interpolation through distinct nodes (Newton form)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = []
    for i in range(n - 1, -1, -1):
        out = add(mul(out, [-xs[i], Fraction(1)]), [coef[i]] if coef[i] != 0 else [])
    return out


def from_roots(roots):
    out = [Fraction(1)]
    for r in roots:
        out = mul(out, [-r, Fraction(1)])
    return out
