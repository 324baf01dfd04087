"""Multimodular resultants of integer bivariate polynomials.

Values of ``Res_y(A, B)`` at integer abscissae are computed modulo word
size primes, interpolated per prime and lifted by Chinese remaindering
until the modulus exceeds twice a rigorous coefficient bound.  On the unit
circle each Sylvester row has 2-norm at most ``sqrt(sum_j |A_j|_1^2)``
where ``A_j`` are the coefficients of ``A`` in ``y``, so Hadamard gives
``|Res|^2 <= (sum_j |A_j|_1^2)^deg_y(B) * (sum_j |B_j|_1^2)^deg_y(A)``;
every coefficient is bounded by that maximum.
"""

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin for ``n < 3.3e24``."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(start):
    """Primes descending from ``start``."""
    n = start - 1 if start % 2 == 0 else start - 2
    while n > 2:
        if is_prime(n):
            yield n
        n -= 2


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def resultant_mod(a, b, p):
    """Resultant of two univariate polynomials (lists, low to high) mod ``p``."""
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    if not a or not b:
        return 0
    res = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return res * pow(b[0], da, p) % p
        if da < db:
            if da * db % 2:
                res = -res % p
            a, b = b, a
            continue
        # a = q b + r ; Res(a, b) = (-1)^(da db) lc(b)^(da - dr) Res(b, r)
        r = list(a)
        inv = pow(b[-1], -1, p)
        while len(r) - 1 >= db and r:
            c = r[-1] * inv % p
            shift = len(r) - 1 - db
            for i, bc in enumerate(b):
                r[i + shift] = (r[i + shift] - c * bc) % p
            r.pop()
            _trim(r)
        if not r:
            return 0
        dr = len(r) - 1
        if da * db % 2:
            res = -res % p
        res = res * pow(b[-1], da - dr, p) % p
        a, b = b, r


def interpolate_mod(xs, ys, p):
    """Coefficients of the interpolating polynomial modulo ``p`` (Newton form)."""
    n = len(xs)
    coef = [y % p for y in ys]
    inverses = {}
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            d = xs[i] - xs[i - j]
            inv = inverses.get(d)
            if inv is None:
                inv = inverses[d] = pow(d, -1, p)
            coef[i] = (coef[i] - coef[i - 1]) * inv % p
    out = [0] * n
    for i in range(n - 1, -1, -1):
        # out = out * (x - xs[i]) + coef[i]
        shifted = [0] + out[:-1]
        out = [(s - xs[i] * o) % p for s, o in zip(shifted, out)]
        out[0] = (out[0] + coef[i]) % p
    return out


def _specialize(A, keep, z, p):
    # A: dict exponent -> int; coefficient list in the eliminated variable
    elim = 1 - keep
    out = {}
    pw = _powers(z, max(e[keep] for e in A), p)
    for e, c in A.items():
        out[e[elim]] = (out.get(e[elim], 0) + c * pw[e[keep]]) % p
    n = max(out)
    return [out.get(k, 0) for k in range(n + 1)]


def _powers(z, n, p):
    out = [1] * (n + 1)
    for k in range(1, n + 1):
        out[k] = out[k - 1] * z % p
    return out


def _lead_nonzero(A, keep, deg_elim, z, p):
    elim = 1 - keep
    v = 0
    for e, c in A.items():
        if e[elim] == deg_elim:
            v = (v + c * pow(z, e[keep], p)) % p
    return v != 0


def _row_norm_sq(A, eliminate):
    rows = {}
    for e, c in A.items():
        rows[e[eliminate]] = rows.get(e[eliminate], 0) + abs(c)
    return sum(v * v for v in rows.values())


def bivariate_resultant_int(A, B, eliminate):
    """``Res_v(A, B)`` for integer term dicts ``A``, ``B`` in two variables.

    Returns the integer coefficient list in the kept variable.
    """
    keep = 1 - eliminate
    da = max(e[eliminate] for e in A)
    db = max(e[eliminate] for e in B)
    ka = max(e[keep] for e in A)
    kb = max(e[keep] for e in B)
    bound_deg = ka * db + kb * da
    bound_sq = _row_norm_sq(A, eliminate) ** db * _row_norm_sq(B, eliminate) ** da
    modulus = 1
    result = None
    for p in primes_below(2**61):
        xs, ys = [], []
        z = 0
        while len(xs) <= bound_deg:
            if _lead_nonzero(A, keep, da, z, p) and _lead_nonzero(B, keep, db, z, p):
                xs.append(z)
                ys.append(resultant_mod(_specialize(A, keep, z, p), _specialize(B, keep, z, p), p))
            z += 1
        coeffs = interpolate_mod(xs, ys, p)
        if result is None:
            result = coeffs
        else:
            # Chinese remaindering coefficientwise
            inv = pow(modulus % p, -1, p)
            result = [r + modulus * ((c - r) * inv % p) for r, c in zip(result, coeffs)]
        modulus *= p
        if modulus * modulus > 4 * bound_sq:
            break
    half = modulus // 2
    out = [r - modulus if r > half else r for r in result]
    while out and out[-1] == 0:
        out.pop()
    return out
