"""Real zeros of plane polynomials, tangent cones and zero-freeness certificates.

The zero set of a denominator is computed from resultants of its
square-free part ``S`` with the partial derivatives: a real zero of a
nonnegative ``S`` is a critical point, so its coordinates are roots of
``Res_y(S, S_y)`` and ``Res_x(S, S_x)``.  Finiteness is decided by a
one-dimensional cell decomposition: between consecutive critical
abscissae the number of real roots of ``S(x0, y)`` is constant, so ``S``
vanishes on a curve exactly when some sample fibre has a real root.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import mpmath

from . import modular, roots, upoly
from .mpoly import MPoly, exact_div, gcd, squarefree_part
from .ratfunc import lowest_form
from .scalar import (
    DEFAULT_MAX_DEGREE,
    AlgElem,
    common_field,
    compositum,
    enclosure,
    field_of,
    real_root_field,
    scalar_str,
    sign,
)


class ZeroSetNotFinite(ValueError):
    """The polynomial vanishes on a curve of real points."""


@dataclass(frozen=True)
class AlgebraicPoint:
    """A point with exact scalar coordinates and a rational isolating box."""

    coords: tuple
    box: tuple

    @classmethod
    def from_coords(cls, coords, width=Fraction(1, 2**30)):
        coords = tuple(c if isinstance(c, AlgElem) else Fraction(c) for c in coords)
        box = tuple(enclosure(c, width) for c in coords)
        return cls(coords, box)

    @property
    def midpoint(self):
        return tuple((lo + hi) / 2 for lo, hi in self.box)

    def is_rational(self):
        return all(not isinstance(c, AlgElem) for c in self.coords)

    def field(self):
        return common_field(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self):
        return "(" + ", ".join(scalar_str(c) for c in self.coords) + ")"


# univariate exact roots -----------------------------------------------------


def isolate_real_roots(p):
    """Disjoint rational isolating intervals of the real roots of ``p``.

    ``p`` is a univariate ``MPoly`` or coefficient list with rational
    coefficients.  Multiplicities are attached to each interval.
    """
    coeffs = p.univariate_coeffs() if isinstance(p, MPoly) else list(p)
    if not upoly.trim(coeffs):
        raise ValueError("cannot isolate the roots of the zero polynomial")
    return roots.isolate_real_roots(coeffs)


def _element_poly(c):
    # coefficient vector of a scalar in the power basis of its field
    if isinstance(c, AlgElem):
        return list(c.coeffs)
    return [Fraction(c)] if c != 0 else []


def norm_poly(coeffs):
    """Rational polynomial whose roots contain those of ``coeffs`` over ``Q(alpha)``."""
    coeffs = upoly.trim(coeffs)
    fld = common_field(coeffs)
    if fld is None:
        return [Fraction(c) for c in coeffs]
    m = list(fld.minpoly)
    n = upoly.deg(coeffs) * fld.degree
    xs, ys = [], []
    for k in range(n + 1):
        z = Fraction((k + 1) // 2 * (1 if k % 2 else -1))
        val = []
        zp = Fraction(1)
        for c in coeffs:
            val = upoly.add(val, upoly.scale(_element_poly(c), zp))
            zp *= z
        xs.append(z)
        ys.append(upoly.resultant(m, val))
    return upoly.interpolate(xs, ys)


def _root_multiplicity(coeffs, r):
    k = 0
    p = coeffs
    while p and upoly.evaluate(p, r) == 0:
        k += 1
        p = upoly.derivative(p)
    return k


def _embed_poly(coeffs, embed):
    return [embed(c) for c in coeffs]


def real_roots_exact(coeffs, max_degree=DEFAULT_MAX_DEGREE):
    """Exact real roots of a univariate polynomial over ``Q`` or one ``Q(alpha)``.

    Returns a list of ``(value, (lo, hi), multiplicity)`` sorted by value,
    where ``value`` is a ``Fraction`` or an ``AlgElem`` in a field that
    also contains the coefficients.
    """
    coeffs = upoly.trim(coeffs)
    if not coeffs:
        raise ValueError("zero polynomial has no isolated roots")
    if upoly.deg(coeffs) < 1:
        return []
    fld = common_field(coeffs)
    if fld is None:
        out = []
        for ri in roots.isolate_real_roots(coeffs):
            sqf_factor = upoly.squarefree_part(coeffs)
            value = real_root_field(sqf_factor, ri.lo, ri.hi, max_degree)
            out.append((value, (ri.lo, ri.hi), ri.multiplicity))
        return out
    norm = norm_poly(coeffs)
    sqf = upoly.squarefree_part(norm)
    out = []
    for lo, hi in roots.isolate_squarefree(sqf):
        value = real_root_field(sqf, lo, hi, max_degree)
        vfield = field_of(value)
        big, emb_c, emb_v = compositum(fld, vfield, max_degree)
        pc = _embed_poly(coeffs, emb_c)
        r = emb_v(value)
        if upoly.evaluate(pc, r) == 0:
            out.append((r, (lo, hi), _root_multiplicity(pc, r)))
    return out


def _sturm_has_real_root(coeffs):
    # Sturm count over the whole line; only signs of leading coefficients matter
    p = upoly.trim(coeffs)
    if upoly.deg(p) < 1:
        return False
    seq = [p, upoly.derivative(p)]
    while seq[-1]:
        seq.append(upoly.neg(upoly.rem(seq[-2], seq[-1])))
    seq.pop()
    plus = roots.sign_variations([s[-1] for s in seq], sign)
    minus = roots.sign_variations([s[-1] * (-1) ** upoly.deg(s) for s in seq], sign)
    return minus - plus > 0


# bivariate helpers ------------------------------------------------------------


def _specialize(S, i, value):
    """Coefficient list (in the other variable) of ``S`` with variable ``i`` fixed."""
    j = 1 - i
    out = {}
    pows = {}
    for e, c in S.terms.items():
        k = e[i]
        pw = pows.get(k)
        if pw is None:
            pw = value**k
            pows[k] = pw
        out[e[j]] = out.get(e[j], 0) + c * pw
    n = max(out) if out else -1
    return upoly.trim([out.get(d, Fraction(0)) for d in range(n + 1)])


def _sample_points():
    k = 0
    while True:
        yield Fraction((k + 1) // 2 * (1 if k % 2 else -1))
        k += 1


def _integral_terms(P):
    c = P.scale_to_integral()
    return {e: int(v * c) for e, v in P.terms.items()}


def bivariate_resultant(A, B, eliminate):
    """``Res_v(A, B)`` for ``v`` the variable index ``eliminate``.

    Rational inputs are scaled to primitive integer polynomials (which
    changes the resultant by a nonzero constant only) and handled by the
    multimodular routine.  Algebraic coefficients use evaluation at
    integer abscissae where neither leading coefficient vanishes,
    followed by interpolation.
    """
    keep = 1 - eliminate
    da, db = A.degree_in(eliminate), B.degree_in(eliminate)
    if da < 0 or db < 0:
        raise ValueError("resultant with the zero polynomial")
    if da == 0 or db == 0:
        # Res(A, B) = B^deg(A) when B is free of the eliminated variable
        free, power = (B, da) if db == 0 else (A, db)
        return upoly.power(free.univariate_coeffs(free.vars[keep]), power)
    if A.is_rational() and B.is_rational():
        res = modular.bivariate_resultant_int(_integral_terms(A), _integral_terms(B), eliminate)
        return [Fraction(c) for c in res]
    bound = A.degree_in(keep) * db + B.degree_in(keep) * da
    lca = A.coeffs_in(eliminate)[da]
    lcb = B.coeffs_in(eliminate)[db]
    xs, ys = [], []
    for z in _sample_points():
        if len(xs) > bound:
            break
        pa = (lca.evaluate([z if k == keep else 0 for k in range(2)]))
        pb = (lcb.evaluate([z if k == keep else 0 for k in range(2)]))
        if pa == 0 or pb == 0:
            continue
        xs.append(z)
        ys.append(upoly.resultant(_specialize(A, keep, z), _specialize(B, keep, z)))
    return upoly.interpolate(xs, ys)


def _drop_free_factor(S, i):
    """Split off the factor of ``S`` independent of variable ``i``.

    Returns ``(rest, free)``; raises :class:`ZeroSetNotFinite` when the
    free factor has a real root (a line of zeros).
    """
    free = gcd(S, S.diff(i))
    if free.is_constant():
        return S, None
    j = 1 - i
    coeffs = free.univariate_coeffs(j)
    if _sturm_has_real_root(coeffs):
        raise ZeroSetNotFinite(
            f"zero set not finite: factor {free} vanishes on lines {S.vars[j]} = const"
        )
    return exact_div(S, free), free


def _check_fibres(S, crit):
    """Raise if some fibre over a regular cell contains a real zero."""
    samples = []
    ints = roots.isolate_squarefree(upoly.squarefree_part(crit)) if upoly.deg(crit) >= 1 else []
    if not ints:
        samples = [Fraction(0)]
    else:
        samples.append(ints[0][0] - 1)
        for (a, b), (c, d) in zip(ints, ints[1:]):
            samples.append((b + c) / 2)
        samples.append(ints[-1][1] + 1)
    for x0 in samples:
        fibre = _specialize(S, 0, x0)
        if _sturm_has_real_root(fibre):
            raise ZeroSetNotFinite(
                f"zero set not finite: the curve meets the line x = {x0} in real points"
            )
    return samples


def _box_excludes_zero(S, xbox, ybox, prec):
    saved = mpmath.iv.prec
    mpmath.iv.prec = prec
    try:
        bx = mpmath.iv.mpf([_iv_end(xbox[0]), _iv_end(xbox[1])])
        by = mpmath.iv.mpf([_iv_end(ybox[0]), _iv_end(ybox[1])])
        acc = mpmath.iv.mpf(0)
        for (i, j), c in S.terms.items():
            acc += _iv_end(c) * bx**i * by**j
        return not (acc.a <= 0 <= acc.b)
    finally:
        mpmath.iv.prec = saved


def _iv_end(q):
    q = Fraction(q)
    return mpmath.iv.mpf(q.numerator) / q.denominator


def _surviving_boxes(S, res_x, res_y, rounds=6):
    """Root boxes of the two resultants on which ``S`` may vanish.

    Boxes are refined and tested with rigorous interval arithmetic, so
    exact algebraic numbers are built only for boxes that survive.
    Returns ``(sqf_x, xbox, sqf_y, ybox)`` tuples.
    """
    sx = norm_poly(upoly.squarefree_part(res_x)) if upoly.deg(res_x) >= 1 else []
    sy = norm_poly(upoly.squarefree_part(res_y)) if upoly.deg(res_y) >= 1 else []
    xboxes = roots.isolate_squarefree(sx) if sx else []
    yboxes = roots.isolate_squarefree(sy) if sy else []
    alive = [(bx, by) for bx in xboxes for by in yboxes]
    width = Fraction(1, 2**8)
    for r in range(rounds):
        prec = 64 + 32 * r
        alive = [(bx, by) for bx, by in alive if not _box_excludes_zero(S, bx, by, prec)]
        if not alive:
            break
        width /= 2**12
        alive = [(roots.refine(sx, *bx, width), roots.refine(sy, *by, width)) for bx, by in alive]
    return [(sx, bx, sy, by) for bx, by in alive]


@dataclass
class ZeroSetCertificate:
    """Data certifying the real zero set of a plane polynomial."""

    squarefree: MPoly
    resultant_x: list
    resultant_y: list
    cell_samples: list
    zeros: list = field(default_factory=list)

    @property
    def zero_free(self):
        return not self.zeros

    def __bool__(self):
        return self.zero_free

    def as_dict(self):
        return {
            "squarefree_part": str(self.squarefree),
            "resultant_x": [scalar_str(c) for c in self.resultant_x],
            "resultant_y": [scalar_str(c) for c in self.resultant_y],
            "cell_samples": [scalar_str(c) for c in self.cell_samples],
            "zeros": [str(p) for p in self.zeros],
            "zero_free": self.zero_free,
        }


def zero_set_certificate(Q, max_degree=DEFAULT_MAX_DEGREE):
    """Compute the real zeros of ``Q`` together with their certificate."""
    if len(Q.vars) != 2:
        raise ValueError("zero sets are computed for polynomials in two variables")
    if not Q.terms:
        raise ZeroSetNotFinite("zero set not finite: the polynomial is zero")
    S = squarefree_part(Q)
    if S.is_constant():
        return ZeroSetCertificate(S, [], [], [], [])
    S, _ = _drop_free_factor(S, 0)
    S, _ = _drop_free_factor(S, 1)
    if S.is_constant():
        return ZeroSetCertificate(S, [], [], [], [])
    # S now involves both variables and shares no factor with either partial
    res_x = bivariate_resultant(S, S.diff(1), eliminate=1)
    res_y = bivariate_resultant(S, S.diff(0), eliminate=0)
    lc_y = S.coeffs_in(1)[S.degree_in(1)].univariate_coeffs(0) if S.degree_in(1) else [Fraction(1)]
    crit = norm_poly(upoly.mul(res_x, lc_y if lc_y else [Fraction(1)]))
    samples = _check_fibres(S, crit)
    zeros = []
    if S.is_rational():
        pairs = _surviving_boxes(S, res_x, res_y)
        xs = [(real_root_field(sx, *bx, max_degree), bx, 1) for sx, bx, _, _ in pairs]
        ys = [(real_root_field(sy, *by, max_degree), by, 1) for _, _, sy, by in pairs]
        candidates = list(zip(xs, ys))
    else:
        xs = real_roots_exact(res_x, max_degree)
        ys = real_roots_exact(res_y, max_degree)
        candidates = [(x, y) for x in xs for y in ys]
    for (xv, _, _), (yv, _, _) in candidates:
        fx, fy = field_of(xv), field_of(yv)
        fs = S.field()
        big, ex, ey = compositum(fx, fy, max_degree)
        big2, eb, es = compositum(big, fs, max_degree)
        px, py = eb(ex(xv)), eb(ey(yv))
        Sb = MPoly(S.vars, {e: es(c) for e, c in S.terms.items()})
        if Sb.evaluate([px, py]) == 0:
            zeros.append(AlgebraicPoint.from_coords((px, py)))
    zeros.sort(key=lambda p: p.midpoint)
    return ZeroSetCertificate(S, res_x, res_y, samples, zeros)


def finite_real_zeros(Q, max_degree=DEFAULT_MAX_DEGREE):
    """Real zeros of a plane polynomial with finitely many of them.

    Raises :class:`ZeroSetNotFinite` if ``Q`` vanishes along a real curve.
    """
    return zero_set_certificate(Q, max_degree).zeros


def is_real_zero_free(Q, max_degree=DEFAULT_MAX_DEGREE):
    """Certificate (truthy when ``Q`` has no real zero)."""
    return zero_set_certificate(Q, max_degree)


# tangent cones ----------------------------------------------------------------


@dataclass(frozen=True)
class TangentLine:
    """A tangent line through the centre.

    Real lines store a direction ``(1, slope)`` or ``(0, 1)``.  A complex
    conjugate pair stores the certified box of the root ``z = Y/X`` with
    positive imaginary part.
    """

    kind: str  # "real" or "complex"
    multiplicity: int
    direction: tuple = None
    box: tuple = None
    is_isotropic: bool = False  # the pair {x + i y = 0, x - i y = 0}

    def linear_form(self, vars):
        X, Y = MPoly.gens(vars)
        if self.kind != "real":
            raise ValueError("complex pairs have no real linear form")
        a, b = self.direction
        return X * b - Y * a

    def as_dict(self):
        d = {"kind": self.kind, "multiplicity": self.multiplicity}
        if self.kind == "real":
            d["direction"] = [scalar_str(c) for c in self.direction]
        else:
            d["box"] = [[scalar_str(a), scalar_str(b)] for a, b in self.box]
            d["isotropic"] = self.is_isotropic
        return d


@dataclass(frozen=True)
class TangentCone:
    center: AlgebraicPoint
    multiplicity: int
    lowest_form: MPoly
    lines: tuple

    @property
    def real_lines(self):
        return [l for l in self.lines if l.kind == "real"]

    @property
    def complex_pairs(self):
        return [l for l in self.lines if l.kind == "complex"]

    @property
    def has_isotropic_pair(self):
        return any(l.is_isotropic for l in self.lines)

    def total_multiplicity(self):
        return sum(l.multiplicity * (1 if l.kind == "real" else 2) for l in self.lines)


def _gauss_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def evaluate_at_i(form):
    """Value of a binary form at ``(1, i)`` as a (real, imaginary) pair."""
    re = im = 0
    for e, c in form.terms.items():
        # (1)^a (i)^b = i^b
        b = e[1] % 4
        if b == 0:
            re = re + c
        elif b == 1:
            im = im + c
        elif b == 2:
            re = re - c
        else:
            im = im - c
    return re, im


def _sqrt_bounds(q, bits=80):
    # rational lower and upper bounds for sqrt(q), q >= 0
    q = Fraction(q)
    scale = 1 << bits
    n = q.numerator * scale * scale // q.denominator
    r = isqrt(n)
    return Fraction(r, scale), Fraction(r + 1, scale)


def _poly_eval_ball(coeffs, z):
    """Gaussian-rational centre value and error radius of ``p(z)``."""
    width = Fraction(1, 2**200)
    cen = []
    err = []
    for c in coeffs:
        lo, hi = enclosure(c, width)
        cen.append((lo + hi) / 2)
        err.append((hi - lo) / 2)
    val = (Fraction(0), Fraction(0))
    for c in reversed(cen):
        val = _gauss_mul(val, z)
        val = (val[0] + c, val[1])
    R = abs(z[0]) + abs(z[1])
    e = sum(ek * R**k for k, ek in enumerate(err))
    return val, e


def _certify_complex_roots(coeffs, count, dps=40):
    """Certified disjoint boxes for the ``count`` roots in the upper half plane."""
    import mpmath

    if count == 0:
        return []
    n = upoly.deg(coeffs)
    dcoeffs = upoly.derivative(coeffs)
    for attempt in range(6):
        with mpmath.workdps(dps):
            approx = []
            for c in reversed(coeffs):
                lo, hi = enclosure(c, Fraction(1, 10 ** (dps + 5)))
                m = (lo + hi) / 2
                approx.append(mpmath.mpf(m.numerator) / m.denominator)
            rts = mpmath.polyroots(approx, maxsteps=400, extraprec=4 * dps)
            upper = [r for r in rts if mpmath.im(r) > 0]
        boxes = []
        ok = len(upper) == count
        if ok:
            for r in upper:
                z = (Fraction(mpmath.nstr(mpmath.re(r), dps)), Fraction(mpmath.nstr(mpmath.im(r), dps)))
                (gr, gi), ge = _poly_eval_ball(coeffs, z)
                (dr, di), de = _poly_eval_ball(dcoeffs, z)
                g_hi = _sqrt_bounds(gr * gr + gi * gi)[1] + ge
                d_lo = _sqrt_bounds(dr * dr + di * di)[0] - de
                if d_lo <= 0:
                    ok = False
                    break
                rad = n * g_hi / d_lo
                if z[1] - rad <= 0:
                    ok = False
                    break
                boxes.append(((z[0] - rad, z[0] + rad), (z[1] - rad, z[1] + rad)))
        if ok:
            for i in range(len(boxes)):
                for j in range(i + 1, len(boxes)):
                    (a, b), (c, d) = boxes[i]
                    (e, f), (g, h) = boxes[j]
                    if not (b < e or f < a or d < g or h < c):
                        ok = False
        if ok:
            return boxes
        dps *= 2
    raise ArithmeticError("could not certify the complex tangent directions")


def tangent_cone(Q, p, max_degree=DEFAULT_MAX_DEGREE):
    """Factor the lowest form of ``Q`` at ``p`` into real lines and conjugate pairs."""
    if not Q.terms:
        raise ValueError("tangent cone of the zero polynomial is undefined")
    if not isinstance(p, AlgebraicPoint):
        p = AlgebraicPoint.from_coords(p)
    if len(Q.vars) != 2:
        raise ValueError("tangent cones are computed in two variables")
    L, m = lowest_form(Q, p.coords)
    # L(X, Y) = sum c_k X^(m-k) Y^k ; dehomogenise at X = 1
    dz = [Fraction(0)] * (m + 1)
    for e, c in L.terms.items():
        dz[e[1]] = c
    dz = upoly.trim(dz)
    lines = []
    vertical = m - upoly.deg(dz)
    if vertical:
        lines.append(TangentLine("real", vertical, direction=(Fraction(0), Fraction(1))))
    if upoly.deg(dz) >= 1:
        for value, _, mult in real_roots_exact(dz, max_degree):
            lines.append(TangentLine("real", mult, direction=(Fraction(1), value)))
        for fac, mult in upoly.squarefree_decomposition(dz):
            nreal = len(real_roots_exact(fac, max_degree))
            npairs = (upoly.deg(fac) - nreal) // 2
            if npairs == 0:
                continue
            # the isotropic pair z = +-i appears exactly when fac(i) == 0
            re, im = evaluate_at_i(MPoly.from_univariate(fac, "z", ("w", "z")))
            iso = re == 0 and im == 0
            for box in _certify_complex_roots(fac, npairs):
                hit = iso and box[0][0] <= 0 <= box[0][1] and box[1][0] <= 1 <= box[1][1]
                lines.append(TangentLine("complex", mult, box=box, is_isotropic=hit))
    cone = TangentCone(p, m, L, tuple(lines))
    assert cone.total_multiplicity() == m
    return cone

