"""Sparse multivariate polynomials over the exact scalars.

A polynomial carries an ordered tuple of variable names and a dict from
exponent tuples to nonzero coefficients.  Binary operations on
polynomials with different variable tuples first merge the tuples
(left operand's order, then the new names of the right operand), so
``x + y`` built from two one-variable polynomials lives in ``(x, y)``.
"""

import random as _random
from fractions import Fraction
from functools import reduce as _fold
from math import gcd as _igcd

from . import upoly
from .scalar import AlgElem, as_scalar, common_field, scalar_str, sign


def _merge_vars(a, b):
    if a == b:
        return a
    return tuple(a) + tuple(v for v in b if v not in a)


def _grlex_key(exp):
    return (sum(exp), exp)


class MPoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        if terms:
            for exp, c in terms.items():
                if c == 0:
                    continue
                exp = tuple(exp)
                if len(exp) != n:
                    raise ValueError("exponent arity does not match variables")
                clean[exp] = c if isinstance(c, AlgElem) else Fraction(c)
        self.terms = clean
        self._hash = None

    # constructors -------------------------------------------------------

    @classmethod
    def const(cls, c, vars=()):
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): as_scalar(c)})

    @classmethod
    def zero(cls, vars=()):
        return cls(vars, {})

    @classmethod
    def var(cls, name, vars=None):
        vars = tuple(vars) if vars is not None else (name,)
        if name not in vars:
            vars = vars + (name,)
        exp = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {exp: Fraction(1)})

    @classmethod
    def gens(cls, vars):
        vars = tuple(vars)
        return [cls.var(v, vars) for v in vars]

    @classmethod
    def from_univariate(cls, coeffs, var, vars=None):
        vars = tuple(vars) if vars is not None else (var,)
        i = vars.index(var)
        terms = {}
        for k, c in enumerate(coeffs):
            if c != 0:
                exp = [0] * len(vars)
                exp[i] = k
                terms[tuple(exp)] = c
        return cls(vars, terms)

    # basic queries ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    @property
    def nvars(self):
        return len(self.vars)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var):
        i = self._index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def occurring_vars(self):
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return sorted(used)

    def _index(self, var):
        if isinstance(var, int):
            return var
        return self.vars.index(var)

    def coefficients(self):
        return list(self.terms.values())

    def field(self):
        return common_field(self.terms.values())

    def is_rational(self):
        return all(not isinstance(c, AlgElem) for c in self.terms.values())

    def leading_term(self):
        """Leading ``(exponent, coefficient)`` in graded-lex order."""
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # variable handling --------------------------------------------------

    def with_vars(self, vars):
        """Re-express in a variable tuple containing every occurring variable."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = []
        for i, v in enumerate(self.vars):
            if v in vars:
                pos.append(vars.index(v))
            else:
                pos.append(None)
        terms = {}
        for e, c in self.terms.items():
            new = [0] * len(vars)
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise ValueError(f"variable {self.vars[i]} missing from {vars}")
                    new[pos[i]] = k
            terms[tuple(new)] = c
        return MPoly(vars, terms)

    def rename(self, mapping):
        return MPoly(tuple(mapping.get(v, v) for v in self.vars), self.terms)

    def _unify(self, other):
        if isinstance(other, MPoly):
            if other.vars == self.vars:
                return self, other
            vars = _merge_vars(self.vars, other.vars)
            return self.with_vars(vars), other.with_vars(vars)
        return self, MPoly.const(other, self.vars)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, MPoly):
            try:
                other = MPoly.const(other, self.vars)
            except TypeError:
                return NotImplemented
        a, b = self._unify(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            v = terms.get(e)
            s = c if v is None else v + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        return MPoly(a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            try:
                other = MPoly.const(other, self.vars)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            try:
                c = as_scalar(other)
            except TypeError:
                return NotImplemented
            if c == 0:
                return MPoly(self.vars, {})
            return MPoly(self.vars, {e: v * c for e, v in self.terms.items()})
        a, b = self._unify(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        terms = {}
        bt = list(b.terms.items())
        for e1, c1 in a.terms.items():
            for e2, c2 in bt:
                e = tuple(x + y for x, y in zip(e1, e2))
                v = terms.get(e)
                terms[e] = c1 * c2 if v is None else v + c1 * c2
        return MPoly(a.vars, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MPoly):
            if other.is_constant() and other.terms:
                other = other.constant_value()
            else:
                return exact_div(self, other)
        c = as_scalar(other)
        if c == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        inv = 1 / c
        return self * inv

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = MPoly.const(1, self.vars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            a, b = self._unify(other)
            return a.terms == b.terms
        try:
            c = as_scalar(other)
        except TypeError:
            return NotImplemented
        if c == 0:
            return not self.terms
        return self.is_constant() and self.constant_value() == c

    def __hash__(self):
        if self._hash is None:
            items = []
            for e, c in self.terms.items():
                key = tuple((v, k) for v, k in zip(self.vars, e) if k)
                items.append((key, c))
            self._hash = hash(frozenset(items))
        return self._hash

    # calculus and evaluation -------------------------------------------

    def diff(self, var):
        i = self._index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        return MPoly(self.vars, terms)

    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point):
        """Evaluate at a point given positionally (any ring elements)."""
        point = list(point)
        if len(point) != len(self.vars):
            raise ValueError("point arity does not match variables")
        # cache powers per variable
        pows = [dict() for _ in point]
        acc = 0
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    p = pows[i].get(k)
                    if p is None:
                        p = point[i] ** k
                        pows[i][k] = p
                    t = t * p
            acc = acc + t
        return acc

    def compose(self, polys, vars=None):
        """Substitute polynomial ``polys[i]`` for variable ``i``."""
        if len(polys) != len(self.vars):
            raise ValueError("wrong number of substitutions")
        if vars is None:
            vars = ()
            for p in polys:
                if isinstance(p, MPoly):
                    vars = _merge_vars(vars, p.vars)
        polys = [p.with_vars(vars) if isinstance(p, MPoly) else MPoly.const(p, vars) for p in polys]
        cache = [dict() for _ in polys]

        def pw(i, k):
            got = cache[i].get(k)
            if got is None:
                if k == 1:
                    got = polys[i]
                elif k % 2 == 0:
                    half = pw(i, k // 2)
                    got = half * half
                else:
                    got = pw(i, k - 1) * polys[i]
                cache[i][k] = got
            return got

        acc = MPoly.zero(vars)
        for e, c in self.terms.items():
            t = MPoly.const(c, vars)
            for i, k in enumerate(e):
                if k:
                    t = t * pw(i, k)
            acc = acc + t
        return acc

    def homogeneous_components(self):
        """List ``[Q_0, ..., Q_d]`` with ``Q_k`` homogeneous of degree ``k``."""
        if not self.terms:
            return []
        d = self.total_degree()
        parts = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            parts[sum(e)][e] = c
        return [MPoly(self.vars, t) for t in parts]

    def translate(self, point):
        """The polynomial ``Q(x + p)`` (re-centred at ``p``)."""
        gens = MPoly.gens(self.vars)
        return self.compose([g + as_scalar(c) for g, c in zip(gens, point)], self.vars)

    def univariate_coeffs(self, var=None):
        occ = self.occurring_vars()
        if var is None:
            if len(occ) > 1:
                raise ValueError("polynomial is not univariate")
            i = occ[0] if occ else 0
        else:
            i = self._index(var)
            if any(j != i for j in occ):
                raise ValueError("polynomial depends on other variables")
        if not self.terms:
            return []
        n = max(e[i] for e in self.terms) if self.vars else 0
        out = [Fraction(0)] * (n + 1)
        for e, c in self.terms.items():
            out[e[i] if self.vars else 0] = c
        return upoly.trim(out)

    def coeffs_in(self, var):
        """Dict ``k -> coefficient of var^k`` (polynomials in the same variables)."""
        i = self._index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[ne] = c
        return {k: MPoly(self.vars, t) for k, t in out.items()}

    def scale_to_integral(self):
        """Positive rational ``c`` with ``c*self`` integral and primitive."""
        if not self.is_rational() or not self.terms:
            return Fraction(1)
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // _igcd(den, c.denominator)
        num = 0
        for c in self.terms.values():
            num = _igcd(num, int(c * den))
        return Fraction(den, num)

    # printing -----------------------------------------------------------

    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        return poly_str(self)


def _mono_str(vars, exp):
    parts = []
    for v, k in zip(vars, exp):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def poly_str(p):
    """Canonical text form accepted by the expression parser."""
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = _mono_str(p.vars, e)
        neg = not isinstance(c, AlgElem) and c < 0
        mag = -c if neg else c
        cs = scalar_str(mag)
        if mono:
            if mag == 1:
                body = mono
            elif isinstance(mag, AlgElem) or "/" in cs:
                body = f"({cs})*{mono}"
            else:
                body = f"{cs}*{mono}"
        else:
            body = f"({cs})" if "/" in cs else cs
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# division and gcd ----------------------------------------------------------


def _lex_lead(p):
    return max(p.terms)


def exact_div(f, g):
    """Quotient ``f/g``; raises ``ArithmeticError`` if ``g`` does not divide ``f``."""
    f, g = f._unify(g)
    if not g.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if g.is_constant():
        return f * (1 / g.constant_value())
    ge = _lex_lead(g)
    gc = g.terms[ge]
    ginv = 1 / gc
    rem = dict(f.terms)
    quo = {}
    gt = list(g.terms.items())
    while rem:
        re_ = max(rem)
        rc = rem[re_]
        d = tuple(a - b for a, b in zip(re_, ge))
        if any(k < 0 for k in d):
            raise ArithmeticError("polynomial division is not exact")
        q = rc * ginv
        quo[d] = q
        for e, c in gt:
            ne = tuple(a + b for a, b in zip(e, d))
            v = rem.get(ne, 0) - q * c
            if v == 0:
                rem.pop(ne, None)
            else:
                rem[ne] = v
    return MPoly(f.vars, quo)


def divides(g, f):
    try:
        exact_div(f, g)
    except ArithmeticError:
        return False
    return True


def _monic(p):
    if not p.terms:
        return p
    _, c = p.leading_term()
    return p * (1 / c)


def _prem(a, b, i):
    # pseudo-remainder of a by b as polynomials in variable i
    db = b.degree_in(i)
    bc = b.coeffs_in(i)
    lb = bc[db]
    r = a
    x = MPoly.var(a.vars[i], a.vars)
    while r.terms and r.degree_in(i) >= db:
        dr = r.degree_in(i)
        lr = r.coeffs_in(i)[dr]
        r = r * lb - lr * b * x ** (dr - db)
    return r


def content(p, i):
    """Gcd of the coefficients of ``p`` seen as a polynomial in variable ``i``."""
    coeffs = [c for _, c in sorted(p.coeffs_in(i).items())]
    return _fold(gcd, coeffs, MPoly.zero(p.vars))


_PRIME = 2**61 - 1


def _split_monomial(p):
    low = [min(e[i] for e in p.terms) for i in range(len(p.vars))]
    if not any(low):
        return low, p
    terms = {tuple(a - b for a, b in zip(e, low)): c for e, c in p.terms.items()}
    return low, MPoly(p.vars, terms)


def _mod_p(c):
    c = Fraction(c)
    if c.denominator % _PRIME == 0:
        raise ZeroDivisionError
    return c.numerator * pow(c.denominator, -1, _PRIME) % _PRIME


def _specialize_mod_p(p, i, point):
    out = {}
    for e, c in p.terms.items():
        v = _mod_p(c)
        for j, k in enumerate(e):
            if j != i and k:
                v = v * pow(point[j], k, _PRIME) % _PRIME
        out[e[i]] = (out.get(e[i], 0) + v) % _PRIME
    n = max(out)
    coeffs = [out.get(k, 0) for k in range(n + 1)]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _gcd_degree_mod_p(a, b):
    while b:
        inv = pow(b[-1], -1, _PRIME)
        while len(a) >= len(b):
            c = a[-1] * inv % _PRIME
            shift = len(a) - len(b)
            for k, bc in enumerate(b):
                a[k + shift] = (a[k + shift] - c * bc) % _PRIME
            a.pop()
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return len(a) - 1


def _certainly_coprime(f, g):
    """True when a modular image proves ``gcd(f, g) = 1``.

    For each variable the others are fixed to values keeping both leading
    coefficients nonzero mod a large prime; a nonconstant common factor
    would survive in at least one such image.  False means "unknown".
    """
    if not (f.is_rational() and g.is_rational()):
        return False
    rng = _random.Random(0x5EED)
    occ = sorted(set(f.occurring_vars()) | set(g.occurring_vars()))
    try:
        for i in occ:
            df, dg = f.degree_in(i), g.degree_in(i)
            if df == 0 or dg == 0:
                continue
            for _ in range(3):
                point = [rng.randrange(2, 10**6) for _ in f.vars]
                a = _specialize_mod_p(f, i, point)
                b = _specialize_mod_p(g, i, point)
                if len(a) - 1 == df and len(b) - 1 == dg:
                    break
            else:
                return False
            if _gcd_degree_mod_p(a, b) > 0:
                return False
    except ZeroDivisionError:
        return False
    return True


def gcd(f, g):
    """Monic (graded-lex) greatest common divisor over the coefficient field.

    Monomial factors are split off first and a modular image settles the
    frequent coprime case.  Otherwise the computation is recursive:
    univariate primitive remainder sequences at the bottom, primitive
    pseudo-remainder sequences with content extraction above.
    """
    f, g = f._unify(g)
    if not f.terms:
        return _monic(g)
    if not g.terms:
        return _monic(f)
    if f.is_constant() or g.is_constant():
        return MPoly.const(1, f.vars)
    lf, f = _split_monomial(f)
    lg, g = _split_monomial(g)
    mono = MPoly(f.vars, {tuple(min(a, b) for a, b in zip(lf, lg)): Fraction(1)})
    if _certainly_coprime(f, g):
        return mono
    return mono * _gcd_core(f, g)


def _gcd_core(f, g):
    occ = sorted(set(f.occurring_vars()) | set(g.occurring_vars()))
    if not occ:
        return MPoly.const(1, f.vars)
    if f.is_constant() or g.is_constant():
        return MPoly.const(1, f.vars)
    if len(occ) == 1:
        i = occ[0]
        h = upoly.gcd(f.univariate_coeffs(i), g.univariate_coeffs(i))
        return MPoly.from_univariate(h, f.vars[i], f.vars)
    i = occ[-1]
    if f.degree_in(i) == 0 or g.degree_in(i) == 0:
        # one side is free of the main variable: gcd divides all coefficients
        if f.degree_in(i) == 0:
            return _monic(gcd(f, content(g, i)))
        return _monic(gcd(content(f, i), g))
    cf, cg = content(f, i), content(g, i)
    c = gcd(cf, cg)
    a, b = exact_div(f, cf), exact_div(g, cg)
    if a.degree_in(i) < b.degree_in(i):
        a, b = b, a
    while True:
        r = _prem(a, b, i)
        if not r.terms:
            break
        if r.degree_in(i) == 0:
            b = MPoly.const(1, f.vars)
            break
        a, b = b, exact_div(r, content(r, i))
    if b.degree_in(i) > 0:
        b = exact_div(b, content(b, i))
    return _monic(c * b)


def squarefree_part(p):
    """Product of the distinct irreducible factors (characteristic zero)."""
    if not p.terms or p.is_constant():
        return MPoly.const(1, p.vars) if p.terms else p
    g = p
    for i in p.occurring_vars():
        g = gcd(g, p.diff(i))
        if g.is_constant():
            break
    return exact_div(p, g)


def is_square(p):
    """Exact square root of ``p`` up to a positive constant, or None."""
    if not p.terms:
        return p
    if p.is_constant():
        return MPoly.const(1, p.vars) if sign(p.constant_value()) > 0 else None
    g = p
    root = MPoly.const(1, p.vars)
    # peel the square-free factorization: p = s1 * s2^2 * s3^3 ...
    parts = _sqf_factors(p)
    for fac, k in parts:
        if k % 2:
            return None
        root = root * fac ** (k // 2)
    # p / root^2 must be a positive constant
    q = exact_div(g, root * root)
    if not q.is_constant() or sign(q.constant_value()) <= 0:
        return None
    return root


def _sqf_factors(p):
    # square-free decomposition for multivariate p via repeated gcds
    out = []
    rest = p
    k = 1
    while not rest.is_constant():
        s = squarefree_part(rest)
        rest = exact_div(rest, s)
        out.append((s, k))
        k += 1
    # s_k here holds the product of factors with multiplicity >= k
    result = []
    for j, (s, _) in enumerate(out):
        nxt = out[j + 1][0] if j + 1 < len(out) else MPoly.const(1, p.vars)
        fac = exact_div(s, nxt)
        if not fac.is_constant():
            result.append((fac, j + 1))
    return result
