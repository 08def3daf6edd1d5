"""
Exact arithmetic in Z[v, v^-1] and in its fraction field Q(v).

Laurent polynomials are stored densely as a lowest exponent plus a tuple of
integer coefficients with nonzero ends.  Everything here is immutable.

EXAMPLES::

    >>> from qforge.exactarith import qint, V
    >>> str(qint(3))
    'v^-2 + 1 + v^2'
    >>> str((V - V**-1) * qint(2))
    'v^-2 - v^2'
"""
from __future__ import annotations

import re
from functools import lru_cache
from math import gcd

__all__ = [
    "LaurentPoly", "RatFun", "V", "ONE", "ZERO", "qint", "qfactorial",
    "qbinom", "bar", "parse_laurent", "parse_scalar", "DivisionError",
]

_EXP_LIMIT = 1 << 40


class DivisionError(ArithmeticError):
    """Raised when an exact division has a nonzero remainder."""


def _trim(lo, coeffs):
    # strip zero coefficients from both ends
    a, b = 0, len(coeffs)
    while a < b and coeffs[a] == 0:
        a += 1
    while b > a and coeffs[b - 1] == 0:
        b -= 1
    if a == b:
        return 0, ()
    return lo + a, tuple(coeffs[a:b])


class LaurentPoly:
    """An element of Z[v, v^-1]."""

    __slots__ = ("lo", "coeffs", "_hash")

    def __init__(self, terms=None):
        lo, coeffs = 0, ()
        if terms:
            items = [(int(e), int(c)) for e, c in dict(terms).items() if c]
            if items:
                lo = min(e for e, _ in items)
                hi = max(e for e, _ in items)
                if hi - lo > _EXP_LIMIT or abs(lo) > _EXP_LIMIT or abs(hi) > _EXP_LIMIT:
                    raise OverflowError("exponent out of range")
                buf = [0] * (hi - lo + 1)
                for e, c in items:
                    buf[e - lo] += c
                lo, coeffs = _trim(lo, buf)
        self.lo = lo
        self.coeffs = coeffs
        self._hash = None

    @classmethod
    def _raw(cls, lo, coeffs):
        # coeffs must already be trimmed
        p = cls.__new__(cls)
        p.lo = lo if coeffs else 0
        p.coeffs = coeffs
        p._hash = None
        return p

    @classmethod
    def from_dense(cls, lo, coeffs):
        lo, coeffs = _trim(lo, list(coeffs))
        return cls._raw(lo, coeffs)

    @classmethod
    def monomial(cls, exp, coeff=1):
        if not coeff:
            return ZERO
        return cls._raw(int(exp), (int(coeff),))

    @classmethod
    def coerce(cls, x):
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls.monomial(0, x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # basic accessors

    @property
    def terms(self):
        lo = self.lo
        return {lo + k: c for k, c in enumerate(self.coeffs) if c}

    @property
    def hi(self):
        return self.lo + len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_monomial(self):
        return len(self.coeffs) == 1

    def coeff(self, exp):
        k = exp - self.lo
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def constant_term(self):
        return self.coeff(0)

    def leading_coeff(self):
        return self.coeffs[-1] if self.coeffs else 0

    def trailing_coeff(self):
        return self.coeffs[0] if self.coeffs else 0

    def content(self):
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def norm1(self):
        return sum(abs(c) for c in self.coeffs)

    # ring operations

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.lo == other.lo and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == LaurentPoly.monomial(0, other)
        if isinstance(other, RatFun):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.lo, self.coeffs))
        return self._hash

    def __neg__(self):
        return LaurentPoly._raw(self.lo, tuple(-c for c in self.coeffs))

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, other)
        elif isinstance(other, RatFun):
            return RatFun(self) + other
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        return _add_scaled(self, other, 1, 0)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, other)
        elif isinstance(other, RatFun):
            return RatFun(self) - other
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other.coeffs:
            return self
        return _add_scaled(self, other, -1, 0)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return LaurentPoly._raw(self.lo, tuple(c * other for c in self.coeffs))
        if isinstance(other, RatFun):
            return RatFun(self) * other
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return ZERO
        return LaurentPoly._raw(self.lo + other.lo, _mul_dense(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return RatFun(self, other)

    def __rtruediv__(self, other):
        return RatFun(other, self)

    def __pow__(self, n):
        if n < 0:
            if self.is_monomial() and abs(self.coeffs[0]) == 1:
                return LaurentPoly._raw(self.lo * n, (self.coeffs[0] ** (-n),))
            return RatFun(ONE, self ** (-n))
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k):
        """Multiply by v^k."""
        if not k or not self.coeffs:
            return self
        return LaurentPoly._raw(self.lo + k, self.coeffs)

    def bar(self):
        return LaurentPoly._raw(-self.hi, tuple(reversed(self.coeffs))) if self.coeffs else self

    def evaluate(self, x):
        """Evaluate at an integer or rational point (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if self.lo >= 0:
            return acc * x ** self.lo
        from fractions import Fraction
        return Fraction(acc, 1) / Fraction(x) ** (-self.lo)

    def divmod_exact(self, other):
        """Exact quotient in Z[v, v^-1]; raises DivisionError otherwise."""
        other = LaurentPoly.coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.coeffs:
            return ZERO
        if len(other.coeffs) == 1:
            d = other.coeffs[0]
            out = []
            for c in self.coeffs:
                q, r = divmod(c, d)
                if r:
                    raise DivisionError("non-exact division")
                out.append(q)
            return LaurentPoly._raw(self.lo - other.lo, tuple(out))
        q = _exact_div_dense(self.coeffs, other.coeffs)
        if q is None:
            raise DivisionError("non-exact division")
        return LaurentPoly._raw(self.lo - other.lo, q)

    def __floordiv__(self, other):
        return self.divmod_exact(other)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        return format_laurent(self)


def _add_scaled(p, q, s, k):
    # p + s * v^k * q
    qlo = q.lo + k
    lo = min(p.lo, qlo)
    hi = max(p.hi, qlo + len(q.coeffs) - 1)
    buf = [0] * (hi - lo + 1)
    off = p.lo - lo
    for idx, c in enumerate(p.coeffs):
        buf[off + idx] = c
    off = qlo - lo
    if s == 1:
        for idx, c in enumerate(q.coeffs):
            buf[off + idx] += c
    else:
        for idx, c in enumerate(q.coeffs):
            buf[off + idx] += s * c
    lo, coeffs = _trim(lo, buf)
    return LaurentPoly._raw(lo, coeffs)


def _mul_dense(a, b):
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        m = b[0]
        return tuple(c * m for c in a)
    if len(b) > 40:
        return _mul_kronecker(a, b)
    out = [0] * (len(a) + len(b) - 1)
    for j, cb in enumerate(b):
        if cb:
            for i, ca in enumerate(a):
                out[i + j] += ca * cb
    return tuple(out)


def _pack(coeffs, bits):
    # evaluate at 2^bits with signed digits
    acc = 0
    for c in reversed(coeffs):
        acc = (acc << bits) + c
    return acc


def _unpack(n, bits, length):
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    out = []
    for _ in range(length):
        d = n & mask
        n >>= bits
        if d >= half:
            d -= 1 << bits
            n += 1
        out.append(d)
    return out


def _mul_kronecker(a, b):
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    bound = ma * mb * min(len(a), len(b))
    bits = bound.bit_length() + 2
    prod = _pack(a, bits) * _pack(b, bits)
    return tuple(_unpack(prod, bits, len(a) + len(b) - 1))


def _exact_div_dense(a, b):
    # long division from the top; None if inexact
    if len(a) < len(b):
        return None
    rem = list(a)
    lb = b[-1]
    n = len(a) - len(b) + 1
    q = [0] * n
    for k in range(n - 1, -1, -1):
        c = rem[k + len(b) - 1]
        if c:
            qk, r = divmod(c, lb)
            if r:
                return None
            q[k] = qk
            for j, cb in enumerate(b):
                rem[k + j] -= qk * cb
    if any(rem):
        return None
    return tuple(q)


# polynomial gcd by primitive remainder sequences (on nonnegative exponent parts)

def _prim(coeffs):
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    if g > 1:
        coeffs = [c // g for c in coeffs]
    return list(coeffs), g


def _pseudo_rem(a, b):
    # prem(a, b) for dense coefficient lists, low degree first
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for j, cb in enumerate(b):
            r[shift + j] -= c * cb
        while r and r[-1] == 0:
            r.pop()
    return r


def _poly_gcd_dense(a, b):
    """Primitive gcd of two integer polynomials (dense, low degree first)."""
    a = list(a)
    b = list(b)
    if len(a) < len(b):
        a, b = b, a
    a, ca = _prim(a)
    b, cb = _prim(b)
    while b:
        if len(b) == 1:
            return [1]
        r = _pseudo_rem(a, b)
        a = b
        b = _prim(r)[0] if r else []
    if a[-1] < 0:
        a = [-c for c in a]
    return a


def poly_gcd(p, q):
    """Gcd in Z[v, v^-1], normalized to min exponent 0 and positive leading coefficient."""
    if not p.coeffs:
        return LaurentPoly._raw(0, q.coeffs) if q.coeffs else ZERO
    if not q.coeffs:
        return LaurentPoly._raw(0, p.coeffs)
    cont = gcd(p.content(), q.content())
    g = _poly_gcd_dense(p.coeffs, q.coeffs)
    g = [c * cont for c in g]
    if g[-1] < 0:
        g = [-c for c in g]
    lo, coeffs = _trim(0, g)
    return LaurentPoly._raw(0, coeffs)


class RatFun:
    """An element of Q(v), kept as a normalized ratio of Laurent polynomials."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized=False):
        if isinstance(num, RatFun) or isinstance(den, RatFun):
            a = num if isinstance(num, RatFun) else RatFun(num)
            if den is None:
                self.num, self.den = a.num, a.den
                return
            b = den if isinstance(den, RatFun) else RatFun(den)
            num, den = a.num * b.den, a.den * b.num
        num = LaurentPoly.coerce(num)
        if den is None:
            den = ONE
        den = LaurentPoly.coerce(den)
        if not den.coeffs:
            raise ZeroDivisionError("zero denominator")
        if _normalized:
            self.num, self.den = num, den
            return
        self.num, self.den = _normalize(num, den)

    @property
    def is_laurent(self):
        return self.den.is_monomial() and self.den.coeffs[0] == 1

    def as_laurent(self):
        """Return the Laurent polynomial if the denominator is 1, else raise."""
        if self.den == ONE:
            return self.num
        raise DivisionError(f"{self} is not a Laurent polynomial")

    def is_zero(self):
        return not self.num.coeffs

    def __bool__(self):
        return bool(self.num.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = RatFun(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.den == ONE:
            return hash(self.num)
        return hash((self.num, self.den))

    def __neg__(self):
        return RatFun(-self.num, self.den, _normalized=True)

    def __add__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = RatFun(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-RatFun(other) if not isinstance(other, RatFun) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = RatFun(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = RatFun(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFun(other) / self

    def __pow__(self, n):
        if n < 0:
            return RatFun(ONE) / (self ** (-n))
        return RatFun(self.num ** n, self.den ** n)

    def bar(self):
        return RatFun(self.num.bar(), self.den.bar())

    def shift(self, k):
        return RatFun(self.num.shift(k), self.den, _normalized=True)

    def series_at_infinity(self, nterms):
        """First coefficients of the expansion in v^-1.

        Returns (top, coeffs) with self = sum coeffs[k] v^(top - k) + ...
        Coefficients are Fractions; top is None for zero.
        """
        from fractions import Fraction
        if not self.num.coeffs:
            return None, []
        top = self.num.hi - self.den.hi
        n = list(reversed(self.num.coeffs))
        d = list(reversed(self.den.coeffs))
        out = []
        rem = [Fraction(c) for c in n] + [Fraction(0)] * nterms
        for k in range(nterms):
            c = rem[k] / d[0]
            out.append(c)
            if c:
                for j, dj in enumerate(d):
                    if k + j < len(rem):
                        rem[k + j] -= c * dj
        return top, out

    def __repr__(self):
        return f"RatFun({self})"

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _normalize(num, den):
    if not num.coeffs:
        return ZERO, ONE
    g = poly_gcd(num, den)
    if g.coeffs != (1,):
        num = num.divmod_exact(g)
        den = den.divmod_exact(g)
    # min exponent 0 and positive leading coefficient for den
    k = den.lo
    if k:
        num, den = num.shift(-k), den.shift(-k)
    if den.coeffs[-1] < 0:
        num, den = -num, -den
    return num, den


ZERO = LaurentPoly._raw(0, ())
ONE = LaurentPoly._raw(0, (1,))
V = LaurentPoly._raw(1, (1,))


def bar(x):
    """The involution v -> v^-1 on integers, Laurent polynomials and rational functions."""
    if isinstance(x, int):
        return x
    return x.bar()


@lru_cache(maxsize=None)
def qint(s):
    """The balanced quantum integer [s] = (v^s - v^-s)/(v - v^-1)."""
    if s == 0:
        return ZERO
    if s < 0:
        return -qint(-s)
    return LaurentPoly._raw(-(s - 1), tuple(1 if k % 2 == 0 else 0 for k in range(2 * s - 1)))


@lru_cache(maxsize=None)
def qfactorial(n):
    if n < 0:
        raise ValueError("negative factorial")
    out = ONE
    for k in range(2, n + 1):
        out = out * qint(k)
    return out


@lru_cache(maxsize=None)
def qbinom(s, t):
    """Quantum binomial coefficient as a Laurent polynomial."""
    if not 0 <= t <= s:
        raise ValueError("need 0 <= t <= s")
    if t == 0 or t == s:
        return ONE
    # Pascal-type recurrence avoids division: [s,t] = v^-t [s-1,t-1]... balanced form
    return qbinom(s - 1, t - 1).shift(s - t) + qbinom(s - 1, t).shift(-t)


def format_laurent(p):
    if not p.coeffs:
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        e = p.lo + k
        if e == 0:
            body = str(abs(c))
        else:
            mono = "v" if e == 1 else f"v^{e}"
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*?\s*)?(v(?:\^(-?\d+))?)?\s*")


def parse_laurent(text):
    """Inverse of the canonical text rendering."""
    text = text.strip()
    if text == "0":
        return ZERO
    terms = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse polynomial at column {pos + 1}: {text!r}")
        if not first and m.group(1) is None:
            raise ValueError(f"missing sign at column {pos + 1}: {text!r}")
        first = False
        sign = -1 if m.group(1) == "-" else 1
        coeff = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            exp = int(m.group(4)) if m.group(4) is not None else 1
        else:
            exp = 0
        terms[exp] = terms.get(exp, 0) + sign * coeff
        pos = m.end()
    return LaurentPoly(terms)


def parse_scalar(text):
    """Parse either a Laurent polynomial or '(num)/(den)'."""
    text = text.strip()
    if text.startswith("(") and ")/(" in text and text.endswith(")"):
        a, b = text[1:-1].split(")/(", 1)
        return RatFun(parse_laurent(a), parse_laurent(b))
    return parse_laurent(text)
