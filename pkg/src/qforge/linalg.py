"""Exact linear algebra over Q(v) for matrices with Laurent polynomial entries.

Ranks are computed by integer Bareiss elimination after substituting a
power of two for v that exceeds a Cauchy root bound of every relevant minor,
so no minor can vanish accidentally.  A modular rank at a fixed point is used
as a cheap hint and for greedy row selection; every modular answer that is
reported is certified exactly.
"""
from __future__ import annotations

from math import prod

try:
    import gmpy2
    _mpz = gmpy2.mpz
    _divexact = gmpy2.divexact
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpz = int

    def _divexact(a, b):
        return a // b

from .exactarith import LaurentPoly, RatFun, ONE, ZERO

PRIME = (1 << 61) - 1
POINT = 0x9E3779B97F4A7C15 % PRIME


class ModpEvaluator:
    """Evaluate Laurent polynomials modulo PRIME at a fixed point."""

    def __init__(self, prime=PRIME, point=POINT):
        self.p = prime
        self.x = point
        self.xinv = pow(point, -1, prime)
        self._pow = {}

    def power(self, e):
        val = self._pow.get(e)
        if val is None:
            val = pow(self.x, e, self.p) if e >= 0 else pow(self.xinv, -e, self.p)
            self._pow[e] = val
        return val

    def __call__(self, poly):
        if not poly.coeffs:
            return 0
        p = self.p
        x = self.x
        acc = 0
        for c in reversed(poly.coeffs):
            acc = (acc * x + c) % p
        return acc * self.power(poly.lo) % p


_EVAL = ModpEvaluator()


def modp_matrix(rows, ev=_EVAL):
    return [[ev(e) for e in row] for row in rows]


def modp_greedy_rows(rows, ev=_EVAL):
    """Indices of the greedy (first-come) independent rows modulo PRIME,
    with the pivot column of each."""
    p = ev.p
    basis = []  # (pivot col, normalized row)
    chosen = []
    for idx, row in enumerate(rows):
        vec = [ev(e) for e in row] if row and not isinstance(row[0], int) else list(row)
        for col, brow in basis:
            c = vec[col]
            if c:
                for j in range(len(vec)):
                    if brow[j]:
                        vec[j] = (vec[j] - c * brow[j]) % p
        piv = next((j for j, c in enumerate(vec) if c), None)
        if piv is None:
            continue
        inv = pow(vec[piv], -1, p)
        vec = [c * inv % p for c in vec]
        basis.append((piv, vec))
        chosen.append((idx, piv))
    return chosen


def modp_rank(rows, ev=_EVAL):
    return len(modp_greedy_rows(rows, ev))


def _bareiss_rank(mat):
    mat = [list(r) for r in mat]
    n = len(mat)
    if not n:
        return 0
    m = len(mat[0])
    prev = _mpz(1)
    r = 0
    for col in range(m):
        piv = None
        for i in range(r, n):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pr = mat[r]
        pv = pr[col]
        for i in range(r + 1, n):
            ri = mat[i]
            a = ri[col]
            if a:
                for j in range(col + 1, m):
                    ri[j] = _divexact(pv * ri[j] - a * pr[j], prev)
            else:
                for j in range(col + 1, m):
                    ri[j] = _divexact(pv * ri[j], prev)
            ri[col] = 0
        prev = pv
        r += 1
        if r == n:
            break
    return r


def _normalized_rows(rows):
    out = []
    for row in rows:
        nz = [e for e in row if e.coeffs]
        if not nz:
            continue
        lo = min(e.lo for e in nz)
        out.append([e.shift(-lo) if e.coeffs else e for e in row])
    return out


def _evaluate_rows(rows, bits):
    from .exactarith import _pack
    return [[_mpz(_pack(e.coeffs, bits)) << (bits * e.lo) if e.coeffs else _mpz(0) for e in row]
            for row in rows]


def _rank_with_bound(rows, k):
    norms = sorted((sum(e.norm1() for e in row) for row in rows), reverse=True)
    bound = prod(norms[:k]) if k else 1
    bits = (bound + 2).bit_length() + 1
    return _bareiss_rank(_evaluate_rows(rows, bits))


def exact_rank(rows):
    """Exact rank over Q(v) of a matrix of Laurent polynomials."""
    rows = _normalized_rows(rows)
    if not rows:
        return 0
    ncols = len(rows[0])
    full = min(len(rows), ncols)
    hint = modp_rank(rows)
    if hint == full:
        return hint
    r0 = _rank_with_bound(rows, hint + 1)
    if r0 == hint:
        return hint
    return _rank_with_bound(rows, full)


def ratfun_rows_to_laurent(rows):
    """Clear denominators row by row (rank preserving)."""
    out = []
    for row in rows:
        row = [RatFun(e) if not isinstance(e, RatFun) else e for e in row]
        den = ONE
        for e in row:
            if e.den != ONE and e.num.coeffs:
                den = _lcm(den, e.den)
        out.append([(e.num * den.divmod_exact(e.den)) if e.num.coeffs else ZERO for e in row])
    return out


def _lcm(a, b):
    from .exactarith import poly_gcd
    g = poly_gcd(a, b)
    return (a * b).divmod_exact(g)


def rank(rows):
    """Exact rank of a matrix with Laurent or rational-function entries."""
    if not rows:
        return 0
    if any(isinstance(e, RatFun) for row in rows for e in row):
        rows = ratfun_rows_to_laurent(rows)
    else:
        rows = [[LaurentPoly.coerce(e) for e in row] for row in rows]
    return exact_rank(rows)


def greedy_independent_rows(rows):
    """Lexicographically first maximal independent set of rows, certified exactly.

    Returns the list of chosen row indices.
    """
    rows = [[LaurentPoly.coerce(e) for e in row] for row in rows]
    chosen = modp_greedy_rows(rows)
    idx = [i for i, _ in chosen]
    total = exact_rank(rows)
    if total == len(idx):
        # a nonzero minor modulo PRIME is a nonzero minor over Q(v)
        return idx
    # the fixed point was unlucky; fall back to an exact greedy scan
    idx = []
    for i in range(len(rows)):
        trial = [rows[j] for j in idx] + [rows[i]]
        if exact_rank(trial) == len(trial):
            idx.append(i)
            if len(idx) == total:
                break
    return idx


def solve(matrix, rhs):
    """Solve matrix * X = rhs over Q(v) for a nonsingular square matrix.

    matrix: n x n entries (Laurent or RatFun); rhs: n x k.  Returns n x k RatFun.
    Fraction-free Gauss-Jordan elimination over Z[v, v^-1].
    """
    n = len(matrix)
    if n == 0:
        return []
    k = len(rhs[0]) if rhs else 0
    aug = [list(matrix[i]) + list(rhs[i]) for i in range(n)]
    aug = ratfun_rows_to_laurent(aug)
    prev = ONE
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col].coeffs), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        pr = aug[col]
        pv = pr[col]
        for i in range(n):
            if i == col:
                continue
            ri = aug[i]
            a = ri[col]
            for j in range(n + k):
                if j == col:
                    continue
                val = pv * ri[j] - a * pr[j]
                ri[j] = val.divmod_exact(prev) if val.coeffs else ZERO
            ri[col] = ZERO
        prev = pv
    # now aug[i][i] == det for all i (up to the last pivot)
    det = aug[n - 1][n - 1]
    out = []
    for i in range(n):
        d = aug[i][i]
        out.append([RatFun(aug[i][n + j], d) for j in range(k)])
    return out
