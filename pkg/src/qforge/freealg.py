"""
The free algebra on generators theta_i, the four twisted derivations and
Lusztig's symmetric form.

Words are tuples of vertex indices.  The form is handled through the scaled
pairing vectors

    phi(x)[w] = (1 - v^-2)^m (x, theta_w),      m = length of w,

which are integral Laurent polynomials for integral combinations of words.
A pairing vector is a plain dict ``word -> LaurentPoly`` without zero entries.
Left and right multiplication by theta_i and the derivations act on these
vectors by closed formulas, so nothing here needs a linear solve.

EXAMPLES::

    >>> from qforge.rootdata import build_datum
    >>> A2 = build_datum([1, 2], [(1, 2)])
    >>> alg = FreeAlgebra(A2)
    >>> str(alg.lusztig_form(alg.word_element((0, 1)), alg.word_element((1, 0))))
    '(v^3)/(1 - 2*v^2 + v^4)'
"""
from __future__ import annotations

from .exactarith import LaurentPoly, RatFun, ONE, ZERO
from . import linalg

VARIANTS = ("r_i", "i_r", "rbar_i", "i_rbar")

# (1 - v^-2) and its m-th powers
ONE_MINUS = ONE - LaurentPoly.monomial(-2)


def word_degree(word, rank):
    deg = [0] * rank
    for a in word:
        deg[a] += 1
    return tuple(deg)


def add_into(acc, key, val):
    """acc[key] += val, dropping zeros."""
    cur = acc.get(key)
    if cur is None:
        if val:
            acc[key] = val
        return
    new = cur + val
    if new:
        acc[key] = new
    else:
        del acc[key]


def scale_vec(vec, c):
    if isinstance(c, int) and c == 1:
        return dict(vec)
    out = {}
    for k, x in vec.items():
        y = x * c
        if y:
            out[k] = y
    return out


def add_vecs(*pairs):
    """Linear combination of dict vectors given as (coeff, vec) pairs."""
    out = {}
    for c, vec in pairs:
        for k, x in vec.items():
            add_into(out, k, x * c if not (isinstance(c, int) and c == 1) else x)
    return out


class FreeElement:
    """A homogeneous combination of words with scalar coefficients."""

    __slots__ = ("degree", "combo")

    def __init__(self, degree, combo):
        self.degree = tuple(degree)
        self.combo = {w: c for w, c in combo.items() if c}

    def __add__(self, other):
        if other.degree != self.degree and other.combo and self.combo:
            raise ValueError("degrees differ")
        deg = self.degree if self.combo else other.degree
        out = dict(self.combo)
        for w, c in other.combo.items():
            out[w] = out.get(w, ZERO) + c
        return FreeElement(deg, out)

    def __neg__(self):
        return FreeElement(self.degree, {w: -c for w, c in self.combo.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return FreeElement(self.degree, {w: x * c for w, x in self.combo.items()})

    def concat(self, other):
        deg = tuple(a + b for a, b in zip(self.degree, other.degree))
        out = {}
        for w1, c1 in self.combo.items():
            for w2, c2 in other.combo.items():
                w = w1 + w2
                out[w] = out.get(w, ZERO) + c1 * c2
        return FreeElement(deg, out)

    def is_zero(self):
        return not self.combo

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        a = {w: RatFun(c) for w, c in self.combo.items()}
        b = {w: RatFun(c) for w, c in other.combo.items()}
        return a == b

    def __repr__(self):
        return f"FreeElement({self.degree}, {self.combo})"


class FreeAlgebra:
    """Word-level structure for one Cartan datum."""

    def __init__(self, datum):
        self.datum = datum
        self.rank = datum.rank
        self.C = datum.cartan
        self._words = {}
        self._phi = {(): {(): ONE}}
        self._gram = {}

    # words

    def letter(self, vertex):
        return self.datum.index(vertex)

    def word(self, letters):
        """Word from vertex names."""
        return tuple(self.letter(str(a)) for a in letters)

    def names(self, word):
        return tuple(self.datum.vertices[a] for a in word)

    def word_text(self, word):
        if not word:
            return "1"
        return "*".join(f"t{self.datum.vertices[a]}" for a in word)

    def degree(self, word):
        return word_degree(word, self.rank)

    def words(self, nu):
        """All words of degree nu in lexicographic order."""
        nu = tuple(nu)
        got = self._words.get(nu)
        if got is None:
            letters = []
            for a, c in enumerate(nu):
                letters.extend([a] * c)
            got = tuple(_multiset_perms(letters))
            self._words[nu] = got
        return got

    def word_element(self, word, coeff=ONE):
        return FreeElement(self.degree(word), {tuple(word): coeff})

    def one(self):
        return FreeElement((0,) * self.rank, {(): ONE})

    def pair_with_word(self, i, word):
        """(i, |word|)."""
        row = self.C[i]
        return sum(row[a] for a in word)

    # the four derivations on words

    def r_word(self, variant, i, word):
        """Apply one of the twisted derivations to a single word.

        Returns a dict word -> LaurentPoly.
        """
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        out = {}
        row = self.C[i]
        total = sum(row[a] for a in word)
        pre = 0
        for k, a in enumerate(word):
            if a == i:
                post = total - pre - row[i]
                if variant == "i_r":
                    e = pre
                elif variant == "r_i":
                    e = post
                elif variant == "i_rbar":
                    e = -pre
                else:
                    e = -post
                add_into(out, word[:k] + word[k + 1:], LaurentPoly.monomial(e))
            pre += row[a]
        return out

    def r_map(self, variant, i, x):
        """Twisted derivation applied to a FreeElement."""
        if isinstance(i, str):
            i = self.letter(i)
        deg = list(x.degree)
        out = {}
        for w, c in x.combo.items():
            for u, e in self.r_word(variant, i, w).items():
                out[u] = out.get(u, ZERO) + e * c
        if deg[i] > 0:
            deg[i] -= 1
        return FreeElement(tuple(deg), out)

    # pairing vectors

    def left_mult(self, i, vec):
        """phi(theta_i x) from phi(x)."""
        row = self.C[i]
        out = {}
        for u, val in vec.items():
            pre = 0
            for k in range(len(u) + 1):
                add_into(out, u[:k] + (i,) + u[k:], val.shift(pre))
                if k < len(u):
                    pre += row[u[k]]
        return out

    def right_mult(self, i, vec):
        """phi(x theta_i) from phi(x)."""
        row = self.C[i]
        out = {}
        for u, val in vec.items():
            post = sum(row[a] for a in u)
            for k in range(len(u) + 1):
                add_into(out, u[:k] + (i,) + u[k:], val.shift(post))
                if k < len(u):
                    post -= row[u[k]]
        return out

    def r_dual(self, variant, i, vec, nu):
        """phi(r(x)) from phi(x) for x of degree nu."""
        shift = -(self.pair_with_degree(i, nu) - self.C[i][i])
        out = {}
        for w, val in vec.items():
            if variant in ("i_r", "rbar_i") and w and w[0] == i:
                add_into(out, w[1:], val if variant == "i_r" else val.shift(shift))
            if variant in ("r_i", "i_rbar") and w and w[-1] == i:
                add_into(out, w[:-1], val if variant == "r_i" else val.shift(shift))
        return out

    def pair_with_degree(self, i, nu):
        row = self.C[i]
        return sum(row[a] * c for a, c in enumerate(nu))

    def phi_word(self, word):
        word = tuple(word)
        got = self._phi.get(word)
        if got is None:
            got = self.left_mult(word[0], self.phi_word(word[1:]))
            self._phi[word] = got
        return got

    def phi(self, x):
        """Pairing vector of a FreeElement (coefficients may be rational)."""
        out = {}
        for w, c in x.combo.items():
            for u, val in self.phi_word(w).items():
                add_into(out, u, val * c)
        return out

    def lusztig_form(self, x, y):
        if x.degree != y.degree and x.combo and y.combo:
            return RatFun(ZERO)
        if not x.combo or not y.combo:
            return RatFun(ZERO)
        m = sum(x.degree)
        px = self.phi(x)
        acc = ZERO
        for w, c in y.combo.items():
            val = px.get(w)
            if val is not None:
                acc = acc + val * c
        return RatFun(acc) / RatFun(ONE_MINUS ** m)

    def gram(self, nu):
        nu = tuple(nu)
        got = self._gram.get(nu)
        if got is None:
            words = self.words(nu)
            mat = tuple(tuple(self.phi_word(w).get(u, ZERO) for u in words) for w in words)
            for a in range(len(words)):
                for b in range(a):
                    if mat[a][b] != mat[b][a]:
                        raise AssertionError(f"form not symmetric at {words[a]}, {words[b]}")
            got = GramData(nu, words, mat, linalg.exact_rank([list(r) for r in mat]))
            self._gram[nu] = got
        return got


class GramData:
    """Scaled Gram matrix of all words of one degree."""

    def __init__(self, degree, words, matrix, rank):
        self.degree = degree
        self.words = words
        self.matrix = matrix
        self.rank = rank

    def to_json(self):
        return {"degree": list(self.degree), "words": [list(w) for w in self.words],
                "matrix": [[str(e) for e in row] for row in self.matrix], "rank": self.rank}

    @classmethod
    def from_json(cls, data):
        from .exactarith import parse_laurent
        return cls(tuple(data["degree"]), tuple(tuple(w) for w in data["words"]),
                   tuple(tuple(parse_laurent(e) for e in row) for row in data["matrix"]),
                   int(data["rank"]))


def _multiset_perms(letters):
    """Distinct permutations of a sorted list, in lexicographic order."""
    letters = sorted(letters)
    n = len(letters)
    if n == 0:
        yield ()
        return
    a = list(letters)
    while True:
        yield tuple(a)
        k = n - 2
        while k >= 0 and a[k] >= a[k + 1]:
            k -= 1
        if k < 0:
            return
        j = n - 1
        while a[j] <= a[k]:
            j -= 1
        a[k], a[j] = a[j], a[k]
        a[k + 1:] = reversed(a[k + 1:])

