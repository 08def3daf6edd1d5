"""
Weight spaces of U^- as the free algebra modulo the radical of the form.

For each degree nu a basis of lexicographically first words is selected.
Removing the first letter of a selected word gives a selected word of lower
degree, so all candidates are of the form theta_i * b with b selected in
degree nu - alpha_i; only that spanning set is ever paired.  Every selection
is certified by an exact rank computation.
"""
from __future__ import annotations

import threading

from .exactarith import RatFun, ONE, ZERO, qbinom, qfactorial
from .freealg import FreeAlgebra, FreeElement, add_into
from . import linalg


class WeightBasis:
    """Selected basis words of one degree with their scaled Gram block."""

    def __init__(self, degree, words, gram):
        self.degree = degree
        self.words = words
        self.gram = gram
        self.position = {w: k for k, w in enumerate(words)}

    @property
    def dim(self):
        return len(self.words)


class NormalElement:
    """Coordinates of an element of U^-_nu on the selected basis words."""

    __slots__ = ("degree", "coords")

    def __init__(self, degree, coords):
        self.degree = tuple(degree)
        self.coords = {w: RatFun(c) for w, c in coords.items() if c}

    def __eq__(self, other):
        if not isinstance(other, NormalElement):
            return NotImplemented
        if not self.coords and not other.coords:
            return True
        return self.degree == other.degree and self.coords == other.coords

    def is_zero(self):
        return not self.coords

    def as_free(self):
        return FreeElement(self.degree, dict(self.coords))

    def __repr__(self):
        body = ", ".join(f"{w}: {c}" for w, c in sorted(self.coords.items()))
        return f"NormalElement({self.degree}, {{{body}}})"


class UMinus:
    """U^- for one datum, built lazily degree by degree."""

    def __init__(self, datum, store=None):
        self.datum = datum
        self.alg = FreeAlgebra(datum)
        self.rank = datum.rank
        self.store = store
        self._bases = {}
        self._lock = threading.Lock()

    def zero_degree(self):
        return (0,) * self.rank

    # bases

    def basis(self, nu):
        nu = tuple(nu)
        got = self._bases.get(nu)
        if got is not None:
            return got
        words = None
        key = ",".join(map(str, nu))
        if self.store is not None:
            data = self.store.get("basis", key)
            if data is not None:
                words = self._check_cached(nu, data)
        if words is None:
            words = self._select(nu)
            if self.store is not None:
                self.store.put("basis", key, {"degree": list(nu), "words": [list(w) for w in words]})
        gram = [[self.alg.phi_word(w).get(u, ZERO) for u in words] for w in words]
        got = WeightBasis(nu, tuple(words), gram)
        with self._lock:
            self._bases.setdefault(nu, got)
        return self._bases[nu]

    def _check_cached(self, nu, data):
        try:
            words = [tuple(int(a) for a in w) for w in data["words"]]
            if tuple(data["degree"]) != nu or any(self.alg.degree(w) != nu for w in words):
                raise ValueError
            # independent (a nonzero value mod p certifies this) and of the right size
            gram = [[self.alg.phi_word(w).get(u, ZERO) for u in words] for w in words]
            if words and linalg.modp_rank(gram) != len(words):
                raise ValueError
            if any(nu):
                cands = self.candidates(nu)
                full = [[self.alg.phi_word(s).get(t, ZERO) for t in cands] for s in cands]
                if linalg.modp_rank(full) != len(words):
                    raise ValueError
            elif words != [()]:
                raise ValueError
        except (KeyError, TypeError, ValueError):
            self.store.warn("basis", nu)
            return None
        return words

    def candidates(self, nu):
        """Words theta_i * b with b a basis word of degree nu - alpha_i, sorted."""
        cands = set()
        for i, c in enumerate(nu):
            if c:
                lower = list(nu)
                lower[i] -= 1
                for b in self.basis(tuple(lower)).words:
                    cands.add((i,) + b)
        return sorted(cands)

    def _select(self, nu):
        if not any(nu):
            return [()]
        cands = self.candidates(nu)
        rows = [[self.alg.phi_word(s).get(t, ZERO) for t in cands] for s in cands]
        chosen = linalg.greedy_independent_rows(rows)
        return [cands[k] for k in chosen]

    def dim(self, nu):
        if any(c < 0 for c in nu):
            return 0
        return self.basis(nu).dim

    # elements

    def restrict(self, vec, nu):
        """Pairing vector restricted to basis words (an injective map)."""
        return [vec.get(b, ZERO) for b in self.basis(nu).words]

    def vec_rank(self, vecs, nu):
        rows = [self.restrict(v, nu) for v in vecs]
        rows = [r for r in rows if any(e for e in r)]
        return linalg.rank(rows) if rows else 0

    def in_span(self, vecs, target, nu):
        base = self.vec_rank(vecs, nu)
        return self.vec_rank(list(vecs) + [target], nu) == base

    def vec_is_zero(self, vec):
        return not any(vec.values())

    def normal_form(self, x):
        """Coordinates of a FreeElement on the basis words."""
        nu = x.degree
        wb = self.basis(nu)
        if not x.combo:
            return NormalElement(nu, {})
        rhs = []
        for b in wb.words:
            pb = self.alg.phi_word(b)
            acc = ZERO
            for w, c in x.combo.items():
                val = pb.get(w)
                if val is not None:
                    acc = acc + val * c
            rhs.append([acc])
        sol = linalg.solve(wb.gram, rhs)
        return NormalElement(nu, {b: sol[k][0] for k, b in enumerate(wb.words)})

    def word_normal(self, word):
        return self.normal_form(self.alg.word_element(tuple(word)))

    def one(self):
        return NormalElement(self.zero_degree(), {(): ONE})

    def multiply(self, a, b):
        prod = a.as_free().concat(b.as_free())
        return self.normal_form(prod)

    def divided_power(self, i, n):
        if isinstance(i, str):
            i = self.alg.letter(i)
        deg = [0] * self.rank
        deg[i] = n
        word = (i,) * n
        return self.normal_form(FreeElement(tuple(deg), {word: RatFun(ONE, qfactorial(n))}))

    def serre_element(self, i, j):
        """The quantum Serre element for the pair (i, j) as a FreeElement."""
        if isinstance(i, str):
            i, j = self.alg.letter(i), self.alg.letter(j)
        if i == j:
            raise ValueError("need distinct vertices")
        n = 1 - self.datum.cartan[i][j]
        combo = {}
        for p in range(n + 1):
            w = (i,) * p + (j,) + (i,) * (n - p)
            combo[w] = qbinom(n, p) * (-1) ** p
        deg = [0] * self.rank
        deg[i] += n
        deg[j] += 1
        return FreeElement(tuple(deg), combo)

    def serre_in_radical(self, i, j):
        vec = self.alg.phi(self.serre_element(i, j))
        return self.vec_is_zero(vec)


def lin_phi(alg, pairs):
    """phi of a combination of words given as (coeff, word) pairs."""
    out = {}
    for c, w in pairs:
        for u, val in alg.phi_word(w).items():
            add_into(out, u, val * c)
    return out
