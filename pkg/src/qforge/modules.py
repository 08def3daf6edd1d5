"""
Verma modules, their simple quotients, and tensor products of them.

Vectors are stored by their pairings with words.  A Verma vector x of degree
nu is the dict phi(x) from :mod:`qforge.freealg`.  A vector of the simple
module V_lambda is stored by psi(x)[w] = (w xi, x) for the contravariant form,
whose radical is the maximal submodule; so equal dicts mean equal vectors of
V_lambda.  A tensor vector is a dict keyed by tuples of words, one per factor,
with an overall denominator.

The generators act on these dicts by closed formulas:

* Verma, F_i: left multiplication.
* Verma, E_i: phi(E_i x)[u] = (v^((i,lambda-nu)+2) phi(x)[i u] - v^(-(i,lambda)) phi(x)[u i]) / (v - v^-1).
* Simple, F_i: psi(F_i x)[w] = v^(1-(i,lambda-nu)) sum_k [(i, lambda - |w_>k|)] psi(x)[w without k].
* Simple, E_i: psi(E_i x)[u] = v^(1+(i,lambda-nu)) psi(x)[i u].
"""
from __future__ import annotations

from dataclasses import dataclass

from .exactarith import RatFun, ONE, ZERO, V, qint, DivisionError
from .freealg import FreeElement, add_into
from .rootdata import is_dominant, splits
from .uqminus import UMinus
from . import linalg

VMV = V - V ** -1

# test hook: names listed here switch on deliberately wrong formulas
FAULTS = set()
KNOWN_FAULTS = ("e-action",)


class ModuleError(ValueError):
    pass


class InconsistencyError(ModuleError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Factor:
    kind: str  # "M" for Verma, "V" for simple
    lam: tuple

    def __post_init__(self):
        if self.kind not in ("M", "V"):
            raise ModuleError(f"unknown factor kind {self.kind!r}")
        if self.kind == "V" and not is_dominant(self.lam):
            raise ModuleError(f"simple factor needs a dominant weight, got {self.lam}")

    def label(self):
        return f"{self.kind}{list(self.lam)}"


def Verma(lam):
    return Factor("M", tuple(lam))


def Simple(lam):
    return Factor("V", tuple(lam))


@dataclass(frozen=True)
class ModuleDescriptor:
    factors: tuple

    def label(self):
        return "(x)".join(f.label() for f in self.factors)

    @property
    def top_weight(self):
        out = None
        for f in self.factors:
            out = f.lam if out is None else tuple(a + b for a, b in zip(out, f.lam))
        return out


class ModuleVector:
    """terms / den, with terms keyed by tuples of words."""

    __slots__ = ("terms", "den")

    def __init__(self, terms, den=ONE):
        self.terms = terms
        self.den = den

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        if self.den == other.den:
            return self.terms == other.terms
        a = scale_terms(self.terms, other.den)
        b = scale_terms(other.terms, self.den)
        return a == b

    def __add__(self, other):
        if self.den == other.den:
            out = dict(self.terms)
            for k, x in other.terms.items():
                add_into(out, k, x)
            return ModuleVector(out, self.den)
        out = scale_terms(self.terms, other.den)
        for k, x in other.terms.items():
            add_into(out, k, x * self.den)
        return ModuleVector(out, self.den * other.den)

    def __neg__(self):
        return ModuleVector({k: -x for k, x in self.terms.items()}, self.den)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, RatFun):
            return ModuleVector(scale_terms(self.terms, c.num), self.den * c.den)
        return ModuleVector(scale_terms(self.terms, c), self.den)

    def __repr__(self):
        return f"ModuleVector({self.terms}, den={self.den})"


def scale_terms(terms, c):
    out = {}
    for k, x in terms.items():
        y = x * c
        if y:
            out[k] = y
    return out


def divide_terms(terms, d):
    """Exact division of all entries; returns (terms, leftover denominator)."""
    try:
        return {k: x.divmod_exact(d) for k, x in terms.items()}, ONE
    except DivisionError:
        return terms, d


class Modules:
    """Module-level computations over one datum."""

    def __init__(self, datum, umin=None, store=None):
        self.datum = datum
        self.U = umin if umin is not None else UMinus(datum, store=store)
        self.alg = self.U.alg
        self.C = datum.cartan
        self._psi = {}
        self._simple_basis = {}
        self._tdim = {}

    # single-factor formulas on pairing vectors

    def pair(self, i, nu):
        row = self.C[i]
        return sum(row[a] * c for a, c in enumerate(nu))

    def verma_F(self, i, vec):
        return self.alg.left_mult(i, vec)

    def verma_E_raw(self, lam, i, vec, nu):
        """(v - v^-1) * phi(E_i x)."""
        a = lam[i] - self.pair(i, nu) + 2
        b = -lam[i]
        if "e-action" in FAULTS:
            a += 1
        out = {}
        for w, val in vec.items():
            if w and w[0] == i:
                add_into(out, w[1:], val.shift(a))
            if w and w[-1] == i:
                add_into(out, w[:-1], -val.shift(b))
        return out

    def verma_E(self, lam, i, vec, nu):
        raw = self.verma_E_raw(lam, i, vec, nu)
        terms, den = divide_terms(raw, VMV)
        if den != ONE:
            raise ModuleError("E action left a denominator; use module vectors")
        return terms

    def simple_F(self, lam, i, vec, nu):
        row = self.C[i]
        base = 1 - (lam[i] - self.pair(i, nu))
        out = {}
        for u, val in vec.items():
            post = sum(row[a] for a in u)
            for k in range(len(u) + 1):
                c = qint(lam[i] - post)
                if c:
                    add_into(out, u[:k] + (i,) + u[k:], (val * c).shift(base))
                if k < len(u):
                    post -= row[u[k]]
        return out

    def simple_E(self, lam, i, vec, nu):
        e = 1 + lam[i] - self.pair(i, nu)
        out = {}
        for w, val in vec.items():
            if w and w[0] == i:
                add_into(out, w[1:], val.shift(e))
        return out

    def k_exponent(self, lam, i, nu):
        return lam[i] - self.pair(i, nu)

    # V_lambda

    def psi_word(self, lam, word):
        """psi(w xi) in V_lambda."""
        key = (lam, word)
        got = self._psi.get(key)
        if got is None:
            if not word:
                got = {(): ONE}
            else:
                rest = word[1:]
                got = self.simple_F(lam, word[0], self.psi_word(lam, rest), self.alg.degree(rest))
            self._psi[key] = got
        return got

    def psi(self, lam, x):
        out = {}
        for w, c in x.combo.items():
            for u, val in self.psi_word(lam, w).items():
                add_into(out, u, val * c)
        return out

    def contravariant_form(self, lam, x, y):
        """(x, y) on M_lambda for FreeElements x, y."""
        if not x.combo or not y.combo or x.degree != y.degree:
            return RatFun(ZERO)
        px = self.psi(lam, x)
        acc = ZERO
        for w, c in y.combo.items():
            val = px.get(w)
            if val is not None:
                acc = acc + val * c
        return RatFun(acc)

    def contravariant_gram(self, lam, nu):
        words = self.U.basis(nu).words
        return [[self.psi_word(lam, w).get(u, ZERO) for u in words] for w in words]

    def simple_basis(self, lam, nu):
        """Lexicographically first basis words of V_lambda at degree nu."""
        key = (tuple(lam), tuple(nu))
        got = self._simple_basis.get(key)
        if got is None:
            if any(c < 0 for c in nu):
                return ()
            words = self.U.basis(nu).words
            gram = self.contravariant_gram(lam, nu)
            chosen = linalg.greedy_independent_rows(gram) if any(any(r) for r in gram) else []
            got = tuple(words[k] for k in chosen)
            self._simple_basis[key] = got
        return got

    def v_dim(self, lam, nu):
        return len(self.simple_basis(lam, nu))

    def t_lambda_vectors(self, lam, nu):
        """Pairing vectors of y theta_i^p, p = (i, lambda) + 1, spanning T_lambda at nu."""
        vecs = []
        for i, c in enumerate(nu):
            p = lam[i] + 1
            if c >= p:
                lower = list(nu)
                lower[i] -= p
                for y in self.U.basis(tuple(lower)).words:
                    vec = self.alg.phi_word(y)
                    for _ in range(p):
                        vec = self.alg.right_mult(i, vec)
                    vecs.append(vec)
        return vecs

    def t_lambda_dim(self, lam, nu):
        key = (tuple(lam), tuple(nu))
        got = self._tdim.get(key)
        if got is None:
            vecs = self.t_lambda_vectors(lam, nu)
            got = self.U.vec_rank(vecs, nu) if vecs else 0
            self._tdim[key] = got
        return got

    def v_lambda_dims_via_ideal(self, lam, nu):
        return self.U.dim(nu) - self.t_lambda_dim(lam, nu)

    def v_lambda_dims_via_form(self, lam, nu):
        """Rank of the contravariant form, cross-checked against the ideal quotient."""
        if not is_dominant(lam):
            raise ModuleError("weight must be dominant")
        by_form = self.v_dim(lam, nu)
        by_ideal = self.v_lambda_dims_via_ideal(lam, nu)
        if by_form != by_ideal:
            raise ModuleError(f"dimension mismatch at {nu}: form {by_form}, ideal {by_ideal}")
        return by_form

    # word-level E action on M_lambda (closed formula on single words)

    def word_E(self, lam, i, x):
        """E_i on a FreeElement of M_lambda, returned as a FreeElement."""
        row = self.C[i]
        out = {}
        for w, c in x.combo.items():
            post = 0
            for k in range(len(w) - 1, -1, -1):
                if w[k] == i:
                    q = qint(lam[i] - post)
                    if q:
                        u = w[:k] + w[k + 1:]
                        out[u] = out.get(u, ZERO) + q * c
                post += row[w[k]]
        deg = list(x.degree)
        if deg[i]:
            deg[i] -= 1
        return FreeElement(tuple(deg), out)

    # tensors

    def tensor(self, desc):
        return TensorModule(self, desc)

    def verma_act(self, lam, gen, i, x):
        """Generator acting on a single Verma vector given as a FreeElement or a phi-dict."""
        vec = self.alg.phi(x) if isinstance(x, FreeElement) else x
        nu = x.degree if isinstance(x, FreeElement) else _deg_of(self.alg, vec)
        tm = self.tensor(ModuleDescriptor((Verma(lam),)))
        mv = ModuleVector({(w,): val for w, val in vec.items()})
        out = tm.act(gen, i, mv, nu_hint=(nu,))
        return ModuleVector({k[0]: val for k, val in out.terms.items()}, out.den)


def _deg_of(alg, vec):
    for w in vec:
        return alg.degree(w)
    return None


class TensorModule:
    """The tensor product of the factors of a descriptor, left-nested coproduct."""

    def __init__(self, mods, desc):
        self.mods = mods
        self.desc = desc
        self.factors = desc.factors
        self.alg = mods.alg
        self.U = mods.U

    @property
    def n(self):
        return len(self.factors)

    def highest(self):
        return ModuleVector({((),) * self.n: ONE})

    def factor_vec(self, k, word):
        f = self.factors[k]
        if f.kind == "M":
            return self.alg.phi_word(word)
        return self.mods.psi_word(f.lam, word)

    def pure(self, words, coeff=ONE):
        """The pure tensor of words[k] xi applied per factor."""
        terms = {(): coeff}
        for k, w in enumerate(words):
            vec = self.factor_vec(k, tuple(w))
            new = {}
            for key, a in terms.items():
                for u, b in vec.items():
                    new[key + (u,)] = a * b
            terms = new
        return ModuleVector({k: x for k, x in terms.items() if x})

    def weight(self, key):
        out = None
        for f, w in zip(self.factors, key):
            wt = self.mods.datum.weight_of(f.lam, self.alg.degree(w))
            out = wt if out is None else tuple(a + b for a, b in zip(out, wt))
        return out

    def _factor_k(self, f, i, w):
        return f.lam[i] - self.alg.pair_with_word(i, w)

    def act(self, gen, i, x, nu_hint=None):
        """Apply gen in {'E', 'F', 'K', 'Kinv'} for vertex index i."""
        mods = self.mods
        if gen in ("K", "Kinv"):
            sign = 1 if gen == "K" else -1
            out = {}
            for key, val in x.terms.items():
                e = sum(self._factor_k(f, i, w) for f, w in zip(self.factors, key))
                add_into(out, key, val.shift(sign * e))
            return ModuleVector(out, x.den)
        if gen == "F":
            out = {}
            for key, val in x.terms.items():
                ks = [self._factor_k(f, i, w) for f, w in zip(self.factors, key)]
                for k, f in enumerate(self.factors):
                    after = -sum(ks[k + 1:])
                    src = {key[k]: val.shift(after)}
                    deg = self.alg.degree(key[k])
                    if f.kind == "M":
                        res = mods.verma_F(i, src)
                    else:
                        res = mods.simple_F(f.lam, i, src, deg)
                    for w, c in res.items():
                        add_into(out, key[:k] + (w,) + key[k + 1:], c)
            return ModuleVector(out, x.den)
        if gen == "E":
            out = {}
            for key, val in x.terms.items():
                ks = [self._factor_k(f, i, w) for f, w in zip(self.factors, key)]
                for k, f in enumerate(self.factors):
                    if i not in key[k]:
                        continue
                    before = sum(ks[:k])
                    src = {key[k]: val.shift(before)}
                    deg = self.alg.degree(key[k])
                    if f.kind == "M":
                        res = mods.verma_E_raw(f.lam, i, src, deg)
                    else:
                        res = {w: c * VMV for w, c in mods.simple_E(f.lam, i, src, deg).items()}
                    for w, c in res.items():
                        add_into(out, key[:k] + (w,) + key[k + 1:], c)
            terms, extra = divide_terms(out, VMV)
            return ModuleVector(terms, x.den * extra)
        raise ModuleError(f"unknown generator {gen!r}")

    def act_word(self, gens, x):
        """Apply a sequence of (gen, i) from right to left."""
        for gen, i in reversed(gens):
            x = self.act(gen, i, x)
        return x

    # weight spaces

    def factor_dim(self, k, nu):
        f = self.factors[k]
        if f.kind == "M":
            return self.U.dim(nu)
        return self.mods.v_dim(f.lam, nu)

    def factor_test_words(self, k, nu):
        f = self.factors[k]
        if f.kind == "M":
            return self.U.basis(nu).words
        return self.mods.simple_basis(f.lam, nu)

    def dim(self, nu):
        total = 0
        for parts in splits(nu, self.n):
            prod = 1
            for k, p in enumerate(parts):
                prod *= self.factor_dim(k, p)
                if not prod:
                    break
            total += prod
        return total

    def test_keys(self, nu):
        keys = []
        for parts in splits(nu, self.n):
            lists = [self.factor_test_words(k, p) for k, p in enumerate(parts)]
            combos = [()]
            for lst in lists:
                combos = [c + (w,) for c in combos for w in lst]
            keys.extend(combos)
        return keys

    def restrict(self, x, keys):
        return [x.terms.get(k, ZERO) for k in keys]

    def rank(self, vecs, nu):
        keys = self.test_keys(nu)
        rows = [self.restrict(v, keys) for v in vecs]
        rows = [r for r in rows if any(r)]
        return linalg.rank(rows) if rows else 0

    def spanning_vectors(self, nu):
        """Pure tensors of test words: a basis of the weight space."""
        out = []
        for key in self.test_keys(nu):
            out.append(self.pure(key))
        return out


class InducedHom:
    """A linear map out of M_0 (x) M_lambda built by the Frobenius recursion.

    base(u) is the image of u xi_0 (x) xi_lambda for a word u; act_F(j, t)
    applies F_j in the target; targets are dicts word -> scalar supporting
    the usual linear operations through ``add`` and ``scale``.
    """

    def __init__(self, lam, cartan, base, act_F):
        self.lam = tuple(lam)
        self.C = cartan
        self.base = base
        self.act_F = act_F
        self._memo = {}

    def image(self, u, w):
        key = (u, w)
        got = self._memo.get(key)
        if got is not None:
            return got
        if not w:
            got = self.base(u)
        else:
            j, rest = w[0], w[1:]
            row = self.C[j]
            k_exp = -(self.lam[j] - sum(row[a] for a in rest))
            first = self.act_F(j, self.image(u, rest))
            second = self.image((j,) + u, rest)
            got = dict(first)
            for t, c in second.items():
                add_into(got, t, -(c.shift(k_exp)))
        self._memo[key] = got
        return got


def check_well_defined(pairs, domain_row, image_row):
    """True iff every linear relation among domain rows holds among image rows.

    Returns (flag, witness) where the witness is the first pair whose image
    breaks a relation.
    """
    dom = [domain_row(p) for p in pairs]
    img = [image_row(p) for p in pairs]
    r_dom = linalg.rank(dom) if dom else 0
    r_all = linalg.rank([a + b for a, b in zip(dom, img)]) if dom else 0
    if r_dom == r_all:
        return True, None
    # locate a witness by scanning prefixes
    for k in range(1, len(pairs) + 1):
        if linalg.rank(dom[:k]) != linalg.rank([a + b for a, b in zip(dom[:k], img[:k])]):
            return False, pairs[k - 1]
    return False, None

