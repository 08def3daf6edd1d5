"""
The involution Psi on M_{l2} (x) V_{l1} (or V_{l2} (x) V_{l1}) and its canonical basis.

Vectors are dicts (x, q) -> scalar meaning the sum of c * theta_x xi (x) theta_q xi
over plain words.  The basis z_k is the divided-power version of (b, q) with
b, q selected basis words, ordered by increasing depth of q.

Factor bases are divided-power monomials that are themselves canonical
(integral, bar-invariant, norm in 1 + v^-1 Z[[v^-1]]) whenever such monomials
span; otherwise the lexicographic basis words are used and any failure of
the resulting elements shows up in the checks.

Psi fixes every F_J (theta_w xi (x) xi).  Taking J = q and w = b gives a
spanning family which is block unitriangular against z, hence a basis; Psi
is solved from it and cross-checked against the family with J arbitrary.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .exactarith import ONE, ZERO, V, LaurentPoly, RatFun, qfactorial, format_laurent
from .freealg import add_into, FreeElement
from .modules import ModuleError
from .rootdata import splits
from . import linalg

ONE_MINUS = ONE - LaurentPoly.monomial(-2)
VMV = V - LaurentPoly.monomial(-1)


class CanonicalError(ModuleError):
    pass


class InconsistentPsi(CanonicalError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotUnitriangular(CanonicalError):
    pass


class NonIntegral(CanonicalError):
    pass


def run_scalar(word):
    """1 / prod [run length]! over maximal runs of equal letters."""
    den = ONE
    k = 0
    while k < len(word):
        j = k
        while j < len(word) and word[j] == word[k]:
            j += 1
        den = den * qfactorial(j - k)
        k = j
    return RatFun(ONE, den)


def word_label(names, word):
    if not word:
        return "xi"
    parts = []
    k = 0
    while k < len(word):
        j = k
        while j < len(word) and word[j] == word[k]:
            j += 1
        n = j - k
        parts.append(f"F{names[word[k]]}" + (f"^({n})" if n > 1 else ""))
        k = j
    return "".join(parts) + " xi"


def _add_vec(acc, vec, c=None):
    for key, val in vec.items():
        add_into(acc, key, val if c is None else val * c)
    return acc


class FactorBases:
    """Basis words for U^- and V_lambda, preferring canonical monomials."""

    def __init__(self, mods):
        self.mods = mods
        self.alg = mods.alg
        self._u = {}
        self._v = {}

    def _norm_ok(self, w):
        val = self.alg.phi_word(w).get(w, ZERO)
        norm = RatFun(val) * run_scalar(w) * run_scalar(w) / RatFun(ONE_MINUS ** len(w))
        return series_condition(norm, 1)

    def _independent(self, words, row_of, dim):
        chosen = []
        rows = []
        for w in words:
            trial = rows + [row_of(w)]
            if linalg.rank(trial) > len(rows):
                rows = trial
                chosen.append(w)
                if len(chosen) == dim:
                    break
        return tuple(chosen)

    def u_words(self, nu):
        """(words, canonical flag) for U^-_nu."""
        nu = tuple(nu)
        got = self._u.get(nu)
        if got is None:
            U = self.mods.U
            dim = U.dim(nu)
            if dim == 0:
                got = ((), True)
            else:
                cands = [w for w in self.alg.words(nu) if self._norm_ok(w)]
                chosen = self._independent(cands, lambda w: U.restrict(self.alg.phi_word(w), nu), dim)
                got = (chosen, True) if len(chosen) == dim else (U.basis(nu).words, False)
            self._u[nu] = got
        return got

    def v_words(self, lam, nu):
        key = (tuple(lam), tuple(nu))
        got = self._v.get(key)
        if got is None:
            mods = self.mods
            dim = mods.v_dim(lam, nu)
            words, ok = self.u_words(nu)
            if dim == 0:
                got = ((), True)
            elif ok:
                basis = mods.U.basis(nu).words
                psi = mods.psi_word

                def row(w):
                    vec = psi(tuple(lam), w)
                    return [vec.get(u, ZERO) for u in basis]

                live = [w for w in words if any(row(w))]
                chosen = self._independent(live, row, dim)
                got = (chosen, True) if len(chosen) == dim else (mods.simple_basis(lam, nu), False)
            else:
                got = (mods.simple_basis(lam, nu), False)
            self._v[key] = got
        return got


class TensorSpace:
    """One weight space of X_{l2} (x) V_{l1} with X = M or V, and Psi on it."""

    def __init__(self, mods, first, lam2, lam1, nu, bases=None):
        if first not in ("M", "V"):
            raise CanonicalError("first factor must be M or V")
        self.mods = mods
        self.bases = bases if bases is not None else FactorBases(mods)
        self.monomial = True
        self.first = first
        self.lam2 = tuple(lam2)
        self.lam1 = tuple(lam1)
        self.nu = tuple(nu)
        self.C = mods.C
        self.n = len(self.C)
        self.alg = mods.alg
        self.basis = self._basis()
        self.index = {key: k for k, key in enumerate(self.basis)}
        self.dim = len(self.basis)
        self._gram = None
        self._P = None
        self._consistent = None

    # basis and forms

    def first_words(self, a):
        if self.first == "M":
            words, ok = self.bases.u_words(a)
        else:
            words, ok = self.bases.v_words(self.lam2, a)
        self.monomial = self.monomial and ok
        return words

    def second_words(self, b):
        words, ok = self.bases.v_words(self.lam1, b)
        self.monomial = self.monomial and ok
        return words

    def _basis(self):
        out = []
        for a, b in splits(self.nu, 2):
            for q in self.second_words(b):
                for x in self.first_words(a):
                    out.append((x, q))
        out.sort(key=lambda t: (len(t[1]), t[1], t[0]))
        return out

    def z(self, k):
        x, q = self.basis[k]
        return {(x, q): run_scalar(x) * run_scalar(q)}

    def first_form(self, x, y):
        if self.first == "M":
            val = self.alg.phi_word(x).get(y)
            return RatFun(val) / RatFun(ONE_MINUS ** len(x)) if val is not None else None
        val = self.mods.psi_word(self.lam2, x).get(y)
        return RatFun(val) if val is not None else None

    def second_form(self, q, r):
        val = self.mods.psi_word(self.lam1, q).get(r)
        return RatFun(val) if val is not None else None

    def form(self, X, Y):
        acc = RatFun(ZERO)
        for (x, q), c in X.items():
            for (y, r), d in Y.items():
                if len(x) != len(y):
                    continue
                a = self.first_form(x, y)
                if a is None or not a:
                    continue
                b = self.second_form(q, r)
                if b is None or not b:
                    continue
                acc = acc + a * b * c * d
        return acc

    def gram(self):
        if self._gram is None:
            zs = [self.z(k) for k in range(self.dim)]
            self._gram = [[self.form(zs[j], zs[k]) for k in range(self.dim)] for j in range(self.dim)]
        return self._gram

    def coords_many(self, vecs):
        """Coordinates of several vectors in the z basis (rows)."""
        if not vecs:
            return []
        if self.dim == 0:
            return [[] for _ in vecs]
        zs = [self.z(k) for k in range(self.dim)]
        rhs = [[self.form(zs[j], X) for X in vecs] for j in range(self.dim)]
        sol = linalg.solve(self.gram(), rhs)
        return [[sol[k][s] for k in range(self.dim)] for s in range(len(vecs))]

    def coords(self, X):
        return self.coords_many([X])[0]

    def vector(self, coords):
        out = {}
        for k, c in enumerate(coords):
            if c:
                _add_vec(out, self.z(k), c)
        return out

    def form_coords(self, a, b):
        G = self.gram()
        acc = RatFun(ZERO)
        for j, x in enumerate(a):
            if not x:
                continue
            for k, y in enumerate(b):
                if y and G[j][k]:
                    acc = acc + x * y * G[j][k]
        return acc

    # actions on word-pair vectors

    def k_inv_second(self, i, q):
        return -(self.lam1[i] - sum(self.C[i][a] for a in q))

    def F(self, i, X):
        out = {}
        for (x, q), c in X.items():
            add_into(out, ((i,) + x, q), RatFun(c).shift(self.k_inv_second(i, q)))
            add_into(out, (x, (i,) + q), RatFun(c))
        return out

    def F_word(self, word, X):
        for i in reversed(word):
            X = self.F(i, X)
        return X

    def E(self, i, X):
        """E_i (x) 1 + K_i (x) E_i."""
        out = {}
        for (x, q), c in X.items():
            c = RatFun(c)
            lam_x = self.lam2[i] - sum(self.C[i][a] for a in x)
            ex = self.mods.word_E(self.lam2, i, FreeElement(self.alg.degree(x), {x: ONE}))
            for y, val in ex.combo.items():
                add_into(out, (y, q), c * val)
            eq = self.mods.word_E(self.lam1, i, FreeElement(self.alg.degree(q), {q: ONE}))
            for r, val in eq.combo.items():
                add_into(out, (x, r), (c * val).shift(lam_x))
        return out

    def epsilon(self, i, X):
        """_i r (x) K_i^-1 + (v - v^-1) 1 (x) K_i^-1 E_i, for a Verma first factor."""
        if self.first != "M":
            raise CanonicalError("epsilon needs a Verma first factor")
        out = {}
        for (x, q), c in X.items():
            c = RatFun(c)
            for y, val in self.alg.r_word("i_r", i, x).items():
                add_into(out, (y, q), (c * val).shift(self.k_inv_second(i, q)))
            eq = self.mods.word_E(self.lam1, i, FreeElement(self.alg.degree(q), {q: ONE}))
            for r, val in eq.combo.items():
                add_into(out, (x, r), (c * val * VMV).shift(self.k_inv_second(i, r)))
        return out

    # Psi

    def spanning(self, full=False):
        out = []
        for a, b in splits(self.nu, 2):
            js = self.alg.words(b) if full else self.second_words(b)
            for w in self.first_words(a):
                for J in js:
                    out.append(((w, J), self.F_word(J, {(w, ()): RatFun(ONE)})))
        return out

    def psi_matrix(self):
        if self._P is not None:
            return self._P
        if self.dim == 0:
            self._P = []
            return self._P
        fam = self.spanning()
        M = self.coords_many([vec for _, vec in fam])
        if len(M) != self.dim or linalg.rank(M) != self.dim:
            raise CanonicalError("spanning family is not a basis")
        ident = [[RatFun(ONE) if j == k else RatFun(ZERO) for k in range(self.dim)]
                 for j in range(self.dim)]
        Minv = linalg.solve(M, ident)
        P = [[RatFun(ZERO)] * self.dim for _ in range(self.dim)]
        for k in range(self.dim):
            for s in range(self.dim):
                a = Minv[k][s]
                if not a:
                    continue
                a = a.bar()
                for l in range(self.dim):
                    if M[s][l]:
                        P[k][l] = P[k][l] + a * M[s][l]
        self._P = P
        return P

    def check_consistency(self):
        """Every relation among the full family must survive bar; raises otherwise."""
        if self._consistent is not None:
            return self._consistent
        if self.dim == 0:
            self._consistent = True
            return True
        fam = self.spanning(full=True)
        rows = self.coords_many([vec for _, vec in fam])
        r = linalg.rank(rows)
        joint = linalg.rank([row + [c.bar() for c in row] for row in rows])
        self._consistent = r == joint == self.dim
        if not self._consistent:
            raise InconsistentPsi(f"Psi is not well defined at {self.nu}",
                                  witness=[key for key, _ in fam])
        return True

    def psi_coords(self, coords):
        P = self.psi_matrix()
        out = [RatFun(ZERO)] * self.dim
        for k, c in enumerate(coords):
            if not c:
                continue
            cb = RatFun(c).bar()
            for l in range(self.dim):
                if P[k][l]:
                    out[l] = out[l] + cb * P[k][l]
        return out

    def psi(self, X):
        return self.vector(self.psi_coords(self.coords(X)))

    def check_unitriangular(self):
        P = self.psi_matrix()
        for k in range(self.dim):
            if P[k][k] != RatFun(ONE):
                raise NotUnitriangular(f"diagonal entry {k} is {P[k][k]}")
            for l in range(k + 1, self.dim):
                if P[k][l]:
                    raise NotUnitriangular(f"entry ({k}, {l}) is nonzero")
        return True

    # canonical basis

    def canonical_basis(self):
        self.check_consistency()
        self.check_unitriangular()
        P = self.psi_matrix()
        out = []
        for k in range(self.dim):
            a = {k: ONE}
            for l in range(k - 1, -1, -1):
                rhs = RatFun(ZERO)
                for j in range(l + 1, k + 1):
                    if j in a and P[j][l]:
                        rhs = rhs + RatFun(a[j]).bar() * P[j][l]
                a_l = _negative_part(rhs)
                if a_l:
                    a[l] = a_l
            coords = [RatFun(a.get(j, ZERO)) for j in range(self.dim)]
            out.append(CanonicalElement(self, k, coords))
        return out

    def weight(self):
        return tuple(self.lam2[i] + self.lam1[i] - sum(self.C[i][j] * self.nu[j] for j in range(self.n))
                     for i in range(self.n))

    def key_label(self, k):
        names = self.mods.datum.vertices
        x, q = self.basis[k]
        return f"{word_label(names, x)} (x) {word_label(names, q)}"


def _negative_part(r):
    """The unique a in v^-1 Z[v^-1] with a - bar(a) = r."""
    if not r:
        return ZERO
    try:
        p = r.as_laurent()
    except Exception as exc:
        raise NonIntegral(f"non-Laurent entry {r}") from exc
    if p.bar() != -p:
        raise NonIntegral(f"entry {format_laurent(p)} is not antisymmetric")
    return LaurentPoly({e: c for e, c in p.terms.items() if e < 0})


class CanonicalElement:
    def __init__(self, space, leading, coords):
        self.space = space
        self.leading = leading
        self.coords = coords

    def vector(self):
        return self.space.vector(self.coords)

    def to_json(self):
        sp = self.space
        return {
            "degree": list(sp.nu),
            "weight": list(sp.weight()),
            "leading": sp.key_label(self.leading),
            "coords": [{"vector": sp.key_label(k), "coeff": _scalar_text(c)}
                       for k, c in enumerate(self.coords) if c],
        }


def _scalar_text(c):
    c = RatFun(c)
    if c.den == ONE:
        return format_laurent(c.num)
    return f"({format_laurent(c.num)})/({format_laurent(c.den)})"


def series_condition(value, delta, nterms=8):
    """value in delta + v^-1 Z[[v^-1]] (exact: integrality is a unit check at infinity)."""
    value = RatFun(value)
    if not value:
        return delta == 0
    top, coeffs = value.series_at_infinity(nterms)
    lead = value.den.coeffs[-1]
    if abs(lead) != 1:
        return False
    if top > 0:
        return False
    const = coeffs[0] if top == 0 else Fraction(0)
    return const == delta


def verify_signed(space, coords):
    """(integral, Psi-invariant, norm condition) for a coordinate vector."""
    coords = [RatFun(c) for c in coords]
    integral = all(c.den == ONE and all(isinstance(a, int) for a in c.num.coeffs) for c in coords)
    invariant = space.psi_coords(coords) == coords
    norm = series_condition(space.form_coords(coords, coords), 1)
    return integral, invariant, norm


def almost_orthonormal(space, elements):
    bad = []
    for a, x in enumerate(elements):
        for b, y in enumerate(elements):
            if b < a:
                continue
            if not series_condition(space.form_coords(x.coords, y.coords), 1 if a == b else 0):
                bad.append((a, b))
    return bad


class Canonical:
    """Cached tensor spaces for one datum."""

    def __init__(self, mods):
        self.mods = mods
        self.bases = FactorBases(mods)
        self._spaces = {}

    def space(self, lam2, lam1, nu, first="M"):
        key = (first, tuple(lam2), tuple(lam1), tuple(nu))
        got = self._spaces.get(key)
        if got is None:
            got = TensorSpace(self.mods, first, lam2, lam1, nu, self.bases)
            self._spaces[key] = got
        return got

    def canonical_basis(self, lam2, lam1, nu, first="M"):
        return self.space(lam2, lam1, nu, first).canonical_basis()

    def localization(self, lam2, lam1, nu):
        """Project the canonical basis of M (x) V to V (x) V.

        Returns (images, target canonical coordinate list, target space); zero images
        are None.
        """
        src = self.space(lam2, lam1, nu, "M")
        tgt = self.space(lam2, lam1, nu, "V")
        cb = src.canonical_basis()
        vecs = [c.vector() for c in cb]
        images = tgt.coords_many(vecs) if tgt.dim else [[] for _ in vecs]
        images = [None if not any(row) else row for row in images]
        target = [c.coords for c in tgt.canonical_basis()]
        return images, target, tgt

    def psi_commutes_with_E(self, lam2, lam1, nu, i):
        if nu[i] == 0:
            return True
        sp = self.space(lam2, lam1, nu)
        lower = list(nu)
        lower[i] -= 1
        lo = self.space(lam2, lam1, tuple(lower))
        for k in range(sp.dim):
            z = sp.z(k)
            lhs = lo.psi_coords(lo.coords(sp.E(i, z)))
            rhs = lo.coords(sp.E(i, sp.vector(sp.psi_coords([RatFun(ONE) if j == k else RatFun(ZERO)
                                                                for j in range(sp.dim)]))))
            if lhs != rhs:
                return False
        return True


def canonical_json(elements):
    return json.dumps([e.to_json() for e in elements], indent=2, sort_keys=True) + "\n"
