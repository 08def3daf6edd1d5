"""
Subspaces of the negative part of the framed algebra spanned by words that
interleave base-graph words with fixed framing blocks.

A framing block theta^d is the product of divided powers theta_{i+}^(d_i) in
vertex order.  Since only spans and vanishing are ever tested, a block is
represented by the plain word i+^d_i ..., the divided-power factor being a
nonzero scalar.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exactarith import ONE, ZERO, RatFun, qbinom, qfactorial
from .freealg import FreeElement, add_into
from .modules import (Modules, TensorModule, ModuleDescriptor, Verma, Simple, InducedHom,
                      check_well_defined)
from .rootdata import splits
from .uqminus import UMinus

VARIANTS = ("K", "K'", "T", "T'")


class FramedError(ValueError):
    pass


@dataclass(frozen=True)
class FramedDescriptor:
    """A sequence d^1, ..., d^N of gradings of the framing vertices."""

    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(int(c) for c in d) for d in self.blocks))
        for d in self.blocks:
            if any(c < 0 for c in d):
                raise FramedError("framing degrees must be nonnegative")

    @property
    def N(self):
        return len(self.blocks)

    def total(self):
        out = None
        for d in self.blocks:
            out = d if out is None else tuple(a + b for a, b in zip(out, d))
        return out

    def label(self):
        return "|".join(",".join(map(str, d)) for d in self.blocks)


class FramedSpan:
    def __init__(self, desc, nu, variant, words, dim):
        self.desc = desc
        self.nu = nu
        self.variant = variant
        self.words = words
        self.dim = dim


class FramedAlgebra:
    """The framed datum with its U^- and the base datum's modules."""

    def __init__(self, datum, store=None, framed_store=None):
        self.base = datum
        self.datum = datum.frame()
        self.n = datum.rank
        self.Ub = UMinus(datum, store=store)
        self.mods = Modules(datum, umin=self.Ub)
        self.U = UMinus(self.datum, store=framed_store)
        self.fmods = Modules(self.datum, umin=self.U)
        self.alg = self.U.alg
        self._spans = {}

    # letters: base vertex k keeps index k, its framing copy is n + k

    def plus(self, k):
        return self.n + k

    def full_degree(self, nu, plus_degree):
        return tuple(nu) + tuple(plus_degree)

    def block_word(self, d):
        w = ()
        for k, c in enumerate(d):
            w += (self.plus(k),) * c
        return w

    def block_scalar(self, d):
        s = ONE
        for c in d:
            s = s * qfactorial(c)
        return RatFun(ONE, s)

    def theta_block(self, d, order=None):
        """Normal form of the divided-power block, optionally in a different vertex order."""
        order = range(self.n) if order is None else order
        w = ()
        for k in order:
            w += (self.plus(k),) * d[k]
        deg = (0,) * self.n + tuple(d)
        return self.U.normal_form(FreeElement(deg, {w: self.block_scalar(d)}))

    # spanning words

    def _interleave(self, parts, blocks):
        """All words x1 B1 x2 B2 ... with x_k basis words of the given degrees."""
        out = [()]
        for k, p in enumerate(parts):
            words = self.Ub.basis(p).words
            blk = blocks[k] if k < len(blocks) else ()
            out = [w + x + blk for w in out for x in words]
        return out

    def spanning_words(self, desc, nu, variant):
        nu = tuple(nu)
        blocks = [self.block_word(d) for d in desc.blocks]
        N = desc.N
        words = set()
        if variant == "K":
            for parts in splits(nu, N):
                words.update(self._interleave(parts, blocks))
        elif variant in ("K'", "T'"):
            for d in desc.blocks:
                if not any(d):
                    raise FramedError("K' needs nonzero blocks")
            for parts in splits(nu, N + 1):
                if variant == "T'" and not any(parts[-1]):
                    continue
                words.update(self._interleave(parts, blocks))
        elif variant == "T":
            last = desc.blocks[-1]
            for i in range(self.n):
                p = last[i] + 1
                if nu[i] < p:
                    continue
                rest = list(nu)
                rest[i] -= p
                mid = blocks[:-1] + [()]
                for parts in splits(tuple(rest), N):
                    for w in self._interleave(parts, mid):
                        words.add(w + (i,) * p + blocks[-1])
        else:
            raise FramedError(f"unknown variant {variant!r}")
        return sorted(words)

    def framed_degree(self, desc, nu):
        return self.full_degree(nu, desc.total())

    def span_vectors(self, words):
        return [self.alg.phi_word(w) for w in words]

    def k_space(self, desc, nu, variant="K"):
        key = (desc, tuple(nu), variant)
        got = self._spans.get(key)
        if got is None:
            words = self.spanning_words(desc, nu, variant)
            deg = self.framed_degree(desc, nu)
            dim = self.U.vec_rank(self.span_vectors(words), deg) if words else 0
            got = FramedSpan(desc, tuple(nu), variant, words, dim)
            self._spans[key] = got
        return got

    # E action of the framed Verma module with highest weight 0

    def e_image(self, i, word):
        """E_i applied to a word of the framed M_0, as a pairing vector."""
        return self.fmods.verma_E((0,) * self.datum.rank, i, self.alg.phi_word(word),
                                  self.alg.degree(word))

    def e_stability(self, desc, nu, i):
        nu = tuple(nu)
        if nu[i] == 0:
            return True
        src = self.k_space(desc, nu, "K")
        lower = list(nu)
        lower[i] -= 1
        tgt = self.k_space(desc, tuple(lower), "K")
        deg = self.framed_degree(desc, lower)
        images = [self.e_image(i, w) for w in src.words]
        base = self.span_vectors(tgt.words)
        return self.U.vec_rank(base + images, deg) == tgt.dim

    def higher_serre_vanishes(self, i, d):
        """Sum_t (-1)^t theta_i^(p-t) theta_{i+}^(d) theta_i^(t) = 0 with p = d + 1."""
        p = d + 1
        ip = self.plus(i)
        vec = {}
        for t in range(p + 1):
            c = qbinom(p, t) * (-1) ** t
            w = (i,) * (p - t) + (ip,) * d + (i,) * t
            for u, val in self.alg.phi_word(w).items():
                add_into(vec, u, val * c)
        return not vec

    # graded dimension comparisons

    def weights(self, desc):
        """lambda^a with (i, lambda^a) = d^a_i."""
        return [tuple(d) for d in desc.blocks]

    def tensor_rhs(self, desc):
        """M_{lambda^N} (x) V_{lambda^{N-1}} (x) ... (x) V_{lambda^1}."""
        lams = self.weights(desc)
        factors = (Verma(lams[-1]),) + tuple(Simple(l) for l in reversed(lams[:-1]))
        return TensorModule(self.mods, ModuleDescriptor(factors))

    def tensor_prime_rhs(self, desc):
        """M_0 (x) V_{lambda^N} (x) ... (x) V_{lambda^1}."""
        lams = self.weights(desc)
        factors = (Verma((0,) * self.n),) + tuple(Simple(l) for l in reversed(lams))
        return TensorModule(self.mods, ModuleDescriptor(factors))

    def tensor_simple(self, desc):
        lams = self.weights(desc)
        return TensorModule(self.mods, ModuleDescriptor(tuple(Simple(l) for l in reversed(lams))))

    def compare_graded_dims(self, desc, cutoff, include_prime=True):
        from .rootdata import degrees_up_to
        rows = []
        rhs = self.tensor_rhs(desc)
        rhs_prime = self.tensor_prime_rhs(desc) if include_prime else None
        simple = self.tensor_simple(desc)
        for nu in degrees_up_to(self.n, cutoff):
            lhs = self.k_space(desc, nu, "K").dim
            r = rhs.dim(nu)
            if lhs == r:
                status = "equal"
            elif desc.N == 2:
                status = "MISMATCH"
            else:
                status = "less" if lhs < r else "greater"
            rows.append(("K", desc.label(), nu, lhs, r, status))
            tdim = self.k_space(desc, nu, "T").dim
            quot = lhs - tdim
            vs = simple.dim(nu)
            rows.append(("K/T", desc.label(), nu, quot, vs, "equal" if quot == vs else
                         ("less" if quot < vs else "VIOLATION")))
            if include_prime and all(any(d) for d in desc.blocks):
                kp = self.k_space(desc, nu, "K'").dim
                rp = rhs_prime.dim(nu)
                rows.append(("K'", desc.label(), nu, kp, rp, "equal" if kp == rp else
                             ("less" if kp < rp else "VIOLATION")))
        return rows

    def sl2_collapse_report(self, desc, cutoff):
        """Exploratory: K(d.) against K(d) and K'(d), d the sum of the blocks.

        Rows are (nu, dim K(d.), dim K(d), dim K'(d), dim K(d.) + K'(d)).
        Nothing is asserted.
        """
        from .rootdata import degrees_up_to
        single = FramedDescriptor((desc.total(),))
        out = []
        for nu in degrees_up_to(self.n, cutoff):
            a = self.k_space(desc, nu, "K")
            b = self.k_space(single, nu, "K")
            c = self.k_space(single, nu, "K'")
            deg = self.framed_degree(desc, nu)
            joint = self.U.vec_rank(self.span_vectors(a.words + c.words), deg)
            out.append((nu, a.dim, b.dim, c.dim, joint))
        return out

    # the Frobenius map M_0 (x) M_lambda -> K(d)

    def induced_hom(self, d):
        """phi(u xi_0 (x) xi_lambda) = theta^d u with (i, lambda) = d_i."""
        blk = self.block_word(d)

        def base(u):
            return {blk + u: ONE}

        def act_F(j, t):
            out = {}
            for w, c in t.items():
                add_into(out, (j,) + w, c)
            return out

        return InducedHom(tuple(d), self.base.cartan, base, act_F)

    def target_phi(self, t):
        out = {}
        for w, c in t.items():
            for u, val in self.alg.phi_word(w).items():
                add_into(out, u, val * c)
        return out

    def check_induced_hom(self, d, cutoff):
        """Well-definedness, base compatibility and vanishing on M_0 (x) T_lambda."""
        from .rootdata import degrees_up_to
        hom = self.induced_hom(d)
        lam = tuple(d)
        zero = (0,) * self.n
        Ub = self.Ub
        results = {"well_defined": True, "base_compatible": True, "kills_T": True,
                   "closed_form": True, "witness": None}
        for i in range(self.n):
            for m in range(cutoff + 1):
                got = self.target_phi(hom.image((), (i,) * m))
                if got != self.target_phi(self.closed_form_image(i, d[i], m, d)):
                    results["closed_form"] = False
        for nu in degrees_up_to(self.n, cutoff):
            deg = self.full_degree(nu, d)
            pairs = []
            for a, b in splits(nu, 2):
                for u in Ub.alg.words(a):
                    for w in Ub.alg.words(b):
                        pairs.append((u, w))
            keys = [(x, y) for a, b in splits(nu, 2)
                    for x in Ub.basis(a).words for y in Ub.basis(b).words]
            fbasis = self.U.basis(deg).words

            def domain_row(p):
                pu, pw = Ub.alg.phi_word(p[0]), Ub.alg.phi_word(p[1])
                return [pu.get(x, ZERO) * pw.get(y, ZERO) for x, y in keys]

            def image_row(p):
                vec = self.target_phi(hom.image(*p))
                return [vec.get(b, ZERO) for b in fbasis]

            ok, wit = check_well_defined(pairs, domain_row, image_row)
            if not ok:
                results["well_defined"] = False
                results["witness"] = (nu, wit)
            # T_lambda side: u (x) y theta_i^p
            for i in range(self.n):
                p = lam[i] + 1
                for a, b in splits(nu, 2):
                    if b[i] < p:
                        continue
                    lower = list(b)
                    lower[i] -= p
                    for u in Ub.alg.words(a):
                        for y in Ub.alg.words(tuple(lower)):
                            vec = self.target_phi(hom.image(u, y + (i,) * p))
                            if vec:
                                results["kills_T"] = False
            # base compatibility with E_i: E_i(theta^d x) = theta^d E_i(x) in M_0
            for x in Ub.alg.words(nu):
                for i in range(self.n):
                    if not x.count(i):
                        continue
                    lhs = self.e_image(i, self.block_word(d) + x)
                    ex = self.mods.word_E(zero, i, Ub.alg.word_element(x))
                    rhs = {}
                    for w, c in ex.combo.items():
                        for u, val in self.alg.phi_word(self.block_word(d) + w).items():
                            add_into(rhs, u, val * c)
                    if lhs != rhs:
                        results["base_compatible"] = False
        return results

    def closed_form_image(self, i, d_i, m, d=None):
        """[m]! phi(xi_0 (x) theta_i^(m) xi_lambda) by the closed formula."""
        p = d_i + 1
        if d is None:
            d = [0] * self.n
            d[i] = d_i
        blk = self.block_word(d)
        out = {}
        for t in range(m + 1):
            c = qbinom(m, t).shift(-t * (p - m)) * (-1) ** t
            add_into(out, (i,) * (m - t) + blk + (i,) * t, c)
        return out

