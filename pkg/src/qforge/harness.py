"""
Named end-to-end checks.  Every check returns a CheckResult; exceptions inside
a check are caught and reported as failures so one broken piece does not hide
the rest.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .exactarith import LaurentPoly, qbinom, qint
from .freealg import add_into
from .rootdata import degrees_up_to
from .uqminus import UMinus
from .modules import Modules, ModuleDescriptor, Simple, Verma, TensorModule
from .framed import FramedAlgebra, FramedDescriptor
from .crystals import Crystals, CrystalDescriptor, B, Binf, component_count
from .canonical import Canonical, verify_signed, almost_orthonormal
from . import oracles


@dataclass
class CheckResult:
    name: str
    status: str      # pass, fail or skip
    detail: str

    def line(self):
        return f"{self.name}\t{self.status}\t{self.detail}"


def _scale(vec, c):
    return {k: v * c for k, v in vec.items()}


def _sub(a, b):
    out = dict(a)
    for k, v in b.items():
        add_into(out, k, -v)
    return out


def finite_type(datum):
    try:
        oracles.positive_roots(datum.cartan)
        return True
    except ValueError:
        return False


def random_element(umin, rng, nu):
    """A random combination of basis words with small Laurent coefficients, as a pairing vector."""
    out = {}
    for w in umin.basis(nu).words:
        c = rng.randint(-2, 2)
        if c:
            coeff = LaurentPoly.monomial(rng.randint(-2, 2), c)
            for u, val in umin.alg.phi_word(w).items():
                add_into(out, u, val * coeff)
    return out


def random_weight(rng, n, lo=-2, hi=3):
    return tuple(rng.randint(lo, hi) for _ in range(n))


def random_degree(rng, n, height):
    nus = [nu for nu in degrees_up_to(n, height)]
    return nus[rng.randrange(len(nus))]


# relation checks on M_lambda

def commutator_holds(mods, lam, vec, nu, i, j):
    """E_i F_j x - F_j E_i x = delta_ij [(i, lambda - nu)] x."""
    up = list(nu)
    up[j] += 1
    lhs = mods.verma_E(lam, i, mods.verma_F(j, vec), tuple(up))
    if nu[i]:
        ex = mods.verma_E(lam, i, vec, nu)
        lhs = _sub(lhs, mods.verma_F(j, ex))
    if i == j:
        lhs = _sub(lhs, _scale(vec, qint(lam[i] - mods.pair(i, nu))))
    return not lhs


def _apply_E(mods, lam, word, vec, nu):
    nu = list(nu)
    for i in reversed(word):
        if nu[i] == 0:
            return {}
        vec = mods.verma_E(lam, i, vec, tuple(nu))
        nu[i] -= 1
    return vec


def _apply_F(mods, word, vec):
    for i in reversed(word):
        vec = mods.verma_F(i, vec)
    return vec


def serre_operators_hold(mods, lam, vec, nu, i, j):
    n = 1 - mods.C[i][j]
    e_sum, f_sum = {}, {}
    for p in range(n + 1):
        c = qbinom(n, p) * (-1) ** p
        word = (i,) * p + (j,) + (i,) * (n - p)
        for k, val in _apply_E(mods, lam, word, vec, nu).items():
            add_into(e_sum, k, val * c)
        for k, val in _apply_F(mods, word, vec).items():
            add_into(f_sum, k, val * c)
    return not e_sum and not f_sum


def weight_shift_holds(mods, lam, lam2, vec, nu, i):
    """The E action at lambda in terms of the action at lambda + lambda' and _i rbar."""
    if not nu[i]:
        return True
    tot = tuple(a + b for a, b in zip(lam, lam2))
    lhs = mods.verma_E(lam, i, vec, nu)
    first = _scale(mods.verma_E(tot, i, vec, nu), LaurentPoly.monomial(-lam2[i]))
    e = -(tot[i] - mods.pair(i, nu) + 2)
    rbar = mods.alg.r_dual("i_rbar", i, vec, nu)
    second = _scale(rbar, qint(lam2[i]).shift(e))
    return not _sub(_sub(lhs, first), _scale(second, -1))


class Harness:
    def __init__(self, job, store_for=None):
        self.job = job
        self.datum = job.datum
        self.n = self.datum.rank
        self.store_for = store_for or (lambda datum: None)
        self.U = UMinus(self.datum, store=self.store_for(self.datum))
        self.mods = Modules(self.datum, umin=self.U)
        self.rng = random.Random(job.seed)
        self._framed = None

    @property
    def framed(self):
        if self._framed is None:
            fd = self.datum.frame()
            self._framed = FramedAlgebra(self.datum, store=self.store_for(self.datum),
                                         framed_store=self.store_for(fd))
            self._framed.Ub = self.U
            self._framed.mods = self.mods
        return self._framed

    def depth(self, cap):
        return min(self.job.depth, cap)

    def run(self, checks=None):
        out = []
        for name, fn in self.CHECKS:
            if checks is not None and name not in checks:
                continue
            try:
                status, detail = fn(self)
            except Exception as exc:  # reported, never swallowed silently
                status, detail = "fail", f"{type(exc).__name__}: {exc}"
            out.append(CheckResult(name, status, detail))
        return out

    # individual checks

    def check_serre_radical(self):
        bad = []
        count = 0
        for D in (self.datum, self.datum.frame()):
            U = self.U if D is self.datum else UMinus(D, store=self.store_for(D))
            for i in range(D.rank):
                for j in range(D.rank):
                    if i != j:
                        count += 1
                        if not U.serre_in_radical(i, j):
                            bad.append((D.vertices[i], D.vertices[j]))
        return ("fail", f"not in radical: {bad}") if bad else ("pass", f"{count} pairs")

    def check_kostant(self):
        if not finite_type(self.datum):
            return "skip", "not of finite type"
        h = self.depth(6)
        bad = [nu for nu in degrees_up_to(self.n, h)
               if self.U.dim(nu) != oracles.kostant_count(self.datum.cartan, nu)]
        return ("fail", f"mismatch at {bad}") if bad else ("pass", f"height <= {h}")

    def _random_cases(self, count, cap):
        h = self.depth(cap)
        for _ in range(count):
            lam = random_weight(self.rng, self.n)
            nu = random_degree(self.rng, self.n, h)
            yield lam, nu, random_element(self.U, self.rng, nu)

    def check_commutator(self):
        count = 0
        for lam, nu, vec in self._random_cases(20, 5):
            for i in range(self.n):
                for j in range(self.n):
                    count += 1
                    if not commutator_holds(self.mods, lam, vec, nu, i, j):
                        return "fail", f"lambda={lam} nu={nu} i={i} j={j}"
        return "pass", f"{count} cases"

    def check_serre_operators(self):
        count = 0
        for lam, nu, vec in self._random_cases(20, 5):
            for i in range(self.n):
                for j in range(self.n):
                    if i != j:
                        count += 1
                        if not serre_operators_hold(self.mods, lam, vec, nu, i, j):
                            return "fail", f"lambda={lam} nu={nu} i={i} j={j}"
        return "pass", f"{count} cases"

    def check_weight_shift(self):
        count = 0
        for lam, nu, vec in self._random_cases(20, 5):
            lam2 = random_weight(self.rng, self.n)
            for i in range(self.n):
                count += 1
                if not weight_shift_holds(self.mods, lam, lam2, vec, nu, i):
                    return "fail", f"lambda={lam} lambda'={lam2} nu={nu} i={i}"
        return "pass", f"{count} cases"

    def _dominant_weights(self):
        ws = list(self.job.weights) + [tuple(b) for b in self.job.blocks]
        seen = []
        for w in ws:
            if all(c >= 0 for c in w) and w not in seen:
                seen.append(w)
        return seen

    def check_simple_dims(self):
        h = self.depth(6)
        ws = self._dominant_weights()
        if not ws:
            return "skip", "no dominant weights"
        fin = finite_type(self.datum)
        notes = []
        for lam in ws:
            dims = [self.mods.v_lambda_dims_via_form(lam, nu) for nu in degrees_up_to(self.n, h)]
            if fin:
                weyl = oracles.weyl_dimension(self.datum.cartan, lam)
                top = degrees_up_to(self.n, h)
                complete = all(self.mods.v_dim(lam, nu) == 0 for nu in top if sum(nu) == h) and h > 0
                if complete and sum(dims) != weyl:
                    return "fail", f"total {sum(dims)} != Weyl {weyl} for {lam}"
                if sum(dims) > weyl:
                    return "fail", f"total {sum(dims)} exceeds Weyl {weyl} for {lam}"
            notes.append(f"{lam}:{sum(dims)}")
        return "pass", " ".join(notes)

    def _desc(self):
        if not self.job.blocks:
            return None
        return FramedDescriptor(tuple(self.job.blocks))

    def check_higher_serre(self):
        F = self.framed
        bad = [(i, d) for i in range(self.n) for d in range(4) if not F.higher_serre_vanishes(i, d)]
        return ("fail", f"{bad}") if bad else ("pass", f"d_i in 0..3 for {self.n} vertices")

    def check_e_stability(self):
        desc = self._desc()
        if desc is None:
            return "skip", "no blocks"
        h = self.depth(4)
        for nu in degrees_up_to(self.n, h):
            for i in range(self.n):
                if not self.framed.e_stability(desc, nu, i):
                    return "fail", f"nu={nu} i={i}"
        return "pass", f"{desc.label()} height <= {h}"

    def check_framed_dims(self):
        desc = self._desc()
        if desc is None:
            return "skip", "no blocks"
        rows = self.framed.compare_graded_dims(desc, self.depth(4))
        bad = [r for r in rows if r[-1] in ("MISMATCH", "VIOLATION", "greater")]
        if bad:
            return "fail", f"{bad[0]}"
        eq = sum(1 for r in rows if r[-1] == "equal")
        return "pass", f"{len(rows)} rows, {eq} equal"

    def check_induced_hom(self):
        desc = self._desc()
        if desc is None:
            return "skip", "no blocks"
        res = self.framed.check_induced_hom(desc.blocks[0], self.depth(4))
        flags = {k: v for k, v in res.items() if k != "witness"}
        if not all(flags.values()):
            return "fail", f"{flags} witness={res['witness']}"
        return "pass", ",".join(sorted(flags))

    def _crystal_descs(self, depth):
        descs = [CrystalDescriptor((Binf((0,) * self.n),), depth)]
        ws = self._dominant_weights()
        for w in ws:
            descs.append(CrystalDescriptor((B(w),), depth))
            descs.append(CrystalDescriptor((Binf(w),), depth))
        if len(ws) >= 2:
            descs.append(CrystalDescriptor((B(ws[0]), Binf(ws[1])), depth))
            descs.append(CrystalDescriptor((B(ws[0]), B(ws[1])), depth))
        return descs

    def check_crystal_axioms(self):
        cr = Crystals(self.datum)
        total = 0
        for desc in self._crystal_descs(self.depth(6)):
            gen = cr.generate(desc)
            total += len(gen.nodes)
            bad = cr.check_axioms(gen)
            if bad:
                return "fail", f"{desc.label()}: {bad[0]}"
        return "pass", f"{total} nodes"

    def check_crystal_characters(self):
        cr = Crystals(self.datum)
        h = self.depth(5)
        for desc in self._crystal_descs(h):
            counts = cr.counts_by_degree(cr.generate(desc))
            mod = TensorModule(self.mods, ModuleDescriptor(tuple(
                (Verma if f.kind == "inf" else Simple)(f.lam) for f in desc.factors)))
            for nu in degrees_up_to(self.n, h):
                if counts.get(nu, 0) != mod.dim(nu):
                    return "fail", f"{desc.label()} at {nu}: {counts.get(nu, 0)} vs {mod.dim(nu)}"
        return "pass", f"height <= {h}"

    def check_component_count(self):
        desc = self._desc()
        if desc is None:
            return "skip", "no blocks"
        cr = Crystals(self.datum)
        vals = []
        for nu in degrees_up_to(self.n, self.depth(5)):
            a, b = component_count(cr, self.mods, desc.blocks, nu)
            if a != b:
                return "fail", f"nu={nu}: {a} vs {b}"
            vals.append(a)
        return "pass", ",".join(map(str, vals))

    def check_canonical(self):
        desc = self._desc()
        if desc is None or desc.N < 2:
            return "skip", "needs two blocks"
        lam1, lam2 = desc.blocks[0], desc.blocks[1]
        can = Canonical(self.mods)
        cr = Crystals(self.datum)
        h = self.depth(4)
        counts = cr.counts_by_degree(cr.generate(CrystalDescriptor((B(lam1), Binf(lam2)), h)))
        total = 0
        for nu in degrees_up_to(self.n, h):
            sp = can.space(lam2, lam1, nu)
            cb = sp.canonical_basis()
            total += len(cb)
            for c in cb:
                if not all(verify_signed(sp, c.coords)):
                    return "fail", f"signed check at {nu} for {sp.key_label(c.leading)}"
            if almost_orthonormal(sp, cb):
                return "fail", f"not almost orthonormal at {nu}"
            if len(cb) != counts.get(nu, 0):
                return "fail", f"cardinality at {nu}: {len(cb)} vs {counts.get(nu, 0)}"
            images, target, tsp = can.localization(lam2, lam1, nu)
            live = [r for r in images if r is not None]
            if len(live) != tsp.dim or any(r not in target for r in live):
                return "fail", f"localization at {nu}"
        return "pass", f"{total} elements"

    CHECKS = [
        ("serre_radical", check_serre_radical),
        ("kostant_dims", check_kostant),
        ("verma_commutator", check_commutator),
        ("verma_serre", check_serre_operators),
        ("weight_shift_identity", check_weight_shift),
        ("simple_dims", check_simple_dims),
        ("higher_serre", check_higher_serre),
        ("e_stability", check_e_stability),
        ("framed_dims", check_framed_dims),
        ("induced_hom", check_induced_hom),
        ("crystal_axioms", check_crystal_axioms),
        ("crystal_characters", check_crystal_characters),
        ("component_count", check_component_count),
        ("canonical_basis", check_canonical),
    ]
