"""Acceptance criteria 1 to 9.  Every comparison is exact."""
import random
import subprocess
import sys

import pytest

from qforge.rootdata import degrees_up_to
from qforge.uqminus import UMinus
from qforge.modules import ModuleDescriptor, TensorModule, Verma, Simple
from qforge.framed import FramedAlgebra, FramedDescriptor
from qforge.crystals import Crystals, CrystalDescriptor, B, Binf, component_count
from qforge.canonical import Canonical, almost_orthonormal, verify_signed
from qforge.harness import (
    commutator_holds, serre_operators_hold, weight_shift_holds, random_element, random_weight,
)
from qforge import oracles
from conftest import a1, a2, a3, kronecker, mods_for

FINITE = ["A1", "A2", "A3"]
SIX = [("A1", (1,)), ("A1", (2,)), ("A1", (3,)), ("A2", (1, 0)), ("A2", (1, 1)), ("A3", (1, 0, 0))]


def test_criterion_1_presentation():
    for make in (a1, a2, a3, kronecker):
        for D in (make(), make().frame()):
            U = UMinus(D)
            for i in range(D.rank):
                for j in range(D.rank):
                    if i != j:
                        assert U.serre_in_radical(i, j), (D.vertices, i, j)
    for name in FINITE:
        U = mods_for(name).U
        C = U.datum.cartan
        for nu in degrees_up_to(len(C), 6):
            assert U.dim(nu) == oracles.kostant_count(C, nu), (name, nu)


def _draws(mods, rng, count, height):
    n = mods.datum.rank
    nus = degrees_up_to(n, height)
    for _ in range(count):
        lam = random_weight(rng, n)
        nu = nus[rng.randrange(len(nus))]
        yield lam, nu, random_element(mods.U, rng, nu)


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "K"])
def test_criterion_2_verma_relations(name):
    mods = mods_for(name)
    n = mods.datum.rank
    rng = random.Random(2)
    for lam, nu, vec in _draws(mods, rng, 20, 5):
        for i in range(n):
            for j in range(n):
                assert commutator_holds(mods, lam, vec, nu, i, j), (lam, nu, i, j)
                if i != j:
                    assert serre_operators_hold(mods, lam, vec, nu, i, j), (lam, nu, i, j)
    for lam, nu, vec in _draws(mods, rng, 20, 5):
        lam2 = random_weight(rng, n)
        for i in range(n):
            assert weight_shift_holds(mods, lam, lam2, vec, nu, i), (lam, lam2, nu, i)


@pytest.mark.parametrize("name,lam", SIX)
def test_criterion_3_quotients(name, lam):
    mods = mods_for(name)
    total = 0
    for nu in degrees_up_to(len(lam), 6):
        by_ideal = mods.v_lambda_dims_via_ideal(lam, nu)
        by_form = mods.v_dim(lam, nu)
        assert by_ideal == by_form, nu
        total += by_form
    assert total == oracles.weyl_dimension(mods.datum.cartan, lam)


F1 = FramedAlgebra(a1())
F2 = FramedAlgebra(a2())


def test_criterion_4_framed():
    for F in (F1, F2):
        for i in range(F.n):
            for d in range(4):
                assert F.higher_serre_vanishes(i, d)
    cases = [(F1, ((1,), (1,))), (F1, ((2,), (1,))), (F2, ((1, 0), (0, 1)))]
    for F, blocks in cases:
        desc = FramedDescriptor(blocks)
        for nu in degrees_up_to(F.n, 4):
            for i in range(F.n):
                assert F.e_stability(desc, nu, i), (blocks, nu, i)
        for row in F.compare_graded_dims(desc, 4):
            if row[0] == "K":
                assert row[3] == row[4], row
    rows = F1.compare_graded_dims(FramedDescriptor(((1,), (1,), (1,))), 4)
    prime = [r for r in rows if r[0] == "K'"]
    assert len(prime) == 5
    assert all(r[3] <= r[4] for r in prime)


@pytest.mark.parametrize("d", [(1,), (2,)])
def test_criterion_5_frobenius(d):
    res = F1.check_induced_hom(d, 4)
    assert res["well_defined"], res["witness"]
    assert res["kills_T"]


def _module_of(mods, factors):
    return TensorModule(mods, ModuleDescriptor(tuple(
        (Verma if f.kind == "inf" else Simple)(f.lam) for f in factors)))


def test_criterion_6_crystals():
    for name, lams in (("A1", [(1,), (2,), (3,)]), ("A2", [(1, 0), (1, 1)])):
        D = mods_for(name).datum
        cr = Crystals(D)
        zero = (0,) * D.rank
        descs = [CrystalDescriptor((Binf(zero),), 6)]
        descs += [CrystalDescriptor((B(l),), 6) for l in lams]
        descs += [CrystalDescriptor((B(lams[0]), Binf(lams[1])), 6),
                  CrystalDescriptor((B(lams[1]), B(lams[0])), 6)]
        for desc in descs:
            assert cr.check_axioms(cr.generate(desc)) == [], desc.label()
    for name, lam in SIX:
        D = mods_for(name).datum
        gen = Crystals(D).generate(CrystalDescriptor((B(lam),), 8))
        assert len(gen.nodes) == oracles.weyl_dimension(D.cartan, lam), (name, lam)
    for name, l1, l2 in (("A1", (1,), (2,)), ("A1", (2,), (1,)), ("A2", (1, 0), (0, 1)),
                         ("A2", (1, 1), (1, 0))):
        mods = mods_for(name)
        cr = Crystals(mods.datum)
        for factors in ((Binf(l1),), (B(l1), Binf(l2)), (B(l1), B(l2))):
            counts = cr.counts_by_degree(cr.generate(CrystalDescriptor(factors, 5)))
            T = _module_of(mods, factors)
            for nu in degrees_up_to(mods.datum.rank, 5):
                assert counts.get(nu, 0) == T.dim(nu), (name, factors, nu)


def test_criterion_7_component_counts():
    mods = mods_for("A1")
    cr = Crystals(mods.datum)
    pairs = [component_count(cr, mods, [(1,), (1,)], (n,)) for n in range(6)]
    assert pairs == [(v, v) for v in (1, 2, 2, 2, 2, 2)]
    mods = mods_for("A2")
    cr = Crystals(mods.datum)
    for nu in degrees_up_to(2, 4):
        a, b = component_count(cr, mods, [(1, 0), (0, 1)], nu)
        assert a == b, nu


def test_criterion_8_canonical():
    mods = mods_for("A1")
    can = Canonical(mods)
    sp = can.space((1,), (1,), (1,))
    got = {tuple(sorted((sp.key_label(k), str(c)) for k, c in enumerate(e.coords) if c))
           for e in sp.canonical_basis()}
    # F xi (x) xi and xi (x) F xi + v^-1 F xi (x) xi
    assert got == {(("F1 xi (x) xi", "1"),),
                   (("F1 xi (x) xi", "v^-1"), ("xi (x) F1 xi", "1"))}
    cr = Crystals(mods.datum)
    for lam2, lam1 in (((1,), (1,)), ((2,), (1,)), ((1,), (2,)), ((3,), (2,))):
        counts = cr.counts_by_degree(cr.generate(CrystalDescriptor((B(lam1), Binf(lam2)), 4)))
        vv = cr.counts_by_degree(cr.generate(CrystalDescriptor((B(lam1), B(lam2)), 4)))
        for n in range(5):
            sp = can.space(lam2, lam1, (n,))
            cb = sp.canonical_basis()
            for c in cb:
                assert all(verify_signed(sp, c.coords)), (lam2, lam1, n)
            assert almost_orthonormal(sp, cb) == []
            assert len(cb) == counts.get((n,), 0)
            images, target, tgt = can.localization(lam2, lam1, (n,))
            live = [r for r in images if r is not None]
            assert len(live) == tgt.dim == vv.get((n,), 0)
            assert sorted(map(str, live)) == sorted(map(str, target))


CONFIGS = {
    "a1": '[graph]\nvertices = ["1"]\n\n[task]\ndepth = 5\nweights = [{1 = 2}]\n'
          'blocks = [{1 = 1}, {1 = 1}]\n',
    "a2": '[graph]\nvertices = ["1", "2"]\nedges = [["1", "2"]]\n\n[task]\ndepth = 4\n'
          'weights = [{1 = 1}, {1 = 1, 2 = 1}]\nblocks = [{1 = 1}, {2 = 1}]\n',
}


def _verify(cfg, out, env, *extra):
    proc = subprocess.run([sys.executable, "-m", "qforge.cli", "verify", "--config", str(cfg),
                           "--out", str(out), *extra], capture_output=True, env=env)
    return proc.returncode, proc.stdout, (out / "verify.tsv").read_bytes()


@pytest.mark.parametrize("name", sorted(CONFIGS))
def test_criterion_9_determinism(name, tmp_path):
    import os
    cfg = tmp_path / f"{name}.toml"
    cfg.write_text(CONFIGS[name])
    env = dict(os.environ, QFORGE_CACHE_DIR=str(tmp_path / "cache"))
    cold = _verify(cfg, tmp_path / "cold", env)
    warm = _verify(cfg, tmp_path / "warm", env)
    again = _verify(cfg, tmp_path / "again", env)
    nocache = _verify(cfg, tmp_path / "nocache", env, "--no-cache")
    assert cold[0] == 0
    assert (tmp_path / "cache").exists()
    assert cold == warm == again == nocache
