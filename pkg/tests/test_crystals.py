import json

import pytest
from hypothesis import given, strategies as st

from qforge.rootdata import degrees_up_to
from qforge.crystals import (
    Crystals, CrystalDescriptor, CrystalError, CrystalFactor, B, Binf, combine, component_count,
)
from qforge.modules import ModuleDescriptor, TensorModule, Verma, Simple
from qforge import oracles
from conftest import a1, a2, mods_for

C1 = Crystals(a1())
C2 = Crystals(a2())


def test_sl2_strings():
    desc = CrystalDescriptor((Binf((0,)),), 4)
    node = ((),)
    for n in range(1, 5):
        node = C1.f(desc, node, 0)
        assert node == ((n,),)
    assert C1.e(desc, ((),), 0) is None


def test_finite_factor_needs_dominant():
    with pytest.raises(CrystalError):
        B((1, -1))


def test_combine_rule():
    # (eps, phi, wt_i) of b1 (x) b2
    assert combine((0, 1, 1), (0, 1, 1)) == (0, 2, 2)
    assert combine((1, 0, -1), (0, 1, 1)) == (1, 1, 0)


def test_sl2_tensor_of_two_doublets():
    desc = CrystalDescriptor((B((1,)), B((1,))), 2)
    hi = ((), ())
    step = C1.f(desc, hi, 0)
    assert step == ((1,), ())
    assert C1.f(desc, step, 0) == ((1,), (1,))
    assert C1.f(desc, ((1,), (1,)), 0) is None
    # the weight 0 vector () (x) (1) is a highest weight of its own component
    assert C1.e(desc, ((), (1,)), 0) is None
    assert C1.f(desc, ((), (1,)), 0) is None


@pytest.mark.parametrize("cr,desc", [
    (C1, CrystalDescriptor((Binf((0,)),), 6)),
    (C1, CrystalDescriptor((B((3,)),), 6)),
    (C1, CrystalDescriptor((B((1,)), Binf((2,))), 6)),
    (C1, CrystalDescriptor((B((2,)), B((1,))), 6)),
    (C2, CrystalDescriptor((Binf((0, 0)),), 6)),
    (C2, CrystalDescriptor((B((1, 1)),), 6)),
    (C2, CrystalDescriptor((B((1, 0)), Binf((0, 1))), 5)),
    (C2, CrystalDescriptor((B((1, 0)), B((1, 1))), 5)),
])
def test_axioms(cr, desc):
    gen = cr.generate(desc)
    assert cr.check_axioms(gen) == []


def test_e_f_duality_on_edges():
    desc = CrystalDescriptor((B((1, 1)), Binf((1, 0))), 4)
    gen = C2.generate(desc)
    for src, i, dst in gen.edges:
        assert C2.e(desc, dst, i) == src


@pytest.mark.parametrize("depth", [4, 6])
def test_binf_counts_kostant(depth):
    gen = C2.generate(CrystalDescriptor((Binf((0, 0)),), depth))
    counts = C2.counts_by_degree(gen)
    for nu in degrees_up_to(2, depth):
        assert counts.get(nu, 0) == oracles.kostant_count(a2().cartan, nu)


@pytest.mark.parametrize("lam,size", [((1, 0), 3), ((1, 1), 8), ((2, 1), 15), ((0, 2), 6)])
def test_finite_sizes_weyl(lam, size):
    assert oracles.weyl_dimension(a2().cartan, lam) == size
    gen = C2.generate(CrystalDescriptor((B(lam),), 8))
    assert len(gen.nodes) == size


@given(st.lists(st.integers(0, 4), max_size=6).map(tuple))
def test_window_independence(a):
    # every tuple of nonnegative exponents is a node of the big tensor; window size must not matter
    assert C2.window_independent(a)


@pytest.mark.parametrize("factors", [
    (Binf((1, 0)),), (B((1, 0)), Binf((0, 1))), (B((1, 1)), B((1, 0))), (B((0, 1)), Binf((1, 1))),
])
def test_characters(factors):
    mods = mods_for("A2")
    gen = C2.generate(CrystalDescriptor(factors, 5))
    counts = C2.counts_by_degree(gen)
    T = TensorModule(mods, ModuleDescriptor(tuple((Verma if f.kind == "inf" else Simple)(f.lam)
                                                  for f in factors)))
    for nu in degrees_up_to(2, 5):
        assert counts.get(nu, 0) == T.dim(nu)


def test_localization_morphism():
    desc = CrystalDescriptor((B((1, 0)), Binf((1, 1))), 4)
    gen = C2.generate(desc)
    target, psi = C2.localization_morphism(desc)
    assert C2.check_morphism(gen, target, psi) == []
    images = {psi(n) for n in gen.nodes} - {None}
    assert len(images) == len(C2.generate(target).nodes)


def test_component_count_sl2():
    mods = mods_for("A1")
    pairs = [component_count(C1, mods, [(1,), (1,)], (n,)) for n in range(6)]
    assert [a for a, _ in pairs] == [1, 2, 2, 2, 2, 2]
    assert all(a == b for a, b in pairs)


def test_exports_deterministic():
    desc = CrystalDescriptor((B((1,)), Binf((1,))), 2)
    one = C1.generate(desc)
    two = Crystals(a1()).generate(desc)
    assert one.export_dot() == two.export_dot()
    assert one.export_json() == two.export_json()
    doc = json.loads(one.export_json())
    assert doc["depth"] == 2 and sum(len(g["nodes"]) for g in doc["weights"]) == len(one.nodes)
    assert one.export_dot().startswith("digraph crystal {")
    assert 'label="f1"' in one.export_dot()
