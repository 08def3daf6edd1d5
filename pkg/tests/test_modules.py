import random

import pytest
from hypothesis import given, strategies as st

from qforge.exactarith import LaurentPoly, RatFun, ONE
from qforge.freealg import FreeElement
from qforge.rootdata import degrees_up_to
from qforge.modules import (
    Modules, ModuleDescriptor, ModuleError, ModuleVector, TensorModule, Verma, Simple, FAULTS,
)
from qforge.harness import commutator_holds, serre_operators_hold, weight_shift_holds, random_element
from qforge import oracles
from conftest import mods_for

seeds = st.integers(0, 10 ** 6)


def _draw(rng, mods, height):
    n = mods.datum.rank
    lam = tuple(rng.randint(-2, 3) for _ in range(n))
    nus = degrees_up_to(n, height)
    nu = nus[rng.randrange(len(nus))]
    return lam, nu, random_element(mods.U, rng, nu)


@pytest.mark.parametrize("name", ["A1", "A2", "K"])
@given(seed=seeds)
def test_commutator_relation(name, seed):
    mods = mods_for(name)
    lam, nu, vec = _draw(random.Random(seed), mods, 4)
    n = mods.datum.rank
    assert all(commutator_holds(mods, lam, vec, nu, i, j) for i in range(n) for j in range(n))


@pytest.mark.parametrize("name", ["A2", "K"])
@given(seed=seeds)
def test_serre_operators(name, seed):
    mods = mods_for(name)
    lam, nu, vec = _draw(random.Random(seed), mods, 3)
    n = mods.datum.rank
    assert all(serre_operators_hold(mods, lam, vec, nu, i, j)
               for i in range(n) for j in range(n) if i != j)


@pytest.mark.parametrize("name", ["A1", "A2"])
@given(seed=seeds)
def test_weight_shift_identity(name, seed):
    mods = mods_for(name)
    rng = random.Random(seed)
    lam, nu, vec = _draw(rng, mods, 4)
    lam2 = tuple(rng.randint(-2, 3) for _ in lam)
    assert all(weight_shift_holds(mods, lam, lam2, vec, nu, i) for i in range(len(lam)))


def test_commutator_detects_fault():
    mods = mods_for("A1")
    vec = mods.alg.phi_word((0, 0))
    FAULTS.add("e-action")
    try:
        with pytest.raises(ModuleError):
            commutator_holds(mods, (1,), vec, (2,), 0, 0)
    finally:
        FAULTS.discard("e-action")
    assert commutator_holds(mods, (1,), vec, (2,), 0, 0)


@given(seed=seeds)
def test_word_level_E_matches_pairing_action(seed):
    mods = mods_for("A2")
    rng = random.Random(seed)
    lam = (rng.randint(-1, 3), rng.randint(-1, 3))
    nu = (rng.randint(0, 2), rng.randint(0, 2))
    x = FreeElement(nu, {w: LaurentPoly.monomial(rng.randint(-2, 2)) for w in mods.alg.words(nu)})
    for i in range(2):
        if nu[i]:
            assert mods.alg.phi(mods.word_E(lam, i, x)) == mods.verma_E(lam, i, mods.alg.phi(x), nu)


@pytest.mark.parametrize("name,lam", [("A1", (2,)), ("A2", (1, 0)), ("A2", (1, 1))])
def test_t_lambda_E_stable(name, lam):
    mods = mods_for(name)
    n = len(lam)
    for nu in degrees_up_to(n, 4):
        vecs = mods.t_lambda_vectors(lam, nu)
        for i in range(n):
            if not nu[i]:
                continue
            low = list(nu)
            low[i] -= 1
            low = tuple(low)
            base = mods.t_lambda_vectors(lam, low)
            for v in vecs:
                img = mods.verma_E(lam, i, v, nu)
                if img:
                    assert base and mods.U.in_span(base, img, low)


@given(seed=seeds)
def test_contravariant_adjunction(seed):
    # (E_i x, y) = (x, v K_i F_i y)
    mods = mods_for("A2")
    rng = random.Random(seed)
    lam = (rng.randint(0, 2), rng.randint(0, 2))
    i = rng.randint(0, 1)
    nu = [rng.randint(0, 2), rng.randint(0, 2)]
    nu[i] = max(nu[i], 1)
    nu = tuple(nu)
    low = list(nu)
    low[i] -= 1
    low = tuple(low)
    x = FreeElement(nu, {w: LaurentPoly.monomial(rng.randint(-2, 2), rng.randint(1, 3))
                         for w in mods.alg.words(nu)})
    for y_word in mods.alg.words(low):
        y = mods.alg.word_element(y_word)
        lhs = mods.contravariant_form(lam, mods.word_E(lam, i, x), y)
        k = lam[i] - mods.pair(i, nu)
        rhs = mods.contravariant_form(lam, x, mods.alg.word_element((i,) + y_word))
        assert lhs == rhs * RatFun(LaurentPoly.monomial(1 + k))


def _glue(a, b):
    terms = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            terms[ka + kb] = terms.get(ka + kb, 0) + va * vb
    return ModuleVector({k: v for k, v in terms.items() if v}, a.den * b.den)


@given(seed=seeds)
def test_coassociativity(seed):
    mods = mods_for("A2")
    rng = random.Random(seed)
    factors = (Verma((1, 0)), Simple((1, 1)), Verma((0, 2)))
    T = TensorModule(mods, ModuleDescriptor(factors))
    T1 = TensorModule(mods, ModuleDescriptor(factors[:1]))
    T23 = TensorModule(mods, ModuleDescriptor(factors[1:]))
    words = [tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 2))) for _ in range(3)]
    x = T1.pure(words[:1])
    yz = T23.pure(words[1:])
    full = T.pure(words)
    for i in range(2):
        # right-nested: F = F (x) K^-1 + 1 (x) F and E = E (x) 1 + K (x) E
        f_right = _glue(T1.act("F", i, x), T23.act("Kinv", i, yz)) + _glue(x, T23.act("F", i, yz))
        e_right = _glue(T1.act("E", i, x), yz) + _glue(T1.act("K", i, x), T23.act("E", i, yz))
        assert T.act("F", i, full) == f_right
        assert T.act("E", i, full) == e_right


@given(seed=seeds)
def test_tensor_commutator(seed):
    mods = mods_for("A2")
    rng = random.Random(seed)
    T = TensorModule(mods, ModuleDescriptor((Simple((1, 0)), Verma((0, 1)))))
    words = [tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 2))) for _ in range(2)]
    x = T.pure(words)
    for i in range(2):
        for j in range(2):
            lhs = T.act("E", i, T.act("F", j, x)) - T.act("F", j, T.act("E", i, x))
            if i == j:
                rhs = T.act("K", i, x) - T.act("Kinv", i, x)
                rhs = ModuleVector(rhs.terms, rhs.den * (LaurentPoly({1: 1, -1: -1})))
                assert lhs == rhs
            else:
                assert lhs.is_zero()


SIMPLES = [("A1", (1,)), ("A1", (2,)), ("A1", (3,)), ("A2", (1, 0)), ("A2", (1, 1)), ("A3", (1, 0, 0))]


@pytest.mark.parametrize("name,lam", SIMPLES)
def test_simple_dims(name, lam):
    mods = mods_for(name)
    n = len(lam)
    total = 0
    for nu in degrees_up_to(n, 6):
        d = mods.v_lambda_dims_via_form(lam, nu)
        assert d == mods.v_lambda_dims_via_ideal(lam, nu)
        total += d
    assert total == oracles.weyl_dimension(mods.datum.cartan, lam)


def test_weyl_oracle_values():
    from conftest import a1, a2, a3
    assert [oracles.weyl_dimension(a1().cartan, (k,)) for k in (1, 2, 3)] == [2, 3, 4]
    assert oracles.weyl_dimension(a2().cartan, (1, 0)) == 3
    assert oracles.weyl_dimension(a2().cartan, (1, 1)) == 8
    assert oracles.weyl_dimension(a3().cartan, (1, 0, 0)) == 4


def test_sl2_simple_dims():
    mods = mods_for("A1")
    for lam in range(5):
        assert [mods.v_dim((lam,), (k,)) for k in range(7)] == oracles.sl2_weight_dims(lam, 6)


def test_nondominant_rejected():
    with pytest.raises(ModuleError):
        mods_for("A2").v_lambda_dims_via_form((1, -1), (1, 0))


def test_tensor_dims():
    mods = mods_for("A1")
    T = TensorModule(mods, ModuleDescriptor((Verma((1,)), Simple((1,)))))
    # M_1 (x) V_1 has graded dimension 1, 2, 2, 2, ...
    assert [T.dim((k,)) for k in range(5)] == [1, 2, 2, 2, 2]
    for k in range(4):
        assert T.rank(T.spanning_vectors((k,)), (k,)) == T.dim((k,))
