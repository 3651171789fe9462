import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsfkit import gen
from rsfkit.errors import ShapeMismatch, TypeMismatch
from rsfkit.host import (
    ASSOC,
    BOOL,
    DUP,
    FST,
    ID,
    NAT,
    PERM,
    SDUP,
    SND,
    SWAP,
    TT,
    UNASSOC,
    UNIT,
    B,
    Compose,
    Const,
    N,
    Opaque,
    P,
    Pairing,
    Prim,
    Prod,
    ProdF,
    contains_opaque,
    eval_fn,
    first_n,
    fst_n,
    has_type,
    infer_fn,
    then,
    type_of,
)

seeds = st.integers(0, 2**32 - 1)


def test_swap():
    assert eval_fn(SWAP, P(N(1), N(2))) == P(N(2), N(1))


def test_perm():
    assert eval_fn(PERM, P(P(N(1), N(2)), N(3))) == P(P(N(1), N(3)), N(2))


def test_fst_after_dup_is_identity():
    assert eval_fn(Compose(FST, DUP), N(5)) == N(5)


@pytest.mark.parametrize(
    "f, v, out",
    [
        (SDUP, P(N(1), N(2)), P(P(N(1), N(2)), N(2))),
        (ASSOC, P(P(N(1), N(2)), N(3)), P(N(1), P(N(2), N(3)))),
        (UNASSOC, P(N(1), P(N(2), N(3))), P(P(N(1), N(2)), N(3))),
        (Prim("add"), P(N(2), N(3)), N(5)),
        (Prim("dec"), N(0), N(0)),
        (Prim("isZero"), N(0), B(True)),
        (ProdF(Prim("inc"), ID), P(N(1), TT), P(N(2), TT)),
        (Pairing(ID, Const(TT)), N(4), P(N(4), TT)),
    ],
)
def test_eval_table(f, v, out):
    assert eval_fn(f, v) == out


def test_fst_on_non_pair():
    with pytest.raises(ShapeMismatch):
        eval_fn(FST, N(1))


def test_infer_examples():
    assert infer_fn(DUP, NAT) == Prod(NAT, NAT)
    assert infer_fn(ASSOC, Prod(Prod(UNIT, BOOL), NAT)) == Prod(UNIT, Prod(BOOL, NAT))
    with pytest.raises(TypeMismatch):
        infer_fn(FST, NAT)
    with pytest.raises(TypeMismatch):
        infer_fn(Prim("add"), NAT)


def test_value_validation():
    with pytest.raises(TypeError):
        N(-1)
    with pytest.raises(TypeError):
        N(True)
    with pytest.raises(TypeError):
        B(1)


def test_type_of_pair():
    assert type_of(P(N(1), P(TT, B(False)))) == Prod(NAT, Prod(UNIT, BOOL))


def test_nat_is_unbounded():
    big = N(2**80)
    assert eval_fn(Prim("inc"), big) == N(2**80 + 1)


def test_opaque():
    f = Opaque("double", lambda v: N(2 * v.value), NAT, NAT)
    assert eval_fn(f, N(4)) == N(8)
    assert infer_fn(f, NAT) == NAT
    assert contains_opaque(Compose(ID, f))
    assert not contains_opaque(Compose(ID, DUP))


def test_helpers():
    assert then() == ID
    assert then(ID, FST, ID) == FST
    assert eval_fn(then(FST, SND), P(P(N(1), N(2)), N(3))) == N(2)
    assert eval_fn(fst_n(2), P(P(N(1), N(2)), N(3))) == N(1)
    assert eval_fn(first_n(1, SWAP), P(P(N(1), N(2)), N(3))) == P(P(N(2), N(1)), N(3))


def test_str():
    assert str(P(N(1), B(True))) == "(1,true)"
    assert str(Prod(NAT, UNIT)) == "(prod nat unit)"


@settings(max_examples=200)
@given(seeds)
def test_type_preservation(seed):
    rng = random.Random(seed)
    ty = gen.random_type(rng)
    f, cod = gen.gen_fn(rng, ty, 3)
    assert infer_fn(f, ty) == cod
    v = gen.random_value(rng, ty)
    assert has_type(eval_fn(f, v), cod)


@settings(max_examples=100)
@given(seeds)
def test_category_identities(seed):
    rng = random.Random(seed)
    ty = gen.random_type(rng)
    f, mid = gen.gen_fn(rng, ty)
    g, mid2 = gen.gen_fn(rng, mid)
    h, _ = gen.gen_fn(rng, mid2)
    v = gen.random_value(rng, ty)
    assert eval_fn(Compose(f, ID), v) == eval_fn(f, v)
    assert eval_fn(Compose(ID, f), v) == eval_fn(f, v)
    assert eval_fn(Compose(Compose(h, g), f), v) == eval_fn(Compose(h, Compose(g, f)), v)


@settings(max_examples=100)
@given(seeds)
def test_projection_laws(seed):
    rng = random.Random(seed)
    ty = gen.random_type(rng)
    f, _ = gen.gen_fn(rng, ty)
    g, _ = gen.gen_fn(rng, ty)
    v = gen.random_value(rng, ty)
    assert eval_fn(Compose(FST, Pairing(f, g)), v) == eval_fn(f, v)
    assert eval_fn(Compose(SND, Pairing(f, g)), v) == eval_fn(g, v)


@settings(max_examples=100)
@given(seeds)
def test_evaluation_is_deterministic(seed):
    rng = random.Random(seed)
    ty = gen.random_type(rng)
    f, _ = gen.gen_fn(rng, ty, 3)
    v = gen.random_value(rng, ty)
    assert eval_fn(f, v) == eval_fn(f, v)


def _stepwise(f, v):
    # reference evaluator: compose parts run one at a time
    if type(f) is Compose:
        return _stepwise(f.after, _stepwise(f.before, v))
    return eval_fn(f, v)


def test_fused_chains_match_stepwise():
    inc, add = Prim("inc"), Prim("add")
    f1 = Pairing(add, Compose(inc, FST))  # (n, c) -> (n + c, n + 1)
    f2 = SWAP
    chains = [
        then(UNASSOC, ProdF(f1, ID), PERM, ProdF(f2, ID), PERM, ASSOC),
        then(PERM, ProdF(f1, ID), PERM),
        then(UNASSOC, ProdF(SWAP, ID), ASSOC),
    ]
    inputs = [
        P(N(2), P(N(3), N(4))),
        P(P(N(2), N(9)), N(3)),
        P(N(1), P(N(5), TT)),
    ]
    for f, v in zip(chains, inputs):
        assert eval_fn(f, v) == _stepwise(f, v)
