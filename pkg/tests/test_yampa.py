import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsfkit import gen
from rsfkit.errors import TypeMismatch
from rsfkit.host import DUP, FST, ID, NAT, SWAP, TT, Compose, Const, N, Pairing, Prim, Prod, SND, has_type
from rsfkit.yampa import (
    Arr,
    Comp,
    First,
    Loop,
    bisim_sf,
    bisim_witness,
    broken_comp,
    erase_states,
    infer_sf,
    normalize_sf,
    run_sf,
    step_sf,
)

seeds = st.integers(0, 2**32 - 1)
INC = Prim("inc")


def test_infer_examples():
    assert infer_sf(Arr(INC), NAT) == NAT
    assert infer_sf(Loop(N(0), Arr(SWAP)), NAT) == NAT
    with pytest.raises(TypeMismatch) as e:
        infer_sf(Comp(Arr(DUP), Arr(INC)), NAT)
    assert e.value.path == (1,)


def test_step_loop_swap():
    assert step_sf(Loop(N(9), Arr(SWAP)), N(3)) == (N(9), Loop(N(3), Arr(SWAP)))


def test_step_arr():
    assert step_sf(Arr(INC), N(4)) == (N(5), Arr(INC))


def test_step_comp_keeps_term():
    t = Comp(Arr(INC), Arr(INC))
    out, t2 = step_sf(t, N(0))
    assert out == N(2)
    assert t2 is t


def test_run_examples():
    assert run_sf(Arr(INC), [N(1), N(2), N(3)]) == [N(2), N(3), N(4)]
    assert run_sf(Loop(N(0), Arr(SWAP)), [N(5), N(7), N(9)]) == [N(0), N(5), N(7)]
    assert run_sf(Loop(N(0), Arr(SWAP)), []) == []


def test_normalize_arr():
    assert normalize_sf(Arr(INC)) == (TT, Pairing(Compose(INC, FST), Const(TT)))


def test_normalize_loop_swap():
    t = Loop(N(0), Arr(SWAP))
    v, f = normalize_sf(t, NAT)
    assert bisim_sf(Loop(v, Arr(f)), t, NAT, 100, 50)


def test_normalize_first():
    t = First(Arr(INC))
    v, f = normalize_sf(t)
    assert bisim_sf(Loop(v, Arr(f)), t, Prod(NAT, NAT), 100, 50)


def test_normalize_rejects_ill_typed():
    with pytest.raises(TypeMismatch):
        normalize_sf(Comp(Arr(DUP), Arr(INC)), NAT)


def test_bisim_examples():
    t = Loop(N(0), Arr(SWAP))
    assert bisim_sf(t, t, NAT, 20, 5)
    assert bisim_sf(Comp(Arr(ID), t), t, NAT, 20, 5)
    assert not bisim_sf(Arr(INC), Arr(ID), NAT, 1, 1)
    assert bisim_witness(Arr(INC), Arr(ID), NAT, 1, 1) is not None
    with pytest.raises(TypeMismatch):
        bisim_sf(Arr(INC), Arr(DUP), Prod(NAT, NAT), 1, 1)


def test_broken_comp_is_scoped():
    counter = Loop(N(0), Arr(Pairing(SND, Compose(INC, SND))))
    t = Comp(counter, Arr(ID))
    with broken_comp():
        assert run_sf(t, [TT, TT, TT]) == [N(0), N(2), N(4)]
    assert run_sf(t, [TT, TT, TT]) == [N(0), N(1), N(2)]


@settings(max_examples=100)
@given(seeds)
def test_shape_stability(seed):
    rng = random.Random(seed)
    ty = gen.random_type(rng)
    t, _ = gen.gen_sf(rng, ty)
    for _ in range(5):
        _, t2 = step_sf(t, gen.random_value(rng, ty))
        assert erase_states(t2) == erase_states(t)
        t = t2


@settings(max_examples=100)
@given(seeds)
def test_output_type(seed):
    rng = random.Random(seed)
    ty = gen.random_type(rng)
    t, out = gen.gen_sf(rng, ty)
    assert infer_sf(t, ty) == out
    for b in run_sf(t, [gen.random_value(rng, ty) for _ in range(5)]):
        assert has_type(b, out)


@settings(max_examples=100)
@given(seeds)
def test_normal_form_bisimilar(seed):
    rng = random.Random(seed)
    ty = gen.random_type(rng)
    t, _ = gen.gen_sf(rng, ty, 5)
    v, f = normalize_sf(t, ty)
    assert bisim_sf(t, Loop(v, Arr(f)), ty, 50, 10, rng)


@settings(max_examples=50)
@given(seeds)
def test_run_is_deterministic(seed):
    rng = random.Random(seed)
    ty = gen.random_type(rng)
    t, _ = gen.gen_sf(rng, ty)
    xs = [gen.random_value(rng, ty) for _ in range(10)]
    assert run_sf(t, xs) == run_sf(t, xs)
