import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsfkit import gen
from rsfkit.errors import NotReadableAbstract, NotWritableAbstract
from rsfkit.host import DUP, FST, ID, NAT, SND, TT, Const, N, Pairing
from rsfkit.memory import INPUT_FRESH, INPUT_SPENT, INTERNAL, OUTPUT_FRESH, cell_ok
from rsfkit.molholes import (
    Arr,
    Get,
    Program,
    Ref,
    Set,
    chain,
    delay_program,
    init_prog,
    naturals_program,
    pull,
    push,
    relay_program,
    step_rsf,
)
from rsfkit.typecheck import (
    CLAUSE_ACCESS,
    CLAUSE_INPUTS,
    CLAUSE_OUTPUTS,
    CLAUSE_VALUE_TYPE,
    abs_init,
    abs_read,
    abs_step,
    abs_write,
    models,
    well_typed,
)

seeds = st.integers(0, 2**32 - 1)
IN, OUT = Ref(NAT, 0), Ref(NAT, 1)


def test_accepts_examples():
    for p in (naturals_program(), delay_program(), relay_program()):
        assert well_typed(p).ok, well_typed(p).render()


def test_double_read_of_input():
    term = chain(Get(IN), Get(IN), Arr(FST), Set(OUT))
    report = well_typed(Program((NAT,), (), (NAT,), term))
    assert report.clause == CLAUSE_ACCESS
    assert "resource 0 is not readable" in report.render()


def test_unwritten_output():
    term = chain(Get(IN), Arr(Const(TT)))
    report = well_typed(Program((NAT,), (), (NAT,), term))
    assert report.clause == CLAUSE_OUTPUTS
    assert "output 1 is never written" in report.render()


def test_double_write_of_output():
    term = chain(Get(IN), Arr(Pairing(Pairing(Const(TT), SND), SND)), Set(OUT), Set(OUT))
    report = well_typed(Program((NAT,), (), (NAT,), term))
    assert report.clause == CLAUSE_ACCESS
    assert "resource 1 is not writable" in report.render()


def test_unread_input():
    report = well_typed(Program((NAT,), (), (), Arr(ID)))
    assert report.clause == CLAUSE_INPUTS


def test_value_type_error():
    report = well_typed(Program((), (), (), Arr(DUP)))
    assert report.clause == CLAUSE_VALUE_TYPE
    assert not report


def test_abstract_access():
    amem = {0: (INPUT_FRESH, NAT)}
    assert abs_read(IN, amem) == {0: (INPUT_SPENT, NAT)}
    with pytest.raises(NotReadableAbstract):
        abs_read(IN, abs_read(IN, amem))
    with pytest.raises(NotWritableAbstract):
        abs_write(IN, amem)
    assert abs_write(OUT, {1: (OUTPUT_FRESH, NAT)})[1][0].writable is False
    assert abs_read(IN, {0: (INTERNAL, NAT)}) == {0: (INTERNAL, NAT)}


def test_abs_init_layout():
    assert abs_init(delay_program()) == {
        0: (INPUT_FRESH, NAT),
        1: (INTERNAL, NAT),
        2: (OUTPUT_FRESH, NAT),
    }


def test_models():
    p = delay_program()
    sigma = pull(p, init_prog(p), [N(1)])
    assert models(sigma, abs_init(p))
    assert not models(init_prog(p), abs_init(p))


@settings(max_examples=100)
@given(seeds)
def test_abstract_step_tracks_concrete(seed):
    # a run that the abstract interpreter accepts ends in a memory it predicts
    rng = random.Random(seed)
    p = gen.gen_program(rng)
    amem = abs_init(p)
    final = abs_step(p.term, amem)
    sigma = gen.random_memory(rng, amem)
    _, s2 = step_rsf(p.term, TT, sigma)
    assert models(s2, final)
    assert all(cell_ok(c) for c in s2.values())


@settings(max_examples=200)
@given(seeds)
def test_well_typed_programs_run(seed):
    rng = random.Random(seed)
    p = gen.gen_program(rng)
    assert well_typed(p).ok
    sigma = init_prog(p)
    for row in gen.random_rows(rng, p, 10):
        _, sigma = step_rsf(p.term, TT, pull(p, sigma, row))
        assert len(push(p, sigma)) == p.k_out
