import pytest

from rsfkit.errors import ArityMismatch, LayoutError, NotReadable, OutputMissing, TypeMismatch, ValueTypeMismatch
from rsfkit.host import BOOL, DUP, ID, NAT, SWAP, TT, UNIT, B, N, P, Prod
from rsfkit.memory import INPUT_FRESH, INTERNAL, OUTPUT_DONE, OUTPUT_FRESH, Cell
from rsfkit.molholes import (
    Arr,
    Comp,
    First,
    Get,
    Program,
    Ref,
    Set,
    chain,
    chain_right,
    delay_program,
    delay_term,
    infer_rsf,
    init_prog,
    iter_refs,
    naturals_program,
    pull,
    push,
    relay_program,
    run_prog,
    step_rsf,
)

R0, R1 = Ref(NAT, 0), Ref(NAT, 1)


def nats(*xs):
    return [[N(x)] for x in xs]


def test_naturals():
    assert run_prog(naturals_program(), [[]] * 10) == nats(*range(10))


def test_delay():
    assert run_prog(delay_program(), nats(5, 7, 9)) == nats(0, 5, 7)


def test_delay_other_initial_value():
    assert run_prog(delay_program(N(4)), nats(1, 2)) == nats(4, 1)


def test_relay():
    assert run_prog(relay_program(), nats(3, 1)) == nats(3, 1)


def test_delay_term_step():
    r = Ref(NAT, 0)
    sigma = {0: Cell(INTERNAL, NAT, N(1))}
    out, s2 = step_rsf(delay_term(r), N(8), sigma)
    assert out == N(1)
    assert s2[0].val == N(8)


def test_step_get_set():
    sigma = {0: Cell(INPUT_FRESH, NAT, N(2)), 1: Cell(OUTPUT_FRESH, NAT)}
    out, s2 = step_rsf(Comp(Get(R0), Set(R1)), TT, sigma)
    assert out == TT
    assert s2[1] == Cell(OUTPUT_DONE, NAT, N(2))
    with pytest.raises(NotReadable):
        step_rsf(Get(R0), TT, s2)


def test_step_first():
    sigma = {0: Cell(INTERNAL, NAT, N(2))}
    out, _ = step_rsf(First(Get(R0)), P(TT, B(True)), sigma)
    assert out == P(P(TT, N(2)), B(True))


def test_infer():
    assert infer_rsf(Get(R0), UNIT) == Prod(UNIT, NAT)
    assert infer_rsf(Comp(Get(R0), Set(R1)), UNIT) == UNIT
    with pytest.raises(TypeMismatch):
        infer_rsf(Set(R0), NAT)
    with pytest.raises(TypeMismatch):
        infer_rsf(Comp(Arr(DUP), Set(Ref(BOOL, 0))), NAT)


def test_chain_shapes():
    a, b, c = Arr(ID), Arr(DUP), Arr(SWAP)
    assert chain(a, b, c) == Comp(Comp(a, b), c)
    assert chain_right(a, b, c) == Comp(a, Comp(b, c))
    assert [n.r.id for n in iter_refs(chain(Get(R1), First(Set(R0))))] == [1, 0]


def test_program_layout():
    p = delay_program()
    assert (p.k_in, p.k, p.k_out) == (1, 1, 1)
    assert list(p.input_ids()) == [0]
    assert list(p.internal_ids()) == [1]
    assert list(p.output_ids()) == [2]
    assert p.ref(2) == Ref(NAT, 2)


def test_layout_errors():
    with pytest.raises(LayoutError):
        Program((), (), (NAT,), Comp(Arr(ID), Get(Ref(NAT, 5))))
    with pytest.raises(LayoutError):
        Program((BOOL,), (), (), Get(Ref(NAT, 0)))
    with pytest.raises(LayoutError):
        Program((), ((B(True), NAT),), (), Arr(ID))


def test_init_pull_push():
    p = delay_program()
    sigma = init_prog(p)
    assert sigma == {1: Cell(INTERNAL, NAT, N(0))}
    sigma = pull(p, sigma, [N(3)])
    assert sigma[0] == Cell(INPUT_FRESH, NAT, N(3))
    assert sigma[2] == Cell(OUTPUT_FRESH, NAT)
    with pytest.raises(OutputMissing):
        push(p, sigma)
    with pytest.raises(ArityMismatch):
        pull(p, sigma, [])
    with pytest.raises(ValueTypeMismatch):
        pull(p, sigma, [TT])
