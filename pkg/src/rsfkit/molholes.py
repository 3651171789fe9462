"""Molholes: resource-effectful stream transformers and whole-program semantics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import host
from .errors import (
    ArityMismatch,
    LayoutError,
    OutputMissing,
    ShapeMismatch,
    TypeMismatch,
    ValueTypeMismatch,
)
from .host import ID, NAT, SND, TT, Compose, Const, Fn, P, Pairing, Prim, Prod, Ty, Val
from .memory import (
    INPUT_FRESH,
    INTERNAL,
    OUTPUT_DONE,
    OUTPUT_FRESH,
    Cell,
    Memory,
    read_mem,
    write_mem,
)


@dataclass(frozen=True, slots=True)
class Ref:
    ty: Ty
    id: int

    def __str__(self):
        return f"{self.ty}@{self.id}"


class RSFTerm:
    __slots__ = ()


@dataclass(frozen=True)
class Arr(RSFTerm):
    f: Fn


@dataclass(frozen=True)
class First(RSFTerm):
    inner: RSFTerm


@dataclass(frozen=True)
class Comp(RSFTerm):
    first: RSFTerm
    second: RSFTerm


@dataclass(frozen=True)
class Get(RSFTerm):
    r: Ref


@dataclass(frozen=True)
class Set(RSFTerm):
    r: Ref


def chain(*terms: RSFTerm) -> RSFTerm:
    """``t0 >>> t1 >>> ...`` associated to the left."""
    out = terms[0]
    for t in terms[1:]:
        out = Comp(out, t)
    return out


def chain_right(*terms: RSFTerm) -> RSFTerm:
    """``t0 >>> (t1 >>> (...))``."""
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Comp(t, out)
    return out


def iter_refs(t: RSFTerm):
    """Every Get/Set node of ``t`` in execution order."""
    if isinstance(t, (Get, Set)):
        yield t
    elif isinstance(t, First):
        yield from iter_refs(t.inner)
    elif isinstance(t, Comp):
        yield from iter_refs(t.first)
        yield from iter_refs(t.second)


@dataclass(frozen=True)
class Program:
    """Resource ids are laid out inputs first, then internals, then outputs."""

    inputs: tuple[Ty, ...]
    internals: tuple[tuple[Val, Ty], ...]
    outputs: tuple[Ty, ...]
    term: RSFTerm

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "internals", tuple((v, t) for v, t in self.internals))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        for n, (v, t) in enumerate(self.internals):
            if not host.has_type(v, t):
                raise LayoutError(f"internal {n}: initial value {v} is not of type {t}")
        layout = self.layout()
        for node in iter_refs(self.term):
            r = node.r
            if not 0 <= r.id < len(layout):
                raise LayoutError(f"resource {r.id} out of range (0..{len(layout) - 1})")
            if layout[r.id] != r.ty:
                raise LayoutError(
                    f"resource {r.id} used at type {r.ty}, declared {layout[r.id]}"
                )

    @property
    def k_in(self) -> int:
        return len(self.inputs)

    @property
    def k(self) -> int:
        return len(self.internals)

    @property
    def k_out(self) -> int:
        return len(self.outputs)

    def layout(self) -> list[Ty]:
        return list(self.inputs) + [t for _, t in self.internals] + list(self.outputs)

    def ref(self, rid: int) -> Ref:
        return Ref(self.layout()[rid], rid)

    def input_ids(self) -> range:
        return range(0, self.k_in)

    def internal_ids(self) -> range:
        return range(self.k_in, self.k_in + self.k)

    def output_ids(self) -> range:
        return range(self.k_in + self.k, self.k_in + self.k + self.k_out)


def infer_rsf(t: RSFTerm, ty: Ty, path=()) -> Ty:
    if isinstance(t, Arr):
        try:
            return host.infer_fn(t.f, ty)
        except TypeMismatch as e:
            raise TypeMismatch(str(e).rsplit(" at ", 1)[0], path) from None
    if isinstance(t, Comp):
        return infer_rsf(t.second, infer_rsf(t.first, ty, path + (0,)), path + (1,))
    if isinstance(t, First):
        if not isinstance(ty, Prod):
            raise TypeMismatch(f"first expects a product input, got {ty}", path)
        return Prod(infer_rsf(t.inner, ty.left, path + (0,)), ty.right)
    if isinstance(t, Get):
        return Prod(ty, t.r.ty)
    if isinstance(t, Set):
        if not isinstance(ty, Prod) or ty.right != t.r.ty:
            raise TypeMismatch(f"set {t.r.id} expects (prod _ {t.r.ty}), got {ty}", path)
        return ty.left
    raise TypeError(f"not a Molholes term: {t!r}")


def step_rsf(t: RSFTerm, a: Val, sigma: Memory) -> tuple[Val, Memory]:
    if isinstance(t, Arr):
        return host.eval_fn(t.f, a), sigma
    if isinstance(t, Comp):
        b, sigma = step_rsf(t.first, a, sigma)
        return step_rsf(t.second, b, sigma)
    if isinstance(t, First):
        if type(a) is not P:
            raise ShapeMismatch(f"first expects a pair, got {a}")
        y, sigma = step_rsf(t.inner, a.fst, sigma)
        return P(y, a.snd), sigma
    if isinstance(t, Get):
        v, sigma = read_mem(t.r, sigma)
        return P(a, v), sigma
    if isinstance(t, Set):
        if type(a) is not P:
            raise ShapeMismatch(f"set expects a pair, got {a}")
        return a.fst, write_mem(t.r, sigma, a.snd)
    raise TypeError(f"not a Molholes term: {t!r}")


def init_prog(p: Program) -> Memory:
    return {
        p.k_in + n: Cell(INTERNAL, t, v) for n, (v, t) in enumerate(p.internals)
    }


def pull(p: Program, sigma: Memory, row: Sequence[Val]) -> Memory:
    if len(row) != p.k_in:
        raise ArityMismatch(f"expected {p.k_in} input values, got {len(row)}")
    out = dict(sigma)
    for n, (v, t) in enumerate(zip(row, p.inputs)):
        if not host.has_type(v, t):
            raise ValueTypeMismatch(f"input {n}: {v} is not of type {t}")
        out[n] = Cell(INPUT_FRESH, t, v)
    for n, t in zip(p.output_ids(), p.outputs):
        out[n] = Cell(OUTPUT_FRESH, t, None)
    return out


def push(p: Program, sigma: Memory) -> list[Val]:
    row = []
    for n in p.output_ids():
        c = sigma.get(n)
        if c is None or c.status != OUTPUT_DONE or c.val is None:
            raise OutputMissing(n)
        row.append(c.val)
    return row


def run_prog(p: Program, rows: Iterable[Sequence[Val]]) -> list[list[Val]]:
    sigma = init_prog(p)
    out = []
    for row in rows:
        _, sigma = step_rsf(p.term, TT, pull(p, sigma, row))
        out.append(push(p, sigma))
    return out


# --------------------------------------------------------------------------- #
# Worked programs


def naturals_program() -> Program:
    """One internal counter, one output: emits 0, 1, 2, ..."""
    r0, r1 = Ref(NAT, 0), Ref(NAT, 1)
    bump = Pairing(ID, Compose(Prim("inc"), SND))  # ((), n) -> (((), n), n + 1)
    term = chain(Get(r0), Arr(bump), Set(r0), Set(r1))
    return Program(inputs=(), internals=((host.N(0), NAT),), outputs=(NAT,), term=term)


def delay_term(r: Ref) -> RSFTerm:
    """Get r >>> Arr swap >>> Set r: emits the stored value, stores the input."""
    return chain(Get(r), Arr(host.SWAP), Set(r))


def delay_program(init: Val | None = None, ty: Ty | None = None) -> Program:
    """The delay term wired to one input (id 0), internal (id 1) and output (id 2)."""
    ty = NAT if ty is None else ty
    init = host.N(0) if init is None else init
    r_in, r, r_out = Ref(ty, 0), Ref(ty, 1), Ref(ty, 2)
    term = chain(
        Get(r_in),
        Arr(SND),
        delay_term(r),
        Arr(Pairing(Const(TT), ID)),
        Set(r_out),
    )
    return Program(inputs=(ty,), internals=((init, ty),), outputs=(ty,), term=term)


def relay_program(ty: Ty | None = None) -> Program:
    """One input copied straight to one output."""
    ty = NAT if ty is None else ty
    term = chain(Get(Ref(ty, 0)), Set(Ref(ty, 1)))
    return Program(inputs=(ty,), internals=(), outputs=(ty,), term=term)

