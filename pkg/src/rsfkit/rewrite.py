"""Normal forms for Molholes terms, resource collapse and translation to YampaCore.

A ``NormalForm(gets, core, sets)`` stands for

    Get g0 >>> (Get g1 >>> (... >>> (Arr core >>> (Set s0 >>> (Set s1 ...)))))

so ``core`` receives the read values as a left-nested stack
``(((a, v_g0), v_g1), ...)`` and returns ``(((b, y_s{m-1}), ...), y_s0)``:
the outermost component is consumed by the first ``Set``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import yampa
from .errors import NotCollapsed, NotEffectFree, NotWellTyped
from .host import (
    FST,
    ID,
    PERM,
    SND,
    TT,
    UNIT,
    Compose,
    Const,
    Fn,
    P,
    Pairing,
    Prod,
    ProdF,
    Ty,
    Val,
    first_n,
    fst_n,
    then,
)
from .molholes import Arr, Comp, First, Get, Program, Ref, RSFTerm, Set, chain_right, iter_refs
from .typecheck import well_typed


@dataclass(frozen=True)
class NormalForm:
    gets: tuple[Ref, ...]
    core: Fn
    sets: tuple[Ref, ...]

    def __post_init__(self):
        object.__setattr__(self, "gets", tuple(self.gets))
        object.__setattr__(self, "sets", tuple(self.sets))
        for refs in (self.gets, self.sets):
            ids = [r.id for r in refs]
            if any(a >= b for a, b in zip(ids, ids[1:])):
                raise ValueError(f"resource list must be strictly increasing: {ids}")


def nf_to_term(nf: NormalForm) -> RSFTerm:
    return chain_right(*map(Get, nf.gets), Arr(nf.core), *map(Set, nf.sets))


def _sorted_unique(refs) -> tuple[Ref, ...]:
    seen = {}
    for r in refs:
        seen.setdefault(r.id, r)
    return tuple(seen[i] for i in sorted(seen))


def refs_accessed(t: RSFTerm) -> tuple[tuple[Ref, ...], tuple[Ref, ...]]:
    nodes = list(iter_refs(t))
    return (
        _sorted_unique(n.r for n in nodes if isinstance(n, Get)),
        _sorted_unique(n.r for n in nodes if isinstance(n, Set)),
    )


def contract(t: RSFTerm, path=()) -> Fn:
    """The single host function an effect-free term computes."""
    if isinstance(t, Arr):
        return t.f
    if isinstance(t, Comp):
        return Compose(contract(t.second, path + (1,)), contract(t.first, path + (0,)))
    if isinstance(t, First):
        return ProdF(contract(t.inner, path + (0,)), ID)
    raise NotEffectFree(path)


# --------------------------------------------------------------------------- #
# Accessors into left-nested stacks


def _get_slot(n: int, i: int) -> Fn:
    """Value of the i-th read in a stack ``(((a, v0), ...), v_{n-1})``."""
    return then(fst_n(n - 1 - i), SND)


def _set_slot(j: int) -> Fn:
    """Value of the j-th write in a stack ``(((b, y_{m-1}), ...), y0)``."""
    return then(fst_n(j), SND)


def _nest(base: Fn, parts: Sequence[Fn]) -> Fn:
    """x -> (((base x, p0 x), p1 x), ...)"""
    out = base
    for p in parts:
        out = Pairing(out, p)
    return out


def _perm_left(n: int) -> Fn:
    # stack(n-1, perm) >>> ... >>> stack(0, perm)
    return then(*(first_n(k, PERM) for k in reversed(range(n))))


def _perm_right(m: int) -> Fn:
    # stack(0, perm) >>> ... >>> stack(m-1, perm)
    return then(*(first_n(k, PERM) for k in range(m)))


def nf_first(nf: NormalForm) -> NormalForm:
    """Normal form of ``First(nf_to_term(nf))``: push the passenger past the reads and writes."""
    core = then(_perm_left(len(nf.gets)), ProdF(nf.core, ID), _perm_right(len(nf.sets)))
    return NormalForm(nf.gets, core, nf.sets)


def nf_comp(nf1: NormalForm, nf2: NormalForm) -> NormalForm:
    """Normal form of ``nf_to_term(nf1) >>> nf_to_term(nf2)``.

    The writes of ``nf1`` meet the reads of ``nf2``.  A read of a resource
    just written is replaced by the written value; repeated reads keep the
    leftmost, repeated writes keep the rightmost.
    """
    g1, f1, s1 = nf1.gets, nf1.core, nf1.sets
    g2, f2, s2 = nf2.gets, nf2.core, nf2.sets
    if not s1 and not g2:
        return NormalForm(g1, then(f1, f2), s2)

    s1_pos = {r.id: j for j, r in enumerate(s1)}
    s2_pos = {r.id: j for j, r in enumerate(s2)}
    gets = _sorted_unique(list(g1) + [r for r in g2 if r.id not in s1_pos])
    sets = _sorted_unique(list(s1) + list(s2))
    p = len(gets)
    g_pos = {r.id: i for i, r in enumerate(gets)}

    # env -> (c1, env)
    run1 = Pairing(then(_nest(fst_n(p), [_get_slot(p, g_pos[r.id]) for r in g1]), f1), ID)
    # (c1, env) -> (c2, c1)
    feed2 = []
    for r in g2:
        if r.id in s1_pos:
            feed2.append(then(FST, _set_slot(s1_pos[r.id])))
        else:
            feed2.append(then(SND, _get_slot(p, g_pos[r.id])))
    run2 = Pairing(then(_nest(then(FST, fst_n(len(s1))), feed2), f2), FST)
    # (c2, c1) -> (((d, z_{q-1}), ...), z0)
    outs = []
    for r in reversed(sets):
        if r.id in s2_pos:
            outs.append(then(FST, _set_slot(s2_pos[r.id])))
        else:
            outs.append(then(SND, _set_slot(s1_pos[r.id])))
    emit = _nest(then(FST, fst_n(len(s2))), outs)
    return NormalForm(gets, then(run1, run2, emit), sets)


def normalize_rsf(t: RSFTerm) -> NormalForm:
    if isinstance(t, Arr):
        return NormalForm((), t.f, ())
    if isinstance(t, Get):
        return NormalForm((t.r,), ID, ())
    if isinstance(t, Set):
        return NormalForm((), ID, (t.r,))
    if isinstance(t, First):
        return nf_first(normalize_rsf(t.inner))
    if isinstance(t, Comp):
        return nf_comp(normalize_rsf(t.first), normalize_rsf(t.second))
    raise TypeError(f"not a Molholes term: {t!r}")


# --------------------------------------------------------------------------- #
# Collapse and translation


def pack_type(tys: Sequence[Ty]) -> Ty:
    if not tys:
        return UNIT
    out = tys[0]
    for t in tys[1:]:
        out = Prod(out, t)
    return out


def pack_values(vals: Sequence[Val]) -> Val:
    if not vals:
        return TT
    out = vals[0]
    for v in vals[1:]:
        out = P(out, v)
    return out


def unpack_values(v: Val, n: int) -> list[Val]:
    out = []
    for _ in range(n - 1):
        out.append(v.snd)
        v = v.fst
    if n:
        out.append(v)
    return out[::-1]


def _pack_slot(n: int, i: int) -> Fn:
    """Component i of a left-nested pack of n values."""
    if i == 0:
        return fst_n(n - 1)
    return then(fst_n(n - 1 - i), SND)


def pack_row(p: Program, row: Sequence[Val]) -> list[Val]:
    """Input row of ``p`` as the single-value row of ``collapse(p)``."""
    return [pack_values(list(row))]


def unpack_row(p: Program, row: Sequence[Val]) -> list[Val]:
    """Output row of ``collapse(p)`` as an output row of ``p``."""
    return unpack_values(row[0], p.k_out)


def collapse(p: Program) -> Program:
    """Merge each resource kind into one tuple-typed resource (ids 0, 1, 2)."""
    report = well_typed(p)
    if not report.ok:
        raise NotWellTyped(report.render())
    nf = normalize_rsf(p.term)
    in_ty = pack_type(list(p.inputs))
    int_ty = pack_type([t for _, t in p.internals])
    out_ty = pack_type(list(p.outputs))
    int_val = pack_values([v for v, _ in p.internals])
    ins, ints = set(p.input_ids()), list(p.internal_ids())

    # ((tt, inputs), internals) -> the core's read stack
    feed = []
    for r in nf.gets:
        if r.id in ins:
            feed.append(then(FST, SND, _pack_slot(p.k_in, r.id)))
        else:
            feed.append(then(SND, _pack_slot(p.k, r.id - p.k_in)))
    run = Pairing(then(_nest(then(FST, FST), feed), nf.core), ID)

    # (c, x) -> ((b, outputs), internals')
    s_pos = {r.id: j for j, r in enumerate(nf.sets)}
    out_parts = [then(FST, _set_slot(s_pos[n])) for n in p.output_ids()]
    int_parts = [
        then(FST, _set_slot(s_pos[n])) if n in s_pos else then(SND, SND, _pack_slot(p.k, n - p.k_in))
        for n in ints
    ]

    def packed(parts):
        if not parts:
            return Const(TT)
        return _nest(parts[0], parts[1:])

    emit = Pairing(
        Pairing(then(FST, fst_n(len(nf.sets))), packed(out_parts)),
        packed(int_parts),
    )
    f = then(run, emit)
    r_in, r, r_out = Ref(in_ty, 0), Ref(int_ty, 1), Ref(out_ty, 2)
    term = chain_right(Get(r_in), Get(r), Arr(f), Set(r), Set(r_out))
    return Program(inputs=(in_ty,), internals=((int_val, int_ty),), outputs=(out_ty,), term=term)


def _collapsed_core(p: Program) -> Fn:
    if (p.k_in, p.k, p.k_out) != (1, 1, 1):
        raise NotCollapsed("expected exactly one input, internal and output resource")
    t = p.term
    try:
        g_in, rest = t.first, t.second
        g_int, rest = rest.first, rest.second
        arr, rest = rest.first, rest.second
        s_int, s_out = rest.first, rest.second
    except AttributeError:
        raise NotCollapsed("term is not Get >>> Get >>> Arr >>> Set >>> Set") from None
    shape = (
        isinstance(t, Comp)
        and g_in == Get(p.ref(0))
        and g_int == Get(p.ref(1))
        and isinstance(arr, Arr)
        and s_int == Set(p.ref(1))
        and s_out == Set(p.ref(2))
    )
    if not shape:
        raise NotCollapsed("term is not Get >>> Get >>> Arr >>> Set >>> Set")
    return arr.f


def translate_prog(p: Program) -> yampa.SFTerm:
    """``Arr pack >>> Loop v (Arr f) >>> Arr unpack`` for a collapsed program."""
    f = _collapsed_core(p)
    v = p.internals[0][0]
    return yampa.Comp(
        yampa.Arr(Pairing(Const(TT), ID)),
        yampa.Comp(yampa.Loop(v, yampa.Arr(f)), yampa.Arr(SND)),
    )


def translate(p: Program) -> yampa.SFTerm:
    """Collapse then translate."""
    return translate_prog(collapse(p))


def run_translated(p: Program, rows: Sequence[Sequence[Val]]) -> list[list[Val]]:
    """Run the YampaCore translation of ``p`` on rows of ``p`` (packing at the boundary)."""
    sf = translate(p)
    outs = yampa.run_sf(sf, [pack_values(list(row)) for row in rows])
    return [unpack_values(o, p.k_out) for o in outs]
