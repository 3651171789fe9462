"""Type-directed random generators for values, functions, terms and programs.

Every generator takes an explicit ``random.Random`` so runs are replayable.
"""

from __future__ import annotations

import random

from . import molholes as M
from . import yampa as Y
from .host import (
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
    Fn,
    N,
    P,
    Pairing,
    Prim,
    Prod,
    ProdF,
    Ty,
    Val,
    infer_fn,
    then,
)
from .memory import DEFINED, Cell, Memory

MAX_NAT = 20
MAX_TY = 7  # leaves; larger intermediate types get projected back down


def ty_size(ty: Ty) -> int:
    if isinstance(ty, Prod):
        return ty_size(ty.left) + ty_size(ty.right)
    return 1


def random_type(rng: random.Random, depth: int = 2) -> Ty:
    r = rng.random()
    if depth > 0 and r < 0.25:
        return Prod(random_type(rng, depth - 1), random_type(rng, depth - 1))
    return rng.choice((UNIT, BOOL, NAT, NAT))


def random_value(rng: random.Random, ty: Ty) -> Val:
    if isinstance(ty, Prod):
        return P(random_value(rng, ty.left), random_value(rng, ty.right))
    if ty == NAT:
        return N(rng.randint(0, MAX_NAT))
    if ty == BOOL:
        return B(rng.random() < 0.5)
    return TT


def _paths(ty: Ty, prefix: Fn = ID):
    """Yield ``(projection, type)`` for every subcomponent of ``ty``."""
    yield prefix, ty
    if isinstance(ty, Prod):
        yield from _paths(ty.left, then(prefix, FST))
        yield from _paths(ty.right, then(prefix, SND))


def project_to(rng: random.Random, src: Ty, cod: Ty) -> Fn:
    """Some function ``src -> cod`` that uses its input where it can."""
    hits = [f for f, t in _paths(src) if t == cod]
    if hits and rng.random() < 0.85:
        f = rng.choice(hits)
        if cod == NAT and rng.random() < 0.3:
            f = then(f, Prim(rng.choice(("inc", "dec"))))
        return f
    if isinstance(cod, Prod):
        return Pairing(project_to(rng, src, cod.left), project_to(rng, src, cod.right))
    if cod == BOOL:
        nats = [f for f, t in _paths(src) if t == NAT]
        if nats and rng.random() < 0.7:
            return then(rng.choice(nats), Prim("isZero"))
    return Const(random_value(rng, cod))


def shrink(rng: random.Random, ty: Ty) -> tuple[Fn, Ty]:
    """A projection onto a proper subcomponent of a product type."""
    options = [(f, t) for f, t in _paths(ty) if t != ty]
    return rng.choice(options)


def gen_fn(rng: random.Random, dom: Ty, depth: int = 2) -> tuple[Fn, Ty]:
    """Random well-typed ``f`` with domain ``dom``; returns ``(f, codomain)``."""
    leaves: list[Fn] = [ID, DUP]
    if isinstance(dom, Prod):
        leaves += [FST, SND, SWAP, SDUP]
        if isinstance(dom.left, Prod):
            leaves += [ASSOC, PERM]
        if isinstance(dom.right, Prod):
            leaves.append(UNASSOC)
    if dom == NAT:
        leaves += [Prim("inc"), Prim("dec"), Prim("isZero")]
    if dom == Prod(NAT, NAT):
        leaves.append(Prim("add"))
    if ty_size(dom) >= MAX_TY:
        leaves = [f for f in leaves if f not in (DUP, SDUP)] or [ID]
    r = rng.random()
    if depth <= 0 or r < 0.45:
        if rng.random() < 0.1:
            f = Const(random_value(rng, random_type(rng, 1)))
        else:
            f = rng.choice(leaves)
    elif r < 0.65:
        f1, mid = gen_fn(rng, dom, depth - 1)
        f2, _ = gen_fn(rng, mid, depth - 1)
        f = Compose(f2, f1)
    elif r < 0.8 and isinstance(dom, Prod):
        f = ProdF(gen_fn(rng, dom.left, depth - 1)[0], gen_fn(rng, dom.right, depth - 1)[0])
    else:
        f = Pairing(gen_fn(rng, dom, depth - 1)[0], gen_fn(rng, dom, depth - 1)[0])
    cod = infer_fn(f, dom)
    if ty_size(cod) > MAX_TY:
        p, cod = shrink(rng, cod)
        f = then(f, p)
    return f, cod


def gen_fn_to(rng: random.Random, dom: Ty, cod: Ty, depth: int = 2) -> Fn:
    f, mid = gen_fn(rng, dom, depth)
    return then(f, project_to(rng, mid, cod))


# --------------------------------------------------------------------------- #
# YampaCore


def gen_sf(rng: random.Random, ty: Ty, depth: int = 4) -> tuple[Y.SFTerm, Ty]:
    """Random well-typed SFTerm on input ``ty``; returns ``(term, output type)``."""
    r = rng.random()
    if depth <= 0 or r < 0.3:
        f, out = gen_fn(rng, ty, 2)
        return Y.Arr(f), out
    if r < 0.55:
        t1, mid = gen_sf(rng, ty, depth - 1)
        t2, out = gen_sf(rng, mid, depth - 1)
        return Y.Comp(t1, t2), out
    if r < 0.75 and isinstance(ty, Prod):
        t, out = gen_sf(rng, ty.left, depth - 1)
        return Y.First(t), Prod(out, ty.right)
    c = random_type(rng, 1)
    body, out = gen_sf(rng, Prod(ty, c), depth - 1)
    b = out.left if isinstance(out, Prod) else out
    adapt = Pairing(project_to(rng, out, b), project_to(rng, out, c))
    return Y.Loop(random_value(rng, c), Y.Comp(body, Y.Arr(adapt))), b


def gen_sf_to(rng: random.Random, ty: Ty, cod: Ty, depth: int = 4) -> Y.SFTerm:
    t, out = gen_sf(rng, ty, depth)
    return Y.Comp(t, Y.Arr(project_to(rng, out, cod)))


# --------------------------------------------------------------------------- #
# Molholes


def gen_rsf(
    rng: random.Random, ty: Ty, pool: list[M.Ref], depth: int = 3
) -> tuple[M.RSFTerm, Ty]:
    """Random RSFTerm on input ``ty`` touching only resources in ``pool``.

    ``pool`` should hold internal resources: the term may read and write each
    any number of times.
    """
    r = rng.random()
    if (depth <= 0 and (not pool or r < 0.5)) or (not pool and r < 0.6) or r < 0.15:
        f, out = gen_fn(rng, ty, 2)
        return M.Arr(f), out
    if depth > 0 and r < 0.5:
        t1, mid = gen_rsf(rng, ty, pool, depth - 1)
        t2, out = gen_rsf(rng, mid, pool, depth - 1)
        return M.Comp(t1, t2), out
    if depth > 0 and r < 0.62 and isinstance(ty, Prod):
        t, out = gen_rsf(rng, ty.left, pool, depth - 1)
        return M.First(t), Prod(out, ty.right)
    ref = rng.choice(pool)
    if rng.random() < 0.5:
        out = Prod(ty, ref.ty)
        if ty_size(out) > MAX_TY:
            p, small = shrink(rng, out)
            return M.Comp(M.Get(ref), M.Arr(p)), small
        return M.Get(ref), out
    return M.Comp(M.Arr(Pairing(ID, project_to(rng, ty, ref.ty))), M.Set(ref)), ty


def random_bracket(rng: random.Random, terms: list, comp=M.Comp):
    """Compose ``terms`` in order under a random binary bracketing."""
    if len(terms) == 1:
        return terms[0]
    k = rng.randint(1, len(terms) - 1)
    return comp(random_bracket(rng, terms[:k], comp), random_bracket(rng, terms[k:], comp))


def _actions(rng: random.Random, p_in, p_int, p_out) -> list:
    acts = [("get", r) for r in p_in] + [("set", r) for r in p_out]
    for _ in range(rng.randint(0, 4) if p_int else 0):
        acts.append((rng.choice(("get", "set")), rng.choice(p_int)))
    acts += [("arr", None)] * rng.randint(0, 3)
    rng.shuffle(acts)
    return acts


def _build(rng: random.Random, acts: list, ty: Ty) -> tuple[list[M.RSFTerm], Ty]:
    """Turn an action list into a sequence of terms threading ``ty``."""
    out: list[M.RSFTerm] = []
    i = 0
    while i < len(acts):
        if rng.random() < 0.15 and i + 1 < len(acts):
            # run a block of actions under First
            j = rng.randint(i + 1, len(acts))
            if not isinstance(ty, Prod):
                out.append(M.Arr(Pairing(ID, Const(TT))))
                ty = Prod(ty, UNIT)
            inner, inner_ty = _build(rng, acts[i:j], ty.left)
            if inner:
                out.append(M.First(random_bracket(rng, inner)))
                ty = Prod(inner_ty, ty.right)
            i = j
            continue
        kind, ref = acts[i]
        i += 1
        if kind == "arr":
            f, ty = gen_fn(rng, ty, 2)
            out.append(M.Arr(f))
        elif kind == "get":
            out.append(M.Get(ref))
            ty = Prod(ty, ref.ty)
            if ty_size(ty) > MAX_TY:
                p, ty = shrink(rng, ty)
                out.append(M.Arr(p))
        else:
            keep, kept = gen_fn(rng, ty, 1)
            out.append(M.Arr(Pairing(keep, project_to(rng, ty, ref.ty))))
            out.append(M.Set(ref))
            ty = kept
    return out, ty


def gen_program(
    rng: random.Random,
    max_in: int = 3,
    max_int: int = 3,
    max_out: int = 3,
) -> M.Program:
    """Random well-typed program: each input read once, each output written once."""
    k_in, k, k_out = rng.randint(0, max_in), rng.randint(0, max_int), rng.randint(0, max_out)
    ins = [random_type(rng, 1) for _ in range(k_in)]
    ints = [random_type(rng, 1) for _ in range(k)]
    outs = [random_type(rng, 1) for _ in range(k_out)]
    layout = ins + ints + outs
    refs = [M.Ref(t, n) for n, t in enumerate(layout)]
    acts = _actions(rng, refs[:k_in], refs[k_in : k_in + k], refs[k_in + k :])
    terms, ty = _build(rng, acts, UNIT)
    terms.append(M.Arr(Const(TT)))
    return M.Program(
        inputs=ins,
        internals=[(random_value(rng, t), t) for t in ints],
        outputs=outs,
        term=random_bracket(rng, terms),
    )


def random_rows(rng: random.Random, p: M.Program, steps: int) -> list[list[Val]]:
    return [[random_value(rng, t) for t in p.inputs] for _ in range(steps)]


def random_memory(rng: random.Random, amem) -> Memory:
    """A concrete memory modelling the abstract memory ``amem``."""
    return {
        n: Cell(status, ty, random_value(rng, ty) if status in DEFINED else None)
        for n, (status, ty) in amem.items()
    }
