"""YampaCore: pure arrowized stream transformers.

Stepping a term returns the successor *term*; only ``Loop`` states change, so
successors are structurally comparable with their predecessors.
"""

from __future__ import annotations

import random
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import host
from .errors import ShapeMismatch, TypeMismatch
from .host import (
    ASSOC,
    FST,
    PERM,
    TT,
    UNASSOC,
    Const,
    Fn,
    P,
    Pairing,
    ProdF,
    Prod,
    Ty,
    Val,
)


class SFTerm:
    __slots__ = ()


@dataclass(frozen=True)
class Arr(SFTerm):
    f: Fn


@dataclass(frozen=True)
class Comp(SFTerm):
    first: SFTerm
    second: SFTerm


@dataclass(frozen=True)
class First(SFTerm):
    inner: SFTerm


@dataclass(frozen=True)
class Loop(SFTerm):
    state: Val
    body: SFTerm


def infer_sf(t: SFTerm, ty: Ty, path=()) -> Ty:
    if isinstance(t, Arr):
        try:
            return host.infer_fn(t.f, ty)
        except TypeMismatch as e:
            raise TypeMismatch(str(e).rsplit(" at ", 1)[0], path) from None
    if isinstance(t, Comp):
        mid = infer_sf(t.first, ty, path + (0,))
        return infer_sf(t.second, mid, path + (1,))
    if isinstance(t, First):
        if not isinstance(ty, Prod):
            raise TypeMismatch(f"first expects a product input, got {ty}", path)
        return Prod(infer_sf(t.inner, ty.left, path + (0,)), ty.right)
    if isinstance(t, Loop):
        c = host.type_of(t.state)
        out = infer_sf(t.body, Prod(ty, c), path + (0,))
        if not isinstance(out, Prod) or out.right != c:
            raise TypeMismatch(f"loop body must output (prod _ {c}), got {out}", path)
        return out.left
    raise TypeError(f"not a YampaCore term: {t!r}")


# Test-only mutation switch; see ``broken_comp``.
_BROKEN_COMP = False


@contextmanager
def broken_comp():
    """Make ``Comp`` advance its left component twice per step (mutation testing)."""
    global _BROKEN_COMP
    old, _BROKEN_COMP = _BROKEN_COMP, True
    try:
        yield
    finally:
        _BROKEN_COMP = old


def step_sf(t: SFTerm, a: Val) -> tuple[Val, SFTerm]:
    k = type(t)
    if k is Arr:
        return host.eval_fn(t.f, a), t
    if k is Comp:
        b, t1 = step_sf(t.first, a)
        if _BROKEN_COMP:
            _, t1 = step_sf(t1, a)
        c, t2 = step_sf(t.second, b)
        if t1 is t.first and t2 is t.second:
            return c, t
        return c, Comp(t1, t2)
    if k is First:
        if type(a) is not P:
            raise ShapeMismatch(f"first expects a pair, got {a}")
        y, inner = step_sf(t.inner, a.fst)
        return P(y, a.snd), (t if inner is t.inner else First(inner))
    if k is Loop:
        out, body = step_sf(t.body, P(a, t.state))
        if type(out) is not P:
            raise ShapeMismatch(f"loop body must return a pair, got {out}")
        return out.fst, Loop(out.snd, body)
    raise TypeError(f"not a YampaCore term: {t!r}")


def run_sf(t: SFTerm, inputs: Iterable[Val]) -> list[Val]:
    out = []
    for a in inputs:
        b, t = step_sf(t, a)
        out.append(b)
    return out


def erase_states(t: SFTerm) -> SFTerm:
    """The term with every Loop state replaced by ``tt`` (its shape)."""
    if isinstance(t, Comp):
        return Comp(erase_states(t.first), erase_states(t.second))
    if isinstance(t, First):
        return First(erase_states(t.inner))
    if isinstance(t, Loop):
        return Loop(TT, erase_states(t.body))
    return t


def normalize_sf(t: SFTerm, ty: Ty | None = None) -> tuple[Val, Fn]:
    """Return ``(v, f)`` with ``Loop(v, Arr f)`` bisimilar to ``t``.

    When ``ty`` is given the term is type-checked first.
    """
    if ty is not None:
        infer_sf(t, ty)
    return _normalize(t)


def _normalize(t: SFTerm) -> tuple[Val, Fn]:
    if isinstance(t, Arr):
        # (x, tt) -> (f x, tt)
        return TT, Pairing(host.Compose(t.f, FST), Const(TT))
    if isinstance(t, First):
        v, f = _normalize(t.inner)
        # ((a, d), c) -> ((a, c), d) -> ((b, c'), d) -> ((b, d), c')
        return v, host.Compose(PERM, host.Compose(ProdF(f, host.ID), PERM))
    if isinstance(t, Comp):
        d, f1 = _normalize(t.first)
        e, f2 = _normalize(t.second)
        # (a, (c1, c2)) -> ((a, c1), c2) -> ((b, c1'), c2) -> ((b, c2), c1')
        #   -> ((c, c2'), c1') -> ((c, c1'), c2') -> (c, (c1', c2'))
        g = host.then(UNASSOC, ProdF(f1, host.ID), PERM, ProdF(f2, host.ID), PERM, ASSOC)
        return P(d, e), g
    if isinstance(t, Loop):
        d, f = _normalize(t.body)
        # (a, (c, d)) -> ((a, c), d) -> ((b, c'), d') -> (b, (c', d'))
        return P(t.state, d), host.then(UNASSOC, f, ASSOC)
    raise TypeError(f"not a YampaCore term: {t!r}")


def bisim_witness(
    t1: SFTerm,
    t2: SFTerm,
    ty: Ty,
    steps: int,
    samples: int,
    rng: random.Random | int = 0,
) -> list[Val] | None:
    """First sampled input stream on which the two terms' outputs differ, or None."""
    from .gen import random_value

    infer_sf(t1, ty)
    infer_sf(t2, ty)
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    for _ in range(samples):
        stream = [random_value(rng, ty) for _ in range(steps)]
        if not streams_agree(t1, t2, stream):
            return stream
    return None


def streams_agree(t1: SFTerm, t2: SFTerm, stream: Sequence[Val]) -> bool:
    for a in stream:
        b1, t1 = step_sf(t1, a)
        b2, t2 = step_sf(t2, a)
        if b1 != b2:
            return False
    return True


def bisim_sf(
    t1: SFTerm,
    t2: SFTerm,
    ty: Ty,
    steps: int,
    samples: int,
    rng: random.Random | int = 0,
) -> bool:
    """Bounded observational equivalence: True is evidence, False is a counterexample."""
    return bisim_witness(t1, t2, ty, steps, samples, rng) is None
