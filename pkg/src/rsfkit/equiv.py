"""Differential oracles and the executable law catalog.

Every sample draws a 32-bit sub-seed from a per-law RNG and builds its
instance from ``random.Random(sub_seed)``, so a failure is replayed from the
law id and that sub-seed alone (see ``replay``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from . import gen
from . import molholes as M
from . import yampa as Y
from .errors import NotReadable, NotWellTyped, NotWritable, RsfError, TypeMismatch
from .host import (
    ASSOC,
    FST,
    ID,
    PERM,
    SDUP,
    TT,
    UNASSOC,
    Compose,
    P,
    Pairing,
    Prod,
    ProdF,
    Ty,
)
from .memory import INPUT_FRESH, INTERNAL, OUTPUT_FRESH, Memory, read_mem, write_mem
from .rewrite import pack_values, translate, unpack_values
from .typecheck import AMem, well_typed

DEFAULT_SEED = 20240


@dataclass(frozen=True)
class Counterexample:
    seed: int
    detail: str


@dataclass(frozen=True)
class LawReport:
    law_id: str
    tried: int
    failures: tuple[Counterexample, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"LAW {self.law_id} {verdict} tried={self.tried} failures={len(self.failures)}"


# --------------------------------------------------------------------------- #
# Outcomes


def _mem_key(sigma: Memory):
    return tuple(sorted(sigma.items()))


def outcome(run: Callable[[Memory], tuple], sigma: Memory):
    """``("ok", value, memory)`` or ``("err", error class, resource id)``."""
    try:
        v, s = run(sigma)
    except (NotReadable, NotWritable) as e:
        return ("err", type(e).__name__, e.rid)
    except RsfError as e:
        return ("err", type(e).__name__, None)
    return ("ok", v, _mem_key(s))


def _show(o) -> str:
    if o[0] == "err":
        return f"{o[1]}({o[2]})"
    mem = ", ".join(f"{n}:{c}" for n, c in o[2])
    return f"{o[1]} / {{{mem}}}"


def rsf_trial(t1, t2, ty: Ty, amem: AMem, rng: random.Random) -> Optional[str]:
    a = gen.random_value(rng, ty)
    sigma = gen.random_memory(rng, amem)
    o1 = outcome(lambda s: M.step_rsf(t1, a, s), sigma)
    o2 = outcome(lambda s: M.step_rsf(t2, a, s), sigma)
    if o1 != o2:
        return f"input={a} lhs={_show(o1)} rhs={_show(o2)}"
    return None


def obs_equiv_rsf(
    t1: M.RSFTerm,
    t2: M.RSFTerm,
    ty: Ty,
    amem: AMem,
    samples: int = 100,
    seed: int = DEFAULT_SEED,
    law_id: str = "obs",
) -> LawReport:
    """Compare ``step_rsf`` results (value and whole memory) on sampled inputs."""
    try:
        M.infer_rsf(t1, ty)
        M.infer_rsf(t2, ty)
    except TypeMismatch as e:
        return LawReport(law_id, 0, (Counterexample(seed, f"precondition: {e}"),))
    rng = random.Random(f"{seed}:{law_id}")
    failures = []
    for _ in range(samples):
        sub = rng.getrandbits(32)
        detail = rsf_trial(t1, t2, ty, amem, random.Random(sub))
        if detail:
            failures.append(Counterexample(sub, detail))
    return LawReport(law_id, samples, tuple(failures))


# --------------------------------------------------------------------------- #
# Instance builders.  Each returns a trial closure that takes the instance
# RNG (already advanced past construction) and returns a failure
# description or None.


def _sf_trial(lhs, rhs, ty, steps):
    Y.infer_sf(lhs, ty)
    Y.infer_sf(rhs, ty)

    def trial(rng):
        stream = [gen.random_value(rng, ty) for _ in range(steps)]
        if not Y.streams_agree(lhs, rhs, stream):
            return f"stream={[str(v) for v in stream]}"
        return None

    return trial


def _rsf_law(lhs, rhs, ty, amem):
    M.infer_rsf(lhs, ty)
    M.infer_rsf(rhs, ty)
    return lambda rng: rsf_trial(lhs, rhs, ty, amem, rng)


def _st_law(m1, m2, amem):
    def trial(rng):
        sigma = gen.random_memory(rng, amem)
        o1, o2 = outcome(m1, sigma), outcome(m2, sigma)
        if o1 != o2:
            return f"lhs={_show(o1)} rhs={_show(o2)}"
        return None

    return trial


def _ty(rng, depth=1):
    return gen.random_type(rng, depth)


def _sf(rng, ty, cod=None, depth=3):
    if cod is None:
        return gen.gen_sf(rng, ty, depth)
    return gen.gen_sf_to(rng, ty, cod, depth), cod


# Arrow laws on YampaCore terms


def _arrow(n):
    def build(rng, steps):
        A = _ty(rng)
        if n == "a":
            a, _ = _sf(rng, A)
            return _sf_trial(Y.Comp(Y.Arr(ID), a), a, A, steps)
        if n == "b":
            a, _ = _sf(rng, A)
            return _sf_trial(Y.Comp(a, Y.Arr(ID)), a, A, steps)
        if n == "c":
            a, B = _sf(rng, A)
            b, C = _sf(rng, B)
            c, _ = _sf(rng, C)
            return _sf_trial(Y.Comp(Y.Comp(a, b), c), Y.Comp(a, Y.Comp(b, c)), A, steps)
        if n == "d":
            f, B = gen.gen_fn(rng, A)
            g, _ = gen.gen_fn(rng, B)
            return _sf_trial(Y.Arr(Compose(g, f)), Y.Comp(Y.Arr(f), Y.Arr(g)), A, steps)
        C = _ty(rng)
        if n == "e":
            a, _ = _sf(rng, A)
            return _sf_trial(
                Y.Comp(Y.First(a), Y.Arr(FST)), Y.Comp(Y.Arr(FST), a), Prod(A, C), steps
            )
        if n == "f":
            a, _ = _sf(rng, A)
            f, _ = gen.gen_fn(rng, C)
            idf = Y.Arr(ProdF(ID, f))
            return _sf_trial(
                Y.Comp(Y.First(a), idf), Y.Comp(idf, Y.First(a)), Prod(A, C), steps
            )
        if n == "g":
            a, _ = _sf(rng, A)
            D = _ty(rng)
            return _sf_trial(
                Y.Comp(Y.First(Y.First(a)), Y.Arr(ASSOC)),
                Y.Comp(Y.Arr(ASSOC), Y.First(a)),
                Prod(Prod(A, C), D),
                steps,
            )
        if n == "h":
            f, _ = gen.gen_fn(rng, A)
            return _sf_trial(Y.First(Y.Arr(f)), Y.Arr(ProdF(f, ID)), Prod(A, C), steps)
        if n == "i":
            a, B = _sf(rng, A)
            b, _ = _sf(rng, B)
            return _sf_trial(
                Y.First(Y.Comp(a, b)), Y.Comp(Y.First(a), Y.First(b)), Prod(A, C), steps
            )
        raise ValueError(n)

    return build


def _loop(n):
    def build(rng, steps):
        A, C = _ty(rng), _ty(rng)
        c = gen.random_value(rng, C)
        if n == "a":
            a, A2 = _sf(rng, A)
            B = _ty(rng)
            b, _ = _sf(rng, Prod(A2, C), Prod(B, C))
            return _sf_trial(
                Y.Loop(c, Y.Comp(Y.First(a), b)), Y.Comp(a, Y.Loop(c, b)), A, steps
            )
        if n == "b":
            B1 = _ty(rng)
            a, _ = _sf(rng, Prod(A, C), Prod(B1, C))
            b, _ = _sf(rng, B1)
            return _sf_trial(
                Y.Loop(c, Y.Comp(a, Y.First(b))), Y.Comp(Y.Loop(c, a), b), A, steps
            )
        if n == "c":
            D, B = _ty(rng), _ty(rng)
            d = gen.random_value(rng, D)
            a, _ = _sf(rng, Prod(Prod(A, C), D), Prod(Prod(B, C), D))
            rhs = Y.Loop(P(c, d), Y.Comp(Y.Arr(UNASSOC), Y.Comp(a, Y.Arr(ASSOC))))
            return _sf_trial(Y.Loop(c, Y.Loop(d, a)), rhs, A, steps)
        raise ValueError(n)

    return build


# Kleisli combinators of the memory state monad


def st_return(x):
    return lambda s: (x, s)


def st_bind(m, k):
    def run(s):
        x, s = m(s)
        return k(x)(s)

    return run


def st_get(r):
    return lambda s: read_mem(r, s)


def st_set(r, x):
    return lambda s: (TT, write_mem(r, s, x))


def _kleisli(rng, pool, A):
    """A random Kleisli arrow ``A -> St B`` built from an RSF term."""
    t, B = gen.gen_rsf(rng, A, pool)
    return (lambda x: (lambda s: M.step_rsf(t, x, s))), B


class _Env:
    """Internal pool plus one fresh input and one fresh output resource."""

    def __init__(self, rng):
        k = rng.randint(1, 3)
        self.pool = [M.Ref(_ty(rng), n) for n in range(k)]
        self.inp = M.Ref(_ty(rng), k)
        self.out = M.Ref(_ty(rng), k + 1)
        self.amem: AMem = {r.id: (INTERNAL, r.ty) for r in self.pool}
        self.amem[self.inp.id] = (INPUT_FRESH, self.inp.ty)
        self.amem[self.out.id] = (OUTPUT_FRESH, self.out.ty)

    def internal(self, rng):
        return rng.choice(self.pool)

    def readable(self, rng):
        return rng.choice(self.pool + [self.inp])

    def writable(self, rng):
        return rng.choice(self.pool + [self.out])

    def is_internal(self, r) -> bool:
        return self.amem[r.id][0] == INTERNAL


def _two(rng, pick):
    r = pick(rng)
    while True:
        r2 = pick(rng)
        if r2.id != r.id:
            return r, r2


def _monad(n):
    def build(rng, steps):
        env = _Env(rng)
        A = _ty(rng)
        a = gen.random_value(rng, A)
        f, B = _kleisli(rng, env.pool, A)
        if n == "a":
            return _st_law(st_bind(st_return(a), f), f(a), env.amem)
        m = f(a)
        if n == "b":
            return _st_law(st_bind(m, st_return), m, env.amem)
        if n == "c":
            g, C = _kleisli(rng, env.pool, B)
            h, _ = _kleisli(rng, env.pool, C)
            lhs = st_bind(st_bind(m, g), h)
            rhs = st_bind(m, lambda x: st_bind(g(x), h))
            return _st_law(lhs, rhs, env.amem)
        raise ValueError(n)

    return build


INTERNAL_ONLY = {"state-10a", "state-10b", "state-10c", "state-10d", "state-10e",
                 "rsf-12e", "rsf-13e", "rsf-14b", "rsf-14c"}


def _state(n):
    def build(rng, steps, kind=None):
        env = _Env(rng)
        if n in "abcde":
            r = env.internal(rng) if kind is None else getattr(env, kind)
            assert kind is not None or env.is_internal(r)
            x, y = gen.random_value(rng, r.ty), gen.random_value(rng, r.ty)
            if n == "a":
                return _st_law(st_bind(st_get(r), lambda _: st_get(r)), st_get(r), env.amem)
            if n == "b":
                return _st_law(
                    st_bind(st_get(r), lambda v: st_set(r, v)), st_return(TT), env.amem
                )
            if n == "c":
                return _st_law(
                    st_bind(st_set(r, x), lambda _: st_get(r)),
                    st_bind(st_set(r, x), lambda _: st_return(x)),
                    env.amem,
                )
            if n == "d":
                return _st_law(
                    st_bind(st_set(r, x), lambda _: st_set(r, y)), st_set(r, y), env.amem
                )
            z = gen.random_value(rng, _ty(rng))
            return _st_law(st_bind(st_get(r), lambda _: st_return(z)), st_return(z), env.amem)
        if n == "f":
            r, r2 = _two(rng, env.readable)
            lhs = st_bind(st_get(r), lambda _: st_get(r2))
            rhs = st_bind(st_get(r2), lambda v: st_bind(st_get(r), lambda _: st_return(v)))
            return _st_law(lhs, rhs, env.amem)
        if n == "g":
            r = env.readable(rng)
            r2 = env.writable(rng)
            while r2.id == r.id:
                r2 = env.writable(rng)
            y = gen.random_value(rng, r2.ty)
            lhs = st_bind(st_get(r), lambda _: st_set(r2, y))
            rhs = st_bind(st_set(r2, y), lambda _: st_bind(st_get(r), lambda _: st_return(TT)))
            return _st_law(lhs, rhs, env.amem)
        if n == "h":
            r = env.writable(rng)
            r2 = env.readable(rng)
            while r2.id == r.id:
                r2 = env.readable(rng)
            x = gen.random_value(rng, r.ty)
            lhs = st_bind(st_set(r, x), lambda _: st_get(r2))
            rhs = st_bind(st_get(r2), lambda v: st_bind(st_set(r, x), lambda _: st_return(v)))
            return _st_law(lhs, rhs, env.amem)
        if n == "i":
            r, r2 = _two(rng, env.writable)
            x, y = gen.random_value(rng, r.ty), gen.random_value(rng, r2.ty)
            lhs = st_bind(st_set(r, x), lambda _: st_set(r2, y))
            rhs = st_bind(st_set(r2, y), lambda _: st_set(r, x))
            return _st_law(lhs, rhs, env.amem)
        raise ValueError(n)

    return build


def _rsf(group, n):
    """Laws for moving Get/Set through terms.

    ``kind`` overrides the resource choice for the internal-only laws; it is
    only used by the negative tests.
    """

    def build(rng, steps, kind=None):
        env = _Env(rng)
        A = _ty(rng)
        law = f"{group}{n}"

        def sub(ty):
            return gen.gen_rsf(rng, ty, env.pool)

        def internal():
            if kind is not None:
                return getattr(env, kind)
            r = env.internal(rng)
            assert env.is_internal(r)
            return r

        G, S, C, Ar = M.Get, M.Set, M.Comp, M.Arr
        if law == "12a":
            r = env.readable(rng)
            f, _ = gen.gen_fn(rng, A)
            return _rsf_law(C(Ar(f), G(r)), C(G(r), M.First(Ar(f))), A, env.amem)
        if law == "12b":
            r, Cty = env.readable(rng), _ty(rng)
            t, _ = sub(Prod(A, r.ty))
            lhs = M.First(C(G(r), t))
            rhs = M.chain(G(r), Ar(PERM), M.First(t))
            return _rsf_law(lhs, rhs, Prod(A, Cty), env.amem)
        if law == "12c":
            r, Cty = env.readable(rng), _ty(rng)
            t, _ = sub(A)
            lhs = C(M.First(t), G(r))
            rhs = C(M.First(C(t, G(r))), Ar(PERM))
            return _rsf_law(lhs, rhs, Prod(A, Cty), env.amem)
        if law == "12d":
            r, r2 = _two(rng, env.readable)
            return _rsf_law(C(G(r), G(r2)), M.chain(G(r2), G(r), Ar(PERM)), A, env.amem)
        if law == "12e":
            r = internal()
            return _rsf_law(C(G(r), G(r)), C(G(r), Ar(SDUP)), A, env.amem)
        if law == "13a":
            r = env.writable(rng)
            f, _ = gen.gen_fn(rng, A)
            return _rsf_law(
                C(S(r), Ar(f)), C(M.First(Ar(f)), S(r)), Prod(A, r.ty), env.amem
            )
        if law == "13b":
            r, Cty = env.writable(rng), _ty(rng)
            t, B = sub(A)
            t = C(t, Ar(Pairing(ID, gen.project_to(rng, B, r.ty))))
            lhs = M.First(C(t, S(r)))
            rhs = M.chain(M.First(t), Ar(PERM), S(r))
            return _rsf_law(lhs, rhs, Prod(A, Cty), env.amem)
        if law == "13c":
            r, Cty = env.writable(rng), _ty(rng)
            t, _ = sub(A)
            lhs = C(S(r), M.First(t))
            rhs = C(Ar(PERM), M.First(C(S(r), t)))
            return _rsf_law(lhs, rhs, Prod(Prod(A, Cty), r.ty), env.amem)
        if law == "13d":
            r, r2 = _two(rng, env.writable)
            return _rsf_law(
                C(S(r), S(r2)),
                M.chain(Ar(PERM), S(r2), S(r)),
                Prod(Prod(A, r2.ty), r.ty),
                env.amem,
            )
        if law == "13e":
            r = internal()
            return _rsf_law(
                C(S(r), S(r)), C(Ar(FST), S(r)), Prod(Prod(A, r.ty), r.ty), env.amem
            )
        if law == "14a":
            r = env.writable(rng)
            r2 = env.readable(rng)
            while r2.id == r.id:
                r2 = env.readable(rng)
            return _rsf_law(
                C(S(r), G(r2)), M.chain(G(r2), Ar(PERM), S(r)), Prod(A, r.ty), env.amem
            )
        if law == "14b":
            r = internal()
            return _rsf_law(C(S(r), G(r)), C(Ar(SDUP), S(r)), Prod(A, r.ty), env.amem)
        if law == "14c":
            r = internal()
            return _rsf_law(C(G(r), S(r)), Ar(ID), A, env.amem)
        raise ValueError(law)

    return build


def _catalog():
    laws = {}
    for n in "abc":
        laws[f"monad-3{n}"] = _monad(n)
    for n in "abcdefghi":
        laws[f"arrow-5{n}"] = _arrow(n)
    for n in "abc":
        laws[f"loop-6{n}"] = _loop(n)
    for n in "abcdefghi":
        laws[f"state-10{n}"] = _state(n)
    for group, letters in (("12", "abcde"), ("13", "abcde"), ("14", "abc")):
        for n in letters:
            laws[f"rsf-{group}{n}"] = _rsf(group, n)
    return laws


LAWS: dict[str, Callable] = _catalog()

# Internal-only laws instantiated on the resource kind whose access rights
# they would violate.  Each must be refuted.
NEGATIVES: dict[str, tuple[str, str]] = {
    "rsf-12e:input": ("rsf-12e", "inp"),
    "rsf-14c:input": ("rsf-14c", "inp"),
    "rsf-13e:output": ("rsf-13e", "out"),
    "rsf-14b:output": ("rsf-14b", "out"),
    "state-10a:input": ("state-10a", "inp"),
    "state-10d:output": ("state-10d", "out"),
}


def _instance(law_id: str, sub: int, steps: int):
    rng = random.Random(sub)
    if law_id in NEGATIVES:
        base, kind = NEGATIVES[law_id]
        return LAWS[base](rng, steps, kind=kind), rng
    return LAWS[law_id](rng, steps), rng


def replay(law_id: str, sub_seed: int, steps: int = 50) -> Optional[str]:
    """Re-run one recorded sample; returns the failure description or None."""
    trial, rng = _instance(law_id, sub_seed, steps)
    return trial(rng)


def check_law(law_id: str, samples: int = 100, seed: int = DEFAULT_SEED, steps: int = 50) -> LawReport:
    rng = random.Random(f"{seed}:{law_id}")
    failures = []
    for _ in range(samples):
        sub = rng.getrandbits(32)
        detail = replay(law_id, sub, steps)
        if detail:
            failures.append(Counterexample(sub, detail))
    return LawReport(law_id, samples, tuple(failures))


def law_suite(samples: int = 100, seed: int = DEFAULT_SEED, steps: int = 50) -> list[LawReport]:
    return [check_law(law_id, samples, seed, steps) for law_id in LAWS]


def negative_suite(samples: int = 100, seed: int = DEFAULT_SEED) -> list[LawReport]:
    """Reports for ``NEGATIVES``; each should carry at least one counterexample."""
    return [check_law(law_id, samples, seed) for law_id in NEGATIVES]


# --------------------------------------------------------------------------- #
# End-to-end


def cross_check(
    p: M.Program, steps: int = 50, samples: int = 5, seed: int = DEFAULT_SEED
) -> LawReport:
    """``run_prog`` against the translated YampaCore term on random row streams."""
    report = well_typed(p)
    if not report.ok:
        raise NotWellTyped(report.render())
    sf = translate(p)
    rng = random.Random(f"{seed}:crosscheck")
    failures = []
    for _ in range(samples):
        sub = rng.getrandbits(32)
        rows = gen.random_rows(random.Random(sub), p, steps)
        direct = M.run_prog(p, rows)
        packed = Y.run_sf(sf, [pack_values(row) for row in rows])
        via = [unpack_values(o, p.k_out) for o in packed]
        if direct != via:
            k = next(i for i, (x, y) in enumerate(zip(direct, via)) if x != y)
            failures.append(
                Counterexample(sub, f"step {k}: run={list(map(str, direct[k]))} translated={list(map(str, via[k]))}")
            )
    return LawReport("crosscheck", samples, tuple(failures))
