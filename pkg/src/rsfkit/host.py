"""Host language: first-order types, values and a combinator algebra of pure functions.

Functions are data (so rewrites can build new ones) and are compiled lazily to
Python closures; the closure is cached on the node.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import ShapeMismatch, TypeMismatch

# --------------------------------------------------------------------------- #
# Types


class Ty:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class UnitTy(Ty):
    def __str__(self):
        return "unit"


@dataclass(frozen=True, slots=True)
class BoolTy(Ty):
    def __str__(self):
        return "bool"


@dataclass(frozen=True, slots=True)
class NatTy(Ty):
    def __str__(self):
        return "nat"


@dataclass(frozen=True, slots=True)
class Prod(Ty):
    left: Ty
    right: Ty

    def __str__(self):
        return f"(prod {self.left} {self.right})"


UNIT = UnitTy()
BOOL = BoolTy()
NAT = NatTy()

# --------------------------------------------------------------------------- #
# Values


class Val:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Tt(Val):
    def __str__(self):
        return "tt"


@dataclass(frozen=True, slots=True)
class B(Val):
    value: bool

    def __post_init__(self):
        if not isinstance(self.value, bool):
            raise TypeError(f"B expects a bool, got {self.value!r}")

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True, slots=True)
class N(Val):
    value: int

    def __post_init__(self):
        if isinstance(self.value, bool) or not isinstance(self.value, int) or self.value < 0:
            raise TypeError(f"N expects a non-negative int, got {self.value!r}")

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True, slots=True)
class P(Val):
    fst: Val
    snd: Val

    def __str__(self):
        return f"({self.fst},{self.snd})"


TT = Tt()


def type_of(v: Val) -> Ty:
    if isinstance(v, P):
        return Prod(type_of(v.fst), type_of(v.snd))
    if isinstance(v, N):
        return NAT
    if isinstance(v, B):
        return BOOL
    if isinstance(v, Tt):
        return UNIT
    raise TypeError(f"not a host value: {v!r}")


def has_type(v: Val, ty: Ty) -> bool:
    if isinstance(ty, Prod):
        return isinstance(v, P) and has_type(v.fst, ty.left) and has_type(v.snd, ty.right)
    if ty is NAT or isinstance(ty, NatTy):
        return isinstance(v, N)
    if isinstance(ty, BoolTy):
        return isinstance(v, B)
    return isinstance(v, Tt)


# --------------------------------------------------------------------------- #
# Functions


class Fn:
    """Base class of host function terms."""

    __slots__ = ()


@dataclass(frozen=True)
class Id(Fn):
    pass


@dataclass(frozen=True)
class Const(Fn):
    value: Val


@dataclass(frozen=True)
class Fst(Fn):
    pass


@dataclass(frozen=True)
class Snd(Fn):
    pass


@dataclass(frozen=True)
class Dup(Fn):
    pass


@dataclass(frozen=True)
class SDup(Fn):
    """(x, y) -> ((x, y), y)"""


@dataclass(frozen=True)
class Swap(Fn):
    pass


@dataclass(frozen=True)
class Assoc(Fn):
    """((x, y), z) -> (x, (y, z))"""


@dataclass(frozen=True)
class Unassoc(Fn):
    """(x, (y, z)) -> ((x, y), z)"""


@dataclass(frozen=True)
class Perm(Fn):
    """((x, y), z) -> ((x, z), y)"""


@dataclass(frozen=True)
class Pairing(Fn):
    """x -> (f x, g x)"""

    f: Fn
    g: Fn


@dataclass(frozen=True)
class ProdF(Fn):
    """(x, y) -> (f x, g y)"""

    f: Fn
    g: Fn


@dataclass(frozen=True)
class Compose(Fn):
    """``before`` runs first, then ``after``."""

    after: Fn
    before: Fn


PRIMS = ("inc", "add", "dec", "isZero")


@dataclass(frozen=True)
class Prim(Fn):
    name: str

    def __post_init__(self):
        if self.name not in PRIMS:
            raise ValueError(f"unknown primitive {self.name!r}")


@dataclass(frozen=True)
class Opaque(Fn):
    """Escape hatch for an arbitrary pure function with a declared signature."""

    tag: str
    fn: Callable[[Val], Val] = field(compare=False, hash=False)
    dom: Ty = UNIT
    cod: Ty = UNIT


ID = Id()
FST = Fst()
SND = Snd()
DUP = Dup()
SDUP = SDup()
SWAP = Swap()
ASSOC = Assoc()
UNASSOC = Unassoc()
PERM = Perm()


def _nat(v):
    if type(v) is not N:
        raise ShapeMismatch(f"expected a natural, got {v}")
    return v.value


def _prim(name: str):
    if name == "inc":
        return lambda v: N(_nat(v) + 1)
    if name == "dec":
        return lambda v: N(max(_nat(v) - 1, 0))
    if name == "isZero":
        return lambda v: B(_nat(v) == 0)
    return lambda v: N(_nat(v.fst) + _nat(v.snd))


def _flatten(f: Fn) -> list[Fn]:
    """A Compose tree as the list of its parts in execution order."""
    out, todo = [], [f]
    while todo:
        g = todo.pop()
        if type(g) is Compose:
            todo.append(g.after)
            todo.append(g.before)
        else:
            out.append(g)
    return out


def _is_first(g: Fn) -> bool:
    return type(g) is ProdF and type(g.g) is Id


def _fuse(fs: list[Fn]) -> list[Callable[[Val], Val]]:
    """Compile a chain, fusing the rewiring idioms produced by normalisation.

    Each fused window allocates fewer intermediate pairs than the
    step-by-step chain.
    """
    out, i, n = [], 0, len(fs)
    while i < n:
        w = [type(g) for g in fs[i : i + 6]]
        if (
            w == [Unassoc, ProdF, Perm, ProdF, Perm, Assoc]
            and _is_first(fs[i + 1])
            and _is_first(fs[i + 3])
        ):
            f1, f2 = compile_fn(fs[i + 1].f), compile_fn(fs[i + 3].f)

            # (a, (c1, c2)) -> (c, (c1', c2'))
            def comp(v, f1=f1, f2=f2):
                c = v.snd
                r1 = f1(P(v.fst, c.fst))
                r2 = f2(P(r1.fst, c.snd))
                return P(r2.fst, P(r1.snd, r2.snd))

            out.append(comp)
            i += 6
        elif w[:3] == [Perm, ProdF, Perm] and _is_first(fs[i + 1]):
            g = compile_fn(fs[i + 1].f)

            # ((a, d), c) -> ((b, d), c')
            def first(v, g=g):
                p = v.fst
                r = g(P(p.fst, v.snd))
                return P(P(r.fst, p.snd), r.snd)

            out.append(first)
            i += 3
        else:
            out.append(compile_fn(fs[i]))
            i += 1
    return out


# Compiled closures skip shape checks on pairs: Tt, B and N have no
# ``fst``/``snd`` slots, so a bad shape surfaces as AttributeError, which
# ``eval_fn`` turns into ShapeMismatch.
def _build(f: Fn):
    t = type(f)
    if t is Id:
        return lambda v: v
    if t is Const:
        c = f.value
        return lambda v: c
    if t is Fst:
        return lambda v: v.fst
    if t is Snd:
        return lambda v: v.snd
    if t is Dup:
        return lambda v: P(v, v)
    if t is SDup:
        return lambda v: P(v, v.snd)
    if t is Swap:
        return lambda v: P(v.snd, v.fst)
    if t is Assoc:
        return lambda v: P(v.fst.fst, P(v.fst.snd, v.snd))
    if t is Unassoc:
        return lambda v: P(P(v.fst, v.snd.fst), v.snd.snd)
    if t is Perm:
        return lambda v: P(P(v.fst.fst, v.snd), v.fst.snd)
    if t is Pairing:
        a = compile_fn(f.f)
        if type(f.g) is Const:
            c = f.g.value
            return lambda v: P(a(v), c)
        b = compile_fn(f.g)
        return lambda v: P(a(v), b(v))
    if t is ProdF:
        a = compile_fn(f.f)
        if type(f.g) is Id:
            return lambda v: P(a(v.fst), v.snd)
        b = compile_fn(f.g)
        return lambda v: P(a(v.fst), b(v.snd))
    if t is Compose:
        parts = tuple(_fuse([g for g in _flatten(f) if type(g) is not Id]))
        if len(parts) == 2:
            first, second = parts
            return lambda v: second(first(v))

        def run(v):
            for g in parts:
                v = g(v)
            return v

        return run
    if t is Prim:
        return _prim(f.name)
    if t is Opaque:
        return f.fn
    raise TypeError(f"not a host function: {f!r}")


def compile_fn(f: Fn) -> Callable[[Val], Val]:
    try:
        return f.__dict__["_compiled"]
    except KeyError:
        c = _build(f)
        object.__setattr__(f, "_compiled", c)
        return c


def eval_fn(f: Fn, v: Val) -> Val:
    try:
        return compile_fn(f)(v)
    except AttributeError:
        raise ShapeMismatch(f"{type(f).__name__} applied to a value of the wrong shape: {v}") from None


def _expect_prod(ty: Ty, what: str) -> Prod:
    if not isinstance(ty, Prod):
        raise TypeMismatch(f"{what} expects a product, got {ty}")
    return ty


def infer_fn(f: Fn, ty: Ty) -> Ty:
    """Output type of ``f`` on inputs of type ``ty``."""
    t = type(f)
    if t is Id:
        return ty
    if t is Const:
        return type_of(f.value)
    if t is Fst:
        return _expect_prod(ty, "fst").left
    if t is Snd:
        return _expect_prod(ty, "snd").right
    if t is Dup:
        return Prod(ty, ty)
    if t is SDup:
        return Prod(_expect_prod(ty, "sdup"), ty.right)
    if t is Swap:
        p = _expect_prod(ty, "swap")
        return Prod(p.right, p.left)
    if t is Assoc:
        p = _expect_prod(ty, "assoc")
        q = _expect_prod(p.left, "assoc")
        return Prod(q.left, Prod(q.right, p.right))
    if t is Unassoc:
        p = _expect_prod(ty, "unassoc")
        q = _expect_prod(p.right, "unassoc")
        return Prod(Prod(p.left, q.left), q.right)
    if t is Perm:
        p = _expect_prod(ty, "perm")
        q = _expect_prod(p.left, "perm")
        return Prod(Prod(q.left, p.right), q.right)
    if t is Pairing:
        return Prod(infer_fn(f.f, ty), infer_fn(f.g, ty))
    if t is ProdF:
        p = _expect_prod(ty, "prod")
        return Prod(infer_fn(f.f, p.left), infer_fn(f.g, p.right))
    if t is Compose:
        return infer_fn(f.after, infer_fn(f.before, ty))
    if t is Prim:
        if f.name == "add":
            if ty != Prod(NAT, NAT):
                raise TypeMismatch(f"add expects (prod nat nat), got {ty}")
            return NAT
        if ty != NAT:
            raise TypeMismatch(f"{f.name} expects nat, got {ty}")
        return BOOL if f.name == "isZero" else NAT
    if t is Opaque:
        if ty != f.dom:
            raise TypeMismatch(f"opaque {f.tag} expects {f.dom}, got {ty}")
        return f.cod
    raise TypeError(f"not a host function: {f!r}")


# --------------------------------------------------------------------------- #
# Smart constructors used by the rewriters


def then(*fns: Fn) -> Fn:
    """Left-to-right composition, dropping identities."""
    out: Fn = ID
    for g in fns:
        if isinstance(g, Id):
            continue
        out = g if isinstance(out, Id) else Compose(g, out)
    return out


def fst_n(k: int) -> Fn:
    return then(*([FST] * k))


def first_n(k: int, f: Fn) -> Fn:
    """``f`` applied under ``k`` left projections: stack(k, Arr f) contracted."""
    for _ in range(k):
        f = ProdF(f, ID)
    return f


def contains_opaque(f: Fn) -> bool:
    if isinstance(f, Opaque):
        return True
    if isinstance(f, (Pairing, ProdF)):
        return contains_opaque(f.f) or contains_opaque(f.g)
    if isinstance(f, Compose):
        return contains_opaque(f.after) or contains_opaque(f.before)
    return False
