"""Concrete resource memory with access rights.

A memory is a plain ``dict[int, Cell]`` treated as an immutable snapshot:
operations never mutate their argument and return a fresh dict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

from .errors import NotReadable, NotWritable
from .host import Ty, Val, has_type


class Status:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Internal(Status):
    def __str__(self):
        return "internal"


@dataclass(frozen=True, slots=True)
class Input(Status):
    readable: bool

    def __str__(self):
        return f"input({str(self.readable).lower()})"


@dataclass(frozen=True, slots=True)
class Output(Status):
    writable: bool

    def __str__(self):
        return f"output({str(self.writable).lower()})"


INTERNAL = Internal()
INPUT_FRESH = Input(True)
INPUT_SPENT = Input(False)
OUTPUT_FRESH = Output(True)
OUTPUT_DONE = Output(False)

DEFINED = (INTERNAL, INPUT_FRESH, OUTPUT_DONE)


@dataclass(frozen=True, slots=True)
class Cell:
    status: Status
    ty: Ty
    val: Optional[Val] = None

    def __str__(self):
        v = "undef" if self.val is None else str(self.val)
        return f"Cell({self.status}, {self.ty}, {v})"


Memory = Dict[int, Cell]


def cell_ok(c: Cell) -> bool:
    """Cell invariant: defined statuses carry a well-typed value, the others none."""
    if c.status in DEFINED:
        return c.val is not None and has_type(c.val, c.ty)
    return c.val is None


def readable(r, sigma: Memory) -> bool:
    c = sigma.get(r.id)
    return (
        c is not None
        and (c.status == INTERNAL or c.status == INPUT_FRESH)
        and c.ty == r.ty
        and c.val is not None
        and has_type(c.val, r.ty)
    )


def writable(r, sigma: Memory) -> bool:
    c = sigma.get(r.id)
    if c is None or c.ty != r.ty:
        return False
    if c.status == INTERNAL:
        return c.val is not None and has_type(c.val, r.ty)
    return c.status == OUTPUT_FRESH and c.val is None


def read_mem(r, sigma: Memory) -> tuple[Val, Memory]:
    if not readable(r, sigma):
        raise NotReadable(r.id)
    c = sigma[r.id]
    if c.status == INTERNAL:
        return c.val, sigma
    out = dict(sigma)
    out[r.id] = Cell(INPUT_SPENT, c.ty, None)
    return c.val, out


def write_mem(r, sigma: Memory, v: Val) -> Memory:
    if not writable(r, sigma) or not has_type(v, r.ty):
        raise NotWritable(r.id)
    c = sigma[r.id]
    out = dict(sigma)
    out[r.id] = Cell(INTERNAL if c.status == INTERNAL else OUTPUT_DONE, c.ty, v)
    return out
