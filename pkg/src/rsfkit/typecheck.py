"""Resource-usage checking by abstract interpretation over status tags.

Inputs must be read exactly once per step, outputs written exactly once,
internals are unconstrained.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

from .errors import NotReadableAbstract, NotWritableAbstract, TypeMismatch
from .host import UNIT, Ty, has_type
from .memory import (
    DEFINED,
    INPUT_FRESH,
    INPUT_SPENT,
    INTERNAL,
    OUTPUT_DONE,
    OUTPUT_FRESH,
    Memory,
    Status,
)
from .molholes import Arr, Comp, First, Get, Program, Ref, RSFTerm, Set, infer_rsf

Tag = tuple[Status, Ty]
AMem = Dict[int, Tag]


def models(sigma: Memory, amem: AMem) -> bool:
    """Is ``sigma`` a concrete model of ``amem``?"""
    if sigma.keys() != amem.keys():
        return False
    for n, (status, ty) in amem.items():
        c = sigma[n]
        if c.status != status or c.ty != ty:
            return False
        if status in DEFINED and (c.val is None or not has_type(c.val, ty)):
            return False
    return True


def _tag_str(tag) -> str:
    return "absent" if tag is None else f"({tag[0]}, {tag[1]})"


def abs_read(r: Ref, amem: AMem, path=()) -> AMem:
    tag = amem.get(r.id)
    if tag == (INTERNAL, r.ty):
        return amem
    if tag == (INPUT_FRESH, r.ty):
        out = dict(amem)
        out[r.id] = (INPUT_SPENT, r.ty)
        return out
    raise NotReadableAbstract(r.id, _tag_str(tag), path)


def abs_write(r: Ref, amem: AMem, path=()) -> AMem:
    tag = amem.get(r.id)
    if tag == (INTERNAL, r.ty):
        return amem
    if tag == (OUTPUT_FRESH, r.ty):
        out = dict(amem)
        out[r.id] = (OUTPUT_DONE, r.ty)
        return out
    raise NotWritableAbstract(r.id, _tag_str(tag), path)


def abs_step(t: RSFTerm, amem: AMem, path=()) -> AMem:
    if isinstance(t, Arr):
        return amem
    if isinstance(t, First):
        return abs_step(t.inner, amem, path + (0,))
    if isinstance(t, Comp):
        return abs_step(t.second, abs_step(t.first, amem, path + (0,)), path + (1,))
    if isinstance(t, Get):
        return abs_read(t.r, amem, path)
    if isinstance(t, Set):
        return abs_write(t.r, amem, path)
    raise TypeError(f"not a Molholes term: {t!r}")


def abs_init(p: Program) -> AMem:
    amem: AMem = {}
    for n, t in zip(p.input_ids(), p.inputs):
        amem[n] = (INPUT_FRESH, t)
    for n, (_, t) in zip(p.internal_ids(), p.internals):
        amem[n] = (INTERNAL, t)
    for n, t in zip(p.output_ids(), p.outputs):
        amem[n] = (OUTPUT_FRESH, t)
    return amem


# Clause names used in diagnostics.
CLAUSE_VALUE_TYPE = "value-type"
CLAUSE_ACCESS = "resource-access"
CLAUSE_INPUTS = "inputs-consumed"
CLAUSE_OUTPUTS = "outputs-written"


@dataclass
class Report:
    ok: bool
    clause: str | None = None
    diagnostics: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def render(self) -> str:
        if self.ok:
            return "OK"
        return "\n".join([f"FAIL [{self.clause}]"] + [f"  {d}" for d in self.diagnostics])


def well_typed(p: Program) -> Report:
    try:
        out = infer_rsf(p.term, UNIT)
    except TypeMismatch as e:
        return Report(False, CLAUSE_VALUE_TYPE, [str(e)])
    if out != UNIT:
        return Report(False, CLAUSE_VALUE_TYPE, [f"program term returns {out}, expected unit"])
    try:
        final = abs_step(p.term, abs_init(p))
    except (NotReadableAbstract, NotWritableAbstract) as e:
        return Report(False, CLAUSE_ACCESS, [str(e)])
    unread = [n for n in p.input_ids() if final[n][0] != INPUT_SPENT]
    if unread:
        return Report(
            False,
            CLAUSE_INPUTS,
            [f"input {n} is never read" for n in unread],
        )
    unwritten = [n for n in p.output_ids() if final[n][0] != OUTPUT_DONE]
    if unwritten:
        return Report(
            False,
            CLAUSE_OUTPUTS,
            [f"output {n} is never written" for n in unwritten],
        )
    return Report(True)

