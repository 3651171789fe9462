"""Text syntax for values, types, functions, terms and program files.

    (program (inputs TY*) (internals (TY VAL)*) (outputs TY*) (term TERM))

Values: ``tt true false 3 (v,w)``.  Types: ``unit bool nat (prod A B)``.
Functions: combinator names plus ``comp(f,g) pair(f,g) prod(f,g) const(v)
prim(name)``.  Terms: ``(arr f) (comp t t) (first t) (loop v t) (get N)
(set N)``.  ``;`` starts a comment running to end of line.
"""

from __future__ import annotations

import re
from typing import Union

from . import host as H
from . import molholes as M
from . import yampa as Y
from .errors import LayoutError, ParseError
from .rewrite import NormalForm, nf_to_term

_TOKEN = re.compile(r"\s+|;[^\n]*|[(),]|[A-Za-z_][A-Za-z0-9_]*|\d+|.")

_SIMPLE_FNS = {
    "id": H.ID,
    "fst": H.FST,
    "snd": H.SND,
    "dup": H.DUP,
    "sdup": H.SDUP,
    "swap": H.SWAP,
    "assoc": H.ASSOC,
    "unassoc": H.UNASSOC,
    "perm": H.PERM,
}
_FN_NAMES = {type(v): k for k, v in _SIMPLE_FNS.items()}


class _Tokens:
    def __init__(self, text: str):
        self.toks: list[tuple[str, int, int]] = []
        line, col = 1, 1
        for m in _TOKEN.finditer(text):
            s = m.group()
            if not (s.isspace() or s.startswith(";")):
                self.toks.append((s, line, col))
            for ch in s:
                if ch == "\n":
                    line, col = line + 1, 1
                else:
                    col += 1
        self.end = (line, col)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self) -> tuple[int, int]:
        return self.toks[self.i][1:] if self.i < len(self.toks) else self.end

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, *self.pos())

    def next(self) -> str:
        if self.i >= len(self.toks):
            raise self.error("unexpected end of input")
        s = self.toks[self.i][0]
        self.i += 1
        return s

    def expect(self, s: str) -> None:
        got = self.peek()
        if got != s:
            raise self.error(f"expected {s!r}, got {got!r}" if got else f"expected {s!r} at end of input")
        self.i += 1

    def ident(self) -> str:
        s = self.peek()
        if s is None or not (s[0].isalpha() or s[0] == "_"):
            raise self.error(f"expected a name, got {s!r}")
        self.i += 1
        return s

    def nat(self) -> int:
        s = self.peek()
        if s is None or not s.isdigit():
            raise self.error(f"expected a number, got {s!r}")
        self.i += 1
        return int(s)

    def done(self) -> None:
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek()!r}")


# --------------------------------------------------------------------------- #
# Parsers


def _val(ts: _Tokens) -> H.Val:
    s = ts.peek()
    if s == "(":
        ts.next()
        a = _val(ts)
        ts.expect(",")
        b = _val(ts)
        ts.expect(")")
        return H.P(a, b)
    if s is not None and s.isdigit():
        return H.N(ts.nat())
    name = ts.ident()
    if name == "tt":
        return H.TT
    if name in ("true", "false"):
        return H.B(name == "true")
    ts.i -= 1
    raise ts.error(f"unknown value {name!r}")


def _ty(ts: _Tokens) -> H.Ty:
    if ts.peek() == "(":
        ts.next()
        kw = ts.ident()
        if kw != "prod":
            ts.i -= 1
            raise ts.error(f"expected 'prod', got {kw!r}")
        a, b = _ty(ts), _ty(ts)
        ts.expect(")")
        return H.Prod(a, b)
    name = ts.ident()
    table = {"unit": H.UNIT, "bool": H.BOOL, "nat": H.NAT}
    if name not in table:
        ts.i -= 1
        raise ts.error(f"unknown type {name!r}")
    return table[name]


def _fn(ts: _Tokens) -> H.Fn:
    name = ts.ident()
    if name in _SIMPLE_FNS:
        return _SIMPLE_FNS[name]
    if name not in ("comp", "pair", "prod", "const", "prim"):
        ts.i -= 1
        raise ts.error(f"unknown function {name!r}")
    ts.expect("(")
    if name in ("comp", "pair", "prod"):
        f = _fn(ts)
        ts.expect(",")
        g = _fn(ts)
        out = {"comp": H.Compose, "pair": H.Pairing, "prod": H.ProdF}[name](f, g)
    elif name == "const":
        out = H.Const(_val(ts))
    elif name == "prim":
        p = ts.ident()
        if p not in H.PRIMS:
            ts.i -= 1
            raise ts.error(f"unknown primitive {p!r}")
        out = H.Prim(p)
    ts.expect(")")
    return out


def _term(ts: _Tokens, refs=None):
    """Yampa term when ``refs`` is None, otherwise a Molholes term."""
    ts.expect("(")
    kw = ts.ident()
    mod = Y if refs is None else M
    if kw == "arr":
        t = mod.Arr(_fn(ts))
    elif kw == "comp":
        t = mod.Comp(_term(ts, refs), _term(ts, refs))
    elif kw == "first":
        t = mod.First(_term(ts, refs))
    elif kw == "loop" and refs is None:
        t = Y.Loop(_val(ts), _term(ts))
    elif kw in ("get", "set") and refs is not None:
        line, col = ts.pos()
        rid = ts.nat()
        if rid >= len(refs):
            raise LayoutError(f"{line}:{col}: resource {rid} out of range (0..{len(refs) - 1})")
        t = (M.Get if kw == "get" else M.Set)(M.Ref(refs[rid], rid))
    else:
        ts.i -= 1
        raise ts.error(f"unknown term form {kw!r}")
    ts.expect(")")
    return t


def _section(ts: _Tokens, name: str, item):
    ts.expect("(")
    got = ts.ident()
    if got != name:
        ts.i -= 1
        raise ts.error(f"expected section {name!r}, got {got!r}")
    items = []
    while ts.peek() != ")":
        if ts.peek() is None:
            raise ts.error("unexpected end of input")
        items.append(item(ts))
    ts.expect(")")
    return items


def _internal(ts: _Tokens):
    ts.expect("(")
    ty = _ty(ts)
    v = _val(ts)
    ts.expect(")")
    return v, ty


def _parse(text: str, rule):
    ts = _Tokens(text)
    if ts.peek() is None:
        raise ts.error("empty input")
    out = rule(ts)
    ts.done()
    return out


def parse_value(text: str) -> H.Val:
    return _parse(text, _val)


def parse_type(text: str) -> H.Ty:
    return _parse(text, _ty)


def parse_fn(text: str) -> H.Fn:
    return _parse(text, _fn)


def parse_sf(text: str) -> Y.SFTerm:
    return _parse(text, _term)


def parse_program(text: str) -> M.Program:
    def rule(ts):
        ts.expect("(")
        kw = ts.ident()
        if kw != "program":
            ts.i -= 1
            raise ts.error(f"expected 'program', got {kw!r}")
        ins = _section(ts, "inputs", _ty)
        ints = _section(ts, "internals", _internal)
        outs = _section(ts, "outputs", _ty)
        layout = ins + [t for _, t in ints] + outs
        ts.expect("(")
        if ts.ident() != "term":
            ts.i -= 1
            raise ts.error("expected section 'term'")
        term = _term(ts, layout)
        ts.expect(")")
        ts.expect(")")
        return M.Program(inputs=ins, internals=ints, outputs=outs, term=term)

    return _parse(text, rule)


def parse_row(line: str) -> list[H.Val]:
    """Space-separated values (pairs may not contain spaces)."""
    return [parse_value(tok) for tok in line.split()]


# --------------------------------------------------------------------------- #
# Rendering


def render_fn(f: H.Fn) -> str:
    t = type(f)
    if t in _FN_NAMES:
        return _FN_NAMES[t]
    if t is H.Compose:
        return f"comp({render_fn(f.after)},{render_fn(f.before)})"
    if t is H.Pairing:
        return f"pair({render_fn(f.f)},{render_fn(f.g)})"
    if t is H.ProdF:
        return f"prod({render_fn(f.f)},{render_fn(f.g)})"
    if t is H.Const:
        return f"const({f.value})"
    if t is H.Prim:
        return f"prim({f.name})"
    if t is H.Opaque:
        return f"opaque({f.tag})"
    raise TypeError(f"not a host function: {f!r}")


def render_term(t) -> str:
    if isinstance(t, (Y.Arr, M.Arr)):
        return f"(arr {render_fn(t.f)})"
    if isinstance(t, (Y.Comp, M.Comp)):
        return f"(comp {render_term(t.first)} {render_term(t.second)})"
    if isinstance(t, (Y.First, M.First)):
        return f"(first {render_term(t.inner)})"
    if isinstance(t, Y.Loop):
        return f"(loop {t.state} {render_term(t.body)})"
    if isinstance(t, M.Get):
        return f"(get {t.r.id})"
    if isinstance(t, M.Set):
        return f"(set {t.r.id})"
    raise TypeError(f"not a term: {t!r}")


def render_program(p: M.Program) -> str:
    ins = " ".join(map(str, p.inputs))
    ints = " ".join(f"({t} {v})" for v, t in p.internals)
    outs = " ".join(map(str, p.outputs))
    return (
        "(program\n"
        f"  (inputs {ins})\n"
        f"  (internals {ints})\n"
        f"  (outputs {outs})\n"
        f"  (term {render_term(p.term)}))\n"
    ).replace(" )", ")")


def render(x: Union[M.Program, Y.SFTerm, M.RSFTerm, NormalForm, H.Fn, H.Val, H.Ty]) -> str:
    if isinstance(x, M.Program):
        return render_program(x)
    if isinstance(x, NormalForm):
        return render_term(nf_to_term(x))
    if isinstance(x, (Y.SFTerm, M.RSFTerm)):
        return render_term(x)
    if isinstance(x, H.Fn):
        return render_fn(x)
    return str(x)
