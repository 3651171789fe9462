import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsfkit import gen
from rsfkit.cli import main
from rsfkit.errors import LayoutError, ParseError
from rsfkit.host import ID, NAT, SWAP, TT, B, N, P, Pairing, Prim, Prod, ProdF
from rsfkit.molholes import Ref, delay_program, naturals_program, relay_program
from rsfkit.rewrite import NormalForm
from rsfkit.syntax import (
    parse_fn,
    parse_program,
    parse_row,
    parse_sf,
    parse_type,
    parse_value,
    render,
)
from rsfkit import yampa as Y

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"
seeds = st.integers(0, 2**32 - 1)


def test_parse_values_and_types():
    assert parse_value("(1,(tt,true))") == P(N(1), P(TT, B(True)))
    assert parse_type("(prod nat (prod unit bool))") == Prod(NAT, Prod(parse_type("unit"), parse_type("bool")))
    assert parse_fn("prod(prim(inc),id)") == ProdF(Prim("inc"), ID)
    assert parse_sf("(loop 0 (arr swap))") == Y.Loop(N(0), Y.Arr(SWAP))


def test_program_files_match_builders():
    assert parse_program((PROGRAMS / "naturals.rsf").read_text()) == naturals_program()
    assert parse_program((PROGRAMS / "delay.rsf").read_text()) == delay_program()
    assert parse_program((PROGRAMS / "relay.rsf").read_text()) == relay_program()


def test_layout_error():
    text = "(program (inputs nat) (internals (nat 0)) (outputs nat) (term (get 9)))"
    with pytest.raises(LayoutError):
        parse_program(text)


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("", 1, 1),
        ("(program (inputs nat)\n  (internals) (outputs) (term (arr idd)))", 2, 36),
        ("(program (inputs nat) (internals) (outputs) (term (arr id))) extra", 1, 62),
    ],
)
def test_parse_errors_carry_positions(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_program(text)
    assert (e.value.line, e.value.col) == (line, col)


def test_render_examples():
    nf = NormalForm((Ref(NAT, 0),), ID, (Ref(NAT, 2),))
    assert render(nf) == "(comp (get 0) (comp (arr id) (set 2)))"
    assert render(Y.Arr(ID)) == "(arr id)"
    assert render(Pairing(ID, Prim("inc"))) == "pair(id,prim(inc))"


def test_parse_row():
    assert parse_row("1 (2,true) tt") == [N(1), P(N(2), B(True)), TT]


def test_render_roundtrip_examples():
    for p in (naturals_program(), delay_program(), relay_program()):
        assert parse_program(render(p)) == p


@settings(max_examples=200)
@given(seeds)
def test_render_roundtrip_generated(seed):
    rng = random.Random(seed)
    p = gen.gen_program(rng)
    assert parse_program(render(p)) == p
    ty = gen.random_type(rng)
    t, _ = gen.gen_sf(rng, ty)
    assert parse_sf(render(t)) == t


# --------------------------------------------------------------------------- #
# Commands


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check(capsys):
    code, out, _ = run(capsys, "check", PROGRAMS / "naturals.rsf")
    assert (code, out) == (0, "OK\n")


def test_check_failure(tmp_path, capsys):
    f = tmp_path / "bad.rsf"
    f.write_text("(program (inputs nat) (internals) (outputs nat) (term (comp (get 0) (arr fst))))")
    code, out, _ = run(capsys, "check", f)
    assert code == 1
    assert out.startswith("FAIL [outputs-written]")


def test_parse_error_exit_code(tmp_path, capsys):
    f = tmp_path / "empty.rsf"
    f.write_text("")
    code, _, err = run(capsys, "check", f)
    assert code == 2
    assert "1:1" in err


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check", "/nonexistent/file.rsf")[0] == 2


def test_run_naturals(capsys):
    code, out, _ = run(capsys, "run", PROGRAMS / "naturals.rsf", "--steps", 10)
    assert code == 0
    assert out.split() == [str(i) for i in range(10)]


def test_run_delay(capsys):
    code, out, _ = run(capsys, "run", PROGRAMS / "delay.rsf", "--steps", 3, "--inputs", PROGRAMS / "delay.in")
    assert (code, out) == (0, "0\n5\n7\n")


def test_run_too_many_steps(capsys):
    code, _, err = run(capsys, "run", PROGRAMS / "delay.rsf", "--steps", 4, "--inputs", PROGRAMS / "delay.in")
    assert code == 2
    assert "exceeds" in err


def test_normalize_and_translate(capsys):
    code, out, _ = run(capsys, "normalize", PROGRAMS / "relay.rsf")
    assert code == 0
    assert out.startswith("(comp (get 0) (comp (arr ")
    assert out.rstrip().endswith("(set 1)))")
    code, out, _ = run(capsys, "translate", PROGRAMS / "relay.rsf")
    assert code == 0
    assert parse_sf(out).__class__ is Y.Comp


def test_laws_command(capsys):
    code, out, _ = run(capsys, "laws", "--samples", 3, "--seed", 1, "--steps", 5, "--negatives")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "LAW monad-3a PASS tried=3 failures=0"
    assert sum(ln.startswith("LAW ") for ln in lines) == 37
    assert all(" REFUTED " in ln for ln in lines if ln.startswith("NEG "))


def test_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("RSFKIT_SEED", "5")
    a = run(capsys, "laws", "--samples", 2, "--steps", 3)
    b = run(capsys, "laws", "--samples", 2, "--steps", 3, "--seed", 5)
    assert a == b
    monkeypatch.setenv("RSFKIT_SEED", "x")
    assert run(capsys, "laws", "--samples", 1)[0] == 2


def test_crosscheck_command(capsys):
    code, out, _ = run(capsys, "crosscheck", PROGRAMS / "delay.rsf", "--steps", 20)
    assert (code, out) == (0, "LAW crosscheck PASS tried=5 failures=0\n")
