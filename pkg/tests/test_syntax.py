from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from pislice.syntax import (
    NChoice,
    NInput,
    NNil,
    NOutput,
    NPar,
    ParseError,
    Program,
    from_de_bruijn,
    load,
    parse,
    parse_program,
    show,
    show_action,
    show_overlay,
    show_process,
    show_program,
    structural_diff,
    to_de_bruijn,
)
from pislice.terms import HOLE, NIL, TAU, BOut, Bang, Choice, In, Input, Nu, Out, Output, Par

from strategies import processes

FREE = ("a", "b", "c")


def test_nil():
    assert parse("0") == NNil()


def test_parallel_output_and_input():
    assert parse("free x; x<x>.0 | x(u).0") == NPar(NOutput("x", "x", NNil()), NInput("x", "u", NNil()))


def test_choice_of_outputs():
    assert parse("free x y z; x<y>.0 + x<z>.0") == NChoice(NOutput("x", "y", NNil()), NOutput("x", "z", NNil()))


def test_de_bruijn_input():
    prog = parse_program("free x; x(u).u<u>.0")
    assert to_de_bruijn(prog.body, prog.free) == (Input(0, Output(0, 0, NIL)), 1)


def test_de_bruijn_restriction():
    prog = parse_program("free x; new y. x<y>.0")
    assert to_de_bruijn(prog.body, prog.free) == (Nu(Output(1, 0, NIL)), 1)


def test_last_free_name_is_innermost():
    assert load("free x y; x<y>.0")[0] == Output(1, 0, NIL)


def test_from_de_bruijn_inverts_the_examples():
    assert show_process(Input(0, Output(0, 0, NIL)), ["x"]) == "x(x0).x0<x0>.0"
    assert show_process(Nu(Output(1, 0, NIL)), ["x"]) == "new x0.x<x0>.0"


def test_precedence_and_parentheses():
    p, _, _ = load("free x; x(u).0 + 0 | !x<x>.0")
    assert p == Par(Choice(Input(0, NIL), NIL), Bang(Output(0, 0, NIL)))
    assert show(parse("free x; x(u).(0 | 0) + (0 + 0)")) == "x(u).(0 | 0) + (0 + 0)"
    assert show(parse("free x; (0 | 0) | 0")) == "0 | 0 | 0"
    assert show(parse("free x; 0 | (0 | 0)")) == "0 | (0 | 0)"


def test_holes_and_erased_payloads():
    p, _, _ = load("free x; x<_>._ | _")
    assert p == Par(Output(0, None, HOLE), HOLE)


def test_comments_and_newlines():
    p, _, _ = load("free x; -- a comment\nx(u).\n  0 -- trailing\n")
    assert p == Input(0, NIL)


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("free x;\n  y<x>.0", 2, 3),
        ("free x; x(u).u<v>.0", 1, 16),
        ("free x; x<x>.0 |", 1, 17),
        ("free x; x<x>0", 1, 13),
        ("free x; x # 0", 1, 11),
    ],
)
def test_errors_carry_positions(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_program(text)
    assert (e.value.line, e.value.col) == (line, col)


def test_unbound_names_are_reported():
    with pytest.raises(ParseError, match="unbound"):
        parse("x<x>.0")


def test_actions_print_with_names():
    assert show_action(In(2), FREE) == "a"
    assert show_action(Out(0, 1), FREE) == "c<b>"
    assert show_action(Out(0, None), FREE) == "c<_>"
    assert show_action(BOut(1), FREE) == "b<ν>"
    assert show_action(TAU, FREE) == "τ"


@given(st.integers(0, 3).flatmap(lambda n: st.tuples(st.just(n), processes(n, holes=True))))
def test_print_then_parse_is_identity(case):
    n, p = case
    free = tuple(f"f{i}" for i in range(n))
    text = show_program(Program(free, from_de_bruijn(p, free)))
    assert load(text) == (p, n, free)


@given(processes(2, holes=True))
def test_parse_then_print_is_stable(p):
    text = show_program(Program(("a", "b"), from_de_bruijn(p, ("a", "b"))))
    again = show_program(parse_program(text))
    assert again == text


def test_overlay_paints_erased_parts():
    ref, _, free = load("free x; x(u).u<x>.0 | x<x>.0")
    r = Par(Input(0, Output(0, None, HOLE)), HOLE)
    assert show_overlay(r, ref, free, lambda s: "_") == "x(x0).x0<_>._ | _"
    assert show_overlay(r, ref, free, lambda s: f"[{s}]") == "x(x0).x0<[x]>.[0] | [x<x>.0]"


def test_structural_diff_flags_the_offending_node():
    ref, _, free = load("free x y; x<y>.0 | y(u).0")
    bad = Par(Output(1, 1, HOLE), HOLE)
    lines = structural_diff(bad, ref, free).splitlines()
    assert lines[0].startswith("slice")
    assert lines[1].split()[0] == "|" and "X" not in lines[1]
    assert " X " in lines[2] and "x<x>." in lines[2] and lines[2].rstrip().endswith("x<y>.")
