"""Parser: grammar coverage, both call syntaxes, incremental events."""

import pytest

from minispec import ast
from minispec.errors import ParseError, PositionalRefOutsidePlan
from minispec.parser import (PLAN, SKILL_DEFINITION, IncrementalParser,
                             parse_program)
from minispec.printer import serialize


def stmts(text, mode=PLAN):
    return parse_program(text, mode).statements


def test_single_call():
    (s,) = stmts("mf(120)")
    assert isinstance(s, ast.CallStmt)
    assert s.call.callee == "mf"
    assert s.call.args == [ast.Lit(120)]


def test_assignment():
    (s,) = stmts("_1=iv('cup')")
    assert isinstance(s, ast.AssignStmt)
    assert s.var_index == 1
    assert s.call.args == [ast.Lit("cup")]


def test_return_variants():
    assert stmts("->True")[0].operand == ast.Lit(True)
    assert stmts("->_2")[0].operand == ast.VarRef(2)
    assert stmts("->42")[0].operand == ast.Lit(42)
    assert stmts("->'ok'")[0].operand == ast.Lit("ok")


def test_replan_spellings():
    assert isinstance(stmts("rp")[0], ast.ReplanStmt)
    assert isinstance(stmts("replan")[0], ast.ReplanStmt)


def test_loop():
    (s,) = stmts("3{mf(10);tc(5)}")
    assert isinstance(s, ast.LoopStmt)
    assert s.count == 3
    assert len(s.body) == 2
    assert s.body.closed


def test_conditional_with_call_lhs():
    (s,) = stmts("?iv('cup')==True{->True}")
    assert isinstance(s, ast.IfStmt)
    assert isinstance(s.cond, ast.Compare)
    assert isinstance(s.cond.lhs, ast.Call)
    assert s.cond.op == "=="


def test_and_binds_tighter_than_or():
    (s,) = stmts("?_1==True|_2==True&_3==True{rp}", SKILL_DEFINITION)
    # a | (b & c)
    assert isinstance(s.cond, ast.Or)
    assert isinstance(s.cond.right, ast.And)


def test_connectives_left_associative():
    (s,) = stmts("?_1==1&_2==2&_3==3{rp}")
    assert isinstance(s.cond, ast.And)
    assert isinstance(s.cond.left, ast.And)


def test_statement_after_brace_needs_no_semicolon():
    out = stmts("?_1==True{->True}mf(10)")
    assert len(out) == 2


def test_nested_composites():
    (s,) = stmts("2{?_1==True{3{mf(1)}}}")
    inner_if = s.body.statements[0]
    assert isinstance(inner_if, ast.IfStmt)
    assert isinstance(inner_if.body.statements[0], ast.LoopStmt)


def test_comma_call_only_in_skill_mode():
    (s,) = stmts("mf,120", SKILL_DEFINITION)
    assert s.call.callee == "mf"
    assert s.call.args == [ast.Lit(120)]
    with pytest.raises(ParseError):
        parse_program("mf,120", PLAN)


def test_posref_only_in_skill_mode():
    (s,) = stmts("_1=iv,$1", SKILL_DEFINITION)
    assert s.call.args == [ast.PosRef(1)]
    with pytest.raises(PositionalRefOutsidePlan):
        parse_program("iv($1)", PLAN)


def test_paren_call_allowed_in_skill_mode_too():
    s, ret = stmts("?o($1)==True{a();->True}->False", SKILL_DEFINITION)
    assert isinstance(s, ast.IfStmt)
    assert isinstance(ret, ast.ReturnStmt)


def test_call_args_are_values_not_expressions():
    with pytest.raises(ParseError):
        parse_program("mf(iv('cup'))")


def test_unbalanced_brace_fails_at_finish():
    with pytest.raises(ParseError):
        parse_program("3{mf(10)")


def test_stray_rbrace():
    with pytest.raises(ParseError):
        parse_program("mf(10)}")


def test_missing_condition():
    with pytest.raises(ParseError):
        parse_program("?{mf(10)}")


def test_loop_count_must_be_integer_literal():
    with pytest.raises(ParseError):
        parse_program("_1{mf(10)}")


def test_empty_program():
    assert stmts("") == []


def test_trailing_semicolon_tolerated():
    assert len(stmts("mf(10);")) == 1


# -- incremental events --------------------------------------------------------

def feed_all(text, mode=PLAN, chunk=1):
    p = IncrementalParser(mode)
    events = []
    for i in range(0, len(text), chunk):
        events += p.feed(text[i:i + chunk])
    events += p.finish()
    return p, events


def test_elementary_unit_event():
    p, events = feed_all("mf(120);tc(45)")
    tops = [e for e in events if e[0] == "stmt" and e[2] == 0]
    assert len(tops) == 2


def test_composite_header_is_a_unit_before_body_completes():
    p = IncrementalParser(PLAN)
    events = p.feed("3{")
    opens = [e for e in events if e[0] == "open"]
    assert len(opens) == 1
    stmt = opens[0][1]
    assert isinstance(stmt, ast.LoopStmt)
    assert not stmt.body.closed
    events = p.feed("mf(10)}")
    assert any(e[0] == "close" for e in events)
    assert stmt.body.closed
    p.finish()


def test_conditional_header_unit_requires_full_condition():
    p = IncrementalParser(PLAN)
    assert not [e for e in p.feed("?_1==") if e[0] == "open"]
    opens = [e for e in p.feed("True{") if e[0] == "open"]
    assert len(opens) == 1
    p.feed("rp}")
    p.finish()


def test_mid_statement_chunk_emits_nothing():
    p = IncrementalParser(PLAN)
    assert p.feed("mf(1") == []
    out = p.feed("20);")
    assert [e[0] for e in out] == ["stmt"]


CORPUS = [
    "mf(120)",
    "_1=iv('cup');?_1==True{->True}",
    "8{_1=q('x');?_1!=False{->_1}tc(45)}->False",
    "?_1>0.6&_2<0.4{tu(15)};l('done')",
    "2{3{mf(1)};tc(90)}",
]


@pytest.mark.parametrize("text", CORPUS)
@pytest.mark.parametrize("chunk", [1, 2, 3, 7])
def test_chunked_equals_batch(text, chunk):
    _, events = feed_all(text, chunk=chunk)
    batch = parse_program(text)
    p, _ = feed_all(text, chunk=len(text) or 1)
    assert serialize(p.program) == serialize(batch)
