"""Canonical printing and round-trip stability."""

import pytest

from minispec.errors import OpenBodyError
from minispec.parser import (PLAN, SKILL_DEFINITION, IncrementalParser,
                             parse_program)
from minispec.printer import literal_text, serialize, serialize_statement


def canon(text, mode=PLAN):
    return serialize(parse_program(text, mode))


def test_canonical_uses_rp():
    assert canon("replan") == "rp"


def test_canonical_single_quotes():
    assert canon('iv("cup")') == "iv('cup')"


def test_string_with_apostrophe_keeps_double_quotes():
    assert canon('l("it\'s")') == 'l("it\'s")'


def test_whitespace_dropped():
    assert canon("mf( 120 ) ;\n tc( 45 )") == "mf(120);tc(45)"


def test_no_semicolon_after_brace():
    assert canon("?_1==True{->True}mf(10)") == "?_1==True{->True}mf(10)"
    assert canon("3{mf(1)}tc(5)") == "3{mf(1)}tc(5)"


def test_comma_calls_normalize_to_parens():
    assert canon("mf,120", SKILL_DEFINITION) == "mf(120)"
    assert canon("_1=iv,$1;?_1==True{->True}", SKILL_DEFINITION) == \
        "_1=iv($1);?_1==True{->True}"


def test_literal_text():
    assert literal_text(True) == "True"
    assert literal_text(False) == "False"
    assert literal_text(3) == "3"
    assert literal_text(3.5) == "3.5"
    assert literal_text("hi") == "'hi'"


def test_open_body_refuses_to_serialize():
    p = IncrementalParser(PLAN)
    p.feed("3{mf(10)")
    with pytest.raises(OpenBodyError):
        serialize(p.program)


def test_serialize_statement_allows_open_bodies():
    p = IncrementalParser(PLAN)
    p.feed("3{")
    stmt = p.program.statements[0]
    assert serialize_statement(stmt) == "3{}"


ROUND_TRIP = [
    "mf(120)",
    "rp",
    "->False",
    "_1=q('what is here?');?_1!=False{->_1}",
    "8{_1=iv('person');?_1==True{l('found');->True}tc(45)}l('none')",
    "?_1>0.6&_2<0.4|_3==True{tu(15)}",
    "2{3{mf(1)}tc(90)}",
]


@pytest.mark.parametrize("text", ROUND_TRIP)
def test_round_trip_fixed_point(text):
    once = canon(text)
    assert canon(once) == once


@pytest.mark.parametrize("text", ROUND_TRIP)
def test_round_trip_preserves_structure(text):
    # reparse of the canonical text serializes identically
    assert canon(canon(text)) == canon(text)
