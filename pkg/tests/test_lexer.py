"""Lexer: whole-string and chunked feeding must agree lexeme for lexeme."""

import pytest
from hypothesis import given, strategies as st

from minispec.errors import LexError
from minispec.lexer import IncrementalLexer, Kind, lex


def kinds(text):
    return [l.kind for l in lex(text)]


def test_simple_call():
    out = lex("mf(120);")
    assert [l.kind for l in out] == [Kind.IDENT, Kind.LPAREN, Kind.INT,
                                     Kind.RPAREN, Kind.SEMI]
    assert out[0].text == "mf"
    assert out[2].text == "120"


def test_byte_spans_are_exclusive_and_contiguous():
    out = lex("_1=iv('cup')")
    assert out[0].byte_span == (0, 2)     # _1
    assert out[1].byte_span == (2, 3)     # =
    assert out[2].byte_span == (3, 5)     # iv
    assert out[-1].byte_span[1] == 12


def test_string_keeps_inner_text_only():
    (tok,) = lex("'hello there'")
    assert tok.kind == Kind.STRING
    assert tok.text == "hello there"
    assert tok.byte_span == (0, 13)


def test_double_quoted_string():
    (tok,) = lex('"it\'s"')
    assert tok.text == "it's"


def test_keywords_and_bools():
    assert kinds("replan") == [Kind.REPLAN]
    assert kinds("rp") == [Kind.REPLAN]
    assert kinds("True False") == [Kind.BOOL, Kind.BOOL]


def test_comparison_operators():
    assert kinds("==") == [Kind.CMP_EQ]
    assert kinds("!=") == [Kind.CMP_NE]
    assert kinds("<") == [Kind.CMP_LT]
    assert kinds(">") == [Kind.CMP_GT]
    assert kinds("=") == [Kind.ASSIGN]


def test_arrow_and_connectives():
    assert kinds("->") == [Kind.ARROW]
    assert kinds("&|") == [Kind.AMP, Kind.PIPE]


def test_numbers():
    out = lex("12 3.5 0")
    assert [l.kind for l in out] == [Kind.INT, Kind.FLOAT, Kind.INT]


def test_var_and_posref():
    out = lex("_12 $3")
    assert out[0].kind == Kind.VAR
    assert out[0].text == "_12"
    assert out[1].kind == Kind.IDENT
    assert out[1].text == "$3"


def test_unterminated_string_at_eof():
    lx = IncrementalLexer()
    lx.feed("'oops")
    with pytest.raises(LexError):
        lx.finish()


def test_illegal_character():
    with pytest.raises(LexError) as exc:
        lex("mf(120)#")
    assert exc.value.position == 7


def test_dangling_bang():
    with pytest.raises(LexError):
        lex("_1 !")


def test_split_identifier_across_chunks():
    lx = IncrementalLexer()
    assert lx.feed("mo") == []          # could still grow
    assert lx.feed("ve_forward(") != []  # 'move_forward' and '(' complete
    rest = lx.feed("12") + lx.finish()
    assert [l.text for l in rest] == ["12"]


def test_split_string_across_chunks():
    lx = IncrementalLexer()
    assert lx.feed("'cha") == []
    out = lx.feed("ir'")
    assert [l.text for l in out] == ["chair"]
    lx.finish()


def test_split_float_across_chunks():
    lx = IncrementalLexer()
    assert lx.feed("3") == []
    assert lx.feed(".") == []
    out = lx.feed("5;")
    assert [l.text for l in out] == ["3.5", ";"]


CORPUS = [
    "mf(120);tc(45)",
    "_1=iv('cup');?_1==True{->True}",
    "8{_1=q('x');?_1!=False{->_1}tc(45)}->False",
    "?_1>0.6&_2<0.4|_3==True{rp}",
    "10{ml(25);mr(3.5)};l('done')",
]


@given(data=st.data(), text=st.sampled_from(CORPUS))
def test_chunking_invariance(data, text):
    # arbitrary chunk boundaries never change the lexeme stream
    cuts = data.draw(st.lists(st.integers(0, len(text)), max_size=6))
    bounds = sorted(set([0, len(text)] + cuts))
    lx = IncrementalLexer()
    out = []
    for a, b in zip(bounds, bounds[1:]):
        out += lx.feed(text[a:b])
    out += lx.finish()
    assert out == lex(text)
