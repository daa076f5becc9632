"""Incremental lexer for MiniSpec.

The lexer accepts text in arbitrary chunks and only emits a lexeme once no
further input could extend it, so a skill name or integer split across two
chunks comes out whole. Call ``finish()`` at end of stream to flush the tail.
"""

from dataclasses import dataclass
from enum import Enum

from .errors import LexError


class Kind(Enum):
    IDENT = "IDENT"
    INT = "INT"
    FLOAT = "FLOAT"
    STRING = "STRING"
    BOOL = "BOOL"
    VAR = "VAR"
    ARROW = "ARROW"
    QMARK = "QMARK"
    LBRACE = "LBRACE"
    RBRACE = "RBRACE"
    LPAREN = "LPAREN"
    RPAREN = "RPAREN"
    SEMI = "SEMI"
    COMMA = "COMMA"
    ASSIGN = "ASSIGN"
    CMP_GT = "CMP_GT"
    CMP_LT = "CMP_LT"
    CMP_EQ = "CMP_EQ"
    CMP_NE = "CMP_NE"
    AMP = "AMP"
    PIPE = "PIPE"
    REPLAN = "REPLAN"


@dataclass(frozen=True)
class Lexeme:
    kind: Kind
    text: str
    byte_span: tuple  # (start, end), end exclusive; strings include quotes

    def __repr__(self):
        return f"{self.kind.value}({self.text!r}@{self.byte_span[0]})"


_SINGLE = {
    "?": Kind.QMARK,
    "{": Kind.LBRACE,
    "}": Kind.RBRACE,
    "(": Kind.LPAREN,
    ")": Kind.RPAREN,
    ";": Kind.SEMI,
    ",": Kind.COMMA,
    ">": Kind.CMP_GT,
    "<": Kind.CMP_LT,
    "&": Kind.AMP,
    "|": Kind.PIPE,
}

_KEYWORDS = {"replan": Kind.REPLAN, "rp": Kind.REPLAN,
             "True": Kind.BOOL, "False": Kind.BOOL}


def _is_word(c):
    return c.isalnum() or c == "_"


class IncrementalLexer:
    def __init__(self):
        self._buf = ""
        self._base = 0  # byte offset of _buf[0] in the full input
        self._finished = False

    def feed(self, chunk):
        """Append a chunk and return the lexemes it completed."""
        if self._finished:
            raise RuntimeError("lexer already finished")
        self._buf += chunk
        return self._scan(at_eof=False)

    def finish(self):
        """Signal end of stream and flush any buffered tail."""
        self._finished = True
        return self._scan(at_eof=True)

    # -- scanning ---------------------------------------------------------

    def _scan(self, at_eof):
        out = []
        pos = 0
        buf = self._buf
        n = len(buf)
        while pos < n:
            c = buf[pos]
            if c.isspace():
                pos += 1
                continue
            start = pos
            if c in _SINGLE:
                out.append(self._emit(_SINGLE[c], c, start, pos + 1))
                pos += 1
            elif c.isalpha():
                end = pos + 1
                while end < n and _is_word(buf[end]):
                    end += 1
                if end == n and not at_eof:
                    break  # word may continue in the next chunk
                text = buf[pos:end]
                kind = _KEYWORDS.get(text, Kind.IDENT)
                out.append(self._emit(kind, text, start, end))
                pos = end
            elif c == "_":
                end = pos + 1
                while end < n and buf[end].isdigit():
                    end += 1
                if end == n and not at_eof:
                    break
                if end == pos + 1:
                    raise LexError(self._base + pos, buf[pos:pos + 2],
                                   "expected digits after '_'")
                out.append(self._emit(Kind.VAR, buf[pos:end], start, end))
                pos = end
            elif c == "$":
                end = pos + 1
                while end < n and buf[end].isdigit():
                    end += 1
                if end == n and not at_eof:
                    break
                if end == pos + 1:
                    raise LexError(self._base + pos, buf[pos:pos + 2],
                                   "expected digits after '$'")
                out.append(self._emit(Kind.IDENT, buf[pos:end], start, end))
                pos = end
            elif c.isdigit():
                end = pos + 1
                while end < n and buf[end].isdigit():
                    end += 1
                is_float = False
                if end < n and buf[end] == ".":
                    frac = end + 1
                    while frac < n and buf[frac].isdigit():
                        frac += 1
                    if frac == end + 1 and frac == n and not at_eof:
                        break  # "12." could still gain digits
                    if frac > end + 1:
                        is_float = True
                        end = frac
                    # a bare trailing '.' is left for the next token to reject
                if end == n and not at_eof:
                    break
                kind = Kind.FLOAT if is_float else Kind.INT
                out.append(self._emit(kind, buf[pos:end], start, end))
                pos = end
            elif c in "'\"":
                end = buf.find(c, pos + 1)
                if end < 0:
                    if at_eof:
                        raise LexError(self._base + pos, buf[pos:],
                                       "unterminated string")
                    break
                out.append(self._emit(Kind.STRING, buf[pos + 1:end], start, end + 1))
                pos = end + 1
            elif c == "-":
                if pos + 1 >= n:
                    if at_eof:
                        raise LexError(self._base + pos, "-", "dangling '-'")
                    break
                if buf[pos + 1] != ">":
                    raise LexError(self._base + pos, buf[pos:pos + 2])
                out.append(self._emit(Kind.ARROW, "->", start, pos + 2))
                pos += 2
            elif c == "=":
                if pos + 1 >= n and not at_eof:
                    break
                if pos + 1 < n and buf[pos + 1] == "=":
                    out.append(self._emit(Kind.CMP_EQ, "==", start, pos + 2))
                    pos += 2
                else:
                    out.append(self._emit(Kind.ASSIGN, "=", start, pos + 1))
                    pos += 1
            elif c == "!":
                if pos + 1 >= n:
                    if at_eof:
                        raise LexError(self._base + pos, "!", "dangling '!'")
                    break
                if buf[pos + 1] != "=":
                    raise LexError(self._base + pos, buf[pos:pos + 2])
                out.append(self._emit(Kind.CMP_NE, "!=", start, pos + 2))
                pos += 2
            else:
                raise LexError(self._base + pos, c)
        self._base += pos
        self._buf = buf[pos:]
        return out

    def _emit(self, kind, text, start, end):
        return Lexeme(kind, text, (self._base + start, self._base + end))


def lex(text):
    """Lex a complete string in one shot."""
    lx = IncrementalLexer()
    out = lx.feed(text)
    out += lx.finish()
    return out
