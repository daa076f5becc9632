"""Incremental (chunk-by-chunk) parser for MiniSpec.

The parser consumes lexemes as they arrive and emits executable units:

* ``("stmt", statement, depth)``  - an elementary statement completed at its
  terminating ``;`` / ``}`` / end of stream and appended to the body at
  ``depth`` (0 = top level),
* ``("open", statement, depth)``  - a composite statement whose header is
  complete (loop count or full condition plus ``{``); its body is still open
  and is appended to by later input,
* ``("close", depth)``            - the body at ``depth`` was closed by ``}``.

Feeding the same text in any chunking produces the same event sequence and
the same final program. Two modes exist: ``plan`` (what the LLM writes) and
``skill_definition`` (additionally allows ``$n`` positional refs and the
comma call form ``mf,120``).
"""

from . import ast
from .errors import ParseError, PositionalRefOutsidePlan
from .lexer import IncrementalLexer, Kind

PLAN = "plan"
SKILL_DEFINITION = "skill_definition"

_VALUE_KINDS = (Kind.INT, Kind.FLOAT, Kind.STRING, Kind.BOOL)
_TERMINATORS = (Kind.SEMI, Kind.RBRACE)


def _literal(lx):
    if lx.kind is Kind.INT:
        return ast.Lit(int(lx.text))
    if lx.kind is Kind.FLOAT:
        return ast.Lit(float(lx.text))
    if lx.kind is Kind.STRING:
        return ast.Lit(lx.text)
    if lx.kind is Kind.BOOL:
        return ast.Lit(lx.text == "True")
    raise ParseError(lx.byte_span[0], "a literal value", got=lx.text)


def _var_index(lx):
    digits = lx.text[1:]
    if digits.startswith("0") or not 1 <= int(digits) <= 99:
        raise ParseError(lx.byte_span[0], "a variable index in 1..99 "
                         "without leading zeros", got=lx.text)
    return int(digits)


class _Pending:
    """State of the statement currently being assembled."""

    __slots__ = ("kind", "phase", "callee", "args", "var_index", "operand",
                 "cond_lexemes", "count", "start")

    def __init__(self, kind, start):
        self.kind = kind
        self.phase = ""
        self.callee = None
        self.args = []
        self.var_index = None
        self.operand = None
        self.cond_lexemes = []
        self.count = None
        self.start = start


class IncrementalParser:
    def __init__(self, mode=PLAN):
        if mode not in (PLAN, SKILL_DEFINITION):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.lexer = IncrementalLexer()
        self.program = ast.Program()
        self._stack = [self.program.body]
        self._open_composites = []
        self._pend = None
        self._after_rbrace = False
        self._poison = None
        self.stamp = 0.0  # arrival time attached to units emitted next
        self.consumed = 0  # bytes fully represented by emitted units

    # -- public API ---------------------------------------------------------

    def feed(self, chunk):
        """Feed a text chunk; returns the executable units it completed."""
        return self._drive(lambda: self.lexer.feed(chunk), at_eof=False)

    def finish(self):
        """Signal end of stream, flush, and close the top-level body."""
        return self._drive(lambda: self.lexer.finish(), at_eof=True)

    def open_bodies(self):
        return list(self._stack)

    # -- driver -------------------------------------------------------------

    def _drive(self, produce, at_eof):
        if self._poison is not None:
            raise self._poison
        events = []
        try:
            for lx in produce():
                self._accept(lx, events)
            if at_eof:
                self._accept_eof(events)
        except ParseError as exc:
            self._poison = exc
            raise
        except Exception as exc:  # LexError included
            self._poison = exc
            raise
        return events

    # -- lexeme handling ----------------------------------------------------

    def _accept(self, lx, events):
        p = self._pend
        if p is None:
            self._start(lx, events)
            return
        handler = getattr(self, "_on_" + p.kind)
        handler(lx, events)

    def _start(self, lx, events):
        pos = lx.byte_span[0]
        if lx.kind is Kind.SEMI:
            if self._after_rbrace:
                self._after_rbrace = False  # optional separator after '}'
                return
            raise ParseError(pos, "a statement (empty statements are illegal)",
                             got=";")
        self._after_rbrace = False
        if lx.kind is Kind.RBRACE:
            self._close_body(lx, events)
            return
        if lx.kind is Kind.IDENT:
            if lx.text.startswith("$"):
                raise ParseError(pos, "a statement", got=lx.text)
            p = _Pending("call", pos)
            p.callee = lx.text
            p.phase = "after_name"
        elif lx.kind is Kind.VAR:
            p = _Pending("assign", pos)
            p.var_index = _var_index(lx)
            p.phase = "expect_assign"
        elif lx.kind is Kind.ARROW:
            p = _Pending("return", pos)
            p.phase = "expect_value"
        elif lx.kind is Kind.REPLAN:
            p = _Pending("replan", pos)
            p.phase = "done"
        elif lx.kind is Kind.QMARK:
            p = _Pending("cond", pos)
            p.phase = "collect"
        elif lx.kind is Kind.INT:
            p = _Pending("loop", pos)
            p.count = int(lx.text)
            p.phase = "expect_lbrace"
        else:
            raise ParseError(pos, "a statement", got=lx.text)
        self._pend = p

    # -- per-kind handlers ----------------------------------------------------

    def _on_call(self, lx, events):
        self._call_token(lx, events, self._pend)

    def _on_assign(self, lx, events):
        p = self._pend
        if p.phase == "expect_assign":
            if lx.kind is not Kind.ASSIGN:
                raise ParseError(lx.byte_span[0], "'='", got=lx.text)
            p.phase = "expect_callee"
        elif p.phase == "expect_callee":
            if lx.kind is not Kind.IDENT or lx.text.startswith("$"):
                raise ParseError(lx.byte_span[0], "a skill call", got=lx.text)
            p.callee = lx.text
            p.phase = "after_name"
        else:
            self._call_token(lx, events, p)

    def _call_token(self, lx, events, p):
        pos = lx.byte_span[0]
        if p.phase == "after_name":
            if lx.kind is Kind.LPAREN:
                p.phase = "paren_expect_arg_or_close"
            elif lx.kind is Kind.COMMA:
                if self.mode != SKILL_DEFINITION:
                    raise ParseError(pos, "'(' (the comma call form is only "
                                     "allowed in skill definitions)", got=",")
                p.phase = "comma_expect_arg"
            elif lx.kind in _TERMINATORS:
                self._complete(events, terminator=lx)
            else:
                raise ParseError(pos, "'(', ';' or '}'", got=lx.text)
        elif p.phase == "paren_expect_arg_or_close":
            if lx.kind is Kind.RPAREN:
                p.phase = "done"
            else:
                p.args.append(self._arg(lx))
                p.phase = "paren_expect_comma_or_close"
        elif p.phase == "paren_expect_comma_or_close":
            if lx.kind is Kind.RPAREN:
                p.phase = "done"
            elif lx.kind is Kind.COMMA:
                p.phase = "paren_expect_arg"
            else:
                raise ParseError(pos, "',' or ')'", got=lx.text)
        elif p.phase == "paren_expect_arg":
            p.args.append(self._arg(lx))
            p.phase = "paren_expect_comma_or_close"
        elif p.phase == "comma_expect_arg":
            if lx.kind in _TERMINATORS:
                raise ParseError(pos, "a value", got=lx.text)
            p.args.append(self._arg(lx))
            p.phase = "comma_expect_comma_or_end"
        elif p.phase == "comma_expect_comma_or_end":
            if lx.kind is Kind.COMMA:
                p.phase = "comma_expect_arg"
            elif lx.kind in _TERMINATORS:
                self._complete(events, terminator=lx)
            else:
                raise ParseError(pos, "',' , ';' or '}'", got=lx.text)
        elif p.phase == "done":
            if lx.kind in _TERMINATORS:
                self._complete(events, terminator=lx)
            else:
                raise ParseError(pos, "';' or '}'", got=lx.text)
        else:  # pragma: no cover
            raise AssertionError(p.phase)

    def _on_return(self, lx, events):
        p = self._pend
        if p.phase == "expect_value":
            if lx.kind is Kind.VAR:
                p.operand = ast.VarRef(_var_index(lx))
            elif lx.kind in _VALUE_KINDS:
                p.operand = _literal(lx)
            else:
                raise ParseError(lx.byte_span[0], "a literal or variable",
                                 got=lx.text)
            p.phase = "done"
        elif lx.kind in _TERMINATORS:
            self._complete(events, terminator=lx)
        else:
            raise ParseError(lx.byte_span[0], "';' or '}'", got=lx.text)

    def _on_replan(self, lx, events):
        if lx.kind in _TERMINATORS:
            self._complete(events, terminator=lx)
        else:
            raise ParseError(lx.byte_span[0], "';' or '}'", got=lx.text)

    def _on_cond(self, lx, events):
        p = self._pend
        if lx.kind is Kind.LBRACE:
            cond, end = self._parse_condition(p.cond_lexemes, p.start)
            stmt = ast.IfStmt(cond=cond, span=(p.start, lx.byte_span[1]))
            self._open(stmt, events)
        else:
            p.cond_lexemes.append(lx)

    def _on_loop(self, lx, events):
        p = self._pend
        if lx.kind is not Kind.LBRACE:
            raise ParseError(lx.byte_span[0], "'{' after loop count",
                             got=lx.text)
        if p.count < 1:
            raise ParseError(p.start, "a positive loop count", got=str(p.count))
        stmt = ast.LoopStmt(count=p.count, span=(p.start, lx.byte_span[1]))
        self._open(stmt, events)

    # -- completion ---------------------------------------------------------

    def _arg(self, lx):
        if lx.kind is Kind.VAR:
            return ast.VarRef(_var_index(lx))
        if lx.kind is Kind.IDENT and lx.text.startswith("$"):
            if self.mode != SKILL_DEFINITION:
                raise PositionalRefOutsidePlan(lx.byte_span[0], lx.text)
            return ast.PosRef(int(lx.text[1:]))
        return _literal(lx)

    def _complete(self, events, terminator=None):
        p = self._pend
        end = terminator.byte_span[0] if terminator else self.lexer._base
        span = (p.start, end)
        if p.kind == "call":
            stmt = ast.CallStmt(ast.Call(p.callee, p.args, span), span)
        elif p.kind == "assign":
            stmt = ast.AssignStmt(p.var_index, ast.Call(p.callee, p.args, span),
                                  span)
        elif p.kind == "return":
            stmt = ast.ReturnStmt(p.operand, span)
        elif p.kind == "replan":
            stmt = ast.ReplanStmt(span)
        else:  # pragma: no cover
            raise AssertionError(p.kind)
        self._pend = None
        depth = len(self._stack) - 1
        self._stack[-1].append(stmt, self.stamp)
        events.append(("stmt", stmt, depth))
        if terminator is not None and terminator.kind is Kind.RBRACE:
            self._close_body(terminator, events)

    def _open(self, stmt, events):
        self._pend = None
        depth = len(self._stack) - 1
        self._stack[-1].append(stmt, self.stamp)
        self._stack.append(stmt.body)
        self._open_composites.append(stmt)
        events.append(("open", stmt, depth))

    def _close_body(self, lx, events):
        if len(self._stack) == 1:
            raise ParseError(lx.byte_span[0], "a statement", got="}")
        depth = len(self._stack) - 1
        body = self._stack.pop()
        comp = self._open_composites.pop()
        comp.span = (comp.span[0], lx.byte_span[1])
        body.close()
        events.append(("close", depth))
        self._after_rbrace = True

    def _accept_eof(self, events):
        p = self._pend
        if p is not None:
            if (p.kind in ("call", "assign") and
                    p.phase in ("after_name", "done", "comma_expect_comma_or_end")) \
                    or (p.kind in ("return", "replan") and p.phase == "done"):
                self._complete(events)
            else:
                raise ParseError(self.lexer._base, "a complete statement",
                                 got="end of input")
        if len(self._stack) > 1:
            raise ParseError(self.lexer._base, "'}'", got="end of input")
        self.program.body.close()

    # -- condition sub-parser -------------------------------------------------

    def _parse_condition(self, lexemes, start):
        if not lexemes:
            raise ParseError(start, "a condition after '?'", got="{")
        pos = [0]

        def peek():
            return lexemes[pos[0]] if pos[0] < len(lexemes) else None

        def take():
            lx = peek()
            if lx is None:
                raise ParseError(lexemes[-1].byte_span[1], "more condition input")
            pos[0] += 1
            return lx

        def operand():
            lx = take()
            if lx.kind is Kind.VAR:
                return ast.VarRef(_var_index(lx))
            if lx.kind in _VALUE_KINDS:
                return _literal(lx)
            if lx.kind is Kind.IDENT:
                if lx.text.startswith("$"):
                    if self.mode != SKILL_DEFINITION:
                        raise PositionalRefOutsidePlan(lx.byte_span[0], lx.text)
                    return ast.PosRef(int(lx.text[1:]))
                call = ast.Call(lx.text, [], lx.byte_span)
                nxt = peek()
                if nxt is not None and nxt.kind is Kind.LPAREN:
                    take()
                    while True:
                        lx2 = take()
                        if lx2.kind is Kind.RPAREN and not call.args:
                            break
                        call.args.append(self._arg(lx2))
                        lx2 = take()
                        if lx2.kind is Kind.RPAREN:
                            break
                        if lx2.kind is not Kind.COMMA:
                            raise ParseError(lx2.byte_span[0], "',' or ')'",
                                             got=lx2.text)
                return call
            raise ParseError(lx.byte_span[0], "an operand", got=lx.text)

        def compare():
            lhs = operand()
            lx = take()
            ops = {Kind.CMP_GT: ">", Kind.CMP_LT: "<",
                   Kind.CMP_EQ: "==", Kind.CMP_NE: "!="}
            if lx.kind not in ops:
                raise ParseError(lx.byte_span[0], "a comparator", got=lx.text)
            return ast.Compare(lhs, ops[lx.kind], operand())

        def conjunction():
            node = compare()
            while (lx := peek()) is not None and lx.kind is Kind.AMP:
                take()
                node = ast.And(node, compare())
            return node

        node = conjunction()
        while (lx := peek()) is not None:
            if lx.kind is not Kind.PIPE:
                raise ParseError(lx.byte_span[0], "'&', '|' or '{'", got=lx.text)
            take()
            node = ast.Or(node, conjunction())
        return node, lexemes[-1].byte_span[1]


def parse_program(text, mode=PLAN):
    """Parse a complete MiniSpec program; equivalent to feeding all at once."""
    parser = IncrementalParser(mode)
    parser.feed(text)
    parser.finish()
    return parser.program
