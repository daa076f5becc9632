"""Verbose baseline plans.

Each benchmark task ships a second plan written in a conventional
general-purpose style: indented blocks, long identifiers, module prefixes.
A small line-walking translator maps it onto the same AST the MiniSpec
fixture produces, so the two plans can be compared for token count and for
skill-dispatch equivalence without a second execution engine.
"""

import re

from . import ast
from .errors import ParseError

# long names used by baselines that are not registry names themselves
_ALIASES = {
    "take_picture": "picture",
    "turn_clockwise": "turn_cw",
    "turn_counterclockwise": "turn_ccw",
    "probe": "query",
    "print": "log",
}

_INDENT = 2

_FOR = re.compile(r"for\s+\w+\s+in\s+range\((\d+)\):$")
_IF = re.compile(r"if\s+(.+?)\s*(==|!=|<|>)\s*(.+?):$")
_RETURN = re.compile(r"return\s+(.+)$")
_ASSIGN = re.compile(r"(\w+)\s*=\s*(.+)$")
_CALL = re.compile(r"(?:(\w+)\.)?(\w+)\((.*)\)$")


class BaselineTranslator:
    """Translates one verbose plan into a closed MiniSpec Program."""

    def __init__(self):
        self.var_indices = {}

    def _var(self, name):
        if name not in self.var_indices:
            self.var_indices[name] = len(self.var_indices) + 1
        return self.var_indices[name]

    def _operand(self, text):
        text = text.strip()
        if text == "True":
            return ast.Lit(True)
        if text == "False":
            return ast.Lit(False)
        if re.fullmatch(r"-?\d+", text):
            return ast.Lit(int(text))
        if re.fullmatch(r"-?\d+\.\d+", text):
            return ast.Lit(float(text))
        if text[:1] in "'\"" and text[-1:] == text[:1]:
            return ast.Lit(text[1:-1])
        call = _CALL.fullmatch(text)
        if call:
            return self._call(text)
        if re.fullmatch(r"\w+", text):
            return ast.VarRef(self._var(text))
        raise ParseError(0, "operand", text)

    def _call(self, text):
        m = _CALL.fullmatch(text.strip())
        if not m:
            raise ParseError(0, "call", text)
        _module, name, argtext = m.groups()
        name = _ALIASES.get(name, name)
        args = []
        if argtext.strip():
            for piece in _split_args(argtext):
                args.append(self._operand(piece))
        return ast.Call(name, args)

    def translate(self, text):
        program = ast.Program()
        stack = [program.body]
        for raw in text.splitlines():
            if not raw.strip() or raw.strip().startswith("#"):
                continue
            depth = (len(raw) - len(raw.lstrip(" "))) // _INDENT
            while len(stack) > depth + 1:
                stack.pop().close()
            if depth + 1 != len(stack):
                raise ParseError(0, "consistent indentation", raw)
            line = raw.strip()
            body = stack[-1]

            m = _FOR.fullmatch(line)
            if m:
                stmt = ast.LoopStmt(int(m.group(1)))
                body.append(stmt)
                stack.append(stmt.body)
                continue
            m = _IF.fullmatch(line)
            if m:
                cond = ast.Compare(self._operand(m.group(1)), m.group(2),
                                   self._operand(m.group(3)))
                stmt = ast.IfStmt(cond)
                body.append(stmt)
                stack.append(stmt.body)
                continue
            m = _RETURN.fullmatch(line)
            if m:
                body.append(ast.ReturnStmt(self._operand(m.group(1))))
                continue
            if line in ("replan()", "replan"):
                body.append(ast.ReplanStmt())
                continue
            m = _ASSIGN.fullmatch(line)
            if m and _CALL.fullmatch(m.group(2).strip()):
                body.append(ast.AssignStmt(self._var(m.group(1)),
                                           self._call(m.group(2))))
                continue
            if _CALL.fullmatch(line):
                body.append(ast.CallStmt(self._call(line)))
                continue
            raise ParseError(0, "baseline statement", line)
        while stack:
            stack.pop().close()
        return program


def _split_args(text):
    parts, depth, cur = [], 0, []
    quote = None
    for ch in text:
        if quote:
            cur.append(ch)
            if ch == quote:
                quote = None
            continue
        if ch in "'\"":
            quote = ch
            cur.append(ch)
        elif ch == "(":
            depth += 1
            cur.append(ch)
        elif ch == ")":
            depth -= 1
            cur.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        parts.append("".join(cur))
    return parts


def translate_baseline(text):
    return BaselineTranslator().translate(text)
