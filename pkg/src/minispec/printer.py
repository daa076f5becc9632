"""Canonical text form of MiniSpec ASTs.

Canonical form uses the parenthesized call syntax, single-quoted strings,
`rp` for replan, `;` between consecutive statements (never after `}`) and no
whitespace. Reparsing canonical output yields a structurally equal program.
"""

from . import ast
from .errors import OpenBodyError


def serialize(program):
    return _body_text(program.body, require_closed=True)


def serialize_statement(stmt):
    return _stmt_text(stmt, require_closed=False)


def _body_text(body, require_closed):
    if require_closed and not body.closed:
        raise OpenBodyError("cannot serialize a program with an open body")
    parts = []
    prev_composite = False
    for stmt in body.statements:
        if parts and not prev_composite:
            parts.append(";")
        parts.append(_stmt_text(stmt, require_closed))
        prev_composite = isinstance(stmt, ast.COMPOSITE)
    return "".join(parts)


def _stmt_text(stmt, require_closed):
    if isinstance(stmt, ast.CallStmt):
        return _call_text(stmt.call)
    if isinstance(stmt, ast.AssignStmt):
        return f"_{stmt.var_index}={_call_text(stmt.call)}"
    if isinstance(stmt, ast.ReturnStmt):
        return "->" + _operand_text(stmt.operand)
    if isinstance(stmt, ast.ReplanStmt):
        return "rp"
    if isinstance(stmt, ast.LoopStmt):
        if require_closed and not stmt.body.closed:
            raise OpenBodyError("open loop body")
        return f"{stmt.count}{{{_body_text(stmt.body, require_closed)}}}"
    if isinstance(stmt, ast.IfStmt):
        if require_closed and not stmt.body.closed:
            raise OpenBodyError("open conditional body")
        return f"?{_cond_text(stmt.cond)}{{{_body_text(stmt.body, require_closed)}}}"
    raise TypeError(f"not a statement: {stmt!r}")


def _cond_text(cond):
    if isinstance(cond, ast.Compare):
        return _operand_text(cond.lhs) + cond.op + _operand_text(cond.rhs)
    if isinstance(cond, ast.And):
        return _cond_text(cond.left) + "&" + _cond_text(cond.right)
    if isinstance(cond, ast.Or):
        return _cond_text(cond.left) + "|" + _cond_text(cond.right)
    raise TypeError(f"not a condition: {cond!r}")


def _operand_text(op):
    if isinstance(op, ast.Lit):
        return literal_text(op.value)
    if isinstance(op, ast.VarRef):
        return f"_{op.index}"
    if isinstance(op, ast.PosRef):
        return f"${op.index}"
    if isinstance(op, ast.Call):
        return _call_text(op)
    raise TypeError(f"not an operand: {op!r}")


def _call_text(call):
    return f"{call.callee}({','.join(_operand_text(a) for a in call.args)})"


def literal_text(value):
    if value is True:
        return "True"
    if value is False:
        return "False"
    if isinstance(value, str):
        quote = '"' if "'" in value else "'"
        return f"{quote}{value}{quote}"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    raise TypeError(f"not a literal: {value!r}")
