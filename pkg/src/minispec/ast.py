"""AST nodes for MiniSpec programs.

Values are plain Python objects (int, float, str, bool, None); the node
classes below cover operands, conditions, statements and bodies. A Body is
append-only and carries a ``closed`` flag plus a condition variable so the
stream interpreter can block on a composite statement whose block is still
being generated.
"""

import threading
from dataclasses import dataclass, field


# -- operands ---------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: object  # int | float | str | bool


@dataclass(frozen=True)
class VarRef:
    index: int


@dataclass(frozen=True)
class PosRef:
    index: int  # $n inside a high-level skill definition


@dataclass
class Call:
    callee: str
    args: list  # Lit | VarRef | PosRef
    span: tuple = (0, 0)


# -- conditions -------------------------------------------------------------

@dataclass
class Compare:
    lhs: object  # Lit | VarRef | PosRef | Call
    op: str      # '>', '<', '==', '!='
    rhs: object


@dataclass
class And:
    left: object
    right: object


@dataclass
class Or:
    left: object
    right: object


# -- statements -------------------------------------------------------------

class Body:
    """Append-only statement list shared between parser and executor."""

    def __init__(self):
        self.statements = []
        self.stamps = []  # arrival time (seconds) per statement; 0.0 in batch
        self.closed = False
        self._cond = threading.Condition()

    def append(self, stmt, stamp=0.0):
        with self._cond:
            if self.closed:
                raise RuntimeError("append to closed body")
            self.statements.append(stmt)
            self.stamps.append(stamp)
            self._cond.notify_all()

    def close(self):
        with self._cond:
            self.closed = True
            self._cond.notify_all()

    def wait_entry(self, index, should_stop, timeout=0.05):
        """Block until statement ``index`` exists, the body closes, or
        ``should_stop()`` turns true. Returns (stmt, stamp) or None."""
        with self._cond:
            while True:
                if index < len(self.statements):
                    return self.statements[index], self.stamps[index]
                if self.closed or should_stop():
                    return None
                self._cond.wait(timeout)

    def __iter__(self):
        return iter(self.statements)

    def __len__(self):
        return len(self.statements)

    def __repr__(self):
        flag = "" if self.closed else " open"
        return f"Body({len(self.statements)} stmts{flag})"


@dataclass
class CallStmt:
    call: Call
    span: tuple = (0, 0)


@dataclass
class AssignStmt:
    var_index: int
    call: Call
    span: tuple = (0, 0)


@dataclass
class ReturnStmt:
    operand: object  # Lit | VarRef
    span: tuple = (0, 0)


@dataclass
class ReplanStmt:
    span: tuple = (0, 0)


@dataclass
class LoopStmt:
    count: int
    body: Body = field(default_factory=Body)
    span: tuple = (0, 0)


@dataclass
class IfStmt:
    cond: object  # Compare | And | Or
    body: Body = field(default_factory=Body)
    span: tuple = (0, 0)


@dataclass
class Program:
    body: Body = field(default_factory=Body)

    @property
    def statements(self):
        return self.body.statements


ELEMENTARY = (CallStmt, AssignStmt, ReturnStmt, ReplanStmt)
COMPOSITE = (LoopStmt, IfStmt)
