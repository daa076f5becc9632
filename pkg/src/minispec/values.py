"""Comparison semantics for runtime values.

Equality is total and symmetric over {int, float, str, bool, None}: numbers
compare numerically (bools count as 0/1), the exact strings "True"/"False"
coerce to bools, numeric-looking strings coerce to numbers, None equals only
None, everything else is simply unequal. Ordering (`<`, `>`) is defined only
when both sides are numeric or numeric-looking strings.
"""

from .errors import TypeMismatch


def _as_number(v):
    """Numeric view of v, or None when it has none (bools excluded)."""
    if isinstance(v, bool):
        return None
    if isinstance(v, (int, float)):
        return v
    if isinstance(v, str):
        try:
            return int(v)
        except ValueError:
            try:
                return float(v)
            except ValueError:
                return None
    return None


def values_equal(a, b):
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, bool) or isinstance(b, bool):
        if isinstance(a, bool) and isinstance(b, bool):
            return a == b
        other = b if isinstance(a, bool) else a
        flag = a if isinstance(a, bool) else b
        if isinstance(other, str):
            return other == ("True" if flag else "False")
        if isinstance(other, (int, float)):
            return other == (1 if flag else 0)
        return False
    na, nb = _as_number(a), _as_number(b)
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if na is not None and nb is not None:
        return na == nb
    return False


def compare_values(op, a, b):
    if op == "==":
        return values_equal(a, b)
    if op == "!=":
        return not values_equal(a, b)
    na, nb = _as_number(a), _as_number(b)
    if na is None or nb is None:
        raise TypeMismatch(f"cannot order {a!r} {op} {b!r}")
    return na > nb if op == ">" else na < nb
