"""Canonical pretty-printer for ItemScript ASTs.

The output is the formatting used in goldens and diagnostics.  It must
re-parse to a structurally identical program: parse(print(parse(s)))
equals parse(s) for every valid source s.
"""

from __future__ import annotations

import math

from . import nodes as n

_INDENT = "  "

# Precedence levels for parenthesization, loosest binds lowest.
_ASSIGN, _COND, _OR, _AND, _EQ, _REL, _ADD, _MUL, _UNARY, _POSTFIX, _PRIMARY = range(11)

_BINARY_PREC = {
    "||": _OR, "&&": _AND,
    "==": _EQ, "!=": _EQ,
    "<": _REL, "<=": _REL, ">": _REL, ">=": _REL,
    "+": _ADD, "-": _ADD,
    "*": _MUL, "/": _MUL, "%": _MUL,
}

_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r", "\0": "\\0"}


def format_number(value: float) -> str:
    """Shortest decimal form that lexes back to the same value.

    Integral floats print without the trailing '.0' so goldens and state
    blobs read the way scripts write them.
    """
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def format_string(value: str) -> str:
    out = ['"']
    for ch in value:
        out.append(_STRING_ESCAPES.get(ch, ch))
    out.append('"')
    return "".join(out)


def print_program(program: n.Program) -> str:
    lines: list[str] = []
    for stmt in program.statements:
        _stmt(stmt, 0, lines)
    return "\n".join(lines) + ("\n" if lines else "")


def print_statement(stmt: n.Stmt) -> str:
    lines: list[str] = []
    _stmt(stmt, 0, lines)
    return "\n".join(lines)


def print_expression(expr: n.Expr) -> str:
    return _expr(expr, _ASSIGN, 0)


def _stmt(stmt: n.Stmt, depth: int, lines: list[str]) -> None:
    pad = _INDENT * depth
    if isinstance(stmt, n.VarDecl):
        if stmt.init is None:
            lines.append(f"{pad}{stmt.kind} {stmt.name};")
        else:
            lines.append(f"{pad}{stmt.kind} {stmt.name} = {_expr(stmt.init, _ASSIGN, depth)};")
    elif isinstance(stmt, n.ExprStmt):
        lines.append(f"{pad}{_expr(stmt.expr, _ASSIGN, depth)};")
    elif isinstance(stmt, n.If):
        _if_chain(stmt, depth, lines, f"{pad}if")
    elif isinstance(stmt, n.While):
        lines.append(f"{pad}while ({_expr(stmt.cond, _ASSIGN, depth)}) {{")
        _body(stmt.body, depth, lines)
        lines.append(f"{pad}}}")
    elif isinstance(stmt, n.For):
        init = ""
        if isinstance(stmt.init, n.VarDecl):
            if stmt.init.init is None:
                init = f"{stmt.init.kind} {stmt.init.name}"
            else:
                init = f"{stmt.init.kind} {stmt.init.name} = {_expr(stmt.init.init, _ASSIGN, depth)}"
        elif isinstance(stmt.init, n.ExprStmt):
            init = _expr(stmt.init.expr, _ASSIGN, depth)
        cond = _expr(stmt.cond, _ASSIGN, depth) if stmt.cond is not None else ""
        update = _expr(stmt.update, _ASSIGN, depth) if stmt.update is not None else ""
        lines.append(f"{pad}for ({init}; {cond}; {update}) {{")
        _body(stmt.body, depth, lines)
        lines.append(f"{pad}}}")
    elif isinstance(stmt, n.Block):
        lines.append(f"{pad}{{")
        for inner in stmt.statements:
            _stmt(inner, depth + 1, lines)
        lines.append(f"{pad}}}")
    elif isinstance(stmt, n.Return):
        if stmt.value is None:
            lines.append(f"{pad}return;")
        else:
            lines.append(f"{pad}return {_expr(stmt.value, _ASSIGN, depth)};")
    else:
        raise TypeError(f"unknown statement node: {stmt!r}")


def _if_chain(stmt: n.If, depth: int, lines: list[str], opener: str) -> None:
    pad = _INDENT * depth
    lines.append(f"{opener} ({_expr(stmt.cond, _ASSIGN, depth)}) {{")
    _body(stmt.then, depth, lines)
    if stmt.orelse is None:
        lines.append(f"{pad}}}")
    elif isinstance(stmt.orelse, n.If):
        _if_chain(stmt.orelse, depth, lines, f"{pad}}} else if")
    else:
        lines.append(f"{pad}}} else {{")
        _body(stmt.orelse, depth, lines)
        lines.append(f"{pad}}}")


def _body(stmt: n.Stmt, depth: int, lines: list[str]) -> None:
    """Print a control-flow body; single blocks flatten into the braces."""
    if isinstance(stmt, n.Block):
        for inner in stmt.statements:
            _stmt(inner, depth + 1, lines)
    else:
        _stmt(stmt, depth + 1, lines)


def _expr(expr: n.Expr, parent_prec: int, depth: int) -> str:
    text, prec = _expr_prec(expr, depth)
    if prec < parent_prec:
        return f"({text})"
    return text


def _expr_prec(expr: n.Expr, depth: int) -> tuple[str, int]:
    if isinstance(expr, n.NumberLit):
        return format_number(expr.value), _PRIMARY
    if isinstance(expr, n.StringLit):
        return format_string(expr.value), _PRIMARY
    if isinstance(expr, n.BoolLit):
        return ("true" if expr.value else "false"), _PRIMARY
    if isinstance(expr, n.NullLit):
        return "null", _PRIMARY
    if isinstance(expr, n.Ident):
        return expr.name, _PRIMARY
    if isinstance(expr, n.ArrayLit):
        inner = ", ".join(_expr(e, _ASSIGN, depth) for e in expr.items)
        return f"[{inner}]", _PRIMARY
    if isinstance(expr, n.ObjectLit):
        parts = []
        for key, value in expr.entries:
            shown = key if _plain_key(key) else format_string(key)
            parts.append(f"{shown}: {_expr(value, _ASSIGN, depth)}")
        return "{" + ", ".join(parts) + "}", _PRIMARY
    if isinstance(expr, n.Member):
        return f"{_expr(expr.obj, _POSTFIX, depth)}.{expr.name}", _POSTFIX
    if isinstance(expr, n.Index):
        return f"{_expr(expr.obj, _POSTFIX, depth)}[{_expr(expr.index, _ASSIGN, depth)}]", _POSTFIX
    if isinstance(expr, n.Call):
        args = ", ".join(_expr(a, _ASSIGN, depth) for a in expr.args)
        return f"{_expr(expr.callee, _POSTFIX, depth)}({args})", _POSTFIX
    if isinstance(expr, n.Unary):
        operand = _expr(expr.operand, _UNARY, depth)
        # keep '- -x' from fusing into a decrement-looking '--x'
        if expr.op == "-" and operand.startswith("-"):
            return f"-({operand})", _UNARY
        return f"{expr.op}{operand}", _UNARY
    if isinstance(expr, n.Binary):
        prec = _BINARY_PREC[expr.op]
        left = _expr(expr.left, prec, depth)
        right = _expr(expr.right, prec + 1, depth)
        return f"{left} {expr.op} {right}", prec
    if isinstance(expr, n.Assign):
        target = _expr(expr.target, _POSTFIX, depth)
        value = _expr(expr.value, _ASSIGN, depth)
        return f"{target} {expr.op} {value}", _ASSIGN
    if isinstance(expr, n.Conditional):
        cond = _expr(expr.cond, _OR, depth)
        then = _expr(expr.then, _ASSIGN, depth)
        orelse = _expr(expr.orelse, _ASSIGN, depth)
        return f"{cond} ? {then} : {orelse}", _COND
    if isinstance(expr, n.Arrow):
        params = f"({', '.join(expr.params)})"
        if expr.is_expr_body:
            return f"{params} => {_expr(expr.body, _COND, depth)}", _ASSIGN
        body_lines: list[str] = []
        for inner in expr.body.statements:
            _stmt(inner, depth + 1, body_lines)
        if not body_lines:
            return f"{params} => {{}}", _ASSIGN
        body = "\n".join(body_lines)
        return f"{params} => {{\n{body}\n{_INDENT * depth}}}", _ASSIGN
    raise TypeError(f"unknown expression node: {expr!r}")


def _plain_key(key: str) -> bool:
    if not key:
        return False
    if key[0].isdigit():
        return False
    return all(ch.isalnum() or ch in "_$" for ch in key)
