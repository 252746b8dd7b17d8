"""AST node definitions for ItemScript.

Every node carries a source Span.  Spans are excluded from equality so
that structurally identical programs compare equal regardless of where
their text came from (the pretty-printer round-trip relies on this).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class Span:
    line: int
    column: int
    offset: int


# - expressions -


@dataclass
class NumberLit:
    value: float
    span: Span = field(compare=False)


@dataclass
class StringLit:
    value: str
    span: Span = field(compare=False)


@dataclass
class BoolLit:
    value: bool
    span: Span = field(compare=False)


@dataclass
class NullLit:
    span: Span = field(compare=False)


@dataclass
class ArrayLit:
    items: list["Expr"]
    span: Span = field(compare=False)


@dataclass
class ObjectLit:
    entries: list[tuple[str, "Expr"]]
    span: Span = field(compare=False)


@dataclass
class Ident:
    name: str
    span: Span = field(compare=False)


@dataclass
class Member:
    obj: "Expr"
    name: str
    span: Span = field(compare=False)


@dataclass
class Index:
    obj: "Expr"
    index: "Expr"
    span: Span = field(compare=False)


@dataclass
class Call:
    callee: "Expr"
    args: list["Expr"]
    span: Span = field(compare=False)


@dataclass
class Unary:
    op: str  # "-" or "!"
    operand: "Expr"
    span: Span = field(compare=False)


@dataclass
class Binary:
    op: str  # + - * / % == != < <= > >= && ||
    left: "Expr"
    right: "Expr"
    span: Span = field(compare=False)


@dataclass
class Assign:
    op: str  # = += -= *= /=
    target: "Expr"  # Ident | Member | Index
    value: "Expr"
    span: Span = field(compare=False)


@dataclass
class Conditional:
    cond: "Expr"
    then: "Expr"
    orelse: "Expr"
    span: Span = field(compare=False)


@dataclass
class Arrow:
    params: list[str]
    body: Union["Block", "Expr"]
    is_expr_body: bool
    span: Span = field(compare=False)


Expr = Union[
    NumberLit, StringLit, BoolLit, NullLit, ArrayLit, ObjectLit,
    Ident, Member, Index, Call, Unary, Binary, Assign, Conditional, Arrow,
]


# - statements -


@dataclass
class VarDecl:
    kind: str  # "let" or "const"
    name: str
    init: Optional[Expr]
    span: Span = field(compare=False)


@dataclass
class ExprStmt:
    expr: Expr
    span: Span = field(compare=False)


@dataclass
class If:
    cond: Expr
    then: "Stmt"
    orelse: Optional["Stmt"]
    span: Span = field(compare=False)


@dataclass
class While:
    cond: Expr
    body: "Stmt"
    span: Span = field(compare=False)


@dataclass
class For:
    init: Optional["Stmt"]  # VarDecl or ExprStmt
    cond: Optional[Expr]
    update: Optional[Expr]
    body: "Stmt"
    span: Span = field(compare=False)


@dataclass
class Block:
    statements: list["Stmt"]
    span: Span = field(compare=False)


@dataclass
class Return:
    value: Optional[Expr]
    span: Span = field(compare=False)


Stmt = Union[VarDecl, ExprStmt, If, While, For, Block, Return]


@dataclass
class Program:
    statements: list[Stmt]
    source_hash: str = field(compare=False)
