"""Recursive-descent parser for ItemScript.

Single-token lookahead throughout.  The only place that needs to see
further ahead is arrow-function detection at `(`, which is answered in
O(1) from a paren-match table built in one pass before parsing, so the
parser never backtracks.
"""

from __future__ import annotations

import hashlib

from . import nodes as n
from .errors import ParseError
from .lexer import RESERVED, Token, TokenKind, decode_string_literal, tokenize

# Statement and expression recursion share one depth counter.  The cap
# keeps crafted input from exhausting the Python stack.
MAX_NESTING = 64

_ASSIGN_OPS = frozenset({"=", "+=", "-=", "*=", "/="})


def parse(source: str) -> n.Program:
    """Parse source text into a Program.

    Raises ParseError with a 1-based position and an excerpt of the
    offending text.  Never raises anything else; arbitrary input either
    parses or reports a syntax error.
    """
    tokens = tokenize(source)
    try:
        statements = _Parser(tokens, source).parse_program()
    except RecursionError:
        raise ParseError("program is too deeply nested", 1, 1) from None
    digest = hashlib.sha256(source.encode("utf-8")).hexdigest()
    return n.Program(statements, digest)


class _Parser:
    def __init__(self, tokens: list[Token], source: str):
        self.tokens = tokens
        self.source = source
        self.pos = 0
        self.depth = 0
        self.paren_match = _match_parens(tokens)

    # - helpers -

    def _peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def _next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not TokenKind.EOI:
            self.pos += 1
        return tok

    def _at_punct(self, text: str) -> bool:
        tok = self._peek()
        return tok.kind is TokenKind.PUNCT and tok.text == text

    def _at_keyword(self, text: str) -> bool:
        tok = self._peek()
        return tok.kind is TokenKind.KEYWORD and tok.text == text

    def _expect_punct(self, text: str) -> Token:
        if not self._at_punct(text):
            self._fail(f"expected {text!r}")
        return self._next()

    def _fail(self, message: str, tok: Token | None = None):
        tok = tok or self._peek()
        if tok.kind is TokenKind.EOI:
            shown = f"{message} but found end of input"
        else:
            shown = f"{message} but found {tok.text!r}"
        excerpt = self.source[tok.offset:tok.offset + 20]
        raise ParseError(shown, tok.line, tok.column, excerpt)

    def _span(self, tok: Token) -> n.Span:
        return n.Span(tok.line, tok.column, tok.offset)

    def _enter(self, tok: Token) -> None:
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise ParseError(f"nesting deeper than {MAX_NESTING} levels",
                             tok.line, tok.column)

    def _leave(self) -> None:
        self.depth -= 1

    # - program / statements -

    def parse_program(self) -> list[n.Stmt]:
        statements = []
        while self._peek().kind is not TokenKind.EOI:
            statements.append(self.parse_statement())
        return statements

    def parse_statement(self) -> n.Stmt:
        tok = self._peek()
        self._enter(tok)
        try:
            if tok.kind is TokenKind.KEYWORD:
                if tok.text in ("let", "const"):
                    return self._parse_var_decl()
                if tok.text == "if":
                    return self._parse_if()
                if tok.text == "while":
                    return self._parse_while()
                if tok.text == "for":
                    return self._parse_for()
                if tok.text == "return":
                    return self._parse_return()
                if tok.text == "else":
                    self._fail("'else' without a matching 'if'", tok)
                if tok.text in RESERVED:
                    self._fail(f"{tok.text!r} is reserved and not part of ItemScript", tok)
            if self._at_punct("{"):
                return self._parse_block()
            return self._parse_expr_statement()
        finally:
            self._leave()

    def _parse_var_decl(self) -> n.VarDecl:
        kw = self._next()
        name_tok = self._peek()
        if name_tok.kind is not TokenKind.IDENT:
            self._fail("expected a variable name")
        self._next()
        init = None
        if self._at_punct("="):
            self._next()
            init = self.parse_expression()
        elif kw.text == "const":
            self._fail("const declaration requires an initializer")
        self._expect_punct(";")
        return n.VarDecl(kw.text, name_tok.text, init, self._span(kw))

    def _parse_if(self) -> n.If:
        kw = self._next()
        self._expect_punct("(")
        cond = self.parse_expression()
        self._expect_punct(")")
        then = self.parse_statement()
        orelse = None
        if self._at_keyword("else"):
            self._next()
            orelse = self.parse_statement()
        return n.If(cond, then, orelse, self._span(kw))

    def _parse_while(self) -> n.While:
        kw = self._next()
        self._expect_punct("(")
        cond = self.parse_expression()
        self._expect_punct(")")
        body = self.parse_statement()
        return n.While(cond, body, self._span(kw))

    def _parse_for(self) -> n.For:
        kw = self._next()
        self._expect_punct("(")
        init: n.Stmt | None = None
        if self._at_punct(";"):
            self._next()
        elif self._at_keyword("let") or self._at_keyword("const"):
            init = self._parse_var_decl()  # consumes the first ';'
        else:
            first = self._peek()
            expr = self.parse_expression()
            self._expect_punct(";")
            init = n.ExprStmt(expr, self._span(first))
        cond = None
        if not self._at_punct(";"):
            cond = self.parse_expression()
        self._expect_punct(";")
        update = None
        if not self._at_punct(")"):
            update = self.parse_expression()
        self._expect_punct(")")
        body = self.parse_statement()
        return n.For(init, cond, update, body, self._span(kw))

    def _parse_return(self) -> n.Return:
        kw = self._next()
        value = None
        if not self._at_punct(";"):
            value = self.parse_expression()
        self._expect_punct(";")
        return n.Return(value, self._span(kw))

    def _parse_block(self) -> n.Block:
        open_tok = self._expect_punct("{")
        statements = []
        while not self._at_punct("}"):
            if self._peek().kind is TokenKind.EOI:
                self._fail("expected '}' to close the block")
            statements.append(self.parse_statement())
        self._next()
        return n.Block(statements, self._span(open_tok))

    def _parse_expr_statement(self) -> n.ExprStmt:
        first = self._peek()
        expr = self.parse_expression()
        self._expect_punct(";")
        return n.ExprStmt(expr, self._span(first))

    # - expressions, lowest to highest precedence -

    def parse_expression(self) -> n.Expr:
        tok = self._peek()
        self._enter(tok)
        try:
            return self._parse_assignment()
        finally:
            self._leave()

    def _parse_assignment(self) -> n.Expr:
        if self._arrow_ahead():
            return self._parse_arrow()
        expr = self._parse_conditional()
        tok = self._peek()
        if tok.kind is TokenKind.PUNCT and tok.text in _ASSIGN_OPS:
            if not isinstance(expr, (n.Ident, n.Member, n.Index)):
                self._fail("invalid assignment target", tok)
            self._next()
            value = self.parse_expression()
            return n.Assign(tok.text, expr, value, self._span(tok))
        return expr

    def _arrow_ahead(self) -> bool:
        tok = self._peek()
        if tok.kind is TokenKind.IDENT:
            nxt = self._peek(1)
            return nxt.kind is TokenKind.PUNCT and nxt.text == "=>"
        if tok.kind is TokenKind.PUNCT and tok.text == "(":
            close = self.paren_match.get(self.pos)
            if close is None:
                return False
            after = self.tokens[min(close + 1, len(self.tokens) - 1)]
            return after.kind is TokenKind.PUNCT and after.text == "=>"
        return False

    def _parse_arrow(self) -> n.Arrow:
        start = self._peek()
        params: list[str] = []
        if start.kind is TokenKind.IDENT:
            params.append(self._next().text)
        else:
            self._next()  # '('
            while not self._at_punct(")"):
                p = self._peek()
                if p.kind is not TokenKind.IDENT:
                    self._fail("expected a parameter name")
                params.append(self._next().text)
                if self._at_punct(","):
                    self._next()
                elif not self._at_punct(")"):
                    self._fail("expected ',' or ')' in parameter list")
            self._next()
        self._expect_punct("=>")
        if self._at_punct("{"):
            body: n.Block | n.Expr = self._parse_block()
            return n.Arrow(params, body, False, self._span(start))
        body = self.parse_expression()
        return n.Arrow(params, body, True, self._span(start))

    def _parse_conditional(self) -> n.Expr:
        cond = self._parse_binary(0)
        if self._at_punct("?"):
            q = self._next()
            then = self.parse_expression()
            self._expect_punct(":")
            orelse = self.parse_expression()
            return n.Conditional(cond, then, orelse, self._span(q))
        return cond

    # Binary precedence tiers, loosest first.
    _TIERS = (
        ("||",),
        ("&&",),
        ("==", "!="),
        ("<", "<=", ">", ">="),
        ("+", "-"),
        ("*", "/", "%"),
    )
    _EQ_ALIASES = {"===": "==", "!==": "!="}

    def _parse_binary(self, tier: int) -> n.Expr:
        if tier >= len(self._TIERS):
            return self._parse_unary()
        ops = self._TIERS[tier]
        left = self._parse_binary(tier + 1)
        while True:
            tok = self._peek()
            if tok.kind is not TokenKind.PUNCT:
                return left
            op = self._EQ_ALIASES.get(tok.text, tok.text)
            if op not in ops:
                return left
            self._next()
            right = self._parse_binary(tier + 1)
            left = n.Binary(op, left, right, self._span(tok))

    def _parse_unary(self) -> n.Expr:
        prefixes = []
        while True:
            tok = self._peek()
            if tok.kind is TokenKind.PUNCT and tok.text in ("-", "!"):
                prefixes.append(self._next())
            else:
                break
        expr = self._parse_postfix()
        for tok in reversed(prefixes):
            expr = n.Unary(tok.text, expr, self._span(tok))
        return expr

    def _parse_postfix(self) -> n.Expr:
        expr = self._parse_primary()
        while True:
            if self._at_punct("("):
                open_tok = self._next()
                args = []
                while not self._at_punct(")"):
                    args.append(self.parse_expression())
                    if self._at_punct(","):
                        self._next()
                    elif not self._at_punct(")"):
                        self._fail("expected ',' or ')' in argument list")
                self._next()
                expr = n.Call(expr, args, self._span(open_tok))
            elif self._at_punct("."):
                dot = self._next()
                name_tok = self._peek()
                if name_tok.kind not in (TokenKind.IDENT, TokenKind.KEYWORD):
                    self._fail("expected a member name after '.'")
                self._next()
                expr = n.Member(expr, name_tok.text, self._span(dot))
            elif self._at_punct("["):
                open_tok = self._next()
                index = self.parse_expression()
                self._expect_punct("]")
                expr = n.Index(expr, index, self._span(open_tok))
            else:
                return expr

    def _parse_primary(self) -> n.Expr:
        tok = self._peek()
        span = self._span(tok)
        if tok.kind is TokenKind.NUMBER:
            self._next()
            return n.NumberLit(float(tok.text), span)
        if tok.kind is TokenKind.STRING:
            self._next()
            return n.StringLit(decode_string_literal(tok.text), span)
        if tok.kind is TokenKind.KEYWORD:
            if tok.text in ("true", "false"):
                self._next()
                return n.BoolLit(tok.text == "true", span)
            if tok.text == "null":
                self._next()
                return n.NullLit(span)
            if tok.text in RESERVED:
                self._fail(f"{tok.text!r} is reserved and not part of ItemScript", tok)
            self._fail("expected an expression", tok)
        if tok.kind is TokenKind.IDENT:
            self._next()
            return n.Ident(tok.text, span)
        if self._at_punct("("):
            self._next()
            expr = self.parse_expression()
            self._expect_punct(")")
            return expr
        if self._at_punct("["):
            return self._parse_array(span)
        if self._at_punct("{"):
            return self._parse_object(span)
        self._fail("expected an expression", tok)

    def _parse_array(self, span: n.Span) -> n.ArrayLit:
        self._next()
        items = []
        while not self._at_punct("]"):
            items.append(self.parse_expression())
            if self._at_punct(","):
                self._next()
            elif not self._at_punct("]"):
                self._fail("expected ',' or ']' in array literal")
        self._next()
        return n.ArrayLit(items, span)

    def _parse_object(self, span: n.Span) -> n.ObjectLit:
        self._next()
        entries: list[tuple[str, n.Expr]] = []
        while not self._at_punct("}"):
            key_tok = self._peek()
            if key_tok.kind is TokenKind.IDENT:
                key = key_tok.text
            elif key_tok.kind is TokenKind.STRING:
                key = decode_string_literal(key_tok.text)
            else:
                self._fail("expected a property name")
            self._next()
            if self._at_punct(":"):
                self._next()
                value = self.parse_expression()
            elif key_tok.kind is TokenKind.IDENT:
                # shorthand {x} for {x: x}
                value = n.Ident(key, self._span(key_tok))
            else:
                self._fail("expected ':' after property name")
            entries.append((key, value))
            if self._at_punct(","):
                self._next()
            elif not self._at_punct("}"):
                self._fail("expected ',' or '}' in object literal")
        self._next()
        return n.ObjectLit(entries, span)


def _match_parens(tokens: list[Token]) -> dict[int, int]:
    """Index of matching ')' for each '(' token, one linear pass."""
    match: dict[int, int] = {}
    stack: list[int] = []
    for i, tok in enumerate(tokens):
        if tok.kind is not TokenKind.PUNCT:
            continue
        if tok.text == "(":
            stack.append(i)
        elif tok.text == ")" and stack:
            match[stack.pop()] = i
    return match
