"""ItemScript language front end: lexer, parser, AST, pretty-printer."""

from .errors import ParseError
from .lexer import Token, TokenKind, tokenize
from .parser import parse
from .printer import format_number, print_expression, print_program, print_statement

__all__ = [
    "ParseError",
    "Token",
    "TokenKind",
    "tokenize",
    "parse",
    "format_number",
    "print_expression",
    "print_program",
    "print_statement",
]
