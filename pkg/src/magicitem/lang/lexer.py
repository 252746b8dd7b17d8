"""Lexer for ItemScript source text.

Produces a flat token stream with 1-based line/column positions.  Token
texts are exact slices of the source, so concatenating them together with
the skipped whitespace and comments reproduces the input byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ParseError

MAX_SOURCE_BYTES = 64 * 1024

KEYWORDS = frozenset({
    "let", "const", "if", "else", "while", "for", "return",
    "true", "false", "null",
})

# Words from the wider JavaScript family that the grammar deliberately
# omits.  Lexed as keywords so the parser can reject them with a direct
# message instead of a confusing cascade further in.
RESERVED = frozenset({
    "async", "await", "break", "case", "catch", "class", "continue",
    "default", "delete", "do", "export", "extends", "finally", "function",
    "import", "in", "instanceof", "new", "of", "static", "super", "switch",
    "this", "throw", "try", "typeof", "var", "void", "yield",
})

# Longest first so maximal munch falls out of a linear scan.
PUNCTUATORS = (
    "===", "!==",
    "=>", "==", "!=", "<=", ">=", "&&", "||", "+=", "-=", "*=", "/=",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "?", ":",
    "=", "<", ">", "+", "-", "*", "/", "%", "!",
)

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_CONT = _IDENT_START | frozenset("0123456789")
_DIGITS = frozenset("0123456789")

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "0": "\0", "\\": "\\", "'": "'", '"': '"'}


class TokenKind(Enum):
    IDENT = "identifier"
    NUMBER = "number-literal"
    STRING = "string-literal"
    PUNCT = "punctuation"
    KEYWORD = "keyword"
    EOI = "end-of-input"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int
    offset: int


def tokenize(source: str) -> list[Token]:
    """Convert source text to tokens.

    Raises ParseError for unknown characters, unterminated strings or
    block comments, and for input over the 64 KiB size cap.
    """
    if len(source.encode("utf-8")) > MAX_SOURCE_BYTES:
        raise ParseError("source exceeds the 64 KiB size cap", 1, 1)
    return _Lexer(source).run()


def decode_string_literal(text: str) -> str:
    """Decode a quoted string token's text into its value."""
    out = []
    i = 1
    end = len(text) - 1
    while i < end:
        ch = text[i]
        if ch == "\\" and i + 1 < end:
            nxt = text[i + 1]
            out.append(_ESCAPES.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


class _Lexer:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.line = 1
        self.column = 1
        self.tokens: list[Token] = []

    def run(self) -> list[Token]:
        while True:
            self._skip_trivia()
            if self.pos >= len(self.source):
                break
            self._scan_token()
        self.tokens.append(Token(TokenKind.EOI, "", self.line, self.column, self.pos))
        return self.tokens

    # - scanning -

    def _scan_token(self) -> None:
        ch = self.source[self.pos]
        if ch in _IDENT_START:
            self._scan_word()
        elif ch in _DIGITS:
            self._scan_number()
        elif ch in ("'", '"'):
            self._scan_string(ch)
        else:
            self._scan_punct()

    def _scan_word(self) -> None:
        start = self.pos
        line, col = self.line, self.column
        while self.pos < len(self.source) and self.source[self.pos] in _IDENT_CONT:
            self._advance()
        text = self.source[start:self.pos]
        if text in KEYWORDS or text in RESERVED:
            kind = TokenKind.KEYWORD
        else:
            kind = TokenKind.IDENT
        self.tokens.append(Token(kind, text, line, col, start))

    def _scan_number(self) -> None:
        start = self.pos
        line, col = self.line, self.column
        self._take_digits()
        if self._peek() == "." and self._peek(1) in _DIGITS:
            self._advance()
            self._take_digits()
        if self._peek() in ("e", "E"):
            after = 1
            if self._peek(1) in ("+", "-"):
                after = 2
            if self._peek(after) in _DIGITS:
                for _ in range(after):
                    self._advance()
                self._take_digits()
        text = self.source[start:self.pos]
        self.tokens.append(Token(TokenKind.NUMBER, text, line, col, start))

    def _take_digits(self) -> None:
        while self.pos < len(self.source) and self.source[self.pos] in _DIGITS:
            self._advance()

    def _scan_string(self, quote: str) -> None:
        start = self.pos
        line, col = self.line, self.column
        self._advance()
        while True:
            if self.pos >= len(self.source):
                raise ParseError("unterminated string literal", line, col,
                                 self.source[start:start + 20])
            ch = self.source[self.pos]
            if ch == "\n":
                raise ParseError("unterminated string literal", line, col,
                                 self.source[start:self.pos])
            if ch == "\\":
                self._advance()
                if self.pos < len(self.source) and self.source[self.pos] != "\n":
                    self._advance()
                continue
            self._advance()
            if ch == quote:
                break
        text = self.source[start:self.pos]
        self.tokens.append(Token(TokenKind.STRING, text, line, col, start))

    def _scan_punct(self) -> None:
        rest = self.source[self.pos:]
        for p in PUNCTUATORS:
            if rest.startswith(p):
                tok = Token(TokenKind.PUNCT, p, self.line, self.column, self.pos)
                for _ in range(len(p)):
                    self._advance()
                self.tokens.append(tok)
                return
        raise ParseError(f"unexpected character {self.source[self.pos]!r}",
                         self.line, self.column, self.source[self.pos:self.pos + 10])

    # - trivia -

    def _skip_trivia(self) -> None:
        while self.pos < len(self.source):
            ch = self.source[self.pos]
            if ch in (" ", "\t", "\r", "\n", "\f", "\v"):
                self._advance()
            elif ch == "/" and self._peek(1) == "/":
                while self.pos < len(self.source) and self.source[self.pos] != "\n":
                    self._advance()
            elif ch == "/" and self._peek(1) == "*":
                line, col = self.line, self.column
                self._advance()
                self._advance()
                while True:
                    if self.pos >= len(self.source):
                        raise ParseError("unterminated block comment", line, col)
                    if self.source[self.pos] == "*" and self._peek(1) == "/":
                        self._advance()
                        self._advance()
                        break
                    self._advance()
            else:
                return

    # - cursor -

    def _advance(self) -> None:
        if self.source[self.pos] == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        self.pos += 1

    def _peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.source[i] if i < len(self.source) else ""
