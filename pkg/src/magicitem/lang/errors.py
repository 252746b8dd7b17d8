"""Parse-time error type shared by the lexer and parser."""


class ParseError(Exception):
    """Syntax error with a 1-based source position and the offending slice."""

    def __init__(self, message: str, line: int, column: int, excerpt: str = ""):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column
        self.excerpt = excerpt
