"""Lexer tests.

The reference lexer here is an independent table-driven scanner built on
a single regex.  Token streams from the real lexer are checked against
it rather than against hand-copied expectations, so a shared typo cannot
hide a defect.
"""

import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magicitem.lang import ParseError, TokenKind, tokenize
from magicitem.lang.lexer import KEYWORDS, RESERVED, decode_string_literal

from corpus import VALID_SCRIPTS

_REFERENCE_RE = re.compile(
    r"""
      (?P<trivia>\s+|//[^\n]*|/\*.*?\*/)
    | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
    | (?P<word>[A-Za-z_$][A-Za-z0-9_$]*)
    | (?P<string>"(?:\\.|[^"\\\n])*"|'(?:\\.|[^'\\\n])*')
    | (?P<punct>===|!==|=>|==|!=|<=|>=|&&|\|\||\+=|-=|\*=|/=|[()\[\]{};,.?:=<>+\-*/%!])
    """,
    re.VERBOSE | re.DOTALL,
)


def reference_lex(source):
    """Table-driven oracle: (kind, text) pairs, trivia skipped."""
    out = []
    pos = 0
    while pos < len(source):
        m = _REFERENCE_RE.match(source, pos)
        if m is None:
            raise ValueError(f"reference lexer stuck at {pos}")
        pos = m.end()
        if m.lastgroup == "trivia":
            continue
        if m.lastgroup == "number":
            out.append((TokenKind.NUMBER, m.group()))
        elif m.lastgroup == "word":
            text = m.group()
            kind = TokenKind.KEYWORD if (text in KEYWORDS or text in RESERVED) else TokenKind.IDENT
            out.append((kind, text))
        elif m.lastgroup == "string":
            out.append((TokenKind.STRING, m.group()))
        else:
            out.append((TokenKind.PUNCT, m.group()))
    out.append((TokenKind.EOI, ""))
    return out


def kinds_and_texts(source):
    return [(t.kind, t.text) for t in tokenize(source)]


def test_log_call_token_stream():
    tokens = tokenize('$.log("hi")')
    assert [(t.kind, t.text) for t in tokens] == [
        (TokenKind.IDENT, "$"),
        (TokenKind.PUNCT, "."),
        (TokenKind.IDENT, "log"),
        (TokenKind.PUNCT, "("),
        (TokenKind.STRING, '"hi"'),
        (TokenKind.PUNCT, ")"),
        (TokenKind.EOI, ""),
    ]


def test_matches_reference_lexer_on_corpus():
    for source in VALID_SCRIPTS:
        assert kinds_and_texts(source) == reference_lex(source), source


def test_matches_reference_lexer_on_operator_soup():
    source = "a===b !== c => <= >= && || += -= *= /= ?: . , ; % ! < >"
    assert kinds_and_texts(source) == reference_lex(source)


def test_positions_are_one_based():
    tokens = tokenize("let x = 1;\nx += 2;")
    assert (tokens[0].line, tokens[0].column) == (1, 1)
    assert (tokens[1].line, tokens[1].column) == (1, 5)   # x
    assert (tokens[5].line, tokens[5].column) == (2, 1)   # second x
    assert tokens[6].text == "+="
    assert (tokens[6].line, tokens[6].column) == (2, 3)


def test_token_offsets_reconstruct_source():
    source = "// greet\nlet msg = 'hi';  /* tail */\n$.log(msg);\n"
    tokens = tokenize(source)
    last_end = 0
    for tok in tokens[:-1]:
        assert source[tok.offset:tok.offset + len(tok.text)] == tok.text
        assert tok.offset >= last_end
        last_end = tok.offset + len(tok.text)
    assert tokens[-1].offset == len(source)


def test_number_forms():
    texts = [t.text for t in tokenize("0 42 3.5 0.165 1e3 2.5e-2 7E+1")[:-1]]
    assert texts == ["0", "42", "3.5", "0.165", "1e3", "2.5e-2", "7E+1"]


def test_number_stops_before_member_access():
    assert kinds_and_texts("1.toFixed") == [
        (TokenKind.NUMBER, "1"),
        (TokenKind.PUNCT, "."),
        (TokenKind.IDENT, "toFixed"),
        (TokenKind.EOI, ""),
    ]


def test_string_escape_decoding():
    assert decode_string_literal('"a\\nb"') == "a\nb"
    assert decode_string_literal("'it\\'s'") == "it's"
    assert decode_string_literal('"tab\\there"') == "tab\there"
    # unknown escapes pass the character through
    assert decode_string_literal('"\\q"') == "q"


def test_keywords_and_reserved_words_are_keyword_tokens():
    for word in ("let", "const", "return", "true", "null"):
        assert kinds_and_texts(word)[0] == (TokenKind.KEYWORD, word)
    for word in ("new", "class", "this", "function", "typeof"):
        assert kinds_and_texts(word)[0] == (TokenKind.KEYWORD, word)


def test_dollar_and_underscore_are_identifiers():
    stream = kinds_and_texts("$ _tmp $state")
    assert stream[:-1] == [
        (TokenKind.IDENT, "$"),
        (TokenKind.IDENT, "_tmp"),
        (TokenKind.IDENT, "$state"),
    ]


def test_unterminated_string_reports_start_position():
    with pytest.raises(ParseError) as err:
        tokenize('let s = "oops')
    assert err.value.line == 1
    assert err.value.column == 9


def test_unterminated_block_comment():
    with pytest.raises(ParseError):
        tokenize("/* no end")


def test_newline_inside_string_is_an_error():
    with pytest.raises(ParseError):
        tokenize('"first\nsecond"')


def test_unknown_character():
    with pytest.raises(ParseError) as err:
        tokenize("let a = 5 @ 3;")
    assert "@" in str(err.value)


def test_source_size_cap():
    just_under = "// " + "x" * (64 * 1024 - 4)
    tokenize(just_under)
    with pytest.raises(ParseError) as err:
        tokenize("// " + "x" * (64 * 1024))
    assert "64 KiB" in err.value.message


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=300))
def test_tokenize_total_over_arbitrary_text(source):
    """Arbitrary text either tokenizes or raises ParseError, nothing else."""
    try:
        tokens = tokenize(source)
    except ParseError as err:
        assert err.line >= 1
        assert err.column >= 1
        return
    assert tokens[-1].kind is TokenKind.EOI
    for tok in tokens[:-1]:
        assert source[tok.offset:tok.offset + len(tok.text)] == tok.text
