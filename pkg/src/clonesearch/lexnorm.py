"""Java lexing and identifier normalization.

``extract_identifiers`` turns a Java method into the flat, duplicate-free
list of stemmed keywords that represents it. ``extract_words`` does the
same for English prose (clone class descriptions and search queries).
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .stemmer import stem

log = logging.getLogger(__name__)

IDENTIFIER = "identifier"
KEYWORD = "keyword"
LITERAL = "literal"
SEPARATOR = "separator_or_operator"
COMMENT = "comment"

JAVA_KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized this
    throw throws transient try void volatile while
    """.split()
)
assert len(JAVA_KEYWORDS) == 50

JAVA_LITERAL_WORDS = frozenset({"true", "false", "null"})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str


_NUMBER = re.compile(
    r"""
    0[xX][0-9a-fA-F_]*(\.[0-9a-fA-F_]*)?([pP][+-]?[0-9_]+)?[lLfFdD]?
  | 0[bB][01_]+[lL]?
  | ([0-9][0-9_]*(\.[0-9_]*)?|\.[0-9][0-9_]*)([eE][+-]?[0-9_]+)?[lLfFdD]?
    """,
    re.VERBOSE,
)
DIGITS = frozenset("0123456789")
_WORD = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_UNICODE_WORD = re.compile(r"[^\W\d][\w$]*")
_OPERATORS = sorted(
    """>>>= <<= >>= >>> ... -> :: ++ -- && || == != <= >= += -= *= /= &= |= ^= %= << >>""".split(),
    key=len,
    reverse=True,
)


class Lexer:
    """Lenient single-pass Java lexer.

    Unterminated strings, character literals and block comments extend to
    the end of input; each such recovery is appended to ``warnings``.
    """

    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.warnings: list[str] = []

    def _skip_quoted(self, quote: str) -> int:
        src, i, n = self.src, self.pos + 1, len(self.src)
        if quote == '"' and src.startswith('"""', self.pos):
            end = src.find('"""', self.pos + 3)
            if end < 0:
                self.warnings.append(f"unterminated text block at offset {self.pos}")
                return n
            return end + 3
        while i < n:
            c = src[i]
            if c == "\\":
                i += 2
                continue
            if c == quote:
                return i + 1
            if c == "\n":
                break
            i += 1
        self.warnings.append(f"unterminated literal at offset {self.pos}")
        return n

    def tokens(self) -> list[Token]:
        out: list[Token] = []
        src, n = self.src, len(self.src)
        while self.pos < n:
            c = src[self.pos]
            start = self.pos
            if c.isspace():
                self.pos += 1
                continue
            if src.startswith("//", start):
                end = src.find("\n", start)
                self.pos = n if end < 0 else end
                out.append(Token(COMMENT, src[start:self.pos]))
                continue
            if src.startswith("/*", start):
                end = src.find("*/", start + 2)
                if end < 0:
                    self.warnings.append(f"unterminated block comment at offset {start}")
                    self.pos = n
                else:
                    self.pos = end + 2
                out.append(Token(COMMENT, src[start:self.pos]))
                continue
            if c in "\"'":
                self.pos = self._skip_quoted(c)
                out.append(Token(LITERAL, src[start:self.pos]))
                continue
            if c in DIGITS or (c == "." and start + 1 < n and src[start + 1] in DIGITS):
                m = _NUMBER.match(src, start)
                self.pos = m.end()
                out.append(Token(LITERAL, m.group()))
                continue
            m = _WORD.match(src, start)
            if m is None and (c.isalpha() or c == "_"):
                # non-ASCII identifier start
                m = _UNICODE_WORD.match(src, start)
            if m is not None:
                word = m.group()
                self.pos = m.end()
                if word in JAVA_KEYWORDS:
                    kind = KEYWORD
                elif word in JAVA_LITERAL_WORDS:
                    kind = LITERAL
                else:
                    kind = IDENTIFIER
                out.append(Token(kind, word))
                continue
            for op in _OPERATORS:
                if src.startswith(op, start):
                    self.pos = start + len(op)
                    break
            else:
                self.pos = start + 1
            out.append(Token(SEPARATOR, src[start:self.pos]))
        return out


def lex_java(source: str) -> list[Token]:
    lexer = Lexer(source)
    toks = lexer.tokens()
    for w in lexer.warnings:
        log.warning(w)
    return toks


_CAMEL = re.compile(
    r"""
    [A-Z]+(?=[A-Z][a-z])    # acronym run, leaving its last capital to the next word
  | [A-Z]?[a-z0-9]+         # capitalised or lowercase word, digits attached
  | [A-Z]+[0-9]*            # trailing acronym
  | [^\W_]+                 # anything else alphanumeric
    """,
    re.VERBOSE,
)


def split_identifier(ident: str) -> list[str]:
    """Split an identifier on underscores and camel-case boundaries.

    Letter/digit boundaries are kept together, so ``e1`` stays one word.

    >>> split_identifier("getHTTPStatus_code")
    ['get', 'http', 'status', 'code']
    """
    words = []
    for part in re.split(r"[_$]+", ident):
        words.extend(m.group().lower() for m in _CAMEL.finditer(part))
    return [w for w in words if w]


def _dedup(items: Iterable[str]) -> list[str]:
    return list(dict.fromkeys(items))


def extract_identifiers(source: str) -> list[str]:
    """Keyword list for one Java method, in first-occurrence order."""
    terms = []
    for tok in lex_java(source):
        if tok.kind != IDENTIFIER:
            continue
        terms.extend(stem(w) for w in split_identifier(tok.text) if len(w) > 1)
    return _dedup(t for t in terms if len(t) > 1)


def extract_words(prose: str, stopwords: Iterable[str] = ()) -> list[str]:
    stop = {w.lower() for w in stopwords}
    words = (w.lower() for w in re.split(r"[\W_]+", prose))
    kept = (stem(w) for w in words if len(w) > 1 and w not in stop)
    return _dedup(t for t in kept if len(t) > 1)


def read_stopwords(path) -> frozenset[str]:
    """Read a stopword file: one word per line, ``#`` starts a comment."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.split("#", 1)[0].strip().lower()
        if word:
            words.add(word)
    return frozenset(words)


_default_stopwords: Optional[frozenset[str]] = None


def default_stopwords() -> frozenset[str]:
    global _default_stopwords
    if _default_stopwords is None:
        with resources.as_file(resources.files(__package__) / "data" / "stopwords.txt") as p:
            _default_stopwords = read_stopwords(p)
    return _default_stopwords
