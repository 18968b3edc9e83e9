"""Tokenizer for the rule language.

Tokens carry 1-based line/column positions. `%` starts a comment running to
end of line. Integer literals are unsigned here; the parser folds unary minus.
"""

from dataclasses import dataclass

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)

KEYWORDS = {"not": "NOT", "mod": "MOD", "abs": "ABS", "compute": "COMPUTE"}

# Longest match first.
_PUNCT = [
    (":-", "ARROW"),
    ("..", "DOTDOT"),
    ("==", "EQ"),
    ("!=", "NE"),
    ("<=", "LE"),
    (">=", "GE"),
    ("<", "LT"),
    (">", "GT"),
    ("=", "ASSIGN"),
    (".", "DOT"),
    (",", "COMMA"),
    (";", "SEMI"),
    (":", "COLON"),
    ("(", "LPAREN"),
    (")", "RPAREN"),
    ("{", "LBRACE"),
    ("}", "RBRACE"),
    ("[", "LBRACKET"),
    ("]", "RBRACKET"),
    ("+", "PLUS"),
    ("-", "MINUS"),
    ("*", "STAR"),
    ("/", "SLASH"),
]


class LexError(Exception):
    def __init__(self, file, line, col, message):
        self.file = file
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"{file}:{line}:{col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    value: int | None = None  # integer tokens only


def tokenize(text, filename="<string>"):
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            # A digit run ends before "..": 1..3 is INTEGER DOTDOT INTEGER.
            lit = text[i:j]
            val = int(lit)
            if val > INT64_MAX:
                raise LexError(filename, line, col, f"integer literal out of 64-bit range: {lit}")
            toks.append(Token("INTEGER", lit, line, col, val))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in KEYWORDS:
                kind = KEYWORDS[word]
            elif word[0].isupper() or word[0] == "_":
                kind = "VARIABLE"
            else:
                kind = "IDENT"
            toks.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if ch == "#":
            if text.startswith("#const", i):
                toks.append(Token("CONSTDECL", "#const", line, col))
                i += 6
                col += 6
                continue
            raise LexError(filename, line, col, f"unknown directive at {text[i:i+10]!r}")
        for lit, kind in _PUNCT:
            if text.startswith(lit, i):
                toks.append(Token(kind, lit, line, col))
                i += len(lit)
                col += len(lit)
                break
        else:
            raise LexError(filename, line, col, f"illegal character {ch!r}")
    toks.append(Token("EOF", "", line, col))
    return toks
