"""Tokenizer for Java source text.

Produces a flat token stream; comments and whitespace are dropped. The
tokenizer never fails on valid UTF-8 input: unknown characters become
``error`` tokens so the parser can recover around them.
"""

from dataclasses import dataclass

KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package
    private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while
    """.split()
)

# Longest-first so that e.g. ">>>=" wins over ">".
OPERATORS = sorted(
    [
        ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&",
        "||", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=",
        "|=", "^=", "<<", ">>", "+", "-", "*", "/", "%", "=", "<", ">",
        "!", "~", "&", "|", "^", "?", ":", "@",
    ],
    key=len,
    reverse=True,
)

PUNCT = "(){}[];,."


@dataclass(frozen=True)
class Token:
    kind: str  # identifier | keyword | number | string | char | op | punct | error | eof
    text: str
    offset: int

    def is_kw(self, word: str) -> bool:
        return self.kind == "keyword" and self.text == word


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if c == "/" and i + 1 < n:
            nxt = source[i + 1]
            if nxt == "/":
                end = source.find("\n", i)
                i = n if end < 0 else end + 1
                continue
            if nxt == "*":
                end = source.find("*/", i + 2)
                i = n if end < 0 else end + 2
                continue
        if c == '"':
            if source.startswith('"""', i):
                end = source.find('"""', i + 3)
                stop = n if end < 0 else end + 3
                tokens.append(Token("string", source[i:stop], i))
                i = stop
                continue
            j = i + 1
            while j < n and source[j] not in '"\n':
                if source[j] == "\\":
                    j += 1
                j += 1
            stop = min(j + 1, n) if j < n and source[j] == '"' else j
            tokens.append(Token("string", source[i:stop], i))
            i = max(stop, i + 1)
            continue
        if c == "'":
            j = i + 1
            while j < n and source[j] not in "'\n":
                if source[j] == "\\":
                    j += 1
                j += 1
            stop = min(j + 1, n) if j < n and source[j] == "'" else j
            tokens.append(Token("char", source[i:stop], i))
            i = max(stop, i + 1)
            continue
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            while j < n and (source[j].isalnum() or source[j] in "._" or
                             (source[j] in "+-" and source[j - 1] in "eEpP")):
                j += 1
            if source[j - 1] == "." and j - 1 > i:
                j -= 1  # trailing '.' starts member access, not part of the literal
            tokens.append(Token("number", source[i:j], i))
            i = j
            continue
        if c.isalpha() or c in "_$":
            j = i
            while j < n and (source[j].isalnum() or source[j] in "_$"):
                j += 1
            word = source[i:j]
            kind = "keyword" if word in KEYWORDS else "identifier"
            tokens.append(Token(kind, word, i))
            i = j
            continue
        if c in PUNCT:
            if source.startswith("...", i):
                tokens.append(Token("op", "...", i))
                i += 3
                continue
            tokens.append(Token("punct", c, i))
            i += 1
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token("op", op, i))
                i += len(op)
                break
        else:
            tokens.append(Token("error", c, i))
            i += 1
    tokens.append(Token("eof", "", n))
    return tokens
