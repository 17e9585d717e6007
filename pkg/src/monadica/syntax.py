"""Formulas of the five modal languages: AST, parser, printer, admissibility.

All five languages share one tree type.  Which modal nodes may occur is
decided at runtime by :func:`admissible`; the parser enforces it eagerly.

Concrete syntax (loosest to tightest)::

    <->   non-associative chain, grouped left to right
    ->    right associative
    |     left associative
    &     left associative
    ~ A E [] <> [F] <F> [P] <P>    prefix
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import ClassVar, Iterator


class Logic(enum.Enum):
    MIPC = "MIPC"
    MS4 = "MS4"
    S4T = "S4T"
    TS4 = "TS4"
    MS4T = "MS4T"

    @classmethod
    def parse(cls, name: str) -> "Logic":
        key = name.upper().replace(".", "")
        try:
            return cls[key]
        except KeyError:
            raise ValueError(f"unknown logic {name!r}; expected one of "
                             f"{', '.join(m.value for m in cls)}") from None

    @property
    def intuitionistic(self) -> bool:
        return self is Logic.MIPC


# A formula's language and a frame's class range over the same five names.
Language = Logic
FrameClass = Logic


class Formula:
    """Base class of formula nodes.  Nodes are immutable and hashable."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Bottom(Formula):
    def __repr__(self) -> str:
        return "Bottom"


@dataclass(frozen=True)
class Letter(Formula):
    name: str

    def __post_init__(self):
        if not LETTER_RE.fullmatch(self.name):
            raise ValueError(f"bad letter name {self.name!r}")

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Binary(Formula):
    left: Formula
    right: Formula
    symbol: ClassVar[str] = "?"

    def children(self):
        return (self.left, self.right)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class And(Binary):
    symbol: ClassVar[str] = "&"


@dataclass(frozen=True, repr=False)
class Or(Binary):
    symbol: ClassVar[str] = "|"


@dataclass(frozen=True, repr=False)
class Implies(Binary):
    symbol: ClassVar[str] = "->"


@dataclass(frozen=True)
class Unary(Formula):
    child: Formula
    symbol: ClassVar[str] = "?"

    def children(self):
        return (self.child,)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.child!r})"


@dataclass(frozen=True, repr=False)
class Not(Unary):
    symbol: ClassVar[str] = "~"


@dataclass(frozen=True, repr=False)
class Forall(Unary):
    symbol: ClassVar[str] = "A"


@dataclass(frozen=True, repr=False)
class Exists(Unary):
    symbol: ClassVar[str] = "E"


@dataclass(frozen=True, repr=False)
class Box(Unary):
    symbol: ClassVar[str] = "[]"


@dataclass(frozen=True, repr=False)
class Dia(Unary):
    symbol: ClassVar[str] = "<>"


@dataclass(frozen=True, repr=False)
class BoxF(Unary):
    symbol: ClassVar[str] = "[F]"


@dataclass(frozen=True, repr=False)
class DiaF(Unary):
    symbol: ClassVar[str] = "<F>"


@dataclass(frozen=True, repr=False)
class BoxP(Unary):
    symbol: ClassVar[str] = "[P]"


@dataclass(frozen=True, repr=False)
class DiaP(Unary):
    symbol: ClassVar[str] = "<P>"


BOTTOM = Bottom()
LETTER_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")

MODAL_NODES: tuple[type[Unary], ...] = (Forall, Exists, Box, Dia, BoxF, DiaF, BoxP, DiaP)

ADMISSIBLE: dict[Logic, frozenset[type[Unary]]] = {
    Logic.MIPC: frozenset({Forall, Exists}),
    Logic.MS4: frozenset({Box, Dia, Forall, Exists}),
    Logic.S4T: frozenset({BoxF, DiaF, BoxP, DiaP}),
    Logic.TS4: frozenset({Box, Dia, BoxF, DiaF, BoxP, DiaP}),
    Logic.MS4T: frozenset({BoxF, DiaF, BoxP, DiaP, Forall, Exists}),
}

_PREFIX: dict[str, type[Unary]] = {cls.symbol: cls for cls in (Not, *MODAL_NODES)}


def true_formula(lang: Logic) -> Formula:
    if lang.intuitionistic:
        return Implies(BOTTOM, BOTTOM)
    return Not(BOTTOM)


def neg(f: Formula, lang: Logic) -> Formula:
    """Negation in ``lang``: ``f -> false`` in MIPC, a ``Not`` node otherwise."""
    if lang.intuitionistic:
        return Implies(f, BOTTOM)
    return Not(f)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


# -- traversal ---------------------------------------------------------------

def walk(f: Formula) -> Iterator[Formula]:
    """Post-order traversal, duplicates included."""
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        for c in reversed(node.children()):
            stack.append((c, False))


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subtrees of ``f`` in post-order; ``f`` itself comes last."""
    seen: dict[Formula, None] = {}
    for node in walk(f):
        if node not in seen:
            seen[node] = None
    return list(seen)


def letters(f: Formula) -> set[str]:
    return {node.name for node in walk(f) if isinstance(node, Letter)}


def depth(f: Formula) -> int:
    kids = f.children()
    return 0 if not kids else 1 + max(depth(c) for c in kids)


def admissible(f: Formula, lang: Logic) -> bool:
    allowed = ADMISSIBLE[lang]
    for node in walk(f):
        if isinstance(node, Not):
            if lang.intuitionistic:
                return False
        elif isinstance(node, Unary) and type(node) not in allowed:
            return False
    return True


def require(f: Formula, lang: Logic) -> None:
    """Raise :class:`InadmissibleError` unless ``f`` belongs to ``lang``."""
    allowed = ADMISSIBLE[lang]
    for node in walk(f):
        if isinstance(node, Unary) and (
            (isinstance(node, Not) and lang.intuitionistic)
            or (not isinstance(node, Not) and type(node) not in allowed)
        ):
            raise InadmissibleError(node.symbol, lang)


# -- printing ----------------------------------------------------------------

_PREC = {Implies: 1, Or: 2, And: 3}


def pretty(f: Formula) -> str:
    """Render ``f`` with the fewest parentheses that parse back to ``f``."""
    return _pretty(f, 0)


def _pretty(f: Formula, context: int) -> str:
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Letter):
        return f.name
    if isinstance(f, Unary):
        sep = " " if f.symbol in ("A", "E") else ""
        return f.symbol + sep + _pretty(f.child, 4)
    prec = _PREC[type(f)]
    if isinstance(f, Implies):
        text = f"{_pretty(f.left, prec + 1)} -> {_pretty(f.right, prec)}"
    else:
        text = f"{_pretty(f.left, prec)} {f.symbol} {_pretty(f.right, prec + 1)}"
    return f"({text})" if prec < context else text


# -- parsing -----------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class InadmissibleError(ParseError):
    def __init__(self, token: str, lang: Logic, position: int | None = None):
        self.token = token
        self.lang = lang
        super().__init__(f"modality {token!r} is not part of the {lang.value} language", position)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|\[\]|<>|\[F\]|<F>|\[P\]|<P>|[~&|()AE])|(?P<word>[a-z][a-zA-Z0-9_]*))"
)


@dataclass
class _Token:
    kind: str  # "op", "word" or "end"
    text: str
    pos: int


def tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = "op" if m.group("op") else "word"
        start = m.start(kind)
        tokens.append(_Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, lang: Logic):
        self.tokens = tokenize(text)
        self.i = 0
        self.lang = lang

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.take()
        if tok.text != text or tok.kind == "end":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected {text!r}, found {found}", tok.pos)

    def formula(self) -> Formula:
        f = self.imp()
        while self.peek().text == "<->":
            self.take()
            f = iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek().text == "->":
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().text == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek().text == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "op" and tok.text in _PREFIX:
            self.take()
            node = _PREFIX[tok.text]
            child = self.unary()
            if node is Not:
                return neg(child, self.lang)
            if node not in ADMISSIBLE[self.lang]:
                raise InadmissibleError(tok.text, self.lang, tok.pos)
            return node(child)
        return self.atom()

    def atom(self) -> Formula:
        tok = self.take()
        if tok.kind == "word":
            if tok.text == "false":
                return BOTTOM
            if tok.text == "true":
                return true_formula(self.lang)
            return Letter(tok.text)
        if tok.text == "(":
            f = self.formula()
            self.expect(")")
            return f
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"expected a formula, found {found}", tok.pos)


def parse(text: str, lang: Logic | str) -> Formula:
    """Parse ``text`` as a formula of ``lang``.

    ``~x`` becomes ``x -> false`` in MIPC; ``a <-> b`` becomes
    ``(a -> b) & (b -> a)`` in every language.
    """
    if isinstance(lang, str):
        lang = Logic.parse(lang)
    p = _Parser(text, lang)
    f = p.formula()
    tok = p.peek()
    if tok.kind != "end":
        raise ParseError(f"unexpected {tok.text!r}", tok.pos)
    return f
