"""Propositional formulas over ``/\\``, ``\\/``, ``->``, ``F`` and ``T``.

Formulas are hash-consed: building the same tree twice returns the same
object, so structural equality is identity and hashing is O(1).  This is
what keeps the prover's memo tables and the basis enumeration cheap.
"""
from __future__ import annotations

import re
import threading
from functools import reduce
from typing import Iterable, Mapping

__all__ = [
    "Formula", "Var", "Bot", "Top", "And", "Or", "Imp", "BOT", "TOP",
    "VarSet", "ParseError", "parse", "to_text", "depth", "vars_of", "size",
    "substitute", "neg", "conj", "disj", "sort_key", "varset", "simplify_constants",
]

IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")

_table: dict = {}
_table_lock = threading.Lock()


class VarSet(frozenset):
    """Frozen set of variable names that iterates in sorted order."""

    def __iter__(self):
        return iter(sorted(frozenset.__iter__(self)))

    def __repr__(self):
        return "{" + ", ".join(self) + "}"

    def __or__(self, other):
        return VarSet(frozenset.__or__(self, frozenset(other)))

    def __and__(self, other):
        return VarSet(frozenset.__and__(self, frozenset(other)))

    def __sub__(self, other):
        return VarSet(frozenset.__sub__(self, frozenset(other)))

    __ror__ = __or__
    __rand__ = __and__


def varset(names: Iterable[str] | str = ()) -> VarSet:
    """Build a VarSet from names or from a comma separated string."""
    if isinstance(names, str):
        names = [n.strip() for n in names.split(",") if n.strip()]
    names = list(names)
    for n in names:
        if not IDENT.fullmatch(n) or n in ("T", "F"):
            raise ValueError(f"invalid variable name {n!r}")
    return VarSet(names)


def _intern(cls, key, init):
    obj = _table.get(key)
    if obj is not None:
        return obj
    with _table_lock:
        obj = _table.get(key)
        if obj is None:
            obj = object.__new__(cls)
            init(obj)
            _table[key] = obj
    return obj


class Formula:
    """Base class of the immutable, interned formula AST."""

    __slots__ = ("depth", "size", "vars", "_text")

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def __reduce__(self):
        return (parse, (to_text(self),))

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Imp(self, other)

    def __invert__(self) -> Formula:
        return Imp(self, BOT)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"<{type(self).__name__} {to_text(self)}>"

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)


def _set(obj, **fields):
    for k, v in fields.items():
        object.__setattr__(obj, k, v)


class Var(Formula):
    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __new__(cls, name: str):
        if not isinstance(name, str) or not IDENT.fullmatch(name) or name in ("T", "F"):
            raise ValueError(f"invalid variable name {name!r}")
        return _intern(cls, ("var", name), lambda o: _set(
            o, name=name, depth=0, size=1, vars=VarSet((name,)), _text=None))


class Bot(Formula):
    __slots__ = ()
    __match_args__ = ()

    def __new__(cls):
        return _intern(cls, ("bot",), lambda o: _set(
            o, depth=0, size=1, vars=VarSet(), _text=None))


class Top(Formula):
    __slots__ = ()
    __match_args__ = ()

    def __new__(cls):
        return _intern(cls, ("top",), lambda o: _set(
            o, depth=0, size=1, vars=VarSet(), _text=None))


class _Binary(Formula):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")
    _tag = ""
    _implication = False

    def __new__(cls, left: Formula, right: Formula):
        if not isinstance(left, Formula) or not isinstance(right, Formula):
            raise TypeError("operands must be formulas")
        key = (cls._tag, id(left), id(right))
        d = max(left.depth, right.depth) + (1 if cls._implication else 0)
        return _intern(cls, key, lambda o: _set(
            o, left=left, right=right, depth=d, size=1 + left.size + right.size,
            vars=left.vars | right.vars, _text=None))


class And(_Binary):
    __slots__ = ()
    _tag = "and"


class Or(_Binary):
    __slots__ = ()
    _tag = "or"


class Imp(_Binary):
    __slots__ = ()
    _tag = "imp"
    _implication = True


BOT = Bot()
TOP = Top()


def neg(f: Formula) -> Formula:
    return Imp(f, BOT)


def conj(fs: Iterable[Formula]) -> Formula:
    """Right-folded conjunction; the empty conjunction is ``T``."""
    fs = list(fs)
    if not fs:
        return TOP
    return reduce(lambda acc, f: And(f, acc), reversed(fs[:-1]), fs[-1])


def disj(fs: Iterable[Formula]) -> Formula:
    """Right-folded disjunction; the empty disjunction is ``F``."""
    fs = list(fs)
    if not fs:
        return BOT
    return reduce(lambda acc, f: Or(f, acc), reversed(fs[:-1]), fs[-1])


def depth(f: Formula) -> int:
    """Maximum nesting depth of ``->`` (negation counts, ``T`` does not)."""
    return f.depth


def size(f: Formula) -> int:
    return f.size


def vars_of(f: Formula) -> VarSet:
    return f.vars


def sort_key(f: Formula):
    """Deterministic total order: smaller formulas first, then by text."""
    return (f.size, to_text(f))


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Simultaneously replace variables by formulas."""
    if not mapping:
        return f
    memo: dict = {}

    def go(g):
        if not (g.vars & mapping.keys()):
            return g
        r = memo.get(g)
        if r is None:
            if isinstance(g, Var):
                r = mapping[g.name]
            else:
                r = type(g)(go(g.left), go(g.right))
            memo[g] = r
        return r

    return go(f)


# -- printing ---------------------------------------------------------------

_PREC = {Imp: 1, Or: 2, And: 3}
_UNARY = 4
_ATOM = 5


def _prec(f):
    if isinstance(f, Imp) and f.right is BOT:
        return _UNARY
    return _PREC.get(type(f), _ATOM)


def to_text(f: Formula) -> str:
    """Render with the fewest parentheses the grammar allows."""
    if f._text is not None:
        return f._text
    if isinstance(f, Var):
        s = f.name
    elif f is BOT:
        s = "F"
    elif f is TOP:
        s = "T"
    elif isinstance(f, Imp) and f.right is BOT:
        s = "~" + _wrap(f.left, _UNARY)
    elif isinstance(f, Imp):
        s = _wrap(f.left, 2) + " -> " + _wrap(f.right, 1)
    elif isinstance(f, Or):
        s = _wrap(f.left, 2) + " \\/ " + _wrap(f.right, 3)
    else:
        s = _wrap(f.left, 3) + " /\\ " + _wrap(f.right, 4)
    object.__setattr__(f, "_text", s)
    return s


def _wrap(f, min_prec):
    s = to_text(f)
    return s if _prec(f) >= min_prec else "(" + s + ")"


# -- parsing ----------------------------------------------------------------

class ParseError(ValueError):
    """Syntax error carrying a 1-based position and the expected tokens."""

    def __init__(self, message, line, column, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(expected))
        exp = f"; expected one of: {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"{message} at line {line}, column {column}{exp}")


_TOKEN = re.compile(r"\s*(?:(->)|(/\\)|(\\/)|(~)|(\()|(\))|([a-zA-Z][a-zA-Z0-9_]*))")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = []
        pos = 0
        while True:
            m = re.compile(r"\s*").match(text, pos)
            pos = m.end()
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", *self._loc(pos),
                                 ["->", "/\\", "\\/", "~", "(", ")", "identifier"])
            start = m.start(m.lastindex)
            self.tokens.append((m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def _loc(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def fail(self, expected):
        if self.i < len(self.tokens):
            tok, pos = self.tokens[self.i]
            msg = f"unexpected token {tok!r}"
        else:
            pos = len(self.text)
            msg = "unexpected end of input"
        raise ParseError(msg, *self._loc(pos), expected)

    def parse(self):
        f = self.imp()
        if self.peek() is not None:
            self.fail(["->", "/\\", "\\/", ")"] if self.peek() != ")" else ["end of input"])
        return f

    def imp(self):
        left = self.disj()
        if self.peek() == "->":
            self.i += 1
            return Imp(left, self.imp())
        return left

    def disj(self):
        f = self.conj()
        while self.peek() == "\\/":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "/\\":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.peek() == "~":
            self.i += 1
            return neg(self.unary())
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.i += 1
            f = self.imp()
            if self.peek() != ")":
                self.fail([")", "->", "/\\", "\\/"])
            self.i += 1
            return f
        if tok == "F":
            self.i += 1
            return BOT
        if tok == "T":
            self.i += 1
            return TOP
        if tok is not None and IDENT.fullmatch(tok):
            self.i += 1
            return Var(tok)
        self.fail(["(", "~", "F", "T", "identifier"])


def parse(text: str) -> Formula:
    """Parse the ASCII formula grammar (``~`` > ``/\\`` > ``\\/`` > ``->``)."""
    return _Parser(text).parse()


def simplify_constants(f: Formula) -> Formula:
    """Bottom-up constant propagation with IPC-valid identities only."""
    memo: dict = {}

    def go(g):
        if isinstance(g, (Var, Bot, Top)):
            return g
        r = memo.get(g)
        if r is not None:
            return r
        a, b = go(g.left), go(g.right)
        if isinstance(g, And):
            r = BOT if BOT in (a, b) else a if b is TOP or a is b else b if a is TOP else And(a, b)
        elif isinstance(g, Or):
            r = TOP if TOP in (a, b) else a if b is BOT or a is b else b if a is BOT else Or(a, b)
        elif a is BOT or b is TOP or a is b:
            r = TOP
        elif a is TOP:
            r = b
        else:
            r = Imp(a, b)
        memo[g] = r
        return r

    return go(f)
