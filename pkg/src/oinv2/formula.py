"""Two-variable first-order formulas: AST, parser, renderer, signatures.

Concrete syntax::

    formula  := iff ;
    iff      := imp ( "<->" imp )* ;
    imp      := or ( "->" or )* ;            right-associative
    or       := and ( "|" and )* ;
    and      := unary ( "&" unary )* ;
    unary    := "!" unary | quant | atom | "(" formula ")" ;
    quant    := ("forall"|"exists") var "." unary ;
    atom     := name "(" var ( "," var )? ")" | var "=" var
              | var ("<=" | "<=0" | "<=1") var ;

A quantifier body is a single ``unary``, so ``forall x. P(x) & Q(x)``
reads as ``(forall x. P(x)) & Q(x)``.  Parenthesize wider bodies.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

VARS = ("x", "y")

# Distinguished order symbols, keyed the same way as structure files.
ORDER_TOKENS = {"leq": "<=", "leq0": "<=0", "leq1": "<=1"}
TOKEN_ORDERS = {tok: key for key, tok in ORDER_TOKENS.items()}


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class VariableError(ParseError):
    """A variable other than x or y was used."""


class ArityError(FormulaError):
    pass


# --------------------------------------------------------------------- AST


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Leq:
    left: str
    right: str
    order: str = "leq"


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Pred, Eq, Leq, Not, And, Or, Implies, Iff, Forall, Exists]
ATOMS = (Pred, Eq, Leq)
BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists)

TRUE: Formula = Eq("x", "x")


def other(var: str) -> str:
    return "y" if var == "x" else "x"


def conj(parts) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``x = x``."""
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return Not(TRUE)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, ATOMS):
        return ()
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return (f.body,)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over every node of ``f``."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def size(f: Formula) -> int:
    """Number of AST nodes."""
    return sum(1 for _ in subformulas(f))


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, QUANTIFIERS) for g in subformulas(f))


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Pred):
        return frozenset(f.args)
    if isinstance(f, (Eq, Leq)):
        return frozenset((f.left, f.right))
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    out: frozenset[str] = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def map_atoms(f: Formula, fn) -> Formula:
    """Rebuild ``f`` with every atom replaced by ``fn(atom)``."""
    if isinstance(f, ATOMS):
        return fn(f)
    if isinstance(f, Not):
        return Not(map_atoms(f.arg, fn))
    if isinstance(f, BINARY):
        return type(f)(map_atoms(f.left, fn), map_atoms(f.right, fn))
    return type(f)(f.var, map_atoms(f.body, fn))


def swap_vars(f: Formula) -> Formula:
    """Exchange x and y throughout, binders included."""
    if isinstance(f, Pred):
        return Pred(f.name, tuple(other(v) for v in f.args))
    if isinstance(f, Eq):
        return Eq(other(f.left), other(f.right))
    if isinstance(f, Leq):
        return Leq(other(f.left), other(f.right), f.order)
    if isinstance(f, Not):
        return Not(swap_vars(f.arg))
    if isinstance(f, BINARY):
        return type(f)(swap_vars(f.left), swap_vars(f.right))
    return type(f)(other(f.var), swap_vars(f.body))


# --------------------------------------------------------------- signature


@dataclass(frozen=True)
class Signature:
    """Predicate arities plus the distinguished order symbols in use."""

    preds: tuple[tuple[str, int], ...] = ()
    orders: frozenset[str] = frozenset()

    def __post_init__(self):
        seen = {}
        for name, arity in self.preds:
            if arity not in (1, 2):
                raise ArityError(f"predicate {name} has arity {arity}; only 1 and 2 are supported")
            if name in ORDER_TOKENS:
                raise ArityError(f"{name} is reserved for an order symbol")
            if seen.setdefault(name, arity) != arity:
                raise ArityError(f"predicate {name} used with arities {seen[name]} and {arity}")
        bad = set(self.orders) - set(ORDER_TOKENS)
        if bad:
            raise FormulaError(f"unknown order symbols {sorted(bad)}")
        object.__setattr__(self, "preds", tuple(sorted(seen.items())))
        object.__setattr__(self, "orders", frozenset(self.orders))

    @classmethod
    def of(cls, preds: Mapping[str, int] = {}, orders=()) -> "Signature":
        return cls(tuple(preds.items()), frozenset(orders))

    @property
    def arities(self) -> dict[str, int]:
        return dict(self.preds)

    @property
    def unary(self) -> list[str]:
        return [p for p, a in self.preds if a == 1]

    @property
    def binary(self) -> list[str]:
        return [p for p, a in self.preds if a == 2]

    def __or__(self, other: "Signature") -> "Signature":
        return Signature(self.preds + other.preds, self.orders | other.orders)

    def __le__(self, other: "Signature") -> bool:
        return set(self.preds) <= set(other.preds) and self.orders <= other.orders

    def without_orders(self) -> "Signature":
        return Signature(self.preds)


def signature_of(f: Formula) -> Signature:
    preds: list[tuple[str, int]] = []
    orders = set()
    for g in subformulas(f):
        if isinstance(g, Pred):
            preds.append((g.name, len(g.args)))
        elif isinstance(g, Leq):
            orders.add(g.order)
    return Signature(tuple(preds), frozenset(orders))


def substitute_order(f: Formula, target: int) -> Formula:
    """Replace every plain ``<=`` by ``<=0`` or ``<=1``."""
    if target not in (0, 1):
        raise ValueError("target must be 0 or 1")
    used = signature_of(f).orders
    if used - {"leq"}:
        raise FormulaError(f"formula already uses {', '.join(ORDER_TOKENS[o] for o in sorted(used - {'leq'}))}")
    key = f"leq{target}"

    def swap(a):
        return Leq(a.left, a.right, key) if isinstance(a, Leq) else a

    return map_atoms(f, swap)


# ------------------------------------------------------------------ lexing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op><->|->|<=[01](?![0-9A-Za-z_])|<=|[!&|().,=])
  | (?P<name>[A-Z_][A-Za-z0-9_]*)
  | (?P<word>[a-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rindex("\n") + 1
        else:
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.fail(f"expected {text!r}, found {found!r}")

    def var(self) -> str:
        tok = self.tok
        if tok.kind != "word" or tok.text in ("forall", "exists"):
            self.fail(f"expected a variable, found {tok.text or 'end of input'!r}")
        if tok.text not in VARS:
            raise VariableError(f"variable {tok.text!r} is not x or y (only two variables allowed)", tok.line, tok.col)
        self.i += 1
        return tok.text

    def formula(self) -> Formula:
        f = self.imp()
        while self.accept("<->"):
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disjunction()
        if self.accept("->"):
            return Implies(f, self.imp())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.accept("|"):
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.tok
        if self.accept("!"):
            return Not(self.unary())
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "word" and tok.text in ("forall", "exists"):
            self.i += 1
            v = self.var()
            self.expect(".")
            body = self.unary()
            return Forall(v, body) if tok.text == "forall" else Exists(v, body)
        if tok.kind == "name":
            self.i += 1
            self.expect("(")
            args = [self.var()]
            if self.accept(","):
                args.append(self.var())
            self.expect(")")
            return Pred(tok.text, tuple(args))
        if tok.kind == "word":
            left = self.var()
            op = self.tok
            if self.accept("="):
                return Eq(left, self.var())
            if op.kind == "op" and op.text in TOKEN_ORDERS:
                self.i += 1
                return Leq(left, self.var(), TOKEN_ORDERS[op.text])
            self.fail(f"expected '=' or an order symbol, found {op.text or 'end of input'!r}")
        self.fail(f"unexpected {tok.text or 'end of input'!r}")


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.text!r} after formula")
    signature_of(f)  # arity check
    return f


# --------------------------------------------------------------- rendering

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _atom_text(f) -> str:
    if isinstance(f, Pred):
        return f"{f.name}({','.join(f.args)})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    return f"{f.left} {ORDER_TOKENS[f.order]} {f.right}"


def _wrap_tight(f: Formula) -> str:
    # Operand of "!" or a quantifier body: infix atoms and connectives get parentheses.
    text = render(f)
    if isinstance(f, (Pred, Not) + QUANTIFIERS):
        return text
    return f"({text})"


def render(f: Formula) -> str:
    if isinstance(f, ATOMS):
        return _atom_text(f)
    if isinstance(f, Not):
        return "!" + _wrap_tight(f.arg)
    if isinstance(f, QUANTIFIERS):
        q = "forall" if isinstance(f, Forall) else "exists"
        return f"{q} {f.var}. {_wrap_tight(f.body)}"
    prec = _PREC[type(f)]
    right_assoc = isinstance(f, Implies)
    left_min = prec + 1 if right_assoc else prec
    right_min = prec if right_assoc else prec + 1
    return f"{_operand(f.left, left_min, left=True)} {_SYMBOL[type(f)]} {_operand(f.right, right_min, left=False)}"


def _operand(f: Formula, min_prec: int, left: bool) -> str:
    text = render(f)
    if isinstance(f, BINARY):
        return text if _PREC[type(f)] >= min_prec else f"({text})"
    if left and isinstance(f, QUANTIFIERS):
        return f"({text})"
    return text
