"""Abstract syntax, concrete-syntax parser and pretty-printer for the while language."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Iterator, Union

from lark import Lark, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

logger = logging.getLogger(__name__)

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
KEYWORDS = frozenset({"skip", "while", "do", "done"})


def check_ident(name: str) -> str:
    """Reject names that are not identifiers of the language"""
    if not isinstance(name, str) or not IDENT_RE.match(name) or name in KEYWORDS:
        raise ValueError(f"Invalid identifier: {name!r}")
    return name


# Arithmetic and boolean expressions

@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        check_ident(self.name)


@dataclass(frozen=True)
class Num:
    n: int


@dataclass(frozen=True)
class Plus:
    a1: AExpr
    a2: AExpr


AExpr = Union[Var, Num, Plus]


@dataclass(frozen=True)
class Lt:
    a1: AExpr
    a2: AExpr


BExpr = Lt


# Bare instructions

@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Assign:
    x: str
    e: AExpr

    def __post_init__(self):
        check_ident(self.x)


@dataclass(frozen=True)
class Seq:
    i1: Instr
    i2: Instr


@dataclass(frozen=True)
class While:
    b: BExpr
    body: Instr


Instr = Union[Skip, Assign, Seq, While]


# Assertions and conditions

@dataclass(frozen=True)
class Bool:
    b: BExpr


@dataclass(frozen=True)
class Not:
    a: Assert


@dataclass(frozen=True)
class Conj:
    a1: Assert
    a2: Assert


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple[AExpr, ...] = ()

    def __post_init__(self):
        check_ident(self.name)
        object.__setattr__(self, "args", tuple(self.args))


Assert = Union[Bool, Not, Conj, Pred]


@dataclass(frozen=True)
class Imp:
    hyp: Assert
    concl: Assert


Condition = Imp


# Annotated instructions

@dataclass(frozen=True)
class Prec:
    a: Assert
    i: AInstr


@dataclass(frozen=True)
class ASkip:
    pass


@dataclass(frozen=True)
class AAssign:
    x: str
    e: AExpr

    def __post_init__(self):
        check_ident(self.x)


@dataclass(frozen=True)
class ASeq:
    i1: AInstr
    i2: AInstr


@dataclass(frozen=True)
class AWhile:
    b: BExpr
    inv: Assert
    body: AInstr


AInstr = Union[Prec, ASkip, AAssign, ASeq, AWhile]

Node = Union[AExpr, BExpr, Instr, Assert, Condition, AInstr]

# The assertion language has no truth constants; these are the forced encodings.
true_assert = Bool(Lt(Num(0), Num(1)))
false_assert = Bool(Lt(Num(0), Num(0)))

# Program points are addressed by the steps taken from the root.
Path = tuple[str, ...]


def format_path(path: Path) -> str:
    return "/".join(("root",) + tuple(path))


def seq_steps(i, path: Path = ()) -> Iterator[tuple]:
    """Walk the right spine of a Seq/ASeq chain, yielding each item with its path.

    A non-sequence yields itself. Long programs parse into long right spines,
    so this is a loop rather than a recursion.
    """
    while isinstance(i, (Seq, ASeq)):
        yield i.i1, path + ("seq1",)
        i, path = i.i2, path + ("seq2",)
    yield i, path


def seq_items(i) -> list:
    return [item for item, _ in seq_steps(i)]


# Parsing

_TERMINALS = r"""
NAME: /[A-Za-z_][A-Za-z0-9_]*/
NUM: /-?[0-9]+/

%import common.WS
%ignore WS
"""

GRAMMAR = r"""
ainstr: aitem (";" aitem)*
?aitem: "skip"                                             -> askip
      | NAME ":=" aexpr                                    -> aassign
      | "{" assertion "}" aitem                            -> prec
      | "while" bexpr "do" "[" assertion "]" ainstr "done" -> awhile
      | "(" ainstr ")"

instr: item (";" item)*
?item: "skip"                                              -> skip
     | NAME ":=" aexpr                                     -> assign
     | "while" bexpr "do" instr "done"                     -> while_loop
     | "(" instr ")"

condition: assertion "->" assertion

assertion: aconj ("/\\" aconj)*
?aconj: "~" aconj                                          -> negation
      | NAME "(" ")"                                       -> pred
      | NAME "(" aexpr ("," aexpr)* ")"                    -> pred
      | bexpr                                              -> boolean
      | "(" assertion ")"

bexpr: aexpr "<" aexpr

aexpr: aterm ("+" aterm)*
?aterm: NUM                                                -> num
      | NAME                                               -> var
      | "(" aexpr ")"
""" + _TERMINALS

# Environments are lists of `name=value`. Abstract values are kept as raw
# `[...]` text for the domain to read.
BINDINGS_GRAMMAR = r"""
env: (binding ("," binding)*)?
binding: NAME "=" NUM

abenv: (abinding ("," abinding)*)?
abinding: NAME "=" VALUE

VALUE: /\[[^\]]*\]/
""" + _TERMINALS


def fold_right(items, node):
    """Rebuild a right-nested chain from its items"""
    result = items[-1]
    for item in reversed(items[:-1]):
        result = node(item, result)
    return result


class _AstBuilder(Transformer):
    """Builds AST nodes while the LALR parser reduces"""

    def ainstr(self, items):
        return fold_right(items, ASeq)

    def askip(self, _):
        return ASkip()

    def aassign(self, children):
        name, e = children
        return AAssign(str(name), e)

    def prec(self, children):
        a, i = children
        return Prec(a, i)

    def awhile(self, children):
        b, inv, body = children
        return AWhile(b, inv, body)

    def instr(self, items):
        return fold_right(items, Seq)

    def skip(self, _):
        return Skip()

    def assign(self, children):
        name, e = children
        return Assign(str(name), e)

    def while_loop(self, children):
        b, body = children
        return While(b, body)

    def condition(self, children):
        hyp, concl = children
        return Imp(hyp, concl)

    def assertion(self, items):
        return fold_right(items, Conj)

    def negation(self, children):
        return Not(children[0])

    def pred(self, children):
        name, *args = children
        return Pred(str(name), tuple(args))

    def boolean(self, children):
        return Bool(children[0])

    def bexpr(self, children):
        a1, a2 = children
        return Lt(a1, a2)

    def aexpr(self, items):
        result = items[0]
        for item in items[1:]:
            result = Plus(result, item)
        return result

    def num(self, children):
        return Num(int(children[0]))

    def var(self, children):
        return Var(str(children[0]))


_parser = Lark(
    GRAMMAR,
    parser="lalr",
    lexer="basic",
    start=["ainstr", "instr", "assertion", "condition", "bexpr", "aexpr"],
    transformer=_AstBuilder(),
)


class _BindingsBuilder(Transformer):
    def env(self, items):
        return list(items)

    abenv = env

    def binding(self, children):
        name, value = children
        return str(name), int(value)

    def abinding(self, children):
        name, value = children
        return str(name), str(value)


_bindings_parser = Lark(
    BINDINGS_GRAMMAR,
    parser="lalr",
    lexer="basic",
    start=["env", "abenv"],
    transformer=_BindingsBuilder(),
)


class ParseError(ValueError):
    """Syntax error with a 1-based position and the set of acceptable tokens"""

    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        self.line = line
        self.column = column
        self.expected = expected
        detail = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"line {line}, column {column}: {message}{detail}")


def _describe_terminal(parser: Lark, name: str) -> str:
    try:
        pattern = parser.get_terminal(name).pattern
    except KeyError:
        return name
    if pattern.type == "str":
        return repr(pattern.value)
    return name


def _end_position(text: str) -> tuple[int, int]:
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


def _parse(text: str, start: str, parser: Lark = _parser):
    try:
        return parser.parse(text, start=start)
    except UnexpectedInput as e:
        line, column = getattr(e, "line", -1), getattr(e, "column", -1)
        if line is None or line < 1:
            line, column = _end_position(text)
        if isinstance(e, UnexpectedCharacters):
            expected = e.allowed or set()
            message = f"unexpected character {text[e.pos_in_stream]!r}"
        elif isinstance(e, UnexpectedToken):
            expected = e.expected or set()
            if e.token.type == "$END":
                line, column = _end_position(text)
                message = "unexpected end of input"
            else:
                message = f"unexpected token {str(e.token)!r}"
        elif isinstance(e, UnexpectedEOF):
            expected = set(e.expected or ())
            message = "unexpected end of input"
        else:
            expected = set()
            message = str(e)
        raise ParseError(message, line, column, frozenset(_describe_terminal(parser, t) for t in expected)) from None


def parse_instr(text: str) -> AInstr:
    """Parse an annotated program; every while loop must carry a [ ... ] invariant"""
    return _parse(text, "ainstr")


def parse_bare(text: str) -> Instr:
    """Parse a program without annotations"""
    return _parse(text, "instr")


def parse_assert(text: str) -> Assert:
    return _parse(text, "assertion")


def parse_condition(text: str) -> Condition:
    return _parse(text, "condition")


def parse_bexpr(text: str) -> BExpr:
    return _parse(text, "bexpr")


def parse_aexpr(text: str) -> AExpr:
    return _parse(text, "aexpr")


def parse_binding_list(text: str) -> list[tuple[str, int]]:
    """`x=0,y=-2` as (name, value) pairs in order; names are not checked against keywords"""
    return _parse(text, "env", _bindings_parser)


def parse_abinding_list(text: str) -> list[tuple[str, str]]:
    """`x=[0,0],n=[-inf,+inf]` as (name, value text) pairs in order"""
    return _parse(text, "abenv", _bindings_parser)


# Pretty-printing

def _pretty_aexpr(a: AExpr) -> str:
    match a:
        case Var(name):
            return name
        case Num(n):
            return str(n)
        case Plus(a1, a2):
            right = f"({_pretty_aexpr(a2)})" if isinstance(a2, Plus) else _pretty_aexpr(a2)
            return f"{_pretty_aexpr(a1)} + {right}"
    raise TypeError(f"Not an arithmetic expression: {a!r}")


def _pretty_bexpr(b: BExpr) -> str:
    return f"{_pretty_aexpr(b.a1)} < {_pretty_aexpr(b.a2)}"


def _pretty_assert(a: Assert) -> str:
    match a:
        case Bool(b):
            return _pretty_bexpr(b)
        case Not(inner):
            return f"~ {_assert_operand(inner)}"
        case Conj(a1, a2):
            return f"{_assert_operand(a1)} /\\ {_pretty_assert(a2)}"
        case Pred(name, args):
            return f"{name}({','.join(_pretty_aexpr(arg) for arg in args)})"
    raise TypeError(f"Not an assertion: {a!r}")


def _assert_operand(a: Assert) -> str:
    return f"({_pretty_assert(a)})" if isinstance(a, Conj) else _pretty_assert(a)


def _pretty_ainstr(i: AInstr) -> str:
    match i:
        case ASeq():
            return "; ".join(_ainstr_item(item) for item in seq_items(i))
        case Prec(a, inner):
            return f"{{ {_pretty_assert(a)} }} {_ainstr_item(inner)}"
        case ASkip():
            return "skip"
        case AAssign(x, e):
            return f"{x} := {_pretty_aexpr(e)}"
        case AWhile(b, inv, body):
            return f"while {_pretty_bexpr(b)} do [ {_pretty_assert(inv)} ] {_pretty_ainstr(body)} done"
    raise TypeError(f"Not an annotated instruction: {i!r}")


def _ainstr_item(i: AInstr) -> str:
    return f"({_pretty_ainstr(i)})" if isinstance(i, ASeq) else _pretty_ainstr(i)


def _pretty_instr(i: Instr) -> str:
    match i:
        case Seq():
            return "; ".join(_instr_item(item) for item in seq_items(i))
        case Skip():
            return "skip"
        case Assign(x, e):
            return f"{x} := {_pretty_aexpr(e)}"
        case While(b, body):
            return f"while {_pretty_bexpr(b)} do {_pretty_instr(body)} done"
    raise TypeError(f"Not an instruction: {i!r}")


def _instr_item(i: Instr) -> str:
    return f"({_pretty_instr(i)})" if isinstance(i, Seq) else _pretty_instr(i)


def pretty(value: Node) -> str:
    """Render any syntax tree in the concrete syntax accepted by the parse functions"""
    match value:
        case Var() | Num() | Plus():
            return _pretty_aexpr(value)
        case Lt():
            return _pretty_bexpr(value)
        case Skip() | Assign() | Seq() | While():
            return _pretty_instr(value)
        case Bool() | Not() | Conj() | Pred():
            return _pretty_assert(value)
        case Imp(hyp, concl):
            return f"{_pretty_assert(hyp)} -> {_pretty_assert(concl)}"
        case Prec() | ASkip() | AAssign() | ASeq() | AWhile():
            return _pretty_ainstr(value)
    raise TypeError(f"Cannot pretty-print {type(value).__name__}")


# Annotation stripping and dead-code marking

def un_annot(i: AInstr) -> Instr:
    """Erase Prec nodes and loop invariants"""
    match i:
        case Prec(_, inner):
            return un_annot(inner)
        case ASkip():
            return Skip()
        case AAssign(x, e):
            return Assign(x, e)
        case ASeq():
            return fold_right([un_annot(item) for item in seq_items(i)], Seq)
        case AWhile(b, _, body):
            return While(b, un_annot(body))
    raise TypeError(f"Not an annotated instruction: {i!r}")


def mark(i: Instr) -> AInstr:
    """Annotate every program point of i as unreachable"""
    match i:
        case Skip():
            return Prec(false_assert, ASkip())
        case Assign(x, e):
            return Prec(false_assert, AAssign(x, e))
        case Seq():
            return fold_right([mark(item) for item in seq_items(i)], ASeq)
        case While(b, body):
            return Prec(false_assert, AWhile(b, false_assert, mark(body)))
    raise TypeError(f"Not an instruction: {i!r}")


# Traversals

def _children(value: Node) -> Iterator[Node]:
    match value:
        case Plus(a1, a2) | Lt(a1, a2) | Conj(a1, a2):
            yield a1
            yield a2
        case Assign(_, e) | AAssign(_, e):
            yield e
        case Seq(i1, i2) | ASeq(i1, i2):
            yield i1
            yield i2
        case While(b, body):
            yield b
            yield body
        case AWhile(b, inv, body):
            yield b
            yield inv
            yield body
        case Bool(b):
            yield b
        case Not(a):
            yield a
        case Pred(_, args):
            yield from args
        case Imp(hyp, concl):
            yield hyp
            yield concl
        case Prec(a, inner):
            yield a
            yield inner


def _preorder(value: Node) -> Iterator[Node]:
    stack = [value]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(list(_children(node))))


def variables(value: Node) -> list[str]:
    """Variable names read or written in value, in order of first occurrence"""
    seen: dict[str, None] = {}
    for node in _preorder(value):
        match node:
            case Var(name):
                seen.setdefault(name)
            case Assign(x, _) | AAssign(x, _):
                seen.setdefault(x)
    return list(seen)


def predicates(value: Node) -> list[str]:
    """Predicate names applied anywhere in value"""
    return list(dict.fromkeys(node.name for node in _preorder(value) if isinstance(node, Pred)))
