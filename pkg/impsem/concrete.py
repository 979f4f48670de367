"""Environments, expression evaluation and the fuel-bounded big-step interpreter."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

from .assertions import EnvFormatError, Valuation, format_bindings, parse_bindings
from .syntax import AExpr, Assign, BExpr, Instr, Num, Path, Plus, Seq, Skip, Var, While, seq_steps

logger = logging.getLogger(__name__)

# Ordered bindings; lookup is first-match, duplicates are allowed.
Env = tuple[tuple[str, int], ...]


def parse_env(text: str) -> Env:
    return tuple(parse_bindings(text))


def format_env(r: Env) -> str:
    return format_bindings(r)


def lookup(r: Env, s: str) -> Optional[int]:
    for name, value in r:
        if name == s:
            return value
    return None


def af(r: Env, a: AExpr) -> Optional[int]:
    """Value of a in r, or None when a reads an unbound variable"""
    match a:
        case Var(name):
            return lookup(r, name)
        case Num(n):
            return n
        case Plus(a1, a2):
            v1 = af(r, a1)
            if v1 is None:
                return None
            v2 = af(r, a2)
            if v2 is None:
                return None
            return v1 + v2
    raise TypeError(f"Not an arithmetic expression: {a!r}")


def bf(r: Env, b: BExpr) -> Optional[bool]:
    v1 = af(r, b.a1)
    v2 = af(r, b.a2)
    if v1 is None or v2 is None:
        return None
    return v1 < v2


def update(r: Env, x: str, n: int) -> Optional[Env]:
    """Replace the first binding of x; None when x is not bound"""
    for index, (name, _) in enumerate(r):
        if name == x:
            return r[:index] + ((x, n),) + r[index + 1:]
    return None


def first_unbound(r: Env, a: AExpr) -> Optional[str]:
    """Leftmost variable of a that has no binding in r"""
    match a:
        case Var(name):
            return None if lookup(r, name) is not None else name
        case Num():
            return None
        case Plus(a1, a2):
            return first_unbound(r, a1) or first_unbound(r, a2)
    raise TypeError(f"Not an arithmetic expression: {a!r}")


def env_overlay(r: Env, g: Valuation) -> Valuation:
    """Total valuation agreeing with r on its bound names and with g elsewhere"""
    table = g.as_dict()
    for name, value in reversed(r):
        table[name] = value
    return Valuation.of(table)


# Outcomes

@dataclass(frozen=True)
class UnboundRead:
    name: str


@dataclass(frozen=True)
class UnboundWrite:
    name: str


@dataclass(frozen=True)
class Done:
    env: Env


@dataclass(frozen=True)
class ExecError:
    reason: Union[UnboundRead, UnboundWrite]
    at: Path = ()


@dataclass(frozen=True)
class OutOfFuel:
    pass


ExecOutcome = Union[Done, ExecError, OutOfFuel]


def exec_fuel(fuel: int, r: Env, i: Instr) -> ExecOutcome:
    """Run i from r; every while loop may iterate at most `fuel` times.

    Object-language errors and fuel exhaustion are returned, never raised.
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    return _exec(fuel, r, i, ())


def _exec(fuel: int, r: Env, i: Instr, path: Path) -> ExecOutcome:
    match i:
        case Skip():
            return Done(r)
        case Assign(x, e):
            return assign_outcome(r, x, e, path)
        case Seq():
            for item, item_path in seq_steps(i, path):
                outcome = _exec(fuel, r, item, item_path)
                if not isinstance(outcome, Done):
                    return outcome
                r = outcome.env
            return Done(r)
        case While(b, body):
            remaining = fuel
            while True:
                test = bf(r, b)
                if test is None:
                    return guard_error(r, b, path)
                if not test:
                    return Done(r)
                if remaining == 0:
                    return OutOfFuel()
                remaining -= 1
                outcome = _exec(fuel, r, body, path + ("body",))
                if not isinstance(outcome, Done):
                    return outcome
                r = outcome.env
    raise TypeError(f"Not an instruction: {i!r}")


def assign_outcome(r: Env, x: str, e: AExpr, path: Path = ()) -> ExecOutcome:
    """One assignment step: evaluate e, then rewrite the first binding of x"""
    value = af(r, e)
    if value is None:
        return ExecError(UnboundRead(first_unbound(r, e)), path)
    updated = update(r, x, value)
    if updated is None:
        return ExecError(UnboundWrite(x), path)
    return Done(updated)


def guard_error(r: Env, b: BExpr, path: Path = ()) -> ExecError:
    return ExecError(UnboundRead(first_unbound(r, b.a1) or first_unbound(r, b.a2)), path)
