"""Denotational semantics: loops as finite iterates of their functional."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .concrete import Done, Env, ExecError, ExecOutcome, af, bf, exec_fuel, format_env, update
from .syntax import Assign, Instr, Seq, Skip, While, seq_items

logger = logging.getLogger(__name__)


class BottomReason(str, enum.Enum):
    ERROR = "error"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Bottom:
    """No final environment: a runtime error, or not determined within the iteration budget"""
    reason: BottomReason


DenotResult = Union[Done, Bottom]

UNKNOWN = Bottom(BottomReason.UNKNOWN)
ERROR = Bottom(BottomReason.ERROR)


def bind(result: DenotResult, k: Callable[[Env], DenotResult]) -> DenotResult:
    if isinstance(result, Done):
        return k(result.env)
    return result


Semantics = Callable[[Env], DenotResult]


def _undetermined(_: Env) -> DenotResult:
    return UNKNOWN


@dataclass(frozen=True)
class LoopFunctional:
    """The functional of `while t do f done`: phi is sent to
    r -> if t r then bind (f r) phi else Done r
    """
    test: Callable[[Env], Optional[bool]]
    body: Semantics

    def __call__(self, phi: Semantics) -> Semantics:
        def step(r: Env) -> DenotResult:
            t = self.test(r)
            if t is None:
                return ERROR
            if t:
                return bind(self.body(r), phi)
            return Done(r)

        return step

    def iterate(self, n: int) -> Semantics:
        """F^n applied to the everywhere-undetermined function, built literally"""
        phi: Semantics = _undetermined
        for _ in range(n):
            phi = self(phi)
        return phi


def phi_approx(n: int, F: LoopFunctional, r: Env) -> DenotResult:
    """Value at r of the n-th Kleene iterate of F, computed by unfolding in place"""
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    for _ in range(n):
        t = F.test(r)
        if t is None:
            return ERROR
        if not t:
            return Done(r)
        result = F.body(r)
        if not isinstance(result, Done):
            return result
        r = result.env
    return UNKNOWN


def ds_fuel(fuel: int, i: Instr, r: Env) -> DenotResult:
    """Compositional meaning of i at r, every loop approximated by its fuel-th iterate"""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    match i:
        case Skip():
            return Done(r)
        case Assign(x, e):
            value = af(r, e)
            if value is None:
                return ERROR
            updated = update(r, x, value)
            return ERROR if updated is None else Done(updated)
        case Seq():
            result: DenotResult = Done(r)
            for item in seq_items(i):
                result = bind(result, lambda env: ds_fuel(fuel, item, env))
            return result
        case While(b, body):
            F = LoopFunctional(lambda env: bf(env, b), lambda env: ds_fuel(fuel, body, env))
            return phi_approx(fuel, F, r)
    raise TypeError(f"Not an instruction: {i!r}")


def fuel_slack(i: Instr) -> int:
    """Extra unfoldings ds_fuel needs to match exec_fuel: one final test per loop"""
    match i:
        case While():
            return 1
        case Seq():
            return max(fuel_slack(item) for item in seq_items(i))
    return 0


def cross_check(fuel: int, i: Instr, r: Env) -> Optional[str]:
    """Run both semantics and describe any disagreement, None when they agree.

    With s = fuel_slack(i), exec_fuel at budget k ends in Done(r') exactly when
    ds_fuel at k + s does, and errors at k imply errors at k + s. Running out of
    fuel at k means ds_fuel is undetermined at k and not Done at k + s.
    """
    slack = fuel_slack(i)
    outcome = exec_fuel(fuel, r, i)
    result = ds_fuel(fuel + slack, i, r)
    match outcome:
        case Done():
            agree = result == outcome
        case ExecError():
            agree = result == ERROR
        case _:
            agree = not isinstance(result, Done)
            if agree:
                result = ds_fuel(fuel, i, r)
                agree = result == UNKNOWN
    if agree:
        return None
    message = f"exec_fuel gave {_describe_exec(outcome)}, ds_fuel gave {_describe_denot(result)}"
    logger.info(f"Semantics disagree at fuel {fuel}: {message}")
    return message


def _describe_exec(outcome: ExecOutcome) -> str:
    match outcome:
        case Done(env):
            return f"Done({format_env(env)})"
        case ExecError(reason):
            return f"error ({type(reason).__name__} {reason.name})"
    return "out of fuel"


def _describe_denot(result: DenotResult) -> str:
    if isinstance(result, Done):
        return f"Done({format_env(result.env)})"
    return f"bottom ({result.reason.value})"
