"""Total evaluation under valuations, assertion interpretation, substitution and sampled validity."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, Union

from .syntax import (
    AExpr, Assert, BExpr, Bool, Condition, Conj, Imp, Lt, Not, Num, Plus, Pred, Var,
    check_ident, parse_binding_list, predicates, pretty, variables,
)

logger = logging.getLogger(__name__)

GRID = range(-3, 4)
GRID_VARIABLE_LIMIT = 4
WIDE = 10 ** 6


class EnvFormatError(ValueError):
    """Malformed `name=value,...` text"""


def parse_bindings(text: str) -> list[tuple[str, int]]:
    """Parse comma-separated `name=value` pairs, keeping order and duplicates"""
    try:
        return [(check_ident(name), value) for name, value in parse_binding_list(text)]
    except ValueError as e:
        raise EnvFormatError(f"Invalid environment {text!r}; expected name=integer,...: {e}") from None


def format_bindings(bindings: Iterable[tuple[str, int]]) -> str:
    return ",".join(f"{name}={value}" for name, value in bindings)


@dataclass(frozen=True)
class Valuation:
    """Total map from identifiers to integers: a finite table, 0 elsewhere"""

    bindings: tuple[tuple[str, int], ...] = ()
    _table: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        table = dict(self.bindings)
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "bindings", tuple(sorted(table.items())))

    @classmethod
    def of(cls, mapping: Mapping[str, int] | None = None, **values: int) -> Valuation:
        return cls(tuple({**(mapping or {}), **values}.items()))

    def __call__(self, name: str) -> int:
        return self._table.get(name, 0)

    def set(self, name: str, value: int) -> Valuation:
        return Valuation.of(self._table, **{name: value})

    def as_dict(self) -> dict[str, int]:
        return dict(self._table)

    def __str__(self) -> str:
        return format_bindings(self.bindings)


def parse_valuation(text: str) -> Valuation:
    """Unlisted names default to 0; a repeated name keeps its last value"""
    return Valuation(tuple(parse_bindings(text)))


# Total evaluation

def af_total(g: Valuation, a: AExpr) -> int:
    match a:
        case Var(name):
            return g(name)
        case Num(n):
            return n
        case Plus(a1, a2):
            return af_total(g, a1) + af_total(g, a2)
    raise TypeError(f"Not an arithmetic expression: {a!r}")


def bf_total(g: Valuation, b: BExpr) -> bool:
    return af_total(g, b.a1) < af_total(g, b.a2)


def lf_total(g: Valuation, args: Sequence[AExpr]) -> list[int]:
    return [af_total(g, a) for a in args]


# Substitution

def subst_a(a: AExpr, x: str, e: AExpr) -> AExpr:
    match a:
        case Var(name):
            return e if name == x else a
        case Num():
            return a
        case Plus(a1, a2):
            return Plus(subst_a(a1, x, e), subst_a(a2, x, e))
    raise TypeError(f"Not an arithmetic expression: {a!r}")


def subst_b(b: BExpr, x: str, e: AExpr) -> BExpr:
    return Lt(subst_a(b.a1, x, e), subst_a(b.a2, x, e))


def a_subst(a: Assert, x: str, e: AExpr) -> Assert:
    """Replace every occurrence of variable x in a by e"""
    match a:
        case Bool(b):
            return Bool(subst_b(b, x, e))
        case Not(inner):
            return Not(a_subst(inner, x, e))
        case Conj(a1, a2):
            return Conj(a_subst(a1, x, e), a_subst(a2, x, e))
        case Pred(name, args):
            return Pred(name, tuple(subst_a(arg, x, e) for arg in args))
    raise TypeError(f"Not an assertion: {a!r}")


# Predicate environments

Predicate = Callable[[list[int]], bool]
PredEnv = tuple[tuple[str, Predicate], ...]


def _always(_: list[int]) -> bool:
    return True


def f_p(m: PredEnv, name: str) -> Predicate:
    """First binding of name in m; unbound names denote the constantly-true predicate"""
    for bound, pred in m:
        if bound == name:
            return pred
    return _always


def fixed_arity(arity: int, fn: Callable[..., bool]) -> Predicate:
    """Lift fn to a predicate over integer lists that is false on arity mismatch"""

    def pred(values: list[int]) -> bool:
        return len(values) == arity and bool(fn(*values))

    pred.__name__ = getattr(fn, "__name__", "pred")
    return pred


def builtin_pred_env() -> PredEnv:
    """le(x, y) holds when x <= y; pp(s, k) holds when 2s = k(k + 1)"""
    return (
        ("le", fixed_arity(2, lambda x, y: x <= y)),
        ("pp", fixed_arity(2, lambda s, k: 2 * s == k * (k + 1))),
    )


def unbound_predicates(m: PredEnv, node) -> list[str]:
    bound = {name for name, _ in m}
    return [name for name in predicates(node) if name not in bound]


# Interpretation

def i_a(m: PredEnv, g: Valuation, a: Assert) -> bool:
    match a:
        case Bool(b):
            return bf_total(g, b)
        case Not(inner):
            return not i_a(m, g, inner)
        case Conj(a1, a2):
            return i_a(m, g, a1) and i_a(m, g, a2)
        case Pred(name, args):
            return f_p(m, name)(lf_total(g, args))
    raise TypeError(f"Not an assertion: {a!r}")


def i_c(m: PredEnv, g: Valuation, c: Condition) -> bool:
    return not i_a(m, g, c.hyp) or i_a(m, g, c.concl)


def i_lc(m: PredEnv, g: Valuation, conditions: Iterable[Condition]) -> bool:
    return all(i_c(m, g, c) for c in conditions)


# Sampled validity

@dataclass(frozen=True)
class NoCounterexample:
    pass


@dataclass(frozen=True)
class Counterexample:
    g: Valuation


Verdict = Union[NoCounterexample, Counterexample]


def structured_samples(names: Sequence[str], count: int = 1000, seed: int = 0) -> list[Valuation]:
    """Boundary grid over {-3..3} for the given names, then `count` random valuations.

    With more than four names the grid is replaced by random grid points.
    """
    rng = random.Random(seed)
    names = list(dict.fromkeys(names))
    samples: list[Valuation] = []
    if len(names) <= GRID_VARIABLE_LIMIT:
        for values in itertools.product(GRID, repeat=len(names)):
            samples.append(Valuation(tuple(zip(names, values))))
    else:
        for _ in range(len(GRID) ** GRID_VARIABLE_LIMIT):
            samples.append(Valuation(tuple((n, rng.choice(GRID)) for n in names)))
    for _ in range(count):
        values = []
        for name in names:
            if rng.random() < 0.5:
                values.append((name, rng.randint(-20, 20)))
            else:
                values.append((name, rng.randint(-WIDE, WIDE)))
        samples.append(Valuation(tuple(values)))
    return samples


def valid_sampled(m: PredEnv, c: Condition, samples: Sequence[Valuation]) -> Verdict:
    """Falsify c on the samples; NoCounterexample is not a proof of validity"""
    if not samples:
        raise ValueError("valid_sampled needs at least one sample")
    for g in samples:
        if not i_c(m, g, c):
            logger.debug(f"Counterexample {g} for {pretty(c)}")
            return Counterexample(g)
    return NoCounterexample()


def valid_l_sampled(m: PredEnv, conditions: Sequence[Condition], samples: Sequence[Valuation]) -> list[tuple[Condition, Verdict]]:
    """Verdict for every condition of the list, in order"""
    return [(c, valid_sampled(m, c, samples)) for c in conditions]


def samples_for(c: Condition | Sequence[Condition], count: int = 1000, seed: int = 0) -> list[Valuation]:
    """Structured samples over the free variables of a condition (or list of them)"""
    if isinstance(c, Imp):
        names = variables(c)
    else:
        names = list(dict.fromkeys(name for cond in c for name in variables(cond)))
    return structured_samples(names, count, seed)
