"""Abstract interpretation over a pluggable domain of abstract values.

Loops are handled in up to three stages: check the entry environment for
stability, then try one widening step, and finally fall back to top for every
variable. Unreachable code is annotated with FALSE.
"""

from __future__ import annotations

import logging
import random
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Generic, Optional, TypeVar

from .syntax import (
    AAssign, AExpr, AInstr, ASeq, ASkip, AWhile, Assert, Assign, BExpr, Bool, Conj, Instr, Lt, Not, Num, Plus,
    ParseError, Prec, Seq, Skip, Var, While, check_ident, false_assert, fold_right, mark, parse_abinding_list,
    true_assert, variables,
)

logger = logging.getLogger(__name__)

V = TypeVar("V")

AbEnv = tuple[tuple[str, V], ...]
BodyAnalysis = Callable[[AbEnv], tuple[AInstr, Optional[AbEnv]]]


class AbEnvFormatError(ValueError):
    """Malformed `name=[lo,hi],...` text"""


class AnalysisSetupError(ValueError):
    """A program variable has no binding in the abstract environment"""


class EnvShapeError(AssertionError):
    """Two abstract environments with different name sequences were combined"""


class AbstractDomain(ABC, Generic[V]):
    """Operations the analyzer needs from a domain of abstract values"""

    @abstractmethod
    def top(self) -> V:
        """Element describing every integer"""

    @abstractmethod
    def from_const(self, n: int) -> V: ...

    @abstractmethod
    def add(self, v1: V, v2: V) -> V: ...

    @abstractmethod
    def included(self, v1: V, v2: V) -> bool: ...

    @abstractmethod
    def join(self, v1: V, v2: V) -> V: ...

    @abstractmethod
    def widen(self, v1: V, v2: V) -> V: ...

    @abstractmethod
    def restrict_lt(self, v: V, bound: V) -> Optional[V]:
        """Members of v that can be below some member of bound; None when empty"""

    @abstractmethod
    def restrict_ge(self, v: V, bound: V) -> Optional[V]:
        """Members of v that can be at least some member of bound; None when empty"""

    @abstractmethod
    def to_assert(self, v: V, name: str) -> Assert: ...

    @abstractmethod
    def format_value(self, v: V) -> str: ...

    @abstractmethod
    def parse_value(self, text: str) -> V: ...


# Intervals

@dataclass(frozen=True)
class Interval:
    """Integer interval [lo, hi]; lo=None is -inf, hi=None is +inf"""
    lo: Optional[int]
    hi: Optional[int]

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ValueError(f"Invalid interval: lo={self.lo} > hi={self.hi}")

    def __contains__(self, n: int) -> bool:
        return (self.lo is None or self.lo <= n) and (self.hi is None or n <= self.hi)

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"[{lo},{hi}]"


def _min_lo(a: Optional[int], b: Optional[int]) -> Optional[int]:
    return None if a is None or b is None else min(a, b)


def _max_hi(a: Optional[int], b: Optional[int]) -> Optional[int]:
    return None if a is None or b is None else max(a, b)


def _max_lo(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _min_hi(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class IntervalDomain(AbstractDomain[Interval]):
    BOUND_RE = re.compile(r"\s*\[\s*([^,\]]+?)\s*,\s*([^,\]]+?)\s*\]\s*\Z")

    def top(self) -> Interval:
        return Interval(None, None)

    def from_const(self, n: int) -> Interval:
        return Interval(n, n)

    def add(self, v1: Interval, v2: Interval) -> Interval:
        lo = None if v1.lo is None or v2.lo is None else v1.lo + v2.lo
        hi = None if v1.hi is None or v2.hi is None else v1.hi + v2.hi
        return Interval(lo, hi)

    def included(self, v1: Interval, v2: Interval) -> bool:
        lo_ok = v2.lo is None or (v1.lo is not None and v1.lo >= v2.lo)
        hi_ok = v2.hi is None or (v1.hi is not None and v1.hi <= v2.hi)
        return lo_ok and hi_ok

    def join(self, v1: Interval, v2: Interval) -> Interval:
        return Interval(_min_lo(v1.lo, v2.lo), _max_hi(v1.hi, v2.hi))

    def widen(self, v1: Interval, v2: Interval) -> Interval:
        """Keep a bound that did not move outward, push a moved one to infinity"""
        lo_grew = v1.lo is not None and (v2.lo is None or v2.lo < v1.lo)
        hi_grew = v1.hi is not None and (v2.hi is None or v2.hi > v1.hi)
        return Interval(None if lo_grew else v1.lo, None if hi_grew else v1.hi)

    def meet(self, v1: Interval, v2: Interval) -> Optional[Interval]:
        lo, hi = _max_lo(v1.lo, v2.lo), _min_hi(v1.hi, v2.hi)
        if lo is not None and hi is not None and lo > hi:
            return None
        return Interval(lo, hi)

    def restrict_lt(self, v: Interval, bound: Interval) -> Optional[Interval]:
        if bound.hi is None:
            return v
        return self.meet(v, Interval(None, bound.hi - 1))

    def restrict_ge(self, v: Interval, bound: Interval) -> Optional[Interval]:
        if bound.lo is None:
            return v
        return self.meet(v, Interval(bound.lo, None))

    def to_assert(self, v: Interval, name: str) -> Assert:
        x = Var(name)
        parts = []
        if v.lo is not None:
            parts.append(Bool(Lt(Num(v.lo - 1), x)))
        if v.hi is not None:
            parts.append(Bool(Lt(x, Num(v.hi + 1))))
        if not parts:
            return true_assert
        if len(parts) == 1:
            return parts[0]
        return Conj(parts[0], parts[1])

    def format_value(self, v: Interval) -> str:
        return str(v)

    def parse_value(self, text: str) -> Interval:
        match = self.BOUND_RE.match(text)
        if not match:
            raise AbEnvFormatError(f"Invalid interval {text!r}; expected [lo,hi]")
        lo_text, hi_text = match.groups()
        lo = self._parse_bound(lo_text, infinite="-inf")
        hi = self._parse_bound(hi_text, infinite="+inf")
        try:
            return Interval(lo, hi)
        except ValueError as e:
            raise AbEnvFormatError(str(e)) from None

    @staticmethod
    def _parse_bound(text: str, infinite: str) -> Optional[int]:
        if text in (infinite, infinite.lstrip("+")):
            return None
        try:
            return int(text)
        except ValueError:
            raise AbEnvFormatError(f"Invalid interval bound {text!r}") from None


# Abstract environments as text

def parse_abenv(text: str, domain: AbstractDomain[V]) -> AbEnv:
    """Parse `x=[0,0],n=[-inf,+inf]`; names must be distinct"""
    try:
        items = parse_abinding_list(text)
    except ParseError as e:
        raise AbEnvFormatError(f"Invalid abstract environment {text!r}; expected name=[lo,hi],...: {e}") from None
    bindings = []
    seen = set()
    for name, value in items:
        try:
            check_ident(name)
        except ValueError as e:
            raise AbEnvFormatError(str(e)) from None
        if name in seen:
            raise AbEnvFormatError(f"Variable {name!r} bound twice")
        seen.add(name)
        bindings.append((name, domain.parse_value(value)))
    return tuple(bindings)


def format_abenv(l: Optional[AbEnv], domain: AbstractDomain[V]) -> str:
    if l is None:
        return "unreachable"
    return ",".join(f"{name}={domain.format_value(v)}" for name, v in l)


def initial_abenv(i: Instr, given: AbEnv, domain: AbstractDomain[V]) -> AbEnv:
    """Given bindings first, then every other program variable at top"""
    bound = {name for name, _ in given}
    missing = [name for name in variables(i) if name not in bound]
    if missing:
        logger.warning(f"No abstract value given for {', '.join(missing)}; assuming top")
    return tuple(given) + tuple((name, domain.top()) for name in missing)


# Analysis

class Analyzer(Generic[V]):
    """Abstract interpreter for one domain"""

    def __init__(self, domain: AbstractDomain[V]):
        self.domain = domain

    def ab_lookup(self, l: AbEnv, x: str) -> V:
        for name, v in l:
            if name == x:
                return v
        return self.domain.top()

    def ab_eval(self, lookupfn: Callable[[str], V], a: AExpr) -> V:
        match a:
            case Var(name):
                return lookupfn(name)
            case Num(n):
                return self.domain.from_const(n)
            case Plus(a1, a2):
                return self.domain.add(self.ab_eval(lookupfn, a1), self.ab_eval(lookupfn, a2))
        raise TypeError(f"Not an arithmetic expression: {a!r}")

    def _eval_in(self, l: AbEnv, a: AExpr) -> V:
        return self.ab_eval(lambda x: self.ab_lookup(l, x), a)

    def ab_update(self, l: AbEnv, x: str, v: V) -> AbEnv:
        for index, (name, _) in enumerate(l):
            if name == x:
                return l[:index] + ((x, v),) + l[index + 1:]
        raise AnalysisSetupError(f"Variable {x!r} is not bound in the abstract environment")

    def _pointwise(self, l1: AbEnv, l2: AbEnv, op: Callable[[V, V], V]) -> AbEnv:
        names1 = [name for name, _ in l1]
        names2 = [name for name, _ in l2]
        if names1 != names2:
            raise EnvShapeError(f"Abstract environments disagree on variables: {names1} vs {names2}")
        return tuple((name, op(v1, v2)) for (name, v1), (_, v2) in zip(l1, l2))

    def join_env(self, l1: AbEnv, l2: AbEnv) -> AbEnv:
        return self._pointwise(l1, l2, self.domain.join)

    def widen_env(self, l1: AbEnv, l2: AbEnv) -> AbEnv:
        return self._pointwise(l1, l2, self.domain.widen)

    def included_env(self, l1: Optional[AbEnv], l2: Optional[AbEnv]) -> bool:
        """Pointwise inclusion; an unreachable env is included in anything"""
        if l1 is None:
            return True
        if l2 is None:
            return False
        if [name for name, _ in l1] != [name for name, _ in l2]:
            raise EnvShapeError("Abstract environments disagree on variables")
        return all(self.domain.included(v1, v2) for (_, v1), (_, v2) in zip(l1, l2))

    def top_env(self, l: AbEnv) -> AbEnv:
        return tuple((name, self.domain.top()) for name, _ in l)

    def intersect_env(self, polarity: bool, l: AbEnv, b: BExpr) -> Optional[AbEnv]:
        """Refine l with the knowledge that b holds (polarity true) or fails.

        None means the test can never take the requested outcome.
        """
        bound = self._eval_in(l, b.a2)
        if isinstance(b.a1, Var):
            x = b.a1.name
            current = self.ab_lookup(l, x)
            if polarity:
                refined = self.domain.restrict_lt(current, bound)
            else:
                refined = self.domain.restrict_ge(current, bound)
            if refined is None:
                return None
            if x not in (name for name, _ in l):
                return l
            return self.ab_update(l, x, refined)
        left = self._eval_in(l, b.a1)
        always_false = self.domain.restrict_lt(left, bound) is None
        always_true = self.domain.restrict_ge(left, bound) is None
        if polarity and always_false:
            return None
        if not polarity and always_true:
            return None
        return l

    def to_a(self, l: AbEnv) -> Assert:
        """Conjunction of the bindings' assertions, folded to the right"""
        if not l:
            return true_assert
        parts = [self.domain.to_assert(v, name) for name, v in l]
        result = parts[-1]
        for part in reversed(parts[:-1]):
            result = Conj(part, result)
        return result

    def to_a_opt(self, l: Optional[AbEnv]) -> Assert:
        return false_assert if l is None else self.to_a(l)

    def fp1(self, l0: AbEnv, l: AbEnv, b: BExpr, i: Instr, f: BodyAnalysis) -> tuple[AInstr, Optional[AbEnv]]:
        refined = self.intersect_env(True, l, b)
        if refined is None:
            return Prec(false_assert, mark(i)), l
        annotated, after = f(refined)
        if after is None:
            return annotated, None
        return annotated, self.join_env(l0, self.join_env(refined, after))

    def fp(self, l: AbEnv, b: BExpr, i: Instr, f: BodyAnalysis) -> tuple[AInstr, Optional[AbEnv]]:
        """Loop invariant search: stability check, one widening, then top"""
        annotated, joined = self.fp1(l, l, b, i, f)
        if joined == l:
            logger.debug("Loop stable on entry environment")
            return annotated, joined
        lw = self.widen_env(l, joined if joined is not None else l)
        annotated, joined = self.fp1(lw, lw, b, i, f)
        if joined == lw:
            logger.debug(f"Loop stable after widening: {format_abenv(lw, self.domain)}")
            return annotated, joined
        lt = self.top_env(l)
        logger.debug("Loop widened to top")
        return self.fp1(lt, lt, b, i, f)

    def abstract_i(self, i: Instr, l: AbEnv) -> tuple[AInstr, Optional[AbEnv]]:
        """Annotate i with what holds at each point when started from l"""
        bound = {name for name, _ in l}
        unbound = [name for name in variables(i) if name not in bound]
        if unbound:
            raise AnalysisSetupError(f"Variables not bound in the abstract environment: {', '.join(unbound)}")
        return self._abstract(i, l)

    def _abstract(self, i: Instr, l: AbEnv) -> tuple[AInstr, Optional[AbEnv]]:
        match i:
            case Skip():
                return Prec(self.to_a(l), ASkip()), l
            case Assign(x, e):
                return Prec(self.to_a(l), AAssign(x, e)), self.ab_update(l, x, self._eval_in(l, e))
            case Seq():
                parts: list[AInstr] = []
                node: Instr = i
                while isinstance(node, Seq):
                    first, mid = self._abstract(node.i1, l)
                    parts.append(first)
                    if mid is None:
                        parts.append(Prec(false_assert, mark(node.i2)))
                        return fold_right(parts, ASeq), None
                    l, node = mid, node.i2
                last, after = self._abstract(node, l)
                return fold_right(parts + [last], ASeq), after
            case While(b, body):
                entry = self.to_a(l)
                if self.intersect_env(True, l, b) is None:
                    logger.debug("Loop test never holds; body is dead code")
                    return Prec(entry, AWhile(b, Conj(Not(Bool(b)), entry), mark(body))), l
                annotated, stable = self.fp(l, b, body, lambda env: self._abstract(body, env))
                if stable is None:
                    return Prec(entry, AWhile(b, entry, annotated)), self.intersect_env(False, l, b)
                return Prec(entry, AWhile(b, self.to_a(stable), annotated)), self.intersect_env(False, stable, b)
        raise TypeError(f"Not an instruction: {i!r}")


def interval_analyzer() -> Analyzer[Interval]:
    return Analyzer(IntervalDomain())


def clip(v: Interval, radius: int) -> range:
    """Members of v within [-radius, radius]"""
    lo = -radius if v.lo is None else max(v.lo, -radius)
    hi = radius if v.hi is None else min(v.hi, radius)
    return range(lo, hi + 1)


def sample_stores(l: AbEnv, count: int, seed: int = 0, radius: int = 20) -> list[tuple[tuple[str, int], ...]]:
    """Concrete stores drawn from the interval environment l, infinite sides clipped to radius"""
    rng = random.Random(seed)
    stores = []
    for _ in range(count):
        store = []
        for name, v in l:
            members = clip(v, radius)
            if not members:
                members = range(v.lo, v.lo + 1) if v.lo is not None else range(v.hi, v.hi + 1)
            store.append((name, rng.choice(members)))
        stores.append(tuple(store))
    return stores
