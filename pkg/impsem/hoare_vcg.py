"""Hoare-logic derivation checking, precondition computation and verification-condition generation."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .assertions import (
    Counterexample, PredEnv, Valuation, Verdict, a_subst, i_a, samples_for, valid_sampled,
)
from .concrete import Done, Env, ExecOutcome, OutOfFuel, assign_outcome, bf, env_overlay, guard_error
from .syntax import (
    AAssign, AExpr, AInstr, ASeq, ASkip, AWhile, Assert, Assign, BExpr, Bool, Condition, Conj, Imp, Instr,
    Lt, Not, Num, Path, Plus, Prec, Pred, Seq, Skip, Var, While, format_path, pretty, seq_items, seq_steps,
)

logger = logging.getLogger(__name__)


# Weakest preconditions and verification conditions

def pc(i: AInstr, post: Assert) -> Assert:
    """Precondition of i for post: declared for Prec and loops, computed otherwise"""
    match i:
        case Prec(a, _):
            return a
        case AWhile(_, inv, _):
            return inv
        case ASkip():
            return post
        case AAssign(x, e):
            return a_subst(post, x, e)
        case ASeq():
            for item in reversed(seq_items(i)):
                post = pc(item, post)
            return post
    raise TypeError(f"Not an annotated instruction: {i!r}")


def vcg(i: AInstr, post: Assert) -> list[Condition]:
    """Conditions a minimal Hoare proof of {pc i post} i {post} would discharge"""
    match i:
        case ASkip() | AAssign():
            return []
        case Prec(a, inner):
            return [Imp(a, pc(inner, post))] + vcg(inner, post)
        case ASeq():
            conditions: list[Condition] = []
            for item in reversed(seq_items(i)):
                conditions += vcg(item, post)
                post = pc(item, post)
            return conditions
        case AWhile(b, inv, body):
            return [
                Imp(Conj(Not(Bool(b)), inv), post),
                Imp(Conj(Bool(b), inv), pc(body, inv)),
            ] + vcg(body, inv)
    raise TypeError(f"Not an annotated instruction: {i!r}")


# Dynamic checking

Violation = tuple[Path, Assert]


def exec_annotated(
    fuel: int, m: PredEnv, g: Valuation, r: Env, i: AInstr
) -> tuple[ExecOutcome, list[Violation]]:
    """Run un_annot(i) while checking every annotation that execution reaches.

    Prec assertions are checked when reached, loop invariants at entry and
    after each iteration. Violations are collected and execution goes on.
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    violations: list[Violation] = []

    def check(path: Path, a: Assert, env: Env):
        if not i_a(m, env_overlay(env, g), a):
            logger.debug(f"Annotation {pretty(a)} violated at {format_path(path)}")
            violations.append((path, a))

    def run(env: Env, node: AInstr, path: Path) -> ExecOutcome:
        match node:
            case Prec(a, inner):
                check(path, a, env)
                return run(env, inner, path + ("inner",))
            case ASkip():
                return Done(env)
            case AAssign(x, e):
                return assign_outcome(env, x, e, path)
            case ASeq():
                for item, item_path in seq_steps(node, path):
                    outcome = run(env, item, item_path)
                    if not isinstance(outcome, Done):
                        return outcome
                    env = outcome.env
                return Done(env)
            case AWhile(b, inv, body):
                check(path, inv, env)
                remaining = fuel
                while True:
                    test = bf(env, b)
                    if test is None:
                        return guard_error(env, b, path)
                    if not test:
                        return Done(env)
                    if remaining == 0:
                        return OutOfFuel()
                    remaining -= 1
                    outcome = run(env, body, path + ("body",))
                    if not isinstance(outcome, Done):
                        return outcome
                    env = outcome.env
                    check(path, inv, env)
        raise TypeError(f"Not an annotated instruction: {node!r}")

    return run(r, i, ()), violations


# Derivations

@dataclass(frozen=True)
class RSkip:
    """{P} skip {P}"""
    p: Assert

    @property
    def pre(self) -> Assert:
        return self.p

    @property
    def instr(self) -> Instr:
        return Skip()

    @property
    def post(self) -> Assert:
        return self.p


@dataclass(frozen=True)
class RAssign:
    """{P[x <- e]} x := e {P}"""
    p: Assert
    x: str
    e: AExpr

    @property
    def pre(self) -> Assert:
        return a_subst(self.p, self.x, self.e)

    @property
    def instr(self) -> Instr:
        return Assign(self.x, self.e)

    @property
    def post(self) -> Assert:
        return self.p


@dataclass(frozen=True)
class RSeq:
    d1: HoareDerivation
    d2: HoareDerivation

    @property
    def pre(self) -> Assert:
        return self.d1.pre

    @property
    def instr(self) -> Instr:
        return Seq(self.d1.instr, self.d2.instr)

    @property
    def post(self) -> Assert:
        return self.d2.post


@dataclass(frozen=True)
class RWhile:
    """{P} while b do body done {~b /\\ P}, given {b /\\ P} body {P}"""
    p: Assert
    b: BExpr
    body: HoareDerivation

    @property
    def pre(self) -> Assert:
        return self.p

    @property
    def instr(self) -> Instr:
        return While(self.b, self.body.instr)

    @property
    def post(self) -> Assert:
        return Conj(Not(Bool(self.b)), self.p)


@dataclass(frozen=True)
class RConseq:
    """Strengthen the precondition with c_pre, weaken the postcondition with c_post"""
    c_pre: Condition
    d: HoareDerivation
    c_post: Condition

    @property
    def pre(self) -> Assert:
        return self.c_pre.hyp

    @property
    def instr(self) -> Instr:
        return self.d.instr

    @property
    def post(self) -> Assert:
        return self.c_post.concl


HoareDerivation = Union[RSkip, RAssign, RSeq, RWhile, RConseq]

Oracle = Callable[[PredEnv, Condition], Verdict]


class SampledOracle:
    """Validity oracle that only falsifies: structured samples over the condition's variables"""

    def __init__(self, count: int = 1000, seed: int = 0):
        self.count = count
        self.seed = seed

    def __call__(self, m: PredEnv, c: Condition) -> Verdict:
        return valid_sampled(m, c, samples_for(c, self.count, self.seed))


@dataclass(frozen=True)
class StructuralMismatch:
    message: str


@dataclass(frozen=True)
class OracleRefuted:
    condition: Condition
    g: Valuation


@dataclass(frozen=True)
class Valid:
    pass


@dataclass(frozen=True)
class Invalid:
    reason: Union[StructuralMismatch, OracleRefuted]
    path: Path = ()

    def __str__(self) -> str:
        match self.reason:
            case StructuralMismatch(message):
                detail = message
            case OracleRefuted(c, g):
                detail = f"condition {pretty(c)} refuted by {g}"
        return f"{format_path(self.path)}: {detail}"


CheckVerdict = Union[Valid, Invalid]


def _mismatch(what: str, expected: Assert, found: Assert) -> StructuralMismatch:
    return StructuralMismatch(f"{what}: expected {pretty(expected)}, found {pretty(found)}")


def _node_failure(m: PredEnv, d: HoareDerivation, oracle: Oracle) -> Optional[Union[StructuralMismatch, OracleRefuted]]:
    match d:
        case RSeq(d1, d2):
            if d1.post != d2.pre:
                return _mismatch("sequence middle assertions differ", d1.post, d2.pre)
        case RWhile(p, b, body):
            if body.pre != Conj(Bool(b), p):
                return _mismatch("loop body precondition", Conj(Bool(b), p), body.pre)
            if body.post != p:
                return _mismatch("loop body postcondition", p, body.post)
        case RConseq(c_pre, inner, c_post):
            if c_pre.concl != inner.pre:
                return _mismatch("consequence precondition", inner.pre, c_pre.concl)
            if c_post.hyp != inner.post:
                return _mismatch("consequence postcondition", inner.post, c_post.hyp)
            for c in (c_pre, c_post):
                verdict = oracle(m, c)
                if isinstance(verdict, Counterexample):
                    return OracleRefuted(c, verdict.g)
    return None


def _subderivations(d: HoareDerivation) -> list[tuple[str, HoareDerivation]]:
    match d:
        case RSeq(d1, d2):
            return [("seq1", d1), ("seq2", d2)]
        case RWhile(_, _, body):
            return [("body", body)]
        case RConseq(_, inner, _):
            return [("inner", inner)]
    return []


def check_derivation(m: PredEnv, d: HoareDerivation, oracle: Optional[Oracle] = None) -> CheckVerdict:
    """Check every node's rule side conditions, parent before children"""
    oracle = oracle or SampledOracle()
    pending: list[tuple[Path, HoareDerivation]] = [((), d)]
    while pending:
        path, node = pending.pop()
        failure = _node_failure(m, node, oracle)
        if failure is not None:
            logger.info(f"Derivation rejected at {format_path(path)}")
            return Invalid(failure, path)
        children = _subderivations(node)
        pending.extend((path + (step,), child) for step, child in reversed(children))
    return Valid()


def proves(d: HoareDerivation, pre: Assert, i: Instr, post: Assert) -> bool:
    """Whether d concludes exactly the triple {pre} i {post}"""
    return (d.pre, d.instr, d.post) == (pre, i, post)


def sum_derivation(invariant: Optional[Assert] = None) -> RConseq:
    """Derivation of {inv} while x < n do x := x + 1; y := x + y done {pp(y,n)}.

    The default invariant is le(x,n) /\\ pp(y,x).
    """
    x, y, n = Var("x"), Var("y"), Var("n")
    inv = invariant or Conj(Pred("le", (x, n)), Pred("pp", (y, x)))
    b = Lt(x, n)
    d_y = RAssign(inv, "y", Plus(x, y))
    d_x = RAssign(d_y.pre, "x", Plus(x, Num(1)))
    body = RSeq(d_x, d_y)
    body_conseq = RConseq(Imp(Conj(Bool(b), inv), body.pre), body, Imp(inv, inv))
    loop = RWhile(inv, b, body_conseq)
    return RConseq(Imp(inv, inv), loop, Imp(loop.post, Pred("pp", (y, n))))
