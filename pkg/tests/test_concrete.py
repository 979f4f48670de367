import pytest
from hypothesis import given, strategies as st

from impsem.assertions import Valuation, af_total
from impsem.concrete import (
    Done, EnvFormatError, ExecError, OutOfFuel, UnboundRead, UnboundWrite, af, bf, env_overlay, exec_fuel,
    first_unbound, format_env, lookup, parse_env, update,
)
from impsem.syntax import Assign, Lt, Num, Plus, Skip, Var, While, parse_aexpr, parse_bare

from tests.corpus import SUM_PROGRAM
from tests.strategies import aexprs, envs, instrs, terminating_instrs, valuations

x = Var("x")


def test_lookup_is_first_match():
    assert lookup((), "x") is None
    assert lookup((("x", 1), ("y", 2)), "y") == 2
    assert lookup((("x", 1), ("x", 3)), "x") == 1


def test_af():
    assert af((("x", 3),), Plus(x, Num(4))) == 7
    assert af((), x) is None
    assert af((("x", 5),), parse_aexpr("2 + (x + 1)")) == 8


def test_bf():
    assert bf((("x", 1),), Lt(x, Num(2))) is True
    assert bf((("x", 2),), Lt(x, Num(2))) is False
    assert bf((), Lt(x, Num(2))) is None


def test_update_rewrites_first_binding_only():
    assert update((("x", 1), ("y", 2)), "y", 9) == (("x", 1), ("y", 9))
    assert update((), "x", 1) is None
    assert update((("x", 1), ("x", 3)), "x", 7) == (("x", 7), ("x", 3))


def test_exec_examples():
    assert exec_fuel(0, (("x", 1),), Skip()) == Done((("x", 1),))
    r = parse_env("x=0,y=0,n=3")
    assert exec_fuel(100, r, parse_bare(SUM_PROGRAM)) == Done((("x", 3), ("y", 6), ("n", 3)))
    assert exec_fuel(10, (), Assign("x", Num(1))) == ExecError(UnboundWrite("x"))


@pytest.mark.parametrize("fuel", [0, 1, 5, 100])
def test_infinite_loop_runs_out_of_fuel(fuel):
    assert exec_fuel(fuel, (), While(Lt(Num(0), Num(1)), Skip())) == OutOfFuel()


def test_fuel_bounds_each_loop_separately():
    program = parse_bare("while x < 3 do x := x + 1 done; while y < 3 do y := y + 1 done")
    r = parse_env("x=0,y=0")
    assert exec_fuel(3, r, program) == Done((("x", 3), ("y", 3)))
    assert exec_fuel(2, r, program) == OutOfFuel()


def test_error_reports_program_point():
    program = parse_bare("x := 1; while x < 3 do x := x + z done")
    outcome = exec_fuel(10, parse_env("x=0"), program)
    assert outcome == ExecError(UnboundRead("z"), ("seq2", "body"))


def test_loop_test_reading_unbound_variable():
    outcome = exec_fuel(10, (), parse_bare("while x < 1 do skip done"))
    assert outcome == ExecError(UnboundRead("x"), ())


def test_negative_fuel_is_rejected():
    with pytest.raises(ValueError):
        exec_fuel(-1, (), Skip())


def test_env_overlay():
    g = Valuation.of(x=10, z=4)
    assert env_overlay((("x", 1),), g)("x") == 1
    assert env_overlay((), g)("z") == 4
    assert env_overlay((("x", 1), ("x", 3)), g)("x") == 1
    assert env_overlay((), g)("w") == 0


def test_env_text_form():
    assert parse_env("x=0, y=-2,x=5") == (("x", 0), ("y", -2), ("x", 5))
    assert parse_env("") == ()
    assert format_env((("x", 3), ("y", 6), ("n", 3))) == "x=3,y=6,n=3"
    with pytest.raises(EnvFormatError):
        parse_env("x=1,y")
    with pytest.raises(EnvFormatError):
        parse_env("while=1")


@given(envs, aexprs, valuations)
def test_af_agrees_with_total_evaluation(r, a, g):
    value = af(r, a)
    if value is None:
        missing = first_unbound(r, a)
        assert missing is not None and lookup(r, missing) is None
    else:
        assert af_total(env_overlay(r, g), a) == value
        assert first_unbound(r, a) is None


@given(envs, instrs, st.integers(min_value=0, max_value=6))
def test_more_fuel_never_changes_a_final_outcome(r, i, k):
    first = exec_fuel(k, r, i)
    second = exec_fuel(k + 1, r, i)
    if isinstance(first, OutOfFuel):
        return
    assert second == first


@given(envs, terminating_instrs)
def test_done_preserves_names(r, i):
    outcome = exec_fuel(50, r, i)
    if isinstance(outcome, Done):
        assert [name for name, _ in outcome.env] == [name for name, _ in r]


def test_env_errors_carry_positions():
    with pytest.raises(EnvFormatError, match="line 1, column 6: unexpected end of input"):
        parse_env("x=1,y")
    with pytest.raises(EnvFormatError, match=r"line 2, column 3: unexpected character '\+'"):
        parse_env("x=1,\ny=+2")
    assert parse_env(" x = 1 ,\n y = 2 ") == (("x", 1), ("y", 2))
