import pytest
from hypothesis import assume, given, strategies as st

from impsem.assertions import (
    Counterexample, EnvFormatError, NoCounterexample, Valuation, a_subst, af_total, builtin_pred_env, f_p, i_a, i_c,
    i_lc, lf_total, parse_valuation, samples_for, structured_samples, unbound_predicates, valid_l_sampled,
    valid_sampled,
)
from impsem.concrete import af, env_overlay, lookup, update
from impsem.syntax import (
    Bool, Conj, Imp, Lt, Not, Num, Plus, Pred, Var, false_assert, parse_assert, parse_condition, true_assert,
    variables,
)

from tests.strategies import NAMES, aexprs, asserts, envs, valuations

x, y, n = Var("x"), Var("y"), Var("n")
ex_m = builtin_pred_env()


def test_total_evaluation():
    assert af_total(Valuation.of(x=3), Plus(x, Num(4))) == 7
    assert af_total(Valuation(), Plus(Var("z"), Var("z"))) == 0
    assert lf_total(Valuation.of(y=3, x=2), [y, x]) == [3, 2]


def test_valuation_text_form():
    g = parse_valuation("x=1,y=2,x=5")
    assert g("x") == 5 and g("y") == 2 and g("q") == 0
    assert str(g) == "x=5,y=2"
    with pytest.raises(EnvFormatError):
        parse_valuation("x=one")


def test_substitution():
    assert a_subst(Pred("pp", (y, x)), "x", Plus(x, Num(1))) == Pred("pp", (y, Plus(x, Num(1))))
    assert a_subst(Bool(Lt(x, y)), "y", Num(3)) == Bool(Lt(x, Num(3)))
    inv = parse_assert("le(x,n) /\\ pp(y,x)")
    step = a_subst(a_subst(inv, "y", Plus(x, y)), "x", Plus(x, Num(1)))
    assert step == parse_assert("le(x + 1,n) /\\ pp(x + 1 + y,x + 1)")


def test_interpretation():
    assert i_a(ex_m, Valuation(), Bool(Lt(Num(1), Num(2))))
    assert i_a(ex_m, Valuation.of(y=3, x=2), Pred("pp", (y, x)))
    assert not i_a(ex_m, Valuation.of(x=5, n=3), Pred("le", (x, n)))


def test_conditions():
    g = Valuation.of(x=0, n=1)
    assert i_c(ex_m, g, Imp(false_assert, Pred("le", (x, n))))
    assert not i_c(ex_m, g, Imp(true_assert, false_assert))
    assert i_c(ex_m, g, Imp(Pred("le", (x, n)), Pred("le", (x, n))))
    assert i_lc(ex_m, g, [])
    assert not i_lc(ex_m, g, [Imp(true_assert, true_assert), Imp(true_assert, false_assert)])


def test_builtin_predicates():
    assert f_p(ex_m, "le")([1, 2])
    assert not f_p(ex_m, "pp")([3, 3])
    assert not f_p(ex_m, "le")([1])
    assert f_p(ex_m, "pp")([6, 3])


def test_unbound_predicate_is_true():
    assert f_p(ex_m, "q")([1, 2, 3])
    assert i_a(ex_m, Valuation(), Pred("q"))
    assert unbound_predicates(ex_m, parse_assert("q(x) /\\ le(x,y)")) == ["q"]


def test_valid_sampled():
    samples = structured_samples(["x"], count=10)
    a = parse_assert("le(x,n)")
    assert valid_sampled(ex_m, Imp(a, a), samples) == NoCounterexample()
    verdict = valid_sampled(ex_m, Imp(true_assert, Bool(Lt(x, Num(0)))), samples)
    assert isinstance(verdict, Counterexample)
    assert verdict.g("x") >= 0
    with pytest.raises(ValueError):
        valid_sampled(ex_m, Imp(a, a), [])


def test_sum_example_conditions_survive_sampling():
    first = parse_condition("~ x < n /\\ (le(x,n) /\\ pp(y,x)) -> pp(y,n)")
    second = parse_condition("x < n /\\ (le(x,n) /\\ pp(y,x)) -> le(x + 1,n) /\\ pp(x + 1 + y,x + 1)")
    samples = samples_for([first, second], count=1000)
    results = valid_l_sampled(ex_m, [first, second], samples)
    assert [verdict for _, verdict in results] == [NoCounterexample(), NoCounterexample()]


def test_structured_samples_cover_the_grid():
    samples = structured_samples(["x", "y", "n"], count=1000, seed=3)
    assert len(samples) == 7 ** 3 + 1000
    assert Valuation.of(x=-3, y=3, n=0) in samples
    assert structured_samples(["x", "y"], count=5, seed=1) == structured_samples(["x", "y"], count=5, seed=1)


def test_wide_name_sets_use_random_grid_points():
    names = ["a", "b", "c", "d", "e"]
    samples = structured_samples(names, count=0)
    assert len(samples) == 7 ** 4
    assert all(-3 <= g(name) <= 3 for g in samples for name in names)


@given(asserts, valuations)
def test_interpretation_is_structural(a, g):
    assert i_a(ex_m, g, Not(a)) == (not i_a(ex_m, g, a))
    assert i_a(ex_m, g, Conj(a, a)) == i_a(ex_m, g, a)


@given(asserts, aexprs)
def test_substituting_an_absent_variable_is_identity(a, e):
    fresh = "w"
    assume(fresh not in variables(a))
    assert a_subst(a, fresh, e) == a


@given(envs, st.sampled_from(NAMES), aexprs, asserts, valuations)
def test_substitution_matches_update(r1, name, e, a, g):
    value = af(r1, e)
    assume(value is not None and lookup(r1, name) is not None)
    r2 = update(r1, name, value)
    assert i_a(ex_m, env_overlay(r1, g), a_subst(a, name, e)) == i_a(ex_m, env_overlay(r2, g), a)
