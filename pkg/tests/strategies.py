"""Hypothesis strategies for syntax trees, environments and valuations."""

from hypothesis import strategies as st

from impsem.assertions import Valuation
from impsem.syntax import (
    AAssign, ASeq, ASkip, AWhile, Assign, Bool, Conj, Imp, Lt, Not, Num, Plus, Prec, Pred, Seq, Skip, Var, While,
)

NAMES = ["x", "y", "z", "n"]

names = st.sampled_from(NAMES)
small_ints = st.integers(min_value=-5, max_value=5)

aexprs = st.recursive(
    st.one_of(names.map(Var), small_ints.map(Num)),
    lambda inner: st.builds(Plus, inner, inner),
    max_leaves=6,
)

bexprs = st.builds(Lt, aexprs, aexprs)

asserts = st.recursive(
    st.one_of(
        st.builds(Bool, bexprs),
        st.builds(Pred, st.sampled_from(["le", "pp", "q"]), st.lists(aexprs, max_size=3).map(tuple)),
    ),
    lambda inner: st.one_of(st.builds(Not, inner), st.builds(Conj, inner, inner)),
    max_leaves=5,
)

conditions = st.builds(Imp, asserts, asserts)

instrs = st.recursive(
    st.one_of(st.just(Skip()), st.builds(Assign, names, aexprs)),
    lambda inner: st.one_of(st.builds(Seq, inner, inner), st.builds(While, bexprs, inner)),
    max_leaves=6,
)

ainstrs = st.recursive(
    st.one_of(st.just(ASkip()), st.builds(AAssign, names, aexprs)),
    lambda inner: st.one_of(
        st.builds(ASeq, inner, inner),
        st.builds(Prec, asserts, inner),
        st.builds(AWhile, bexprs, asserts, inner),
    ),
    max_leaves=6,
)

# Ordered bindings, possibly missing names or repeating them.
envs = st.lists(st.tuples(names, small_ints), max_size=6).map(tuple)

# Every name bound exactly once.
full_envs = st.tuples(*[small_ints for _ in NAMES]).map(lambda values: tuple(zip(NAMES, values)))

valuations = st.dictionaries(names, st.integers(min_value=-50, max_value=50)).map(Valuation.of)


@st.composite
def counting_loops(draw):
    """Loops that terminate: a counter climbs to a bound, the rest of the body is affine"""
    counter = draw(names)
    bound = draw(st.one_of(small_ints.map(Num), names.map(Var)))
    step = draw(st.integers(min_value=1, max_value=3))
    extra = draw(st.lists(st.builds(Assign, names.filter(lambda x: x != counter), aexprs), max_size=2))
    body = Assign(counter, Plus(Var(counter), Num(step)))
    for instr in extra:
        body = Seq(body, instr) if draw(st.booleans()) else Seq(instr, body)
    return While(Lt(Var(counter), bound), body)


terminating_instrs = st.recursive(
    st.one_of(st.just(Skip()), st.builds(Assign, names, aexprs), counting_loops()),
    lambda inner: st.builds(Seq, inner, inner),
    max_leaves=6,
)
