import hypothesis.strategies as st
from hypothesis import settings

from oinv2.formula import And, Eq, Exists, Forall, Iff, Implies, Leq, Not, Or, Pred

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

VAR = st.sampled_from(["x", "y"])

ATOM = st.one_of(
    st.builds(lambda p, v: Pred(p, (v,)), st.sampled_from(["P", "Q"]), VAR),
    st.builds(lambda u, v: Pred("R", (u, v)), VAR, VAR),
    st.builds(Eq, VAR, VAR),
    st.builds(Leq, VAR, VAR, st.sampled_from(["leq", "leq0", "leq1"])),
)


def _extend(inner):
    return st.one_of(
        st.builds(Not, inner),
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
        st.builds(Implies, inner, inner),
        st.builds(Iff, inner, inner),
        st.builds(Forall, VAR, inner),
        st.builds(Exists, VAR, inner),
    )


# arbitrary formulas, free variables allowed
formulas = st.recursive(ATOM, _extend, max_leaves=12)
