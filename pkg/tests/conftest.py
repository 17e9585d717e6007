import os
import sys

from hypothesis import HealthCheck, settings, strategies as st

from monadica.syntax import (
    ADMISSIBLE, BOTTOM, And, Implies, Letter, Logic, Not, Or,
)

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=150, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def formulas(lang: Logic, max_leaves: int = 12, names=("p", "q", "r")):
    """Hypothesis strategy for formulas admissible in ``lang``."""
    atoms = st.one_of(st.just(BOTTOM), st.sampled_from(names).map(Letter))
    unaries = sorted(ADMISSIBLE[lang], key=lambda c: c.__name__)
    if not lang.intuitionistic:
        unaries.append(Not)

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from([And, Or, Implies]), children, children)
            .map(lambda t: t[0](t[1], t[2])),
            st.tuples(st.sampled_from(unaries), children).map(lambda t: t[0](t[1])),
        )

    return st.recursive(atoms, extend, max_leaves=max_leaves)
