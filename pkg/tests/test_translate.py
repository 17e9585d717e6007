import pytest
from hypothesis import given, strategies as st

import oracle
from conftest import formulas
from monadica import frames as fr
from monadica.syntax import (
    BOTTOM, And, Box, BoxF, BoxP, Dia, DiaF, DiaP, Exists, Forall, Implies,
    InadmissibleError, Letter, Logic, Not, Or, admissible, letters, parse,
)
from monadica.translate import (
    TRANSLATIONS, dagger, flat, godel_t, natural, natural_dagger, sharp, t_sharp,
)

p, q = Letter("p"), Letter("q")


@pytest.mark.parametrize("fn, src, out", [
    (godel_t, p, Box(p)),
    (godel_t, Implies(p, q), Box(Or(Not(Box(p)), Box(q)))),
    (godel_t, Exists(p), Exists(Box(p))),
    (godel_t, BOTTOM, BOTTOM),
    (godel_t, Forall(p), Box(Forall(Box(p)))),
    (natural, Forall(p), BoxF(Box(p))),
    (natural, Exists(p), DiaP(Box(p))),
    (natural, And(p, q), And(Box(p), Box(q))),
    (sharp, Box(Forall(p)), BoxF(Forall(p))),
    (sharp, p, p),
    (sharp, Dia(p), DiaF(p)),
    (dagger, Box(p), BoxF(p)),
    (dagger, BoxF(p), BoxF(Forall(p))),
    (dagger, BoxP(p), Forall(BoxP(p))),
    (dagger, Dia(p), DiaF(p)),
    (dagger, DiaF(p), DiaF(Exists(p))),
    (dagger, DiaP(p), Exists(DiaP(p))),
    (flat, Exists(p), DiaP(Exists(BoxF(p)))),
    (flat, p, BoxF(p)),
    (flat, Forall(p), BoxF(Forall(BoxF(p)))),
    (t_sharp, Exists(p), Exists(BoxF(p))),
    (natural_dagger, Exists(p), Exists(DiaP(BoxF(p)))),
    (t_sharp, BOTTOM, BOTTOM),
    (natural_dagger, BOTTOM, BOTTOM),
])
def test_translation_examples(fn, src, out):
    assert fn(src) == out


def test_natural_dagger_of_exists_matches_negated_box_form():
    # the box-only rendering of the same formula must agree on every MS4T frame
    boxed = Not(Forall(BoxP(Not(BoxF(p)))))
    f = natural_dagger(Exists(p))
    for n in (1, 2, 3):
        for rels in oracle.all_frames(n, Logic.MS4T):
            for v in oracle.valuations(n, Logic.MS4T, rels, ["p"]):
                assert oracle.truth(n, Logic.MS4T, rels, v, f) == oracle.truth(n, Logic.MS4T, rels, v, boxed)


@pytest.mark.parametrize("fn, bad", [
    (godel_t, Box(p)), (natural, Not(p)), (sharp, BoxF(p)), (dagger, Forall(p)), (flat, Dia(p)),
])
def test_inadmissible_input_rejected(fn, bad):
    with pytest.raises(InadmissibleError):
        fn(bad)


@pytest.mark.parametrize("name", sorted(TRANSLATIONS))
@given(data=st.data())
def test_output_admissible_and_letters_kept(name, data):
    source, target, fn = TRANSLATIONS[name]
    f = data.draw(formulas(source))
    out = fn(f)
    assert admissible(out, target)
    assert letters(out) == letters(f)


def test_translate_parsed_text():
    assert str(godel_t(parse("E p", "MIPC"))) == "E []p"
    assert str(flat(parse("E p", "MIPC"))) == "<P>E [F]p"
