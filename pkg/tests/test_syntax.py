import pytest
from hypothesis import given, strategies as st

from conftest import formulas
from monadica.syntax import (
    BOTTOM, And, Box, BoxF, Exists, Forall, Implies, InadmissibleError, Letter,
    Logic, Not, Or, ParseError, admissible, depth, letters, parse, pretty, subformulas,
)

p, q = Letter("p"), Letter("q")


@pytest.mark.parametrize("text, lang, expected", [
    ("A p -> p", Logic.MIPC, Implies(Forall(p), p)),
    ("false", Logic.MS4T, BOTTOM),
    ("[] A p -> A [] p", Logic.MS4, Implies(Box(Forall(p)), Forall(Box(p)))),
    ("p -> q -> p", Logic.MIPC, Implies(p, Implies(q, p))),
    ("p & q | p", Logic.MS4, Or(And(p, q), p)),
    ("~p", Logic.MS4, Not(p)),
    ("true", Logic.MIPC, Implies(BOTTOM, BOTTOM)),
    ("true", Logic.S4T, Not(BOTTOM)),
])
def test_parse_examples(text, lang, expected):
    assert parse(text, lang) == expected


@pytest.mark.parametrize("f, text", [
    (Forall(p), "A p"),
    (Implies(Forall(p), p), "A p -> p"),
    (Box(Or(Not(Box(p)), Box(q))), "[](~[]p | []q)"),
    (Implies(Implies(p, q), p), "(p -> q) -> p"),
    (And(p, Or(q, p)), "p & (q | p)"),
    (Exists(Box(p)), "E []p"),
])
def test_pretty_examples(f, text):
    assert pretty(f) == text


def test_mipc_negation_is_sugar():
    assert parse("~p", Logic.MIPC) == parse("p -> false", Logic.MIPC)
    assert parse("~p", Logic.MIPC) == Implies(p, BOTTOM)


def test_iff_desugars_left_to_right():
    assert parse("p <-> q", Logic.MS4) == And(Implies(p, q), Implies(q, p))
    chained = parse("p <-> q <-> p", Logic.MS4)
    assert chained.right == Implies(p, parse("p <-> q", Logic.MS4))


@pytest.mark.parametrize("f, lang, ok", [
    (Forall(p), Logic.MS4T, True),
    (Box(p), Logic.MIPC, False),
    (BoxF(Forall(p)), Logic.MS4T, True),
    (Not(p), Logic.MIPC, False),
    (Forall(p), Logic.S4T, False),
])
def test_admissible_examples(f, lang, ok):
    assert admissible(f, lang) is ok


def test_subformulas_and_letters():
    assert subformulas(BOTTOM) == [BOTTOM]
    assert subformulas(Implies(p, q)) == [p, q, Implies(p, q)]
    assert subformulas(Forall(Exists(p))) == [p, Exists(p), Forall(Exists(p))]
    assert subformulas(And(p, p)) == [p, And(p, p)]
    assert letters(BOTTOM) == set()
    assert letters(Implies(p, q)) == {"p", "q"}
    assert letters(Forall(p)) == {"p"}


def test_inadmissible_token_reported_with_position():
    with pytest.raises(InadmissibleError) as err:
        parse("p -> [] q", Logic.MIPC)
    assert err.value.token == "[]" and err.value.position == 5
    assert "MIPC" in str(err.value)


@pytest.mark.parametrize("text", ["p &", "(p", "p q", "p $ q", "", "A", "p)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text, Logic.MS4)


def test_bad_letter_rejected():
    with pytest.raises(ValueError):
        Letter("P")


@pytest.mark.parametrize("lang", list(Logic))
@given(data=st.data())
def test_round_trip(lang, data):
    f = data.draw(formulas(lang))
    assert parse(pretty(f), lang) == f


@pytest.mark.parametrize("lang", list(Logic))
@given(data=st.data())
def test_admissibility_closed_under_subformulas(lang, data):
    f = data.draw(formulas(lang))
    assert admissible(f, lang)
    assert all(admissible(g, lang) for g in subformulas(f))
    assert subformulas(f)[-1] == f
    assert depth(f) >= max(depth(g) for g in subformulas(f))
