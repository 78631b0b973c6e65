import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from foundry import pasture as pm
from foundry.abgroup import unit
from foundry.acceptance import epsilon_squared_trivial, hexagon_closed
from foundry.catalog import CATALOG_NAMES, identification_catalog, named, uk_presentation
from foundry.errors import InconsistentRelation, MalformedWord, ParseError, PreconditionError
from foundry.pasture import EPS, Diagram, PastureMorphism, colimit, from_presentation, numerical_type, quotient, tensor
from foundry.search import find_isomorphism, hom_enumerate, identify

CATALOG = identification_catalog()


def test_parse_word():
    names = ["x", "y"]
    assert pm.parse_word("-x^2*y^-1", names) == ((EPS, 1), (1, 2), (2, -1))
    assert pm.parse_word("x/y", names) == ((1, 1), (2, -1))
    assert pm.parse_word("1", names) == ()
    assert pm.parse_word("0", names) is None
    assert pm.parse_word("eps*x", names) == ((EPS, 1), (1, 1))
    for bad in ("z", "x^", "", "-", "x**y"):
        with pytest.raises(MalformedWord):
            pm.parse_word(bad, names)


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_format_parse_round_trip(exps):
    names = ["x", "y"]
    vec = tuple((i, v) for i, v in enumerate(exps) if v and (i or v == 1))
    assert pm.parse_word(pm.format_word(vec, names), names) == vec


def test_presentation_examples():
    U = from_presentation(["x", "y"], [], [["x", "y", "-1"]])
    assert numerical_type(U) == (2, (2,), False, 1)
    F3 = from_presentation([], [], [["1", "1", "1"]])
    assert numerical_type(F3) == (0, (2,), False, 1)
    assert numerical_type(from_presentation([], [], [])) == (0, (2,), False, 0)
    assert numerical_type(named("K")) == (0, (), True, 1)
    assert numerical_type(named("D")) == (1, (2,), False, 1)
    assert numerical_type(named("S")) == (0, (2,), False, 1)
    assert numerical_type(named("F2")) == (0, (), True, 0)


def test_presentation_errors():
    with pytest.raises(InconsistentRelation):
        from_presentation(["x"], [], [["x", "0", "0"]])
    with pytest.raises(MalformedWord):
        from_presentation(["x"], ["z"], [])
    with pytest.raises(ParseError):
        from_presentation(["x", "x"], [], [])
    with pytest.raises(ParseError):
        from_presentation(["a b"], [], [])


def test_binary_terms_fold_into_relations():
    P = from_presentation(["x"], [], [["x", "1", "0"]])
    assert P.element("x") == P.minus_one


def test_fundamental_elements():
    U = named("U")
    fe = pm.fundamental_elements(U)
    expected = {U.element(w) for w in ("x", "y", "x^-1", "-y/x", "y^-1", "-x/y")}
    assert set(fe) == expected and len(fe) == 6
    assert len(pm.fundamental_elements(named("V"))) == 30
    assert len(named("V").hexagons) == 5
    assert pm.hexagons(named("F2")) == []


def test_collapsed_hexagon():
    F3 = named("F3")
    (h,) = F3.hexagons
    assert len(h.pairs) == 1
    assert F3.is_null("1", "1", "1") and F3.is_null("-1", "-1", "-1")
    assert not F3.is_null("1", "1", "-1")


def test_null_set_with_zeros():
    U = named("U")
    assert U.is_null("x", "-x", "0")
    assert not U.is_null("x", "x", "0")
    assert U.is_null("0", "0", "0")
    assert not U.is_null("x", "0", "0")
    assert U.is_null("x*y^-1", "1", "-y^-1")


@pytest.mark.parametrize("name,P", CATALOG, ids=[n for n, _ in CATALOG])
def test_catalog_properties(name, P):
    assert hexagon_closed(P)
    assert epsilon_squared_trivial(P)
    assert P.minus_one_trivial() == (not any(P.eps))
    if name == "U2":
        assert find_isomorphism(P, named("V")) is not None
    else:
        assert identify(P).name == name


def test_catalog_names_resolve():
    for name in CATALOG_NAMES:
        named(name.replace("U_k(k)", "U_k(3)"))
    assert pm.dumps(named("F±")) == pm.dumps(named("regular"))
    assert pm.dumps(named("U_3")) == pm.dumps(named("U_k(3)"))
    with pytest.raises(PreconditionError):
        named("nope")


def test_uk_presentation_sizes():
    names, terms = uk_presentation(2)
    assert len(names) == 5 and len(terms) == 4 + 1
    assert find_isomorphism(named("U_k(2)"), named("V")) is not None


def test_finite_fields():
    for q in (2, 3, 4, 5, 7, 8, 9):
        F = named(f"F{q}")
        assert F.group.order() == (q - 1 if q % 2 else q - 1)
        assert F.minus_one_trivial() == (q % 2 == 0)


def test_quotient_examples():
    U = named("U")
    Q = quotient(U, [["x", "-y^-1", "0"]])
    # no saturation: x^3 = -1 holds in H but is not derived from x = 1/y alone
    assert numerical_type(Q) == (1, (2,), False, 1)
    for q in ("F3", "F4", "F5", "F7", "F9"):
        assert len(hom_enumerate(Q, named(q))) == len(hom_enumerate(named("H"), named(q)))
    assert identify(quotient(Q, [["x^3", "1", "0"]])).name == "H"
    assert identify(quotient(named("D"), [["x", "1", "0"]])).name == "F3"
    assert find_isomorphism(quotient(U, []), U) is not None
    surj = Q.cone[0]
    assert pm.is_morphism(surj)


def test_quotient_group_example():
    Q = quotient(named("U"), [["x", "-y", "0"]])
    assert (Q.group.invariant_factors, Q.group.free_rank) == ((2,), 1)


def test_tensor_examples():
    for name in ("U", "H", "F3", "V"):
        P = named(name)
        assert find_isomorphism(tensor(named("regular"), P), P) is not None
    assert identify(tensor(named("F2"), named("F3"))).name == "K"
    T = tensor(named("F2"), named("U"))
    assert numerical_type(T) == (2, (), True, 1)
    assert all(pm.is_morphism(f) for f in T.cone)


def test_colimit_examples():
    H = named("H")
    f = PastureMorphism(H, H, (((1, -1),),))
    assert pm.is_morphism(f)
    C = colimit(Diagram([H, H], [(0, 1, pm.identity_morphism(H)), (0, 1, f)]))
    assert identify(C).name == "F3"
    single = colimit(Diagram([named("U")]))
    assert find_isomorphism(single, named("U")) is not None
    pair = colimit(Diagram([named("U"), named("D")]))
    assert find_isomorphism(pair, tensor(named("U"), named("D"))) is not None


def test_colimit_cone_commutes():
    H = named("H")
    f = PastureMorphism(H, H, (((1, -1),),))
    D = Diagram([H, H], [(0, 1, f)])
    C = colimit(D)
    assert C.cone[1].compose(f) == C.cone[0]


def test_colimit_rejects_bad_edges():
    U, F3 = named("U"), named("F3")
    bad = PastureMorphism(U, F3, ((), ()))
    with pytest.raises(PreconditionError):
        colimit(Diagram([U, F3], [(0, 1, bad)]))
    with pytest.raises(PreconditionError):
        colimit(Diagram([U], [(0, 3, bad)]))


def test_morphism_checks():
    U, F3 = named("U"), named("F3")
    assert pm.is_morphism(pm.identity_morphism(U))
    assert pm.is_morphism(PastureMorphism(U, U, (unit(2), unit(1))))
    assert not pm.is_morphism(PastureMorphism(U, F3, ((), unit(EPS))))
    f = PastureMorphism(U, F3, (unit(EPS), unit(EPS)))
    assert pm.is_morphism(f)
    assert f("x*y") == F3.one


@pytest.mark.parametrize("name,P", CATALOG, ids=[n for n, _ in CATALOG])
def test_json_round_trip(name, P):
    text = pm.dumps(P)
    Q = pm.from_json(text)
    assert pm.dumps(Q) == text
    assert numerical_type(Q) == numerical_type(P)
    assert json.loads(text)["format"] == "pasture/v1"


def test_json_errors():
    with pytest.raises(ParseError):
        pm.from_json("{not json")
    with pytest.raises(ParseError):
        pm.from_json({"format": "pasture/v9", "generators": []})
    with pytest.raises(ParseError):
        pm.from_json({"generators": ["x"], "add_relations": [["x"]]})


def test_coproduct_counting_law():
    targets = [named(q) for q in ("F2", "F3", "F4", "F5", "S")]
    names = ("regular", "U", "D", "H", "F3", "S", "G")
    for a in names:
        for b in names:
            T = tensor(named(a), named(b))
            for Q in targets:
                lhs = len(hom_enumerate(T, Q))
                assert lhs == len(hom_enumerate(named(a), Q)) * len(hom_enumerate(named(b), Q))


def test_quotient_counting_law():
    U = named("U")
    terms = [["x", "y", "-1"], ["x^2", "y", "-1"]]
    for Q in (named("F3"), named("F4"), named("F5"), named("F7")):
        for term in terms:
            want = sum(1 for f in hom_enumerate(U, Q) if Q.is_null(*(f(w) for w in term)))
            assert len(hom_enumerate(quotient(U, [term]), Q)) == want
