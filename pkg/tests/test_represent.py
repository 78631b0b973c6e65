import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foundry.catalog import named
from foundry.errors import BudgetExceeded, DimensionMismatch, PreconditionError
from foundry.foundation import grs_presentation
from foundry.matroid import members, uniform
from foundry.matroid_catalog import named_matroid
from foundry.represent import (
    DEFAULT_TARGETS,
    GPFunction,
    gp_functions,
    is_representable,
    morphism_table,
    plucker_relations,
    representability_row,
    rescaling_classes,
    rescaling_classes_naive,
    rescaling_group,
    table_json,
    table_tsv,
    verify_gp,
)
from foundry.search import hom_enumerate


def indicator(M, P):
    return GPFunction(M, P, {b: "1" for b in M.bases})


def test_verify_gp_examples():
    U24, F3 = uniform(2, 4), named("F3")
    assert not verify_gp(indicator(U24, F3))
    values = {tuple(members(b)): "1" for b in U24.bases}
    values[(0, 2)] = "-1"
    assert verify_gp(GPFunction(U24, F3, values))
    for name in ("F7", "Q6", "T8", "U(2,5)"):
        M = named_matroid(name)
        assert verify_gp(indicator(M, named("K")))


def test_verify_gp_support_and_sizes():
    U24, F3 = uniform(2, 4), named("F3")
    values = {tuple(members(b)): "1" for b in U24.bases[1:]}
    assert not verify_gp(GPFunction(U24, F3, values))
    with pytest.raises(DimensionMismatch):
        GPFunction(U24, F3, {(0, 1, 2): "1"})
    with pytest.raises(DimensionMismatch):
        GPFunction(U24, F3, {(0, 0): "1"})


def test_alternating_sign():
    U24, F5 = uniform(2, 4), named("F5")
    f = GPFunction(U24, F5, {(0, 1): "g"})
    assert f(1, 0) == -f(0, 1)
    assert f(0, 0) == F5.zero
    assert f(2, 3) == F5.zero


def test_plucker_relations_of_rank_one():
    assert plucker_relations(uniform(1, 3)) == []


@pytest.mark.parametrize(
    "mname,q,expected", [("U(2,4)", "F3", 1), ("U(2,4)", "F4", 2), ("F7", "F2", 1), ("U(2,4)", "F2", 0)]
)
def test_rescaling_examples(mname, q, expected):
    assert rescaling_classes(named_matroid(mname), named(q)).count == expected


@pytest.mark.parametrize("mname", ["U(2,4)", "U(2,5)", "C5", "F7", "U12+U24"])
@pytest.mark.parametrize("q", ["F2", "F3", "F4"])
def test_oracle_law(mname, q):
    M = named_matroid(mname)
    F = grs_presentation(M).pasture
    assert rescaling_classes(M, named(q)).count == len(hom_enumerate(F, named(q)))


@pytest.mark.parametrize("mname,q", [("U(2,4)", "F4"), ("C5", "F3"), ("U(2,4)", "F5")])
def test_orbit_sweep_matches_naive(mname, q):
    M = named_matroid(mname)
    assert rescaling_classes(M, named(q)).count == rescaling_classes_naive(M, named(q))


def test_rescaling_preserves_validity():
    M, P = uniform(2, 4), named("F5")
    bases, valid = gp_functions(M, P)
    H = rescaling_group(M, P)
    g = P.group
    for x in valid[:4]:
        for h in H[::7]:
            y = tuple(g.add(a, b) for a, b in zip(x, h))
            assert verify_gp(GPFunction.from_coords(M, P, dict(zip(bases, y))))


def test_rescaling_budget_and_infinite_targets():
    with pytest.raises(BudgetExceeded):
        rescaling_classes(uniform(2, 5), named("F5"), budget=10)
    with pytest.raises(PreconditionError):
        rescaling_classes(uniform(2, 4), named("U"))


def test_is_representable_examples():
    assert is_representable(named_matroid("F7minus"), named("F3"))
    assert not is_representable(named_matroid("F7minus"), named("F4"))
    assert is_representable(named_matroid("AG23_minus_e"), named("F4"))
    assert not is_representable(named_matroid("AG23_minus_e"), named("F5"))
    assert not is_representable(uniform(2, 4), named("F2"))
    assert is_representable(named_matroid("F7"), named("F2"))


@pytest.mark.parametrize("name", ["U(2,4)", "F7", "Q6", "T8", "P7", "wheel(3)", "U12+U24"])
def test_everything_is_krasner_representable(name):
    assert is_representable(named_matroid(name), named("K"))


def test_rows():
    assert representability_row(named("G"), ("F4", "F5", "F7")) == (True, True, False)
    fields = ("F2", "F3", "F4", "F5", "F7", "F8", "F9")
    assert not any(representability_row(named("S"), fields))
    assert all(representability_row(named("regular"), fields))
    assert representability_row(named("W"), ("K", "S", "W")) == (True, False, True)


def test_table_formats():
    table = morphism_table(["U", "F3"], DEFAULT_TARGETS)
    assert table["U"] == {"F2": 0, "F3": 1, "F4": 1, "F5": 1, "F7": 1, "F8": 1, "F9": 1, "S": 1}
    lines = table_tsv(table).splitlines()
    assert lines[0].split("\t") == ["pasture", *DEFAULT_TARGETS]
    assert lines[2] == "F3\t0\t1\t0\t0\t0\t0\t1\t0"
    assert json.loads(table_json(table))["table"] == table


@settings(max_examples=20)
@given(st.sampled_from(["F3", "F4", "F5", "F7"]), st.data())
def test_verify_gp_matches_rescaled_witness(q, data):
    M, P = uniform(2, 4), named(q)
    bases, valid = gp_functions(M, P)
    if not valid:
        return
    x = data.draw(st.sampled_from(valid))
    g = P.group
    units = sorted(g.elements())
    scale = [data.draw(st.sampled_from(units)) for _ in range(M.n + 1)]
    y = []
    for b, v in zip(bases, x):
        acc = g.add(v, scale[0])
        for e in members(b):
            acc = g.add(acc, scale[e + 1])
        y.append(acc)
    assert verify_gp(GPFunction.from_coords(M, P, dict(zip(bases, y))))
    assert tuple(y) in set(valid)


def test_gp_count_is_classes_times_orbit():
    for M, q in ((uniform(2, 4), "F4"), (named_matroid("C5"), "F5")):
        r = rescaling_classes(M, named(q))
        assert r.count * r.orbit_size == r.valid
        assert len(list(itertools.islice(gp_functions(M, named(q))[1], 3))) <= r.valid
