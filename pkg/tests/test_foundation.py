import json

import pytest

from foundry.catalog import named
from foundry.errors import PreconditionError
from foundry.foundation import (
    class_key,
    comparison_morphism,
    enumerate_omega,
    foundation,
    foundation_via_diagram,
    foundation_via_lattice,
    fundamental_diagram,
    grs_presentation,
    lattice_diagram,
    routes_for,
)
from foundry.matroid import direct_sum, mask, members, simplify, uniform
from foundry.matroid_catalog import CATALOG, named_matroid
from foundry.pasture import is_isomorphism, numerical_type, tensor
from foundry.search import find_isomorphism, identify

GOLDEN = [
    ("U(2,4)", "U"), ("U(2,5)", "V"), ("U(3,5)", "V"), ("C5", "U"), ("F7", "F2"), ("F7dual", "F2"),
    ("Q6", "V"), ("P6", "U3"), ("W3", "U"), ("P7", "U"), ("F7minus", "D"), ("T8", "F3"),
    ("AG23_minus_e", "H"), ("wheel(3)", "regular"), ("whirl(3)", "U"), ("U12+U24", "U"),
]


def flats(words):
    return [mask(int(c) - 1 for c in w) for w in words.split(",")]


def test_omega_counts():
    U24 = uniform(2, 4)
    raw = enumerate_omega(U24, raw=True)
    assert len(raw) == 24 and all(s.nondegenerate for s in raw)
    assert len(enumerate_omega(U24)) == 6
    assert enumerate_omega(uniform(1, 2)) == []
    assert not any(s.nondegenerate for s in enumerate_omega(named_matroid("F7"), raw=True))


def test_omega_symbols_are_consistent():
    M = named_matroid("Q6")
    bases = M.basis_set
    for s in enumerate_omega(M, raw=True):
        J = mask(s.I)
        for x, y in ((s.a, s.c), (s.a, s.d), (s.b, s.c), (s.b, s.d)):
            assert J | 1 << x | 1 << y in bases
        nd = (J | 1 << s.a | 1 << s.b) in bases and (J | 1 << s.c | 1 << s.d) in bases
        assert nd == s.nondegenerate
        assert s.psi == tuple(M.closure_mask(J | 1 << e) for e in (s.a, s.b, s.c, s.d))


@pytest.mark.parametrize("mname,pname", GOLDEN)
def test_golden_foundations(mname, pname):
    assert identify(grs_presentation(named_matroid(mname)).pasture).name == pname


def test_u25_relations_shape():
    P = grs_presentation(uniform(2, 5)).pasture
    assert numerical_type(P) == (5, (2,), False, 5)


def test_uniform_free_ranks():
    for n in range(4, 8):
        assert grs_presentation(uniform(2, n)).pasture.group.free_rank == n * (n - 1) // 2 - n


def test_diagram_shapes():
    D = fundamental_diagram(named_matroid("U12+U24"))
    assert sorted(n.tag for n in D.labels) == ["U24", "U24", "U24+U12"]
    assert len(D.edges) == 2
    Q6 = fundamental_diagram(named_matroid("Q6"))
    u25 = [n for n in Q6.labels if n.tag == "U25"]
    u35 = [n for n in Q6.labels if n.tag == "U35"]
    assert [(n.contract, n.delete) for n in u25] == [(1 << 5, 0)]
    assert [(n.contract, n.delete) for n in u35] == [(0, 1 << 0)]
    W3 = fundamental_diagram(named_matroid("W3"), "three_connected")
    assert sorted(n.tag for n in W3.labels) == ["U24"] * 6 + ["W3"]


def test_lattice_diagram_shapes():
    M = named_matroid("AG23_minus_e")
    D = lattice_diagram(M)
    tags = [n.tag for n in D.labels]
    assert tags.count("U24") == 8 and tags.count("C5") == 32
    T8 = lattice_diagram(named_matroid("T8"), "rank_le_3")
    rank3 = [n for n in T8.labels if n.tag == "rank3"]
    kinds = sorted(identify(n.pasture).name for n in rank3)
    assert len(rank3) == 8 and kinds == ["D"] * 4 + ["U"] * 4


def test_alternate_preimage_agrees():
    M = named_matroid("AG23_minus_e")
    a = foundation_via_lattice(M)
    b = foundation_via_lattice(M, largest=True)
    assert find_isomorphism(a.pasture, b.pasture) is not None


def test_route_preconditions():
    with pytest.raises(PreconditionError):
        fundamental_diagram(named_matroid("U12+U24"), "two_connected")
    with pytest.raises(PreconditionError):
        fundamental_diagram(named_matroid("D6"), "three_connected")
    with pytest.raises(PreconditionError):
        lattice_diagram(named_matroid("D6"), "three_connected")
    with pytest.raises(PreconditionError):
        fundamental_diagram(uniform(2, 4), "nope")
    with pytest.raises(PreconditionError):
        foundation(uniform(2, 4), method="nope")


@pytest.mark.parametrize("name", ["Q6", "whirl(2)", "whirl(3)", "F7minus", "P7", "W3", "U12+U24"])
def test_routes_agree(name):
    M = named_matroid(name)
    report = foundation(M, cross_check=True)
    assert report.cross_checks and all(ok for _, ok in report.cross_checks)
    assert {r for r, _ in report.cross_checks} == set(routes_for(M))


def test_diagram_examples():
    assert identify(foundation_via_diagram(named_matroid("Q6")).pasture).name == "V"
    for r in (2, 3, 4):
        rep = foundation_via_diagram(named_matroid(f"whirl({r})"), "two_connected")
        assert identify(rep.pasture).name == "U"
    rep = foundation_via_diagram(named_matroid("F7minus"), "three_connected")
    assert identify(rep.pasture).name == "D"


def test_w3_cross_ratio_identity():
    rep = grs_presentation(named_matroid("W3"))
    a = rep.cross_ratio(*flats("123,24,25,26"))
    b = rep.cross_ratio(*flats("345,46,14,24"))
    c = rep.cross_ratio(*flats("156,26,36,46"))
    assert a == b == c


def test_d6_cross_ratio_identity():
    D6 = named_matroid("D6")
    rep = grs_presentation(D6)
    import itertools

    checked = 0
    for s in itertools.permutations(range(4)):
        try:
            x = rep.cross_ratio_of((4,), *s)
            y = rep.cross_ratio_of((5,), *s)
        except PreconditionError:
            continue
        checked += 1
        assert x == y
    assert checked == 24


def test_cross_ratio_symmetry_under_automorphism():
    M = named_matroid("W3")
    rot = [(e + 2) % 6 for e in range(6)]
    assert M.relabel(rot).basis_set == M.basis_set
    rep = grs_presentation(M)

    def image(key):
        return class_key(tuple(mask(rot[e] for e in members(h)) for h in key))

    keys = sorted(rep.dictionary)
    for k1 in keys:
        for k2 in keys:
            same = rep.dictionary[k1] == rep.dictionary[k2]
            assert same == (rep.dictionary[image(k1)] == rep.dictionary[image(k2)])


def test_cross_ratio_rejects_bad_quadruple():
    rep = grs_presentation(named_matroid("W3"))
    with pytest.raises(PreconditionError):
        rep.cross_ratio(1, 2, 4, 8)
    with pytest.raises(PreconditionError):
        rep.cross_ratio_of((), 0, 1, 2, 3)


def test_dictionary_covers_classes():
    M = named_matroid("P7")
    rep = grs_presentation(M)
    keys = {class_key(s.psi) for s in enumerate_omega(M) if s.nondegenerate}
    assert set(rep.dictionary) == keys


def _diagram_components(D):
    parent = list(range(len(D.nodes)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for s, t, _ in D.edges:
        parent[find(s)] = find(t)
    return len({find(i) for i in range(len(D.nodes))})


@pytest.mark.parametrize(
    "name,factors",
    [("F7minus", ["D"]), ("T8", ["F3"]), ("AG23_minus_e", ["H"]), ("P7", ["U"]), ("W3", ["U"])],
)
def test_tensor_factor_structure(name, factors):
    M = named_matroid(name)
    F = grs_presentation(M).pasture
    T = tensor(named("regular"), *(named(f) for f in factors))
    assert numerical_type(F) == numerical_type(T)
    assert _diagram_components(fundamental_diagram(M)) == len(factors)


def test_tensor_factor_structure_of_sum():
    M = direct_sum(uniform(2, 4), uniform(2, 4))
    assert _diagram_components(fundamental_diagram(M)) == 2


def test_direct_sum_law():
    M = direct_sum(uniform(2, 4), uniform(2, 4))
    F = grs_presentation(M).pasture
    assert find_isomorphism(F, tensor(named("U"), named("U"))) is not None
    assert numerical_type(F) == (4, (2,), False, 2)


@pytest.mark.parametrize("name", [n for n in CATALOG if named_matroid(n).n <= 7])
def test_dual_invariance(name):
    M = named_matroid(name)
    assert find_isomorphism(grs_presentation(M.dual()).pasture, grs_presentation(M).pasture) is not None


def test_simplification_invariance():
    M = named_matroid("Q6")
    from foundry.matroid import parallel_extension

    ext = parallel_extension(M, 2)
    assert simplify(ext).n == 6
    assert find_isomorphism(grs_presentation(ext).pasture, grs_presentation(M).pasture) is not None


def test_comparison_morphism_is_isomorphism():
    M = named_matroid("P7")
    rep = foundation_via_lattice(M, "three_connected")
    f = comparison_morphism(rep, grs_presentation(M))
    assert is_isomorphism(f)


def test_thread_determinism():
    M = named_matroid("P7")
    one = foundation_via_diagram(M, threads=1).dumps()
    many = foundation_via_diagram(M, threads=8).dumps()
    assert one == many


def test_report_json():
    rep = foundation(named_matroid("T8"), identify_result=True, cross_check=False)
    doc = json.loads(rep.dumps())
    assert doc["format"] == "foundation-report/v1"
    assert doc["identification"] == {"status": "match", "name": "F3"}
    assert doc["numerical_type"]["hexagon_count"] == 1
    assert len(doc["generator_dictionary"]) == len(rep.dictionary)
