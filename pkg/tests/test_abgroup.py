import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from foundry import abgroup as ab
from foundry.errors import BudgetExceeded, DimensionMismatch, PreconditionError

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_snf_examples():
    assert ab.smith_normal_form([[2, 0], [0, 3]])[1] == [[1, 0], [0, 6]]
    U, D, V = ab.smith_normal_form([[0]])
    assert (U, D, V) == ([[1]], [[0]], [[1]])
    assert ab.smith_normal_form([[1, 0], [0, 1]])[1] == [[1, 0], [0, 1]]


@given(matrices)
def test_snf_properties(A):
    U, D, V = ab.smith_normal_form(A)
    assert ab.matmul(ab.matmul(U, A), V) == D
    assert abs(ab.determinant(U)) == 1 and abs(ab.determinant(V)) == 1
    k = min(len(A), len(A[0]))
    assert all(D[i][j] == 0 for i in range(len(A)) for j in range(len(A[0])) if i != j)
    diag = [D[i][i] for i in range(k)]
    nz = [d for d in diag if d]
    assert nz == diag[: len(nz)] and all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_snf_large_entries_exact():
    A = [[10**30 + 1, 2 * 10**30], [3, 7]]
    U, D, V = ab.smith_normal_form(A)
    assert ab.matmul(ab.matmul(U, A), V) == D
    assert D[0][0] * D[1][1] == abs(ab.determinant(A))


def test_canonical_forms():
    G = ab.FpAbelianGroup(2, [[2, 0]])
    assert (G.invariant_factors, G.free_rank) == ((2,), 1)
    assert ab.FpAbelianGroup(3).free_rank == 3
    assert ab.FpAbelianGroup(2, [[2, 0], [0, 3]]).invariant_factors == (6,)


@given(matrices)
def test_projection_inclusion_identity(A):
    G = ab.FpAbelianGroup(len(A[0]), A)
    for i in range(G.dimension):
        coords = tuple(int(i == j) for j in range(G.dimension))
        assert G.coords(G.lift(coords)) == G.reduce(coords)
    for row in A:
        assert G.is_identity(row)


@given(matrices, st.randoms(use_true_random=False))
def test_canonical_form_permutation_invariant(A, rnd):
    perm = list(range(len(A[0])))
    rnd.shuffle(perm)
    B = [[row[perm[j]] for j in range(len(row))] for row in A]
    G, H = ab.FpAbelianGroup(len(A[0]), A), ab.FpAbelianGroup(len(A[0]), B)
    assert (G.invariant_factors, G.free_rank) == (H.invariant_factors, H.free_rank)


@given(matrices, st.data())
def test_element_equal_is_equivalence(A, data):
    G = ab.FpAbelianGroup(len(A[0]), A)
    vec = st.lists(st.integers(-5, 5), min_size=len(A[0]), max_size=len(A[0]))
    a, b, c = data.draw(vec), data.draw(vec), data.draw(vec)
    assert ab.element_equal(G, a, a)
    assert ab.element_equal(G, a, b) == ab.element_equal(G, b, a)
    if ab.element_equal(G, a, b) and ab.element_equal(G, b, c):
        assert ab.element_equal(G, a, c)
    shifted = [x + y for x, y in zip(a, A[0])]
    assert ab.element_equal(G, a, shifted)


def test_element_equal_examples():
    G = ab.FpAbelianGroup(2, [[2, 0]])
    assert ab.element_equal(G, [1, 0], [3, 0])
    assert not ab.element_equal(G, [0, 1], [0, 2])
    with pytest.raises(DimensionMismatch):
        G.coords({5: 1})


def test_hom_enumerate_examples():
    Z3 = ab.cyclic(3)
    assert len(ab.group_hom_enumerate(ab.cyclic(0), Z3)) == 3
    assert len(ab.group_hom_enumerate(ab.cyclic(2), Z3)) == 1
    assert len(ab.group_hom_enumerate(ab.from_invariants((2,), 2), Z3)) == 9
    with pytest.raises(PreconditionError):
        ab.group_hom_enumerate(Z3, ab.cyclic(0))
    with pytest.raises(BudgetExceeded):
        ab.group_hom_enumerate(ab.from_invariants((), 6), Z3, budget=10)


@given(st.lists(st.integers(0, 6), max_size=3), st.integers(0, 2), st.lists(st.integers(2, 6), min_size=1, max_size=2))
def test_hom_count_closed_form(factors, rank, target):
    G = ab.from_invariants(tuple(d for d in factors if d > 1), rank)
    H = ab.from_invariants(tuple(target))
    expected = H.order() ** G.free_rank
    for d in G.invariant_factors:
        expected *= math.prod(math.gcd(d, e) for e in H.invariant_factors)
    assert len(ab.group_hom_enumerate(G, H)) == expected


def test_hom_constraints_and_order():
    homs = ab.group_hom_enumerate(ab.cyclic(0), ab.cyclic(5), constraints=lambda im: im[0][0] % 2 == 0)
    assert [h.images for h in homs] == [((0,),), ((2,),), ((4,),)]
    assert homs[1]([3]) == (1,)


def test_quotient_group():
    Z2 = ab.FpAbelianGroup(2)
    Q = ab.quotient_group(Z2, [[1, -1]])
    assert (Q.free_rank, Q.invariant_factors) == (1, ())
    assert Q.parent is Z2
    U = ab.FpAbelianGroup(3, [[2, 0, 0]])
    Q = ab.quotient_group(U, [[0, 1, -1]])
    assert (Q.invariant_factors, Q.free_rank) == ((2,), 1)
    same = ab.quotient_group(U, [])
    assert (same.invariant_factors, same.free_rank) == (U.invariant_factors, U.free_rank)


def test_finite_group_elements():
    G = ab.from_invariants((2, 4))
    assert G.order() == 8 and len(G.elements()) == 8
    assert G.element_order((1, 1)) == 4
    assert ab.from_invariants((), 1).element_order((2,)) == 0
    with pytest.raises(PreconditionError):
        ab.from_invariants((), 1).elements()
