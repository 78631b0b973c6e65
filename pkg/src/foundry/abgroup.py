"""Finitely generated abelian groups given by generators and integer relations.

Groups are written additively.  An element is an exponent vector over the
generators; internally vectors are kept sparse as sorted tuples of
``(index, coefficient)`` pairs so that presentations with thousands of
generators stay cheap.  Every group is reduced once, on construction, to
canonical coordinates ``Z/d_1 x ... x Z/d_k x Z^f`` with ``d_1 | ... | d_k``
and ``d_1 > 1``.

Example:
    >>> G = FpAbelianGroup(2, [[2, 0]])
    >>> G.invariant_factors, G.free_rank
    ((2,), 1)
    >>> G.equal([1, 0], [3, 0])
    True
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import Counter
from .errors import DimensionMismatch, PreconditionError

# ---------------------------------------------------------------------------
# sparse vectors


def sparse(vec, n=None):
    """Convert a dense sequence or a ``{index: coef}`` mapping to sparse form."""
    if isinstance(vec, tuple) and (not vec or isinstance(vec[0], tuple)):
        if n is not None and vec and vec[-1][0] >= n:
            raise DimensionMismatch(f"index {vec[-1][0]} out of range for {n} generators")
        return vec
    if isinstance(vec, dict):
        items = sorted((int(k), int(v)) for k, v in vec.items() if v)
        if n is not None and items and (items[0][0] < 0 or items[-1][0] >= n):
            raise DimensionMismatch(f"index out of range for {n} generators")
        return tuple(items)
    vec = list(vec)
    if n is not None and len(vec) != n:
        raise DimensionMismatch(f"vector of length {len(vec)} for {n} generators")
    return tuple((i, int(v)) for i, v in enumerate(vec) if v)


def dense(vec, n):
    out = [0] * n
    for i, v in vec:
        out[i] = v
    return out


def combine(terms):
    """Sum of ``coef * vector`` over ``(coef, vector)`` pairs, in sparse form."""
    acc = {}
    for coef, vec in terms:
        if not coef:
            continue
        for i, v in vec:
            acc[i] = acc.get(i, 0) + coef * v
    return tuple(sorted((i, v) for i, v in acc.items() if v))


def add(a, b):
    return combine(((1, a), (1, b)))


def sub(a, b):
    return combine(((1, a), (-1, b)))


def scale(a, k):
    if not k:
        return ()
    return tuple((i, k * v) for i, v in a)


def unit(i):
    return ((i, 1),)


# ---------------------------------------------------------------------------
# Smith normal form


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _snf(D, U=None, V=None, Vinv=None):
    """Reduce ``D`` in place to Smith form, recording row ops in ``U`` and
    column ops in ``V`` (and their inverse in ``Vinv``).  Returns the rank."""
    m = len(D)
    n = len(D[0]) if m else 0

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            if U is not None:
                U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in D:
                row[i], row[j] = row[j], row[i]
            if V is not None:
                for row in V:
                    row[i], row[j] = row[j], row[i]
            if Vinv is not None:
                Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_axpy(dst, src, q):  # row dst -= q * row src
        rd, rs = D[dst], D[src]
        for k in range(n):
            if rs[k]:
                rd[k] -= q * rs[k]
        if U is not None:
            ud, us = U[dst], U[src]
            for k in range(m):
                if us[k]:
                    ud[k] -= q * us[k]

    def col_axpy(dst, src, q):  # col dst -= q * col src
        for row in D:
            if row[src]:
                row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]
        if Vinv is not None:
            vs, vd = Vinv[src], Vinv[dst]
            for k in range(len(vs)):
                if vd[k]:
                    vs[k] += q * vd[k]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    row_axpy(i, t, D[i][t] // p)
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    col_axpy(j, t, D[t][j] // p)
                    if D[t][j]:
                        clean = False
            if not clean:
                best = None
                for i in range(t + 1, m):
                    v = D[i][t]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, None)
                for j in range(t + 1, n):
                    v = D[t][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), None, j)
                if best[0] < abs(p):
                    if best[1] is not None:
                        swap_rows(t, best[1])
                    else:
                        swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_axpy(t, bad, -1)
        if D[t][t] < 0:
            D[t] = [-v for v in D[t]]
            if U is not None:
                U[t] = [-v for v in U[t]]
        t += 1
    return t


def smith_normal_form(A):
    """Return ``(U, D, V)`` with ``U*A*V == D``, ``U`` and ``V`` unimodular and
    ``D`` diagonal with ``d_1 | d_2 | ...`` (nonnegative entries).

    Pivots are the smallest nonzero absolute value, ties broken by lowest
    row then column index.

    >>> smith_normal_form([[2, 0], [0, 3]])[1]
    [[1, 0], [0, 6]]
    """
    D = [[int(v) for v in row] for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    if any(len(row) != n for row in D):
        raise DimensionMismatch("matrix is not rectangular")
    U = _identity(m)
    V = _identity(n)
    _snf(D, U, V)
    return U, D, V


def matmul(A, B):
    """Exact integer matrix product."""
    cols = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def determinant(A):
    """Exact determinant by fraction-free Bareiss elimination."""
    M = [list(row) for row in A]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1] if n else 1


# ---------------------------------------------------------------------------
# sparse unit elimination


def _eliminate_units(num_generators, relations):
    """Remove generators that some relation expresses through the others.

    Returns ``(steps, rows, survivors)``: ``steps`` is the list of
    ``(generator, substitution)`` in elimination order, ``rows`` the leftover
    relations (no unit coefficients) and ``survivors`` the generators never
    eliminated.
    """
    rows = {}
    col_rows = {}
    order = sorted(range(len(relations)), key=lambda r: (len(relations[r]), r))
    for rid in order:
        row = dict(relations[rid])
        if row:
            rows[rid] = row
            for c in row:
                col_rows.setdefault(c, set()).add(rid)
    steps = []
    changed = True
    while changed:
        changed = False
        for rid in sorted(rows, key=lambda r: (len(rows[r]), r)):
            row = rows.get(rid)
            if row is None:
                continue
            pivot = None
            for c, v in row.items():
                if v == 1 or v == -1:
                    key = (len(col_rows[c]), c)
                    if pivot is None or key < pivot[0]:
                        pivot = (key, c)
            if pivot is None:
                continue
            c = pivot[1]
            s = row[c]
            del rows[rid]
            for k in row:
                col_rows[k].discard(rid)
            steps.append((c, tuple(sorted((k, -s * v) for k, v in row.items() if k != c))))
            for other in sorted(col_rows[c]):
                orow = rows[other]
                q = orow[c] * s
                for k, v in row.items():
                    nv = orow.get(k, 0) - q * v
                    if nv:
                        if k not in orow:
                            col_rows.setdefault(k, set()).add(other)
                        orow[k] = nv
                    elif k in orow:
                        del orow[k]
                        col_rows[k].discard(other)
                if not orow:
                    del rows[other]
            col_rows[c] = set()
            changed = True
    eliminated = {c for c, _ in steps}
    survivors = [g for g in range(num_generators) if g not in eliminated]
    leftover = []
    seen = set()
    for rid in sorted(rows):
        key = tuple(sorted(rows[rid].items()))
        if key and key not in seen:
            seen.add(key)
            leftover.append(key)
    return steps, leftover, survivors


# ---------------------------------------------------------------------------
# groups


class FpAbelianGroup:
    """Abelian group with ``num_generators`` generators and integer relations.

    ``relations`` is a sequence of rows, each a dense exponent vector or a
    ``{index: coefficient}`` mapping.  The canonical form is computed on
    construction: ``invariant_factors`` (all > 1, each dividing the next),
    ``free_rank``, and a projection sending every generator to canonical
    coordinates.  Torsion coordinates are reduced to ``0 <= x < d``.
    """

    def __init__(self, num_generators, relations=()):
        self.num_generators = int(num_generators)
        rels = []
        for row in relations:
            s = sparse(row, self.num_generators)
            if s:
                rels.append(s)
        self.relations = tuple(rels)
        self._reduce()

    # -- construction ------------------------------------------------------
    def _reduce(self):
        n = self.num_generators
        steps, leftover, survivors = _eliminate_units(n, self.relations)
        pos = {g: i for i, g in enumerate(survivors)}
        s = len(survivors)
        D = [dense([(pos[c], v) for c, v in row], s) for row in leftover]
        V = _identity(s)
        Vinv = _identity(s)
        rank = _snf(D, None, V, Vinv) if D and s else 0
        diag = [D[i][i] for i in range(rank)]
        keep = [i for i in range(rank) if diag[i] != 1] + list(range(rank, s))
        self.moduli = tuple([diag[i] for i in range(rank) if diag[i] != 1] + [0] * (s - rank))
        self.invariant_factors = tuple(d for d in self.moduli if d)
        self.free_rank = s - rank
        proj = [None] * n
        for g in survivors:
            row = V[pos[g]]
            proj[g] = self.reduce([row[i] for i in keep])
        for c, subst in reversed(steps):
            acc = [0] * len(keep)
            for k, v in subst:
                pk = proj[k]
                for i in range(len(acc)):
                    acc[i] += v * pk[i]
            proj[c] = self.reduce(acc)
        self.projection = tuple(proj)
        self.inclusion = tuple(
            tuple((survivors[j], Vinv[i][j]) for j in range(s) if Vinv[i][j]) for i in keep
        )

    # -- coordinates -------------------------------------------------------
    @property
    def dimension(self):
        """Number of canonical coordinates."""
        return len(self.moduli)

    def is_finite(self):
        return self.free_rank == 0

    def order(self):
        """Group order, or ``None`` when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def reduce(self, coords):
        return tuple(c % d if d else c for c, d in zip(coords, self.moduli))

    def coords(self, vec):
        """Canonical coordinates of an element (dense, sparse or mapping)."""
        vec = sparse(vec, self.num_generators)
        acc = [0] * len(self.moduli)
        proj = self.projection
        for i, v in vec:
            p = proj[i]
            for j in range(len(acc)):
                if p[j]:
                    acc[j] += v * p[j]
        return self.reduce(acc)

    def lift(self, coords):
        """A sparse exponent vector with the given canonical coordinates."""
        return combine(zip(coords, self.inclusion))

    def add(self, x, y):
        return self.reduce([a + b for a, b in zip(x, y)])

    def sub(self, x, y):
        return self.reduce([a - b for a, b in zip(x, y)])

    def neg(self, x):
        return self.reduce([-a for a in x])

    def mul(self, x, k):
        return self.reduce([k * a for a in x])

    def zero(self):
        return (0,) * len(self.moduli)

    def element_order(self, x):
        """Order of an element given in canonical coordinates (``0`` if infinite)."""
        out = 1
        for c, d in zip(x, self.moduli):
            if not d:
                if c:
                    return 0
                continue
            if c:
                from math import gcd

                k = d // gcd(c, d)
                out = out * k // gcd(out, k)
        return out

    def elements(self):
        """All elements in canonical coordinates (finite groups only)."""
        if self.free_rank:
            raise PreconditionError("group is infinite")
        return list(itertools.product(*[range(d) for d in self.moduli]))

    # -- predicates --------------------------------------------------------
    def equal(self, a, b):
        return self.coords(a) == self.coords(b)

    def is_identity(self, a):
        return not any(self.coords(a))

    def __repr__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return f"FpAbelianGroup({' x '.join(parts) or '0'})"


def canonicalize(G):
    """Return ``G`` with its canonical form populated (construction already does this)."""
    if not isinstance(G, FpAbelianGroup):
        num, rels = G
        return FpAbelianGroup(num, rels)
    return G


def element_equal(G, a, b):
    """True iff ``a - b`` lies in the relation lattice of ``G``."""
    return G.equal(a, b)


def quotient_group(G, extra_relations):
    """``G`` modulo extra relations; generators are shared, so the natural
    surjection is the identity on generator labels."""
    Q = FpAbelianGroup(G.num_generators, list(G.relations) + [sparse(r, G.num_generators) for r in extra_relations])
    Q.parent = G
    return Q


def cyclic(d):
    """The group ``Z/d`` (``d = 0`` gives ``Z``)."""
    return FpAbelianGroup(1, [[d]] if d else [])


def from_invariants(invariant_factors=(), free_rank=0):
    k = len(invariant_factors)
    rels = [{i: d} for i, d in enumerate(invariant_factors)]
    return FpAbelianGroup(k + free_rank, rels)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by images of the canonical generators of ``source``."""

    source: FpAbelianGroup
    target: FpAbelianGroup
    images: tuple

    def __call__(self, vec):
        x = self.source.coords(vec)
        acc = [0] * self.target.dimension
        for c, img in zip(x, self.images):
            for j, v in enumerate(img):
                acc[j] += c * v
        return self.target.reduce(acc)


def group_hom_enumerate(G, H, constraints=None, budget=None):
    """All homomorphisms ``G -> H`` (``H`` finite) satisfying ``constraints``.

    Backtracks over the canonical generators of ``G``; the image of a
    generator of order ``d`` must be killed by ``d``.  ``constraints``, if
    given, is called with the partial list of images after every assignment
    and may return False to prune.  Output is in lexicographic order of the
    image tuples.
    """
    if not H.is_finite():
        raise PreconditionError("target group must be finite")
    counter = Counter(budget, "group_hom_enumerate")
    elements = H.elements()
    choices = []
    for d in G.moduli:
        if d:
            choices.append([h for h in elements if not any(H.mul(h, d))])
        else:
            choices.append(elements)
    out = []
    images = []

    def rec(i):
        counter.tick()
        if i == len(choices):
            out.append(GroupHom(G, H, tuple(images)))
            return
        for h in choices[i]:
            images.append(h)
            if constraints is None or constraints(images):
                rec(i + 1)
            images.pop()

    rec(0)
    return out
