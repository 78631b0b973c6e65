"""Matroids on ``{0, ..., n-1}`` given by their bases.

Subsets are bitmasks.  Bases are kept as a sorted tuple plus a frozenset;
rank, closure, flats and circuits are derived lazily and cached.

Example:
    >>> M = uniform(2, 4)
    >>> len(M.bases), M.rank_of(0b0111), sorted(M.closure(0b0001))
    (6, 2, [0])
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, field
from functools import cached_property

from .errors import AxiomViolation, ParseError, PreconditionError
from .kernels import count_minor_bases, subset_ranks


def mask(elements):
    out = 0
    for e in elements:
        out |= 1 << e
    return out


def members(m):
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return out


def popcount(m):
    return bin(m).count("1")


def subsets_of_size(n, k):
    for c in itertools.combinations(range(n), k):
        yield mask(c)


class Matroid:
    """A matroid with ground set ``range(n)`` and the given bases (bitmasks)."""

    def __init__(self, n, bases, validate=True, name=None):
        self.n = int(n)
        bases = sorted(set(int(b) for b in bases))
        if not bases:
            raise AxiomViolation("a matroid needs at least one basis")
        r = popcount(bases[0])
        full = (1 << self.n) - 1
        for b in bases:
            if popcount(b) != r or b & ~full:
                raise AxiomViolation("bases must be r-subsets of the ground set", (b,))
        self.r = r
        self.bases = tuple(bases)
        self.basis_set = frozenset(bases)
        self.name = name
        self._lock = threading.Lock()
        if validate:
            self._check_exchange()

    # -- construction ------------------------------------------------------
    def _check_exchange(self):
        bset = self.basis_set
        for b1 in self.bases:
            for b2 in self.bases:
                diff1 = b1 & ~b2
                if not diff1:
                    continue
                diff2 = b2 & ~b1
                for x in members(diff1):
                    base = b1 & ~(1 << x)
                    if not any((base | (1 << y)) in bset for y in members(diff2)):
                        raise AxiomViolation(
                            f"basis exchange fails for {members(b1)}, {members(b2)} at {x}",
                            (members(b1), members(b2)),
                        )

    @property
    def rank(self):
        return self.r

    @property
    def ground(self):
        return (1 << self.n) - 1

    def __eq__(self, other):
        return isinstance(other, Matroid) and self.n == other.n and self.bases == other.bases

    def __hash__(self):
        return hash((self.n, self.bases))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Matroid{label} n={self.n} r={self.r} bases={len(self.bases)}>"

    # -- rank machinery ----------------------------------------------------
    @cached_property
    def independent_sets(self):
        out = set()
        for b in self.bases:
            sub = b
            while True:
                out.add(sub)
                if not sub:
                    break
                sub = (sub - 1) & b
        return frozenset(out)

    def is_independent(self, X):
        return X in self.independent_sets

    def rank_of(self, X):
        indep = self.independent_sets
        acc = 0
        x = X
        while x:
            low = x & -x
            if (acc | low) in indep:
                acc |= low
            x ^= low
        return popcount(acc)

    def basis_of(self, X):
        """Lexicographically least maximal independent subset of ``X``."""
        indep = self.independent_sets
        acc = 0
        x = X
        while x:
            low = x & -x
            if (acc | low) in indep:
                acc |= low
            x ^= low
        return acc

    def closure(self, X):
        """Closure as a sorted list of elements."""
        return members(self.closure_mask(X))

    def closure_mask(self, X):
        rk = self.rank_of(X)
        out = X
        for e in range(self.n):
            bit = 1 << e
            if not X & bit and self.rank_of(X | bit) == rk:
                out |= bit
        return out

    @cached_property
    def loops(self):
        return self.closure_mask(0)

    @cached_property
    def flats_by_rank(self):
        """Tuple indexed by rank of sorted tuples of flats."""
        levels = [{self.closure_mask(0)}]
        for _ in range(self.r):
            nxt = set()
            for F in levels[-1]:
                rest = self.ground & ~F
                seen = 0
                for e in members(rest):
                    if seen >> e & 1:
                        continue
                    G = self.closure_mask(F | (1 << e))
                    seen |= G
                    nxt.add(G)
            levels.append(nxt)
        return tuple(tuple(sorted(level)) for level in levels)

    @cached_property
    def flats(self):
        return frozenset(F for level in self.flats_by_rank for F in level)

    def hyperplanes(self):
        if self.r == 0:
            return []
        return list(self.flats_by_rank[self.r - 1])

    @cached_property
    def circuits(self):
        out = []
        indep = self.independent_sets
        for k in range(1, self.r + 2):
            for S in subsets_of_size(self.n, k):
                if S in indep:
                    continue
                if all((S & ~(1 << e)) in indep for e in members(S)):
                    out.append(S)
        return tuple(out)

    # -- derived matroids --------------------------------------------------
    def dual(self):
        full = self.ground
        return Matroid(self.n, [full & ~b for b in self.bases], validate=False)

    def restrict(self, keep):
        """Matroid on the elements of ``keep`` (re-indexed in order)."""
        keep = keep if isinstance(keep, int) else mask(keep)
        k = self.rank_of(keep)
        local = {e: i for i, e in enumerate(members(keep))}
        bases = {mask(local[e] for e in members(b & keep)) for b in self.bases if popcount(b & keep) == k}
        return Matroid(len(local), bases, validate=False)

    def minor(self, contract=0, delete=0, check=True):
        """Embedded minor ``M / contract \\ delete`` (bitmasks or iterables)."""
        C = contract if isinstance(contract, int) else mask(contract)
        D = delete if isinstance(delete, int) else mask(delete)
        if check:
            if C & D:
                raise PreconditionError("contract and delete sets must be disjoint")
            if not self.is_independent(C):
                raise PreconditionError("contract set must be independent")
            if self.rank_of(self.ground & ~D) != self.r:
                raise PreconditionError("delete set must be coindependent")
        keep = members(self.ground & ~C & ~D)
        local = {e: i for i, e in enumerate(keep)}
        bases = []
        for b in self.bases:
            if b & C == C and not b & D:
                rest = b & ~C
                bases.append(sum(1 << local[e] for e in members(rest)))
        return EmbeddedMinor(C, D, Matroid(len(keep), bases, validate=False), tuple(keep))

    def delete(self, D):
        """``M \\ D`` for any subset ``D`` (re-indexed)."""
        D = D if isinstance(D, int) else mask(D)
        return self.restrict(self.ground & ~D)

    def contract(self, C):
        """``M / C`` for any subset ``C`` (re-indexed)."""
        C = C if isinstance(C, int) else mask(C)
        return self.dual().delete(C).dual()

    def relabel(self, perm):
        """Image under the bijection ``e -> perm[e]``."""
        return Matroid(self.n, [mask(perm[e] for e in members(b)) for b in self.bases], validate=False)

    def to_json(self, kind="bases"):
        if kind == "bases":
            sets = [members(b) for b in self.bases]
        elif kind == "nonbases":
            sets = [members(s) for s in subsets_of_size(self.n, self.r) if s not in self.basis_set]
        elif kind == "circuits":
            sets = [members(c) for c in self.circuits]
        else:
            raise PreconditionError(f"unknown representation {kind!r}")
        return {"format": "matroid/v1", "n": self.n, "rank": self.r, kind: sets}

    def canonical_text(self):
        """``r n / b1 b2 ...`` with bases as digit strings (n <= 10)."""
        if self.n > 10:
            raise PreconditionError("canonical text form needs n <= 10")
        return f"{self.r} {self.n} / " + " ".join("".join(str(e) for e in members(b)) for b in self.bases)


@dataclass(frozen=True)
class EmbeddedMinor:
    """``M / contract \\ delete`` with ``labels[i]`` the original element of
    local element ``i``."""

    contract: int
    delete: int
    matroid: Matroid
    labels: tuple

    @property
    def minor(self):
        return self.matroid


# ---------------------------------------------------------------------------
# constructors


def from_bases(n, r, sets, validate=True):
    M = Matroid(n, [mask(s) for s in sets], validate)
    if M.r != r:
        raise AxiomViolation(f"bases have size {M.r}, expected rank {r}")
    return M


def from_nonbases(n, r, sets, validate=True):
    bad = {mask(s) for s in sets}
    for s in bad:
        if popcount(s) != r:
            raise AxiomViolation("nonbases must be r-subsets", (members(s),))
    return Matroid(n, [b for b in subsets_of_size(n, r) if b not in bad], validate)


def from_circuits(n, r, sets, validate=True):
    """Bases are the ``r``-sets containing no listed circuit; the circuits of
    the result must be exactly the listed ones (when ``validate``)."""
    circ = [mask(s) for s in sets]
    bases = [b for b in subsets_of_size(n, r) if not any(c & b == c for c in circ)]
    M = Matroid(n, bases, validate)
    if validate:
        got = set(M.circuits)
        for c in circ:
            if c not in got:
                raise AxiomViolation("listed set is not a circuit of the generated matroid", (members(c),))
    return M


def from_json(obj):
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "n" not in obj or "rank" not in obj:
        raise ParseError("matroid/v1 document needs 'n' and 'rank'")
    if obj.get("format", "matroid/v1") != "matroid/v1":
        raise ParseError(f"unsupported format {obj.get('format')!r}")
    kinds = [k for k in ("bases", "circuits", "nonbases") if k in obj]
    if len(kinds) != 1:
        raise ParseError("exactly one of bases, circuits, nonbases is required")
    build = {"bases": from_bases, "circuits": from_circuits, "nonbases": from_nonbases}[kinds[0]]
    try:
        return build(int(obj["n"]), int(obj["rank"]), [list(map(int, s)) for s in obj[kinds[0]]])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed set list: {exc}") from exc


def parse_canonical_text(text):
    head, _, body = text.partition("/")
    r, n = map(int, head.split())
    return from_bases(n, r, [[int(c) for c in word] for word in body.split()])


def uniform(r, n):
    return Matroid(n, list(subsets_of_size(n, r)), validate=False, name=f"U({r},{n})")


def direct_sum(M, N):
    shift = M.n
    return Matroid(M.n + N.n, [b | (c << shift) for b in M.bases for c in N.bases], validate=False)


def simplify(M):
    """Delete loops and all but the least element of each parallel class."""
    keep = 0
    covered = M.loops
    for e in range(M.n):
        bit = 1 << e
        if covered & bit:
            continue
        keep |= bit
        covered |= M.closure_mask(bit)
    return M.restrict(keep)


def parallel_extension(M, e):
    """Add a new element ``n`` parallel to ``e``."""
    new = 1 << M.n
    bases = list(M.bases) + [(b & ~(1 << e)) | new for b in M.bases if b >> e & 1]
    return Matroid(M.n + 1, bases, validate=False)


def series_extension(M, e):
    """Add a new element ``n`` in series with ``e``."""
    return parallel_extension(M.dual(), e).dual()


# ---------------------------------------------------------------------------
# connectivity


def _lambda_table(M):
    full = M.ground
    rk = subset_ranks(M.n, M.independent_sets)
    return [rk[X] + rk[full & ~X] - M.r for X in range(1 << M.n)], rk


def components(M):
    """Connected components as bitmasks, ordered by least element.

    Two elements share a component iff they lie on a common fundamental
    circuit with respect to one fixed basis.
    """
    parent = list(range(M.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    if M.n:
        B = min(M.bases)
        bset = M.basis_set
        for e in range(M.n):
            if B >> e & 1:
                continue
            for b in members(B):
                if (B & ~(1 << b)) | 1 << e in bset:
                    parent[find(b)] = find(e)
    comps = {}
    for e in range(M.n):
        comps[find(e)] = comps.get(find(e), 0) | 1 << e
    return sorted(comps.values(), key=lambda c: c & -c)


def is_2_connected(M):
    return len(components(M)) <= 1


def is_3_connected(M):
    """No 1- or 2-separation, and simple and cosimple.

    The last condition only matters below four elements, where it excludes
    parallel and series pairs such as ``U(1,2)``.
    """
    if not is_2_connected(M):
        return False
    lam, rk = _lambda_table(M)
    full = M.ground
    for X in range(1, full):
        if popcount(X) >= 2 and popcount(full & ~X) >= 2 and lam[X] < 2:
            return False
    return is_simple(M) and is_simple(M.dual())


def is_simple(M):
    return all(popcount(c) > 2 for c in M.circuits)


def connectivity(M):
    return {"is_2_connected": is_2_connected(M), "is_3_connected": is_3_connected(M)}


# ---------------------------------------------------------------------------
# isomorphism and minors


def _invariants(M):
    deg = [0] * M.n
    for b in M.bases:
        for e in members(b):
            deg[e] += 1
    circ = [[0] * (M.r + 2) for _ in range(M.n)]
    for c in M.circuits:
        k = popcount(c)
        for e in members(c):
            circ[e][k] += 1
    return [(deg[e], tuple(circ[e])) for e in range(M.n)]


def is_isomorphic(M, N):
    """A bijection ``phi`` (list) with ``N = M.relabel(phi)``, or ``None``."""
    if M.n != N.n or M.r != N.r or len(M.bases) != len(N.bases) or len(M.circuits) != len(N.circuits):
        return None
    im, iN = _invariants(M), _invariants(N)
    if sorted(im) != sorted(iN):
        return None
    order = sorted(range(M.n), key=lambda e: (sum(1 for x in im if x == im[e]), e))
    circ_by_last = {}
    pos = {e: i for i, e in enumerate(order)}
    for c in M.circuits:
        last = max(members(c), key=lambda e: pos[e])
        circ_by_last.setdefault(last, []).append(c)
    ncirc = frozenset(N.circuits)
    phi = [None] * M.n
    used = [False] * N.n

    def rec(i):
        if i == M.n:
            return True
        e = order[i]
        for f in range(N.n):
            if used[f] or iN[f] != im[e]:
                continue
            phi[e] = f
            used[f] = True
            ok = all(mask(phi[x] for x in members(c)) in ncirc for c in circ_by_last.get(e, ()))
            if ok and rec(i + 1):
                return True
            used[f] = False
            phi[e] = None
        return False

    return list(phi) if rec(0) else None


def minors_of_shape(M, size, rank):
    """All embedded minors with ``size`` elements and rank ``rank``."""
    k = M.r - rank
    d = M.n - size - k
    if k < 0 or d < 0:
        return
    for C in subsets_of_size(M.n, k):
        if not M.is_independent(C):
            continue
        rest = members(M.ground & ~C)
        for Dt in itertools.combinations(rest, d):
            D = mask(Dt)
            if M.rank_of(M.ground & ~D) == M.r:
                yield C, D


def has_minor(M, N):
    """Whether ``N`` is isomorphic to a minor of ``M``.

    A connected ``N`` is searched for inside each component of ``M``.
    """
    if N.n > 1 and is_2_connected(N):
        comps = components(M)
        if len(comps) > 1:
            return any(popcount(c) >= N.n and has_minor(M.restrict(c), N) for c in comps)
    nb = len(N.bases)
    for C, D in minors_of_shape(M, N.n, N.r):
        if count_minor_bases(M.bases, C, D) != nb:
            continue
        if is_isomorphic(M.minor(C, D, check=False).matroid, N) is not None:
            return True
    return False


# ---------------------------------------------------------------------------
# lattice of flats


@dataclass(frozen=True)
class UpperSublattice:
    """Sublattice generated by ``atoms`` (flats covering ``bottom``)."""

    bottom: int
    atoms: tuple
    type_tag: str
    flats: frozenset = field(default=frozenset(), compare=False, repr=False)

    def contains(self, other):
        """Whether ``other`` is a sublattice of this one."""
        return other.bottom in self.flats and all(a in self.flats for a in other.atoms)


@dataclass(frozen=True)
class FlatLattice:
    flats_by_rank: tuple
    covers: tuple  # (lower, upper) pairs

    @property
    def top(self):
        return self.flats_by_rank[-1][0]

    @property
    def bottom(self):
        return self.flats_by_rank[0][0]


def flat_lattice(M):
    with M._lock:
        levels = M.flats_by_rank
    covers = []
    for k in range(len(levels) - 1):
        for F in levels[k]:
            for G in levels[k + 1]:
                if G & F == F:
                    covers.append((F, G))
    return FlatLattice(levels, tuple(covers))


def sublattice_minor(M, bottom, atoms, largest=False):
    """Embedded minor realising the sublattice: contract a basis of
    ``bottom``, keep one element from each atom outside ``bottom`` (the least,
    or the largest when ``largest``), delete the rest."""
    if largest:
        I = 0
        for e in reversed(members(bottom)):
            if M.is_independent(I | (1 << e)):
                I |= 1 << e
    else:
        I = M.basis_of(bottom)
    keep = 0
    for A in atoms:
        choice = members(A & ~bottom)
        keep |= 1 << (choice[-1] if largest else choice[0])
    D = M.ground & ~I & ~keep
    return M.minor(I, D, check=False)


def join(M, flats):
    acc = 0
    for F in flats:
        acc |= F
    return M.closure_mask(acc)


def sublattice_flats(M, bottom, atoms):
    """All flats of the sublattice generated by ``atoms`` above ``bottom``."""
    out = set()
    for k in range(len(atoms) + 1):
        for S in itertools.combinations(atoms, k):
            out.add(join(M, (bottom,) + S))
    return out


TYPE_ATOMS = {"U24": (2, 4), "U25": (2, 5), "U35": (3, 5), "C5": (3, 5), "F7": (3, 7),
              "F7dual": (4, 7), "W3": (3, 6), "Q6": (3, 6), "P6": (3, 6)}


def upper_sublattices(M, type_tag, full_only=False):
    """Upper sublattices of the flat lattice of ``M`` whose lattice is that of
    the simple matroid named ``type_tag``.

    Type detection compares the simple minor realising the sublattice with
    the template matroid by matroid isomorphism.
    """
    from .matroid_catalog import named_matroid

    if type_tag not in TYPE_ATOMS:
        raise PreconditionError(f"unsupported sublattice type {type_tag!r}")
    rank, natoms = TYPE_ATOMS[type_tag]
    template = named_matroid(type_tag)
    levels = M.flats_by_rank
    if rank > M.r:
        return []
    out = []
    for F in levels[M.r - rank]:
        cover = [G for G in levels[M.r - rank + 1] if G & F == F]
        if len(cover) < natoms:
            continue
        for S in itertools.combinations(cover, natoms):
            if join(M, S) != M.ground:
                continue
            N = sublattice_minor(M, F, S).matroid
            if len(N.bases) != len(template.bases):
                continue
            if is_isomorphic(N, template) is not None:
                out.append(_make_sublattice(M, F, S, type_tag))
    return out


def _make_sublattice(M, bottom, atoms, tag):
    return UpperSublattice(bottom, tuple(atoms), tag, frozenset(sublattice_flats(M, bottom, atoms)))


def full_upper_sublattice(M, bottom):
    levels = M.flats_by_rank
    k = M.rank_of(bottom)
    atoms = tuple(G for G in levels[k + 1] if G & bottom == bottom) if k < M.r else ()
    return _make_sublattice(M, bottom, atoms, "full")
