"""Representability over pastures with finite unit groups.

``rescaling_classes`` enumerates weak Grassmann-Plücker functions by brute
force and counts orbits under rescaling; it is an oracle for
``|Hom(F_M, P)|`` that never looks at the foundation.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .config import Counter
from .errors import DimensionMismatch, PreconditionError
from .matroid import Matroid, mask, members
from .pasture import Element, Pasture
from .search import hom_enumerate, hom_exists

# ---------------------------------------------------------------------------
# Plücker relations


def _parity_in(J, x, y):
    """Parity of the permutation sorting ``J x y`` (``J`` sorted, ``x < y``)."""
    return (sum(1 for j in J if j > x) + sum(1 for j in J if j > y)) & 1


def plucker_relations(M):
    """Three-term relations as lists of ``(basis a, basis b, sign parity)`` or
    ``None`` for a vanishing term; relations with no surviving term are
    dropped."""
    bset = M.basis_set
    out = []
    if M.r < 2:
        return out
    for J in itertools.combinations(range(M.n), M.r - 2):
        Jm = mask(J)
        if not M.is_independent(Jm):
            continue
        rest = [e for e in range(M.n) if not Jm >> e & 1]
        for e1, e2, e3, e4 in itertools.combinations(rest, 4):
            rel = []
            for (x, y), (z, w), sign in (((e1, e2), (e3, e4), 0), ((e1, e3), (e2, e4), 1), ((e1, e4), (e2, e3), 0)):
                a, b = Jm | 1 << x | 1 << y, Jm | 1 << z | 1 << w
                if a in bset and b in bset:
                    rel.append((a, b, sign ^ _parity_in(J, x, y) ^ _parity_in(J, z, w)))
                else:
                    rel.append(None)
            if any(rel):
                out.append(tuple(rel))
    return out


def _relation_holds(P, rel, values):
    g = P.group
    coords = []
    for term in rel:
        if term is None:
            coords.append(None)
            continue
        a, b, s = term
        c = g.add(values[a], values[b])
        coords.append(g.add(c, P.eps) if s else c)
    return P.is_null_coords(*coords)


# ---------------------------------------------------------------------------
# GP functions


class GPFunction:
    """A candidate weak representation: a value for every ``r``-subset
    (missing subsets are 0), extended to ordered tuples by the alternating
    sign rule."""

    def __init__(self, matroid, target, values):
        self.matroid = matroid
        self.target = target
        self.values = {}
        for key, val in values.items():
            S = key if isinstance(key, int) else mask(key)
            if bin(S).count("1") != matroid.r or (not isinstance(key, int) and len(set(key)) != matroid.r):
                raise DimensionMismatch(f"value on a set of the wrong size: {members(S)}")
            el = target.element(val) if not isinstance(val, Element) else val
            if not el.is_zero():
                self.values[S] = target.group.coords(el.vec)

    def __call__(self, *elements):
        if len(elements) == 1 and not isinstance(elements[0], int):
            elements = tuple(elements[0])
        if len(set(elements)) != len(elements):
            return self.target.zero
        S = mask(elements)
        if S not in self.values:
            return self.target.zero
        inv = sum(1 for i, j in itertools.combinations(elements, 2) if i > j)
        val = self.target.element_from_coords(self.values[S])
        return -val if inv & 1 else val

    @classmethod
    def from_coords(cls, matroid, target, coords):
        f = cls.__new__(cls)
        f.matroid, f.target, f.values = matroid, target, dict(coords)
        return f


def verify_gp(f):
    """Support equal to the bases and every three-term Plücker relation null."""
    M, P = f.matroid, f.target
    if set(f.values) != M.basis_set:
        return False
    return all(_relation_holds(P, rel, f.values) for rel in plucker_relations(M))


# ---------------------------------------------------------------------------
# rescaling classes


@dataclass(frozen=True)
class RescalingClassCount:
    matroid: Matroid
    target: Pasture
    count: int
    valid: int  # number of GP functions
    orbit_size: int


def _finite_units(P):
    if not P.group.is_finite():
        raise PreconditionError("target unit group must be finite")
    return sorted(P.group.elements())


def gp_functions(M, P, budget=None):
    """All GP functions of ``M`` with values in ``P`` as tuples of coordinates
    indexed like ``sorted(M.bases)``."""
    units = _finite_units(P)
    bases = sorted(M.bases)
    pos = {b: i for i, b in enumerate(bases)}
    by_level = {}
    for rel in plucker_relations(M):
        level = max(pos[x] for t in rel if t for x in t[:2])
        by_level.setdefault(level, []).append(rel)
    counter = Counter(budget, "GP enumeration")
    values = {}
    out = []

    def rec(i):
        counter.tick()
        if i == len(bases):
            out.append(tuple(values[b] for b in bases))
            return
        b = bases[i]
        for u in units:
            values[b] = u
            if all(_relation_holds(P, rel, values) for rel in by_level.get(i, ())):
                rec(i + 1)
        del values[b]

    rec(0)
    return bases, out


def rescaling_group(M, P):
    """The image of ``(P^×)^{n+1}`` acting on value tuples (as shifts)."""
    g = P.group
    units = _finite_units(P)
    bases = sorted(M.bases)
    gens = [[True] * len(bases)] + [[bool(b >> e & 1) for b in bases] for e in range(M.n)]
    zero = g.zero()
    H = {tuple(zero for _ in bases)}
    for gen in gens:
        H = {
            tuple(g.add(h[j], u) if gen[j] else h[j] for j in range(len(bases)))
            for h in H
            for u in units
        }
    return sorted(H)


def _shift(g, x, h):
    return tuple(g.add(a, b) for a, b in zip(x, h))


def rescaling_classes(M, P, budget=None):
    """Number of rescaling classes of GP functions of ``M`` over ``P``.

    Orbits are swept: each unseen GP function starts a class and its whole
    orbit is marked seen.  The count is checked against ``valid / |orbit|``
    (the action is free).
    """
    bases, valid = gp_functions(M, P, budget)
    H = rescaling_group(M, P)
    g = P.group
    seen, count = set(), 0
    for x in valid:
        if x in seen:
            continue
        count += 1
        for h in H:
            seen.add(_shift(g, x, h))
    if count * len(H) != len(valid):
        raise AssertionError("rescaling action is not free on GP functions")
    return RescalingClassCount(M, P, count, len(valid), len(H))


def rescaling_classes_naive(M, P, budget=None):
    """Orbit count by union-find over the generators of the action."""
    bases, valid = gp_functions(M, P, budget)
    g = P.group
    units = _finite_units(P)
    index = {x: i for i, x in enumerate(valid)}
    parent = list(range(len(valid)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    gens = [[True] * len(bases)] + [[bool(b >> e & 1) for b in bases] for e in range(M.n)]
    for x, i in index.items():
        for gen in gens:
            for u in units:
                y = tuple(g.add(v, u) if gen[j] else v for j, v in enumerate(x))
                a, b = find(i), find(index[y])
                if a != b:
                    parent[a] = b
    return len({find(i) for i in range(len(valid))})


# ---------------------------------------------------------------------------
# predicates and tables


def is_representable(M, P, budget=None):
    """Whether ``M`` is ``P``-representable: a morphism ``F_M -> P`` exists."""
    from .foundation import grs_presentation

    F = grs_presentation(M).pasture
    if P.group.is_finite():
        return hom_exists(F, P, budget)
    return bool(hom_enumerate(F, P, budget))


DEFAULT_TARGETS = ("F2", "F3", "F4", "F5", "F7", "F8", "F9", "S")


def representability_row(P, targets=DEFAULT_TARGETS, budget=None):
    """Existence of a morphism ``P -> T`` for each target, in order."""
    from .catalog import named

    out = []
    for t in targets:
        T = named(t) if isinstance(t, str) else t
        out.append(hom_exists(P, T, budget))
    return tuple(out)


def morphism_table(rows, targets=DEFAULT_TARGETS, budget=None):
    """``{row name: {target name: 0/1}}`` for named pastures."""
    from .catalog import named

    return {
        r: dict(zip(targets, (int(b) for b in representability_row(named(r), targets, budget))))
        for r in rows
    }


def table_tsv(table):
    rows = list(table)
    cols = list(table[rows[0]]) if rows else []
    lines = ["\t".join(["pasture"] + cols)]
    lines += ["\t".join([r] + [str(table[r][c]) for c in cols]) for r in rows]
    return "\n".join(lines) + "\n"


def table_json(table):
    return json.dumps({"rows": list(table), "table": table}, sort_keys=False, indent=1)
