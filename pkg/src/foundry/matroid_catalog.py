"""Named matroids.

Elements are 0-indexed: the element written ``i`` in the usual 1-indexed
figures is element ``i - 1`` here.  Rank-3 matroids are listed by their
nontrivial lines (3-element nonbases), ``T8`` by its 4-element circuits.

``C5`` is read as the rank-3 matroid on five elements whose only nonbasis
is ``{1,2,3}`` (1-indexed); this is a reading of its lattice of flats.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache

from .errors import PreconditionError
from .matroid import (
    Matroid,
    direct_sum,
    from_circuits,
    from_nonbases,
    mask,
    series_extension,
    uniform,
)


def _one_indexed(words):
    return [[int(c) - 1 for c in w] for w in words.split()]


_LINES = {
    "F7": "124 235 346 457 561 672 713",
    "F7minus": "123 156 345 147 257 367",
    "P7": "135 174 376 572 462",
    "Q6": "145 123",
    "P6": "123",
    "W3": "123 345 561",
    "C5": "123",
    "AG23_minus_e": "123 146 178 247 258 345 368 567",
}

_SIZES = {"F7": 7, "F7minus": 7, "P7": 7, "Q6": 6, "P6": 6, "W3": 6, "C5": 5, "AG23_minus_e": 8}

T8_CIRCUITS = "1238 1247 1346 2345 1256 1357 1458 2367 2468 3478 5678"


def _wheel_graph(r):
    """Edges of the r-spoked wheel: rim ``a_i = v_i v_{i+1}`` (elements
    ``0..r-1``) then spokes ``b_i = h v_i`` (elements ``r..2r-1``)."""
    hub = r
    rim = [(i, (i + 1) % r) for i in range(r)]
    spokes = [(hub, i) for i in range(r)]
    return rim + spokes, r + 1


def _spanning_trees(edges, nv):
    out = []
    for S in itertools.combinations(range(len(edges)), nv - 1):
        parent = list(range(nv))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for e in S:
            a, b = (find(v) for v in edges[e])
            if a == b:
                ok = False
                break
            parent[a] = b
        if ok:
            out.append(mask(S))
    return out


def wheel(r):
    """Cycle matroid of the r-spoked wheel (``r >= 2``)."""
    if r < 2:
        raise PreconditionError("wheels need r >= 2")
    edges, nv = _wheel_graph(r)
    return Matroid(2 * r, _spanning_trees(edges, nv), name=f"wheel({r})")


def whirl(r):
    """The wheel with its rim added as a basis (circuit-hyperplane relaxation)."""
    W = wheel(r)
    return Matroid(2 * r, list(W.bases) + [mask(range(r))], name=f"whirl({r})")


@lru_cache(maxsize=None)
def named_matroid(name):
    """Catalog matroid by name: ``U(r,n)`` (or ``U24`` style), ``F7``,
    ``F7dual``, ``F7minus``, ``F7minus_dual``, ``C5``, ``C5dual``, ``D6``,
    ``wheel(r)``, ``whirl(r)``, ``Q6``, ``P6``, ``W3``, ``P7``, ``T8``,
    ``AG23_minus_e``, ``PG22``, ``U12+U24``."""
    m = re.fullmatch(r"U\((\d+),(\d+)\)|U(\d)(\d)", name)
    if m:
        r, n = (int(x) for x in (m.group(1, 2) if m.group(1) else m.group(3, 4)))
        if not 0 <= r <= n:
            raise PreconditionError(f"invalid uniform matroid {name}")
        M = uniform(r, n)
    elif name in _LINES:
        M = from_nonbases(_SIZES[name], 3, _one_indexed(_LINES[name]))
    elif name == "PG22":
        M = Matroid(7, named_matroid("F7").bases, validate=False)
    elif name.endswith("dual") and name[:-4].rstrip("_") in ("F7", "C5", "F7minus", "P7", "Q6", "P6", "T8"):
        M = named_matroid(name[:-4].rstrip("_")).dual()
    elif name == "T8":
        M = from_circuits(8, 4, _one_indexed(T8_CIRCUITS))
    elif name == "D6":
        M = series_extension(uniform(2, 5), 4)
    elif name in ("U12+U24", "U24+U12"):
        M = direct_sum(uniform(1, 2), uniform(2, 4)) if name.startswith("U12") else direct_sum(uniform(2, 4), uniform(1, 2))
    else:
        m = re.fullmatch(r"(wheel|whirl)\((\d+)\)", name)
        if not m:
            raise PreconditionError(f"unknown matroid {name!r}")
        r = int(m.group(2))
        if r > 6:
            raise PreconditionError("wheels and whirls are supported up to r = 6")
        M = wheel(r) if m.group(1) == "wheel" else whirl(r)
    M.name = name
    return M


# the named matroids used by catalog-wide checks, smallest first
CATALOG = (
    "U(2,4)", "U(2,5)", "U(3,5)", "U(1,2)", "C5", "C5dual", "U(2,6)", "U(3,6)", "U(4,6)",
    "D6", "Q6", "P6", "W3", "wheel(3)", "whirl(2)", "whirl(3)", "U12+U24",
    "U(2,7)", "U(5,7)", "F7", "F7dual", "F7minus", "F7minus_dual", "P7", "PG22",
    "T8", "AG23_minus_e", "wheel(4)", "whirl(4)",
)
