"""Acceptance suite shared by the test-suite and ``foundry verify-suite``.

Each criterion is a function returning ``(passed, detail)``; ``run_suite``
times them and collects ``CriterionResult`` records.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass

from . import abgroup as ab
from .catalog import identification_catalog, named
from .foundation import comparison_morphism, foundation_via_diagram, foundation_via_lattice, grs_presentation
from .matroid import direct_sum, parallel_extension, series_extension
from .matroid_catalog import CATALOG, named_matroid
from .pasture import is_isomorphism, numerical_type, quotient, tensor
from .represent import morphism_table, rescaling_classes
from .search import automorphisms, find_isomorphism, hom_enumerate, identify


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.title} ({self.seconds:.1f}s) {self.detail}"


def _grs(name):
    return grs_presentation(named_matroid(name)).pasture


def _identified(P):
    return identify(P).name


# ---------------------------------------------------------------------------
# 1. golden foundations

GOLDEN = (
    ("U(2,4)", "U"), ("U(2,5)", "V"), ("U(3,5)", "V"), ("U(2,6)", "U3"), ("U(2,7)", "U4"),
    ("F7", "F2"), ("F7dual", "F2"), ("Q6", "V"), ("AG23_minus_e", "H"),
    ("whirl(2)", "U"), ("whirl(3)", "U"), ("whirl(4)", "U"), ("F7minus", "D"), ("P7", "U"),
    ("T8", "F3"), ("wheel(3)", "regular"), ("wheel(4)", "regular"),
)


def criterion_golden(fast=False):
    bad = []
    for mname, expected in GOLDEN:
        t = time.perf_counter()
        got = _identified(_grs(mname))
        if got != expected or time.perf_counter() - t > 60:
            bad.append(f"{mname}: {got} != {expected}")
    if find_isomorphism(_grs("P6"), _grs("U(2,6)")) is None:
        bad.append("P6 and U(2,6) foundations differ")
    return not bad, "; ".join(bad) or f"{len(GOLDEN) + 1} foundations identified"


# ---------------------------------------------------------------------------
# 2. numerical types


def criterion_numerical_type(fast=False):
    bad = []
    nt = numerical_type(_grs("U(3,6)"))
    if nt != (14, (2,), False, 30):
        bad.append(f"U(3,6): {nt}")
    for n in range(4, 8):
        rank = _grs(f"U(2,{n})").group.free_rank
        if rank != math.comb(n, 2) - n:
            bad.append(f"U(2,{n}) free rank {rank}")
    return not bad, "; ".join(bad) or "U(3,6) type and U(2,n) free ranks match"


# ---------------------------------------------------------------------------
# 3. route agreement


def _agrees(report, grs):
    return is_isomorphism(comparison_morphism(report, grs))


ROUTE_SETS = (
    ("two_connected", "diagram", ("whirl(2)", "whirl(3)", "whirl(4)", "Q6", "U(2,5)")),
    ("three_connected", "diagram", ("W3", "Q6", "P6", "P7", "F7minus", "T8")),
    ("full", "lattice", ("AG23_minus_e", "W3", "P7")),
    ("rank_le_3", "lattice", ("T8",)),
)


def criterion_routes(fast=False):
    bad, checked = [], 0
    for name in CATALOG:
        M = named_matroid(name)
        if M.n > (7 if fast else 8):
            continue
        grs = grs_presentation(M)
        checked += 1
        if not _agrees(foundation_via_diagram(M, "general"), grs):
            bad.append(f"{name} general diagram")
    for kind, route, names in ROUTE_SETS:
        for name in names:
            M = named_matroid(name)
            if fast and M.n > 7:
                continue
            grs = grs_presentation(M)
            build = foundation_via_diagram if route == "diagram" else foundation_via_lattice
            checked += 1
            if not _agrees(build(M, kind), grs):
                bad.append(f"{name} {route} {kind}")
    return not bad, "; ".join(bad) or f"{checked} route comparisons agree"


# ---------------------------------------------------------------------------
# 4. direct sums


def criterion_direct_sum(fast=False):
    names = ("U(2,4)", "F7", "C5")
    bad = []
    for a, b in itertools.combinations_with_replacement(names, 2):
        M, N = named_matroid(a), named_matroid(b)
        lhs = grs_presentation(direct_sum(M, N)).pasture
        rhs = tensor(_grs(a), _grs(b))
        if identify(lhs).name != identify(rhs).name or find_isomorphism(lhs, rhs) is None:
            bad.append(f"{a}+{b}")
    return not bad, "; ".join(bad) or "F(M+N) = F(M) x F(N) on all pairs"


# ---------------------------------------------------------------------------
# 5. oracle equality


def criterion_oracle(fast=False):
    bad = []
    for mname in ("U(2,4)", "U(2,5)", "C5", "F7", "U12+U24"):
        M = named_matroid(mname)
        F = grs_presentation(M).pasture
        for q in ("F2", "F3", "F4"):
            P = named(q)
            classes = rescaling_classes(M, P).count
            homs = len(hom_enumerate(F, P))
            if classes != homs:
                bad.append(f"{mname}/{q}: {classes} classes, {homs} morphisms")
    return not bad, "; ".join(bad) or "15 rescaling counts equal morphism counts"


# ---------------------------------------------------------------------------
# 6. automorphisms


def criterion_automorphisms(fast=False):
    want = {"U": 6, "V": 120, "U3": 720}
    got = {k: len(automorphisms(named(k))) for k in want}
    ok = got == want
    return ok, ", ".join(f"|Aut {k}| = {v}" for k, v in got.items())


# ---------------------------------------------------------------------------
# 7. morphism table

TABLE_COLUMNS = ("F2", "F3", "F4", "F5", "F7", "F8", "F9", "S")
EXPECTED_TABLE = {
    "regular": "11111111",
    "U": "01111111",
    "V": "00111111",
    "F2": "10100100",
    "F3": "01000010",
    "K": "00000000",
    "S": "00000001",
    "H": "01101010",
    "D": "01011011",
    "G": "00110011",
}


def criterion_table(fast=False):
    table = morphism_table(list(EXPECTED_TABLE), TABLE_COLUMNS)
    bad = []
    for row, bits in EXPECTED_TABLE.items():
        got = "".join(str(table[row][c]) for c in TABLE_COLUMNS)
        if got != bits:
            bad.append(f"{row}: {got} != {bits}")
    return not bad, "; ".join(bad) or "10 x 8 table reproduced"


# ---------------------------------------------------------------------------
# 8. properties


def hexagon_closed(P):
    """Every hexagon is closed under the six transformations of fundamental pairs."""
    g = P.group
    for h in P.hexagons:
        pairs = set(h.pairs)
        for u, v in pairs:
            images = ((v, u), (g.neg(u), g.add(P.eps, g.sub(v, u))))
            if any(im not in pairs or P._pair_index.get(im) != P._pair_index[(u, v)] for im in images):
                return False
    return True


def epsilon_squared_trivial(P):
    return not any(P.group.mul(P.eps, 2))


def snf_check(rng, rows, cols, bound=9):
    A = [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]
    U, D, V = ab.smith_normal_form(A)
    if ab.matmul(ab.matmul(U, A), V) != D:
        return False
    if abs(ab.determinant(U)) != 1 or abs(ab.determinant(V)) != 1:
        return False
    diag = [D[i][i] for i in range(min(rows, cols))]
    if any(D[i][j] for i in range(rows) for j in range(cols) if i != j):
        return False
    nz = [d for d in diag if d]
    if any(d < 0 for d in nz) or nz != diag[: len(nz)]:
        return False
    return all(b % a == 0 for a, b in zip(nz, nz[1:]))


def criterion_properties(fast=False):
    bad = []
    pastures = [P for _, P in identification_catalog()]
    small = [n for n in CATALOG if named_matroid(n).n <= 7]
    foundations = {n: grs_presentation(named_matroid(n)).pasture for n in small}
    for P in pastures + list(foundations.values()):
        if not hexagon_closed(P):
            bad.append(f"hexagon closure {P!r}")
        if not epsilon_squared_trivial(P):
            bad.append(f"eps^2 {P!r}")
    targets = [named(q) for q in ("F3", "F4", "F5")]
    for A, B in (("U", "D"), ("H", "F3"), ("G", "S")):
        PA, PB = named(A), named(B)
        T2 = tensor(PA, PB)
        for T in targets:
            if len(hom_enumerate(T2, T)) != len(hom_enumerate(PA, T)) * len(hom_enumerate(PB, T)):
                bad.append(f"tensor law {A},{B}")
    U = named("U")
    Q = quotient(U, [["x", "x", "-1"]])
    for T in targets:
        want = sum(1 for f in hom_enumerate(U, T) if T.is_null(f("x"), f("x"), T.minus_one))
        if len(hom_enumerate(Q, T)) != want:
            bad.append("quotient law")
    for name, F in foundations.items():
        M = named_matroid(name)
        if find_isomorphism(grs_presentation(M.dual()).pasture, F) is None:
            bad.append(f"dual {name}")
        if M.n <= 6 and M.n:
            for ext in (parallel_extension(M, 0), series_extension(M, 0)):
                if find_isomorphism(grs_presentation(ext).pasture, F) is None:
                    bad.append(f"extension {name}")
    rng = random.Random(20240611)
    for _ in range(1000):
        if not snf_check(rng, rng.randint(1, 5), rng.randint(1, 5)):
            bad.append("smith normal form")
            break
    for name in ("Q6", "P7", "AG23_minus_e"):
        M = named_matroid(name)
        one = foundation_via_diagram(M, "general", threads=1).dumps()
        many = foundation_via_diagram(M, "general", threads=8).dumps()
        if one != many:
            bad.append(f"thread determinism {name}")
    return not bad, "; ".join(sorted(set(bad))) or "all property checks hold"


CRITERIA = (
    (1, "golden foundations", criterion_golden),
    (2, "numerical types", criterion_numerical_type),
    (3, "route agreement", criterion_routes),
    (4, "direct-sum law", criterion_direct_sum),
    (5, "rescaling oracle", criterion_oracle),
    (6, "automorphism counts", criterion_automorphisms),
    (7, "morphism table", criterion_table),
    (8, "property suites", criterion_properties),
)


def run_criterion(number, fast=False):
    _, title, fn = CRITERIA[number - 1]
    t = time.perf_counter()
    try:
        ok, detail = fn(fast)
    except Exception as exc:  # a crash is a failure, reported not raised
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, title, ok, detail, time.perf_counter() - t)


def run_suite(fast=False, only=None):
    return [run_criterion(n, fast) for n, _, _ in CRITERIA if only is None or n in only]
