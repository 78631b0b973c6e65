"""Foundations of matroids.

Three routes compute the foundation ``F_M``:

* ``grs_presentation``: generators are cross ratios, one per class of
  non-degenerate hyperplane quadruples, with the multiplicative relations of
  the universal cross ratios and the additive Plücker relations;
* ``foundation_via_diagram``: colimit over embedded minors of special types;
* ``foundation_via_lattice``: colimit over upper sublattices of the lattice of
  flats.

Every node of every diagram labels its cross ratios by hyperplane quadruples
of ``M`` itself, so edge morphisms and comparison maps are read off labels.

A quadruple ``(H1, H2, H3, H4)`` and its images under the double
transpositions ``(H2,H1,H4,H3)``, ``(H3,H4,H1,H2)``, ``(H4,H3,H2,H1)`` name the
same cross ratio; the least of the four (as a tuple of bitmasks) is the
class label.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .abgroup import unit
from .errors import PreconditionError, VerificationFailure
from .kernels import count_minor_bases
from .matroid import (
    Matroid,
    flat_lattice,
    full_upper_sublattice,
    has_minor,
    is_2_connected,
    is_3_connected,
    is_isomorphic,
    mask,
    members,
    minors_of_shape,
    popcount,
    sublattice_minor,
    subsets_of_size,
    upper_sublattices,
)
from .pasture import EPS, Diagram, Element, Pasture, PastureMorphism, colimit, is_isomorphism, numerical_type
from .search import identify

# ---------------------------------------------------------------------------
# cross-ratio symbols


def class_key(quad):
    """Least member of the orbit of a quadruple under the double transpositions."""
    h1, h2, h3, h4 = quad
    return min((h1, h2, h3, h4), (h2, h1, h4, h3), (h3, h4, h1, h2), (h4, h3, h2, h1))


def class_name(key):
    return "[" + "|".join(".".join(str(e) for e in members(h)) for h in key) + "]"


@dataclass(frozen=True)
class CrossRatioSymbol:
    """A tuple ``(I; a, b, c, d)`` with its quadruple of hyperplanes."""

    I: tuple
    a: int
    b: int
    c: int
    d: int
    nondegenerate: bool
    psi: tuple


class _Omega:
    """Enumeration of all tuples ``(J; a, b, c, d)`` with ``Jac, Jad, Jbc, Jbd``
    bases, keyed by ``(J mask, a, b, c, d)``."""

    def __init__(self, M):
        self.M = M
        self.tuples = {}  # (J, a, b, c, d) -> (quad, nondegenerate)
        if M.r < 2:
            return
        bset = M.basis_set
        for Jt in itertools.combinations(range(M.n), M.r - 2):
            J = mask(Jt)
            if not M.is_independent(J):
                continue
            rest = [e for e in range(M.n) if not J >> e & 1]
            adj = {x: set() for x in rest}
            for x, y in itertools.combinations(rest, 2):
                if (J | 1 << x | 1 << y) in bset:
                    adj[x].add(y)
                    adj[y].add(x)
            live = [x for x in rest if adj[x]]
            if len(live) < 4:
                continue
            hyper = {x: M.closure_mask(J | 1 << x) for x in live}
            for a in live:
                for c in sorted(adj[a]):
                    for b in live:
                        if b == a or b == c or c not in adj[b]:
                            continue
                        for d in sorted(adj[a] & adj[b]):
                            if d == c:
                                continue
                            quad = (hyper[a], hyper[b], hyper[c], hyper[d])
                            nondeg = b in adj[a] and d in adj[c]
                            self.tuples[(J, a, b, c, d)] = (quad, nondeg)


def enumerate_omega(M, raw=False):
    """Cross-ratio symbols of ``M``.

    With ``raw`` every tuple is returned; otherwise one symbol per class, the
    lexicographically least tuple ``(sorted I, a, b, c, d)`` of the class.
    """
    om = _Omega(M)
    symbols = []
    for (J, a, b, c, d), (quad, nd) in om.tuples.items():
        symbols.append(CrossRatioSymbol(tuple(members(J)), a, b, c, d, nd, quad))
    symbols.sort(key=lambda s: (s.I, s.a, s.b, s.c, s.d))
    if raw:
        return symbols
    seen, out = set(), []
    for s in symbols:
        key = (class_key(s.psi), s.nondegenerate)
        if key not in seen:
            seen.add(key)
            out.append(s)
    return out


# ---------------------------------------------------------------------------
# the GRS presentation


def _has_fano_minor(M):
    from .matroid_catalog import named_matroid

    if M.n < 7 or M.r < 3 or M.n - M.r < 3:
        return False
    return has_minor(M, named_matroid("F7")) or has_minor(M, named_matroid("F7dual"))


def grs_pasture(M):
    """``(pasture, class keys)``: the GRS presentation with generator ``i``
    the cross ratio of class ``keys[i]``."""
    om = _Omega(M)
    keys = sorted({class_key(q) for q, nd in om.tuples.values() if nd})
    index = {k: i + 1 for i, k in enumerate(keys)}
    T = om.tuples

    def val(J, a, b, c, d):
        q, nd = T[(J, a, b, c, d)]
        return {index[class_key(q)]: 1} if nd else {}

    rows = set()

    def add_row(*parts, eps=0):
        acc = {EPS: eps} if eps else {}
        for p in parts:
            for k, v in p.items():
                acc[k] = acc.get(k, 0) + v
        row = tuple(sorted((k, v) for k, v in acc.items() if v))
        if row:
            if row[0][1] < 0:
                row = tuple((k, -v) for k, v in row)
            rows.add(row)

    def inv(x):
        return {k: -v for k, v in x.items()}

    terms = {}
    for (J, a, b, c, d), (quad, nd) in T.items():
        if nd:
            x = val(J, a, b, c, d)
            add_row(x, val(J, a, b, d, c))  # R1
            add_row(x, val(J, a, c, d, b), val(J, a, d, b, c), eps=1)  # R2
            k = class_key(quad)
            if k not in terms:
                y = val(J, a, c, b, d)
                terms[k] = (tuple(sorted(x.items())), tuple(sorted(y.items())), ((EPS, 1),))  # R+
        # R3: [e1e2;e3e4][e1e2;e4e5][e1e2;e5e3] = 1
        for e in range(M.n):
            if e in (a, b, c, d) or J >> e & 1:
                continue
            t2, t3 = (J, a, b, d, e), (J, a, b, e, c)
            if t2 in T and t3 in T:
                add_row(val(J, a, b, c, d), val(*t2), val(*t3))
        # R4 with J = J' + e5
        for e5 in members(J):
            Jp = J & ~(1 << e5)
            t2 = (Jp | 1 << c, a, b, d, e5)
            t3 = (Jp | 1 << d, a, b, e5, c)
            if t2 in T and t3 in T:
                add_row(val(J, a, b, c, d), val(*t2), val(*t3))
    if _has_fano_minor(M):
        rows.add(((EPS, 1),))
    names = [class_name(k) for k in keys]
    P = Pasture(names, sorted(rows), [terms[k] for k in sorted(terms)])
    return P, keys


# ---------------------------------------------------------------------------
# reports


@dataclass
class FoundationReport:
    """Result of a foundation computation.

    ``dictionary`` maps each class label (least hyperplane quadruple, as
    bitmasks) to its element of ``pasture``.
    """

    matroid: Matroid
    pasture: Pasture
    method: str
    dictionary: dict
    cross_checks: list = field(default_factory=list)
    identification: object = None
    diagram: object = None

    @property
    def generator_dictionary(self):
        return self.dictionary

    def cross_ratio(self, *hyperplanes):
        """Element for a quadruple of hyperplanes (masks or element lists)."""
        quad = tuple(h if isinstance(h, int) else mask(h) for h in hyperplanes)
        key = class_key(quad)
        if key in self.dictionary:
            return self.dictionary[key]
        raise PreconditionError("not a non-degenerate modular quadruple of hyperplanes")

    def cross_ratio_of(self, J, a, b, c, d):
        """Element ``[ab;cd]_J`` for a tuple of ``Ω_M`` (1 when degenerate)."""
        M = self.matroid
        Jm = J if isinstance(J, int) else mask(J)
        om = _omega_cached(M)
        entry = om.tuples.get((Jm, a, b, c, d))
        if entry is None:
            raise PreconditionError("tuple is not in Ω_M")
        quad, nd = entry
        return self.dictionary[class_key(quad)] if nd else self.pasture.one

    def identify(self, catalog=None, budget=None):
        self.identification = identify(self.pasture, catalog, budget)
        return self.identification

    def to_json(self):
        P = self.pasture
        ident = self.identification
        out = {
            "format": "foundation-report/v1",
            "matroid": self.matroid.to_json(),
            "method": self.method,
            "numerical_type": {
                "free_rank": P.group.free_rank,
                "invariant_factors": list(P.group.invariant_factors),
                "minus_one_trivial": P.minus_one_trivial(),
                "hexagon_count": len(P.hexagons),
            },
            "invariant_factors": list(P.group.invariant_factors),
            "hexagons": [h.key.hex() for h in P.hexagons],
            "generator_dictionary": [
                {"quadruple": [members(h) for h in key], "coords": list(self.dictionary[key].coords())}
                for key in sorted(self.dictionary)
            ],
            "identification": None
            if ident is None
            else {"status": ident.status, "name": ident.name},
            "cross_checks": [{"route": r, "isomorphic": ok} for r, ok in self.cross_checks],
        }
        return out

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


_OMEGA_CACHE = {}


def _omega_cached(M):
    key = (M.n, M.bases)
    om = _OMEGA_CACHE.get(key)
    if om is None:
        om = _OMEGA_CACHE[key] = _Omega(M)
    return om


def grs_presentation(M):
    """Foundation by the GRS presentation."""
    P, keys = grs_pasture(M)
    dictionary = {k: Element(P, unit(i + 1)) for i, k in enumerate(keys)}
    return FoundationReport(M, P, "grs", dictionary)


# ---------------------------------------------------------------------------
# diagrams of embedded minors


GENERAL_TYPES = ("U24", "U25", "U35", "C5", "C5dual", "U24+U12", "F7", "F7dual")
TWO_CONNECTED_TYPES = ("U24", "U25", "U35", "C5", "C5dual", "F7", "F7dual")
THREE_CONNECTED_TYPES = ("U24", "U25", "U35", "W3", "Q6", "P6", "F7", "F7dual")
LATTICE_TYPES = ("U24", "U25", "U35", "C5", "F7", "F7dual")


def _template(tag):
    from .matroid_catalog import named_matroid

    return named_matroid({"U24": "U(2,4)", "U25": "U(2,5)", "U35": "U(3,5)"}.get(tag, tag))


_LOCAL_CACHE = {}


def _local_foundation(N):
    """GRS foundation of a small matroid, cached by its basis structure."""
    key = (N.n, N.bases)
    hit = _LOCAL_CACHE.get(key)
    if hit is None:
        hit = _LOCAL_CACHE[key] = grs_pasture(N)
    return hit


@dataclass
class Node:
    """A diagram node: an embedded minor of ``M`` and its foundation, with
    generator ``i`` labelled by the class ``labels[i]`` of ``M``."""

    tag: str
    contract: int
    delete: int
    pasture: Pasture
    labels: tuple
    sublattice: object = None


def _global_labels(M, C, local_labels, local_keys):
    """Translate class keys of the minor on ``local_labels`` (contract set ``C``)
    into class keys of ``M``."""
    out = []
    for key in local_keys:
        quad = []
        for h in key:
            glob = C
            for e in members(h):
                glob |= 1 << local_labels[e]
            quad.append(M.closure_mask(glob))
        out.append(class_key(tuple(quad)))
    return tuple(out)


def _make_nodes(M, specs, threads=1):
    """``specs`` are ``(tag, C, D, sublattice, embedded minor)``."""

    def build(spec):
        tag, C, D, sub, em = spec
        P, keys = _local_foundation(em.matroid)
        return Node(tag, C, D, P, _global_labels(M, C, em.labels, keys), sub)

    if threads > 1 and len(specs) > 1:
        # warm the cache single-threaded per distinct structure, then fan out
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(build, specs))
    return [build(s) for s in specs]


def _assemble(nodes, pairs):
    """Diagram from nodes and ``(source, target)`` inclusion pairs."""
    edges = []
    for s, t in pairs:
        pos = {lab: j for j, lab in enumerate(nodes[t].labels)}
        images = tuple(unit(pos[lab] + 1) for lab in nodes[s].labels)
        edges.append((s, t, PastureMorphism(nodes[s].pasture, nodes[t].pasture, images)))
    return Diagram([n.pasture for n in nodes], edges, list(nodes))


def fundamental_diagram(M, kind="general", threads=1):
    """Diagram of embedded minors of the special types for ``kind``
    (``general``, ``two_connected`` or ``three_connected``)."""
    if kind == "general":
        types = GENERAL_TYPES
    elif kind == "two_connected":
        if not is_2_connected(M):
            raise PreconditionError("matroid is not 2-connected")
        types = TWO_CONNECTED_TYPES
    elif kind == "three_connected":
        if not is_3_connected(M):
            raise PreconditionError("matroid is not 3-connected")
        types = THREE_CONNECTED_TYPES
    else:
        raise PreconditionError(f"unknown diagram class {kind!r}")
    templates = [(t, _template(t)) for t in types]
    shapes = sorted({(T.n, T.r) for _, T in templates})
    specs = []
    for size, rank in shapes:
        cands = [(t, T) for t, T in templates if (T.n, T.r) == (size, rank)]
        counts = {len(T.bases) for _, T in cands}
        for C, D in minors_of_shape(M, size, rank):
            nb = count_minor_bases(M.bases, C, D)
            if nb not in counts:
                continue
            em = M.minor(C, D, check=False)
            for t, T in cands:
                if len(T.bases) == nb and is_isomorphic(em.matroid, T) is not None:
                    specs.append((t, C, D, None, em))
                    break
    nodes = _make_nodes(M, specs, threads)
    pairs = []
    for s, a in enumerate(nodes):
        for t, b in enumerate(nodes):
            if s != t and b.contract & a.contract == b.contract and b.delete & a.delete == b.delete:
                pairs.append((s, t))
    return _assemble(nodes, pairs)


def lattice_diagram(M, variant="full", threads=1, largest=False):
    """Diagram of upper sublattices (``full``, ``rank_le_4``, ``rank_le_3`` or
    ``three_connected``), each realised on an embedded minor; ``largest``
    picks the alternative preimage (largest representatives)."""
    specs = []
    if variant in ("full", "three_connected"):
        if variant == "three_connected" and not is_3_connected(M):
            raise PreconditionError("matroid is not 3-connected")
        types = LATTICE_TYPES if variant == "full" else THREE_CONNECTED_TYPES
        for tag in types:
            for L in upper_sublattices(M, tag):
                em = sublattice_minor(M, L.bottom, L.atoms, largest)
                specs.append((tag, em.contract, em.delete, L, em))
        nodes = _make_nodes(M, specs, threads)
        pairs = [
            (s, t)
            for s, a in enumerate(nodes)
            for t, b in enumerate(nodes)
            if s != t and b.sublattice.contains(a.sublattice)
        ]
        return _assemble(nodes, pairs)
    if variant in ("rank_le_4", "rank_le_3"):
        from .matroid_catalog import named_matroid

        k = 4 if variant == "rank_le_4" else 3
        if k == 3 and not (
            has_minor(M, named_matroid("F7")) or not has_minor(M, named_matroid("F7dual"))
        ):
            raise PreconditionError("rank_le_3 needs an F7 minor or no F7* minor")
        probes = [named_matroid(x) for x in ("U(2,4)", "F7", "F7dual")]
        levels = M.flats_by_rank
        for rank_F in range(max(0, M.r - k), M.r - 1):
            for F in levels[rank_F]:
                L = full_upper_sublattice(M, F)
                em = sublattice_minor(M, F, L.atoms, largest)
                if any(has_minor(em.matroid, T) for T in probes):
                    specs.append((f"rank{M.r - rank_F}", em.contract, em.delete, L, em))
        nodes = _make_nodes(M, specs, threads)
        pairs = [
            (s, t)
            for s, a in enumerate(nodes)
            for t, b in enumerate(nodes)
            if s != t and a.sublattice.bottom & b.sublattice.bottom == b.sublattice.bottom
        ]
        return _assemble(nodes, pairs)
    raise PreconditionError(f"unknown lattice variant {variant!r}")


def _colimit_report(M, D, method):
    P = colimit(D, check=False)
    dictionary = {}
    for i, node in enumerate(D.labels):
        cone = P.cone[i]
        for j, lab in enumerate(node.labels):
            if lab not in dictionary:
                dictionary[lab] = Element(P, cone.images[j])
    return FoundationReport(M, P, method, dictionary, diagram=D)


def foundation_via_diagram(M, kind="general", threads=1):
    return _colimit_report(M, fundamental_diagram(M, kind, threads), {
        "general": "diagram", "two_connected": "diagram2", "three_connected": "diagram3"}[kind])


def foundation_via_lattice(M, variant="full", threads=1, largest=False):
    return _colimit_report(M, lattice_diagram(M, variant, threads, largest), {
        "full": "lattice", "three_connected": "lattice3",
        "rank_le_4": "lattice-le4", "rank_le_3": "lattice-le3"}[variant])


# ---------------------------------------------------------------------------
# comparison and dispatch


def comparison_morphism(report, grs):
    """The canonical map from a colimit report to the GRS report, sending each
    node cross ratio to the GRS generator with the same label."""
    D = report.diagram
    images = []
    for node in D.labels:
        for lab in node.labels:
            if lab not in grs.dictionary:
                raise VerificationFailure(f"label {class_name(lab)} missing from the GRS presentation")
            images.append(grs.dictionary[lab].vec)
    return PastureMorphism(report.pasture, grs.pasture, tuple(images))


def routes_for(M):
    """Diagram routes applicable to ``M``."""
    from .matroid_catalog import named_matroid

    routes = ["diagram", "lattice", "lattice-le4"]
    if is_2_connected(M):
        routes.append("diagram2")
    if is_3_connected(M):
        routes += ["diagram3", "lattice3"]
    if has_minor(M, named_matroid("F7")) or not has_minor(M, named_matroid("F7dual")):
        routes.append("lattice-le3")
    return routes


METHODS = {
    "grs": lambda M, th: grs_presentation(M),
    "diagram": lambda M, th: foundation_via_diagram(M, "general", th),
    "diagram2": lambda M, th: foundation_via_diagram(M, "two_connected", th),
    "diagram3": lambda M, th: foundation_via_diagram(M, "three_connected", th),
    "lattice": lambda M, th: foundation_via_lattice(M, "full", th),
    "lattice3": lambda M, th: foundation_via_lattice(M, "three_connected", th),
    "lattice-le4": lambda M, th: foundation_via_lattice(M, "rank_le_4", th),
    "lattice-le3": lambda M, th: foundation_via_lattice(M, "rank_le_3", th),
}


def foundation(M, method="grs", cross_check=None, identify_result=False, threads=1):
    """Foundation of ``M`` by the chosen route.

    ``cross_check`` (default: on for ``n <= 7``) also runs every applicable
    route and checks the canonical comparison map to the GRS pasture is an
    isomorphism; any failure raises ``VerificationFailure``.
    """
    if method not in METHODS:
        raise PreconditionError(f"unknown method {method!r}")
    if cross_check is None:
        cross_check = M.n <= 7
    report = METHODS[method](M, threads)
    if cross_check:
        grs = report if method == "grs" else grs_presentation(M)
        checks = []
        for route in routes_for(M):
            other = report if route == method else METHODS[route](M, threads)
            ok = is_isomorphism(comparison_morphism(other, grs))
            checks.append((route, ok))
        if method != "grs":
            checks.insert(0, ("grs", numerical_type(grs.pasture) == numerical_type(report.pasture)))
        report.cross_checks = checks
        bad = [r for r, ok in checks if not ok]
        if bad:
            raise VerificationFailure(f"routes disagree with the GRS presentation: {', '.join(bad)}")
    if identify_result:
        report.identify()
    return report
