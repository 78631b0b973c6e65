"""Morphism search between pastures.

One engine serves ``hom_enumerate``, ``automorphisms`` and ``identify``.  The
source unit group is generated by ``ε`` and a greedily chosen list of
fundamental elements (completed by canonical basis vectors when the
fundamental elements do not generate).  Images are assigned generator by
generator; after each assignment we check every group relation among the
generators and every hexagon whose representative pair is already
determined by the assigned generators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import Counter
from .errors import BudgetExceeded, PreconditionError
from .pasture import PastureMorphism, _spans, encode_coords, fundamental_coords, numerical_type


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _lin(a, va, b, vb):
    return [a * x + b * y for x, y in zip(va, vb)]


def _lin_expr(a, ea, b, eb):
    out = {}
    for k, v in ea.items():
        out[k] = out.get(k, 0) + a * v
    for k, v in eb.items():
        out[k] = out.get(k, 0) + b * v
    return {k: v for k, v in out.items() if v}


class EchelonLattice:
    """Sublattice of ``Z^t`` in row-echelon form; every basis row remembers
    its expression in terms of the inserted generators."""

    def __init__(self, t):
        self.t = t
        self.rows = {}

    @staticmethod
    def _lead(vec):
        for i, v in enumerate(vec):
            if v:
                return i
        return None

    def insert(self, vec, expr):
        """Add a vector; returns the kernel relation it produced, if any."""
        vec, expr = list(vec), dict(expr)
        while True:
            c = self._lead(vec)
            if c is None:
                return expr
            if c not in self.rows:
                if vec[c] < 0:
                    vec = [-v for v in vec]
                    expr = {k: -v for k, v in expr.items()}
                self.rows[c] = (vec, expr)
                return None
            b, be = self.rows[c]
            if vec[c] % b[c] == 0:
                q = vec[c] // b[c]
                vec = _lin(1, vec, -q, b)
                expr = _lin_expr(1, expr, -q, be)
                continue
            g, s, t = _xgcd(b[c], vec[c])
            nb, nbe = _lin(s, b, t, vec), _lin_expr(s, be, t, expr)
            p, q = b[c] // g, vec[c] // g
            vec, expr = _lin(p, vec, -q, b), _lin_expr(p, expr, -q, be)
            if nb[c] < 0:
                nb = [-v for v in nb]
                nbe = {k: -v for k, v in nbe.items()}
            self.rows[c] = (nb, nbe)

    def solve(self, vec):
        """Expression of ``vec`` in the generators, or ``None`` if outside."""
        vec = list(vec)
        expr = {}
        while True:
            c = self._lead(vec)
            if c is None:
                return {k: v for k, v in expr.items() if v}
            row = self.rows.get(c)
            if row is None or vec[c] % row[0][c]:
                return None
            q = vec[c] // row[0][c]
            vec = _lin(1, vec, -q, row[0])
            expr = _lin_expr(1, expr, q, row[1])

    def is_full(self):
        return len(self.rows) == self.t and all(abs(self.rows[c][0][c]) == 1 for c in self.rows)


@dataclass
class _Plan:
    gens: list  # canonical coordinates of generators; index 0 is ε
    fundamental: list  # per generator
    kernel: dict  # level -> list of expressions
    checks: dict  # level -> list of (expr_u, expr_v, hexagon index)
    gen_exprs: list  # expression of each presentation generator
    hex_exprs: list  # (expr_u, expr_v) per hexagon
    derive: dict  # level -> (expr_u, rest_v, coef): f(g) = coef * (partner - rest)


_PLANS = {}


def _plan(P):
    """Generating set, relations and hexagon checks for source ``P`` (cached)."""
    cached = _PLANS.get(id(P))
    if cached is not None and cached[0] is P:
        return cached[1]
    g = P.group
    t = g.dimension
    L = EchelonLattice(t)
    for i, d in enumerate(g.moduli):
        if d:
            L.insert([d if j == i else 0 for j in range(t)], {})
    gens, fund = [P.eps], [False]
    kernel = {}

    def add_gen(coords, is_fund):
        idx = len(gens)
        gens.append(coords)
        fund.append(is_fund)
        rel = L.insert(coords, {idx: 1})
        if rel:
            kernel.setdefault(max(rel), []).append(rel)

    rel = L.insert(P.eps, {0: 1})
    if rel:
        kernel.setdefault(0, []).append(rel)

    pending = list(range(len(P.hexagons)))
    while pending:
        best = None
        for h in pending:
            u, v = P.hexagons[h].pairs[0]
            need = (L.solve(u) is None) + (L.solve(v) is None)
            if best is None or need < best[0]:
                best = (need, h)
                if need == 0:
                    break
        h = best[1]
        pending.remove(h)
        u, v = P.hexagons[h].pairs[0]
        if L.solve(u) is None:
            add_gen(u, True)
        if L.solve(v) is None:
            add_gen(v, True)
    for i in range(t):
        e = tuple(int(i == j) for j in range(t))
        if L.solve(e) is None:
            add_gen(e, False)
    assert L.is_full()

    checks, hex_exprs = {}, []
    for h, hexa in enumerate(P.hexagons):
        u, v = hexa.pairs[0]
        eu, ev = L.solve(u), L.solve(v)
        hex_exprs.append((eu, ev))
        level = max(list(eu) + list(ev) + [0])
        checks.setdefault(level, []).append((eu, ev, h))
    derive = {}
    for level in range(1, len(gens)):
        for eu, ev in hex_exprs:
            for a, b in ((eu, ev), (ev, eu)):
                if a and max(a) < level and b.get(level) in (1, -1) and max(b) == level:
                    rest = {k: v for k, v in b.items() if k != level}
                    derive[level] = (a, rest, b[level])
                    break
            if level in derive:
                break
    gen_exprs = [L.solve(g.projection[j + 1]) for j in range(len(P.names))]
    plan = _Plan(gens, fund, kernel, checks, gen_exprs, hex_exprs, derive)
    _PLANS[id(P)] = (P, plan)
    return plan


def _fingerprints(P):
    """Per fundamental element: (element order, number of pairs it starts)."""
    count = {}
    for h in P.hexagons:
        for u, _ in h.pairs:
            count[u] = count.get(u, 0) + 1
    return {u: (P.group.element_order(u), c) for u, c in count.items()}


def _evaluate(Qg, expr, images):
    acc = [0] * Qg.dimension
    for k, c in expr.items():
        img = images[k]
        for j, v in enumerate(img):
            if v:
                acc[j] += c * v
    return Qg.reduce(acc)


def _search(P, Q, iso=False, first_only=False, budget=None):
    plan = _plan(P)
    Qg = Q.group
    if iso:
        if numerical_type(P) != numerical_type(Q):
            return []
    fq = fundamental_coords(Q)
    all_q = None
    if not all(plan.fundamental[1:]):
        if not Qg.is_finite():
            raise PreconditionError("source is not generated by fundamental elements and the target is infinite")
        all_q = sorted(Qg.elements(), key=encode_coords)
    if iso:
        fp_p, fp_q = _fingerprints(P), _fingerprints(Q)
    counter = Counter(budget, "morphism search")
    k = len(plan.gens) - 1
    candidates = [None]
    for i in range(1, k + 1):
        u = plan.gens[i]
        if plan.fundamental[i]:
            if iso:
                cand = [c for c in fq if fp_q[c] == fp_p[u]]
            else:
                cand = list(fq)
        else:
            cand = list(all_q)
        order = P.group.element_order(u)
        if order:
            cand = [c for c in cand if Qg.element_order(c) and order % Qg.element_order(c) == 0]
        if iso:
            cand = [c for c in cand if Qg.element_order(c) == order]
        candidates.append(cand)
    images = [Q.eps] + [None] * k
    results = []
    allowed = [None] + [set(c) for c in candidates[1:]]
    partners = {}
    for u, v in Q._pair_index:
        partners.setdefault(u, []).append(v)

    def options(level):
        d = plan.derive.get(level)
        if d is None:
            return candidates[level]
        eu, rest, coef = d
        fu = _evaluate(Qg, eu, images)
        r = _evaluate(Qg, rest, images)
        out = []
        for y in partners.get(fu, ()):
            c = Qg.sub(y, r) if coef == 1 else Qg.sub(r, y)
            if c in allowed[level]:
                out.append(c)
        return out

    def consistent(level):
        for rel in plan.kernel.get(level, ()):
            if any(_evaluate(Qg, rel, images)):
                return False
        for eu, ev, _ in plan.checks.get(level, ()):
            if not Q.is_null_pair(_evaluate(Qg, eu, images), _evaluate(Qg, ev, images)):
                return False
        return True

    def finish():
        coords = [_evaluate(Qg, e, images) for e in plan.gen_exprs]
        if iso:
            if not _spans(Q, coords + [Q.eps]):
                return
            seen = set()
            for eu, ev in plan.hex_exprs:
                seen.add(Q._pair_index[(_evaluate(Qg, eu, images), _evaluate(Qg, ev, images))])
            if len(seen) != len(Q.hexagons):
                return
        results.append(PastureMorphism(P, Q, tuple(Qg.lift(c) for c in coords)))

    class _Done(Exception):
        pass

    def rec(level):
        counter.tick()
        if level > k:
            finish()
            if first_only and results:
                raise _Done
            return
        for c in options(level):
            images[level] = c
            if consistent(level):
                rec(level + 1)
        images[level] = None

    if consistent(0):
        try:
            rec(1)
        except _Done:
            pass
    results.sort(key=lambda f: tuple(encode_coords(c) for c in f.image_coords()))
    return results


def hom_enumerate(P, Q, budget=None):
    """All morphisms ``P -> Q`` for ``Q`` with finite unit group."""
    if not Q.group.is_finite():
        raise PreconditionError("target unit group must be finite")
    return _search(P, Q, budget=budget)


def hom_exists(P, Q, budget=None):
    if not Q.group.is_finite():
        raise PreconditionError("target unit group must be finite")
    return bool(_search(P, Q, first_only=True, budget=budget))


def automorphisms(P, budget=None):
    """All automorphisms of a pasture generated by ``ε`` and fundamental elements."""
    if not all(_plan(P).fundamental[1:]):
        raise PreconditionError("pasture is not generated by its fundamental elements")
    return _search(P, P, iso=True, budget=budget)


def find_isomorphism(P, Q, budget=None):
    """An isomorphism ``P -> Q`` or ``None``."""
    if not all(_plan(P).fundamental[1:]) and not Q.group.is_finite():
        raise PreconditionError("pasture is not generated by its fundamental elements")
    found = _search(P, Q, iso=True, first_only=True, budget=budget)
    return found[0] if found else None


def is_isomorphic(P, Q, budget=None):
    return find_isomorphism(P, Q, budget) is not None


@dataclass(frozen=True)
class Identification:
    """Outcome of ``identify``: ``status`` is ``match``, ``no_match`` or
    ``unidentified`` (some search ran out of budget)."""

    status: str
    name: str | None = None
    witness: PastureMorphism | None = None


def identify(P, catalog=None, budget=None):
    """Find a catalog pasture isomorphic to ``P``.

    Candidates are filtered by numerical type before the isomorphism search.
    """
    if catalog is None:
        from .catalog import identification_catalog

        catalog = identification_catalog()
    nt = numerical_type(P)
    exhausted = False
    for name, Q in catalog:
        if numerical_type(Q) != nt:
            continue
        try:
            f = find_isomorphism(P, Q, budget)
        except BudgetExceeded:
            exhausted = True
            continue
        if f is not None:
            return Identification("match", name, f)
    return Identification("unidentified" if exhausted else "no_match")
