"""Finitely presented pastures.

A pasture is stored through a presentation over ``F±``: named generators,
multiplicative relations (sparse exponent vectors in which index 0 is the
sign ``ε``) and all-unit null terms.  From the presentation we derive the
canonical unit group, the canonical coordinates of ``ε`` and the set of
hexagons.  A hexagon is the orbit of a fundamental pair ``(u, v)`` with
``u + v - 1`` null; it is stored as its set of pairs in canonical
coordinates and keyed by the smallest serialized pair.

Example:
    >>> U = from_presentation(["x", "y"], [], [["x", "y", "-1"]])
    >>> numerical_type(U)
    (2, (2,), False, 1)
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from . import abgroup as ab
from .abgroup import FpAbelianGroup, combine, sparse, unit
from .errors import (
    DimensionMismatch,
    InconsistentRelation,
    MalformedWord,
    ParseError,
    PreconditionError,
)

EPS = 0  # index of the sign generator in every exponent vector

# ---------------------------------------------------------------------------
# serialization of canonical coordinates


def encode_coords(coords):
    """Fixed byte encoding: per coordinate a sign byte, a length byte and the
    big-endian magnitude."""
    out = bytearray()
    for c in coords:
        mag = abs(c)
        body = mag.to_bytes((mag.bit_length() + 7) // 8, "big")
        out.append(1 if c < 0 else 0)
        out.append(len(body))
        out += body
    return bytes(out)


def encode_pair(pair):
    return encode_coords(pair[0]) + encode_coords(pair[1])


@dataclass(frozen=True)
class Hexagon:
    """Orbit of a fundamental pair, with a representative null term."""

    key: bytes
    pairs: tuple  # sorted by serialization; pairs of canonical coordinate tuples
    term: tuple  # three sparse exponent vectors over the presentation

    def fundamental_elements(self):
        return sorted({p[0] for p in self.pairs}, key=encode_coords)


# ---------------------------------------------------------------------------
# words


_FACTOR = re.compile(r"^\s*([^\s^*/()]+|\([^)]*\))\s*(?:\^\s*\(?\s*([+-]?\d+)\s*\)?)?\s*$")


def parse_word(text, names):
    """Parse a monomial such as ``-x^2*y^-1`` or ``x/y`` into a sparse vector.

    Index 0 is ``ε``; generator ``names[i]`` has index ``i + 1``.  The words
    ``1``, ``-1``, ``eps`` and ``ε`` are understood.  Returns ``None`` for ``0``.
    """
    if not isinstance(text, str):
        raise MalformedWord(f"not a word: {text!r}")
    index = {name: i + 1 for i, name in enumerate(names)}
    s = text.strip()
    if s == "0":
        return None
    acc = {}
    if s.startswith("-"):
        acc[EPS] = 1
        s = s[1:].strip()
    if not s:
        raise MalformedWord(f"empty word in {text!r}")
    parts = re.split(r"([*/])", s)
    sign = 1
    for k, part in enumerate(parts):
        if k % 2:
            sign = 1 if part == "*" else -1
            continue
        m = _FACTOR.match(part)
        if not m:
            raise MalformedWord(f"cannot parse factor {part!r} in {text!r}")
        name, exp = m.group(1), int(m.group(2) or 1)
        if name == "1":
            continue
        if name in ("eps", "ε", "(-1)"):
            idx = EPS
        elif name in index:
            idx = index[name]
        else:
            raise MalformedWord(f"unknown generator {name!r} in {text!r}")
        acc[idx] = acc.get(idx, 0) + sign * exp
    return tuple(sorted((i, v) for i, v in acc.items() if v))


def format_word(vec, names):
    """Render a sparse vector as a monomial string (inverse of ``parse_word``)."""
    neg = False
    factors = []
    for i, v in vec:
        if i == EPS:
            neg = v % 2 == 1
            continue
        name = names[i - 1]
        factors.append(name if v == 1 else f"{name}^{v}")
    body = "*".join(factors) or "1"
    return ("-" if neg else "") + body


# ---------------------------------------------------------------------------
# pastures


class Pasture:
    """A finitely presented pasture.

    Attributes:
        names: generator names; ``ε`` is implicit as index 0 of every vector.
        relations: multiplicative relations as sparse vectors.
        terms: all-unit null terms as triples of sparse vectors.
        group: the unit group (``FpAbelianGroup`` on ``len(names) + 1``
            generators with ``2ε = 0`` appended).
        eps: canonical coordinates of ``ε``.
        hexagons: tuple of ``Hexagon`` sorted by key.
        cone: morphisms recorded by ``tensor``, ``quotient`` and ``colimit``.
    """

    def __init__(self, names, relations=(), terms=(), name_hint=None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ParseError("duplicate generator names")
        self.ngens = len(self.names) + 1
        rels = []
        for r in relations:
            s = sparse(r, self.ngens)
            if s:
                rels.append(s)
        self.relations = tuple(rels)
        self.group = FpAbelianGroup(self.ngens, list(self.relations) + [((EPS, 2),)])
        self.eps = self.group.coords(unit(EPS))
        self.name_hint = name_hint
        self.cone = ()
        self._build_hexagons([tuple(sparse(t, self.ngens) for t in term) for term in terms])

    # -- hexagons ----------------------------------------------------------
    def _pairs_of(self, A, B, C):
        g = self.group
        out = set()
        for x, y, z in ((A, B, C), (B, C, A), (C, A, B)):
            u = g.add(self.eps, g.sub(x, z))
            v = g.add(self.eps, g.sub(y, z))
            out.add((u, v))
            out.add((v, u))
        return out

    def _build_hexagons(self, terms):
        hexes = {}
        kept = []
        for t in terms:
            coords = [self.group.coords(x) for x in t]
            pairs = self._pairs_of(*coords)
            encoded = sorted(pairs, key=encode_pair)
            key = encode_pair(encoded[0])
            if key not in hexes:
                hexes[key] = Hexagon(key, tuple(encoded), t)
                kept.append(t)
        self.terms = tuple(kept)
        self.hexagons = tuple(hexes[k] for k in sorted(hexes))
        self._pair_index = {}
        for i, h in enumerate(self.hexagons):
            for p in h.pairs:
                self._pair_index[p] = i

    def hexagon_of_coords(self, A, B, C):
        """Index of the hexagon containing the all-unit term ``A+B+C`` (canonical
        coordinates), or ``None`` if the term is not null."""
        g = self.group
        u = g.add(self.eps, g.sub(A, C))
        v = g.add(self.eps, g.sub(B, C))
        return self._pair_index.get((u, v))

    def is_null_pair(self, u, v):
        """Whether ``u + v - 1`` is null (canonical coordinates)."""
        return (u, v) in self._pair_index

    def is_null_coords(self, A, B, C):
        """Null-set membership for a term in canonical coordinates; ``None``
        stands for zero."""
        present = [x for x in (A, B, C) if x is not None]
        if len(present) == 3:
            return self.hexagon_of_coords(A, B, C) is not None
        if len(present) == 2:
            return self.group.add(present[0], self.eps) == present[1]
        return len(present) == 0

    def is_null(self, a, b, c):
        """Null-set membership for a term of elements, words or vectors."""
        return self.is_null_coords(*(self._coords_or_none(x) for x in (a, b, c)))

    def _coords_or_none(self, x):
        if isinstance(x, Element):
            if x.pasture is not self:
                raise PreconditionError("element of another pasture")
            return None if x.vec is None else self.group.coords(x.vec)
        if isinstance(x, str):
            v = parse_word(x, self.names)
            return None if v is None else self.group.coords(v)
        if x is None:
            return None
        return self.group.coords(sparse(x, self.ngens))

    # -- elements ----------------------------------------------------------
    def element(self, word):
        """The element named by a word, a sparse vector or a dense vector."""
        if isinstance(word, Element):
            return word
        if isinstance(word, str):
            return Element(self, parse_word(word, self.names))
        if word is None:
            return Element(self, None)
        return Element(self, sparse(word, self.ngens))

    def gen(self, name):
        return Element(self, unit(self.names.index(name) + 1))

    @property
    def one(self):
        return Element(self, ())

    @property
    def minus_one(self):
        return Element(self, unit(EPS))

    @property
    def zero(self):
        return Element(self, None)

    def element_from_coords(self, coords):
        return Element(self, self.group.lift(coords))

    def minus_one_trivial(self):
        return not any(self.eps)

    def __repr__(self):
        hint = f" {self.name_hint}" if self.name_hint else ""
        return f"<Pasture{hint} gens={len(self.names)} type={numerical_type(self)}>"


class Element:
    """A pasture element: zero (``vec is None``) or a unit given by a sparse
    exponent vector.  Units compare in canonical coordinates."""

    __slots__ = ("pasture", "vec")

    def __init__(self, pasture, vec):
        self.pasture = pasture
        self.vec = vec

    def is_zero(self):
        return self.vec is None

    def coords(self):
        return None if self.vec is None else self.pasture.group.coords(self.vec)

    def _other(self, other):
        if isinstance(other, Element):
            if other.pasture is not self.pasture:
                raise PreconditionError("elements of different pastures")
            return other
        if other == 1:
            return self.pasture.one
        if other == -1:
            return self.pasture.minus_one
        if other == 0:
            return self.pasture.zero
        return self.pasture.element(other)

    def __mul__(self, other):
        other = self._other(other)
        if self.vec is None or other.vec is None:
            return self.pasture.zero
        return Element(self.pasture, ab.add(self.vec, other.vec))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        if other.vec is None:
            raise ZeroDivisionError("division by zero in a pasture")
        if self.vec is None:
            return self
        return Element(self.pasture, ab.sub(self.vec, other.vec))

    def __rtruediv__(self, other):
        return self._other(other) / self

    def __pow__(self, k):
        if self.vec is None:
            if k <= 0:
                raise ZeroDivisionError("zero to a nonpositive power")
            return self
        return Element(self.pasture, ab.scale(self.vec, k))

    def __neg__(self):
        if self.vec is None:
            return self
        return Element(self.pasture, ab.add(self.vec, unit(EPS)))

    def __eq__(self, other):
        if not isinstance(other, Element):
            try:
                other = self._other(other)
            except Exception:
                return NotImplemented
        if other.pasture is not self.pasture:
            return False
        if self.vec is None or other.vec is None:
            return self.vec is None and other.vec is None
        return self.coords() == other.coords()

    def __hash__(self):
        return hash(self.coords())

    def __repr__(self):
        if self.vec is None:
            return "0"
        return format_word(self.vec, self.pasture.names)


# ---------------------------------------------------------------------------
# construction


def _to_vec(x, names):
    """Word, element or vector to a sparse vector (``None`` for zero)."""
    if isinstance(x, Element):
        return x.vec
    if isinstance(x, str):
        return parse_word(x, names)
    if x is None:
        return None
    if isinstance(x, dict) and ("exps" in x or "sign" in x):
        return _json_elem(x, names)
    return sparse(x, len(names) + 1)


def _fold_terms(terms, names):
    """Split additive relations into multiplicative relations (binary terms)
    and all-unit ternary terms."""
    rels, ternary = [], []
    for term in terms:
        if len(term) != 3:
            raise ParseError(f"null term must have three entries: {term!r}")
        vecs = [_to_vec(x, names) for x in term]
        units = [v for v in vecs if v is not None]
        if len(units) == 3:
            ternary.append(tuple(units))
        elif len(units) == 2:
            # a + b = 0 means b = ε·a
            rels.append(combine(((1, units[1]), (-1, units[0]), (1, unit(EPS)))))
        elif len(units) == 1:
            raise InconsistentRelation(f"term {term!r} forces a unit to be zero")
    return rels, ternary


def from_presentation(generators, mult_relations=(), add_relations=(), name_hint=None):
    """Pasture ``F±(generators) // (relations)``.

    ``mult_relations`` are words (or vectors) that equal 1; ``add_relations``
    are triples of words, with ``"0"`` or ``None`` for zero.  Binary terms
    become multiplicative relations, ternary all-unit terms become hexagons.
    """
    names = list(generators)
    for n in names:
        if not isinstance(n, str) or not n or n in ("sign", "0", "1", "eps", "ε") or re.search(r"[\s*/^]", n):
            raise ParseError(f"invalid generator name {n!r}")
    rels = []
    for r in mult_relations:
        v = _to_vec(r, names)
        if v is None:
            raise InconsistentRelation("a multiplicative relation cannot be 0")
        rels.append(v)
    extra, ternary = _fold_terms(add_relations, names)
    return Pasture(names, rels + extra, ternary, name_hint)


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True, eq=False)
class PastureMorphism:
    """Morphism given by the image (a sparse vector over ``target``) of every
    named generator of ``source``; ``ε`` always maps to ``ε``."""

    source: Pasture
    target: Pasture
    images: tuple

    def __post_init__(self):
        if len(self.images) != len(self.source.names):
            raise DimensionMismatch("one image per source generator is required")

    def image(self, vec):
        terms = []
        for i, v in vec:
            terms.append((v, unit(EPS) if i == EPS else self.images[i - 1]))
        return combine(terms)

    def __call__(self, x):
        if isinstance(x, Element):
            x = x.vec
        elif isinstance(x, str):
            x = parse_word(x, self.source.names)
        if x is None:
            return self.target.zero
        return Element(self.target, self.image(sparse(x, self.source.ngens)))

    def image_coords(self):
        """Canonical coordinates of the image of every generator."""
        return tuple(self.target.group.coords(v) for v in self.images)

    def __eq__(self, other):
        return (
            isinstance(other, PastureMorphism)
            and other.source is self.source
            and other.target is self.target
            and other.image_coords() == self.image_coords()
        )

    def __hash__(self):
        return hash(self.image_coords())

    def compose(self, first):
        """``self ∘ first``."""
        return PastureMorphism(first.source, self.target, tuple(self.image(v) for v in first.images))

    def describe(self):
        return {
            name: repr(Element(self.target, v)) for name, v in zip(self.source.names, self.images)
        }


def identity_morphism(P):
    return PastureMorphism(P, P, tuple(unit(i + 1) for i in range(len(P.names))))


def is_morphism(f):
    """Check well-definedness on relations and preservation of null terms."""
    P, Q = f.source, f.target
    for v in f.images:
        if v and v[-1][0] >= Q.ngens:
            raise DimensionMismatch("image vector exceeds target generators")
    for r in P.relations:
        if not Q.group.is_identity(f.image(r)):
            return False
    for h in P.hexagons:
        coords = [Q.group.coords(f.image(x)) for x in h.term]
        if Q.hexagon_of_coords(*coords) is None:
            return False
    return True


def _spans(Q, rows):
    """Whether the given canonical coordinate vectors generate ``Q``'s unit group."""
    t = Q.group.dimension
    if t == 0:
        return True
    mat = [list(r) for r in rows]
    for i, d in enumerate(Q.group.moduli):
        if d:
            mat.append([d if j == i else 0 for j in range(t)])
    if not mat:
        return False
    D = [row[:] for row in mat]
    rank = ab._snf(D)
    return rank == t and all(D[i][i] == 1 for i in range(t))


def is_isomorphism(f):
    """A morphism that is bijective on units and on hexagons."""
    P, Q = f.source, f.target
    if numerical_type(P) != numerical_type(Q) or not is_morphism(f):
        return False
    if not _spans(Q, list(f.image_coords()) + [Q.eps]):
        return False
    seen = set()
    for h in P.hexagons:
        coords = [Q.group.coords(f.image(x)) for x in h.term]
        seen.add(Q.hexagon_of_coords(*coords))
    return len(seen) == len(Q.hexagons)


# ---------------------------------------------------------------------------
# invariants


def numerical_type(P):
    """``(free_rank, invariant_factors, minus_one_trivial, hexagon_count)``."""
    return (P.group.free_rank, P.group.invariant_factors, P.minus_one_trivial(), len(P.hexagons))


def hexagons(P):
    return list(P.hexagons)


def fundamental_elements(P):
    """Canonical list of fundamental elements (first coordinates of pairs)."""
    coords = sorted({p[0] for h in P.hexagons for p in h.pairs}, key=encode_coords)
    return [P.element_from_coords(c) for c in coords]


def fundamental_coords(P):
    return sorted({p[0] for h in P.hexagons for p in h.pairs}, key=encode_coords)


# ---------------------------------------------------------------------------
# operations


def _unique_names(groups):
    """Concatenate name lists, suffixing with ``@i`` when names collide."""
    flat = [n for g in groups for n in g]
    if len(set(flat)) == len(flat):
        return flat
    return [f"{n}@{i}" for i, g in enumerate(groups) for n in g]


def _shift(vec, offset):
    return tuple((i if i == EPS else i + offset, v) for i, v in vec)


def _joint(pastures, extra_relations=(), name_hint=None):
    names = _unique_names([P.names for P in pastures])
    offsets, off = [], 0
    for P in pastures:
        offsets.append(off)
        off += len(P.names)
    rels, terms = [], []
    for P, o in zip(pastures, offsets):
        rels += [_shift(r, o) for r in P.relations]
        terms += [tuple(_shift(x, o) for x in h.term) for h in P.hexagons]
    rels += list(extra_relations(offsets)) if callable(extra_relations) else list(extra_relations)
    J = Pasture(names, rels, terms, name_hint)
    J.cone = tuple(
        PastureMorphism(P, J, tuple(unit(i + 1 + o) for i in range(len(P.names))))
        for P, o in zip(pastures, offsets)
    )
    return J


def tensor(P1, P2, *more):
    """Tensor product (coproduct); ``cone`` holds the canonical inclusions."""
    return _joint([P1, P2, *more])


def quotient(P, terms, name_hint=None):
    """``P // terms``: binary terms become unit relations, ternary terms new
    hexagons; ``cone`` holds the canonical surjection."""
    rels, ternary = _fold_terms(terms, P.names)
    Q = Pasture(P.names, list(P.relations) + rels, [h.term for h in P.hexagons] + ternary, name_hint)
    Q.cone = (PastureMorphism(P, Q, tuple(unit(i + 1) for i in range(len(P.names)))),)
    return Q


@dataclass
class Diagram:
    """Finite diagram of pastures; ``edges`` are ``(source, target, morphism)``."""

    nodes: list
    edges: list = field(default_factory=list)
    labels: list = field(default_factory=list)

    def validate(self):
        for s, t, f in self.edges:
            if not (0 <= s < len(self.nodes) and 0 <= t < len(self.nodes)):
                raise PreconditionError(f"edge {s}->{t} has invalid endpoints")
            if f.source is not self.nodes[s] or f.target is not self.nodes[t]:
                raise PreconditionError(f"edge {s}->{t} morphism does not match its endpoints")


def colimit(D, check=True, name_hint=None):
    """Colimit as one joint presentation: all node relations and hexagons plus
    ``ι_s(g) = ι_t(f(g))`` for every edge ``f`` and source generator ``g``."""
    D.validate()
    if check:
        for s, t, f in D.edges:
            if not is_morphism(f):
                raise PreconditionError(f"edge {s}->{t} is not a pasture morphism")

    def edge_relations(offsets):
        out = []
        for s, t, f in D.edges:
            for i, img in enumerate(f.images):
                out.append(combine(((1, unit(i + 1 + offsets[s])), (-1, _shift(img, offsets[t])))))
        return out

    return _joint(list(D.nodes), edge_relations, name_hint)


# ---------------------------------------------------------------------------
# JSON


def _json_elem(obj, names):
    if obj == "0" or obj == 0:
        return None
    if not isinstance(obj, dict):
        raise ParseError(f"bad element {obj!r}")
    index = {n: i + 1 for i, n in enumerate(names)}
    acc = {}
    sign = obj.get("sign", 1)
    if sign not in (1, -1):
        raise ParseError(f"bad sign {sign!r}")
    if sign == -1:
        acc[EPS] = 1
    for g, e in obj.get("exps", {}).items():
        if g not in index or not isinstance(e, int):
            raise ParseError(f"bad exponent entry {g!r}: {e!r}")
        acc[index[g]] = e
    return tuple(sorted((i, v) for i, v in acc.items() if v))


def _elem_json(vec, names):
    sign = -1 if dict(vec).get(EPS, 0) % 2 else 1
    return {"sign": sign, "exps": {names[i - 1]: v for i, v in vec if i != EPS}}


def to_json(P):
    """``pasture/v1`` document for the presentation of ``P``."""
    rels = []
    for r in P.relations:
        d = {P.names[i - 1]: v for i, v in r if i != EPS}
        d["sign"] = -1 if dict(r).get(EPS, 0) % 2 else 1
        rels.append(d)
    terms = [[_elem_json(x, P.names) for x in t] for t in P.terms]
    out = {"format": "pasture/v1", "generators": list(P.names), "mult_relations": rels, "add_relations": terms}
    if P.name_hint:
        out["name"] = P.name_hint
    return out


def from_json(obj):
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "generators" not in obj:
        raise ParseError("pasture/v1 document needs 'generators'")
    if obj.get("format", "pasture/v1") != "pasture/v1":
        raise ParseError(f"unsupported format {obj.get('format')!r}")
    names = obj["generators"]
    rels = []
    for r in obj.get("mult_relations", []):
        if not isinstance(r, dict):
            raise ParseError(f"bad multiplicative relation {r!r}")
        r = dict(r)
        sign = r.pop("sign", 1)
        rels.append(_json_elem({"sign": sign, "exps": r}, names))
    terms = []
    for t in obj.get("add_relations", []):
        if not isinstance(t, list) or len(t) != 3:
            raise ParseError(f"bad additive relation {t!r}")
        terms.append([_json_elem(x, names) for x in t])
    return from_presentation(names, rels, terms, obj.get("name"))


def dumps(P):
    return json.dumps(to_json(P), sort_keys=True, indent=1)
