"""Named pastures.

Presentations are given over ``F±`` as generator names, words equal to 1
and null terms.  Finite fields are built from their arithmetic: one
generator ``g`` for a primitive element, the relation ``g^(q-1) = 1``, the
sign ``ε = g^((q-1)/2)`` (or ``ε = 1`` in characteristic 2) and one null term
for every all-unit triple summing to zero.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import PreconditionError
from .pasture import EPS, Pasture, from_presentation

# ---------------------------------------------------------------------------
# finite fields


def _prime_field(p):
    def add(a, b):
        return (a + b) % p

    def mul(a, b):
        return a * b % p

    return list(range(p)), add, mul, 0, 1


def _extension(p, modulus):
    """``F_p[t] / (modulus)``; ``modulus`` lists low-to-high coefficients of a
    monic polynomial.  Elements are coefficient tuples."""
    deg = len(modulus) - 1
    elems = list(itertools.product(range(p), repeat=deg))

    def add(a, b):
        return tuple((x + y) % p for x, y in zip(a, b))

    def mul(a, b):
        prod = [0] * (2 * deg - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        for k in range(len(prod) - 1, deg - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(deg + 1):
                    prod[k - deg + i] -= c * modulus[i]
        return tuple(v % p for v in prod[:deg])

    zero = (0,) * deg
    one = (1,) + (0,) * (deg - 1)
    return elems, add, mul, zero, one


_FIELDS = {
    2: lambda: _prime_field(2),
    3: lambda: _prime_field(3),
    4: lambda: _extension(2, [1, 1, 1]),
    5: lambda: _prime_field(5),
    7: lambda: _prime_field(7),
    8: lambda: _extension(2, [1, 1, 0, 1]),
    9: lambda: _extension(3, [1, 0, 1]),
}


def field_tables(q):
    """``(units, log, add, mul, zero, one, generator)`` for ``F_q`` where
    ``log`` maps each unit to its discrete logarithm."""
    if q not in _FIELDS:
        raise PreconditionError(f"unsupported field order {q}")
    elems, add, mul, zero, one = _FIELDS[q]()
    units = [x for x in elems if x != zero]
    for g in units:
        seq, x = [], one
        for _ in range(q - 1):
            seq.append(x)
            x = mul(x, g)
        if len(set(seq)) == q - 1:
            return seq, {x: k for k, x in enumerate(seq)}, add, mul, zero, one, g
    raise AssertionError("no primitive element")


def finite_field(q):
    """``F_q`` as a pasture with generator ``g`` a primitive element."""
    seq, log, add, mul, zero, one, _ = field_tables(q)
    m = q - 1
    rels = [((1, m),)]
    if q % 2:
        rels.append(((EPS, 1), (1, -(m // 2))))
    else:
        rels.append(((EPS, 1),))
    terms = []
    for a, b in itertools.combinations_with_replacement(range(m), 2):
        s = add(seq[a], seq[b])
        if s == zero:
            continue
        c = log[_neg(s, add, seq, zero)]
        if c >= b:
            terms.append((((1, a),) if a else (), ((1, b),) if b else (), ((1, c),) if c else ()))
    return Pasture(["g"], rels, terms, f"F{q}")


def _neg(x, add, seq, zero):
    for y in seq:
        if add(x, y) == zero:
            return y
    raise AssertionError


# ---------------------------------------------------------------------------
# U_k


def uk_presentation(k):
    """Presentation of the ``k``-regular partial field ``U_k``.

    Generators ``d(i,j) = α_j - α_i`` for ``-1 <= i < j <= k``, ``j != 0``,
    with ``α_{-1} = 0`` and ``α_0 = 1`` so that ``α_0 - α_{-1} = 1``.
    """
    if k < 1:
        raise PreconditionError("U_k needs k >= 1")
    idx = list(range(-1, k + 1))
    names, pos = [], {}
    for i, j in itertools.combinations(idx, 2):
        if (i, j) != (-1, 0):
            pos[(i, j)] = len(names) + 1
            names.append(f"d{i}_{j}".replace("-", "m"))

    def diff(a, b):
        """Sparse vector of ``α_a - α_b``."""
        lo, hi = min(a, b), max(a, b)
        vec = {} if (lo, hi) == (-1, 0) else {pos[(lo, hi)]: 1}
        if a < b:  # α_a - α_b = -(α_b - α_a)
            vec[EPS] = 1
        return vec

    def word(num, den):
        acc = {}
        for d in num:
            for g, v in d.items():
                acc[g] = acc.get(g, 0) + v
        for d in den:
            for g, v in d.items():
                acc[g] = acc.get(g, 0) - v
        return tuple(sorted((g, v) for g, v in acc.items() if v))

    minus_one = ((EPS, 1),)
    terms = []
    for i, j, l in itertools.combinations(idx, 3):
        terms.append((word([diff(i, l)], [diff(j, l)]), word([diff(i, j)], [diff(l, j)]), minus_one))
    for i, j, l, m in itertools.combinations(idx, 4):
        a = word([diff(i, l), diff(j, m)], [diff(i, m), diff(j, l)])
        b = word([diff(i, j), diff(l, m)], [diff(i, m), diff(l, j)])
        terms.append((a, b, minus_one))
    return names, terms


def uk(k):
    names, terms = uk_presentation(k)
    return Pasture(names, [], terms, f"U{k}")


# ---------------------------------------------------------------------------
# catalog


_PRESENTATIONS = {
    "regular": ([], [], []),
    "K": ([], ["-1"], [["1", "1", "1"]]),
    "S": ([], [], [["1", "1", "-1"]]),
    "W": ([], [], [["1", "1", "1"], ["1", "1", "-1"]]),
    "F2": ([], ["-1"], []),
    "F3": ([], [], [["1", "1", "1"]]),
    "U": (["x", "y"], [], [["x", "y", "-1"]]),
    "D": (["x"], [], [["x", "-1", "-1"]]),
    "H": (["z"], [], [["z^3", "1", "0"], ["z", "z^-1", "-1"]]),
    "G": (["x"], [], [["x^2", "x", "-1"]]),
    "V": (
        ["x1", "x2", "x3", "x4", "x5"],
        [],
        [[f"x{i}", f"x{(i - 2) % 5 + 1}*x{i % 5 + 1}", "-1"] for i in range(1, 6)],
    ),
    "H2": (["i", "x"], [], [["i^2", "1", "0"], ["x", "-i", "-1"], ["x^2", "-i", "-i"]]),
    "H3": (
        ["x", "y", "z"],
        [],
        [["x", "y", "-1"], ["x*y", "z", "-1"], ["x", "y^2", "-z"], ["x^2", "y", "-z"]],
    ),
    "H4": (
        ["x", "y", "z", "s", "t", "w"],
        [],
        [
            ["x", "s", "-1"],
            ["s/z", "x*t/z", "-1"],
            ["x*t/w", "y*s/w", "-1"],
            ["y", "t", "-1"],
            ["t/z", "y*s/z", "-1"],
            ["w/y/z", "-x*t^2/y/z", "-1"],
            ["x*y", "z", "-1"],
            ["w/z", "s*t/z", "-1"],
            ["w/x/z", "-y*s^2/x/z", "-1"],
        ],
    ),
    "K2": (["x", "y", "z"], [], [["y", "-x", "-1"], ["z", "-y", "-1"], ["y^2", "x*z", "-1"]]),
    "P4": (
        ["x", "y", "z", "w"],
        [],
        [["x", "y", "-1"], ["z", "-x", "-1"], ["w", "-y", "-1"], ["x^2", "y*z", "-1"], ["y^2", "x*w", "-1"]],
    ),
}

FIELD_ORDERS = (2, 3, 4, 5, 7, 8, 9)

# names accepted by ``named``; F2 and F3 come from their presentations
CATALOG_NAMES = (
    "regular", "K", "S", "W", "F2", "F3", "F4", "F5", "F7", "F8", "F9",
    "U", "D", "H", "G", "V", "U_k(k)", "H2", "H3", "H4", "K2", "P4",
)

_ALIASES = {"F±": "regular", "F_pm": "regular", "Fpm": "regular"}


@lru_cache(maxsize=None)
def named(name):
    """The catalog pasture called ``name``; ``U_k(3)``, ``U3`` and ``U_3`` all
    name the 3-regular partial field."""
    name = _ALIASES.get(name, name)
    if name in _PRESENTATIONS:
        gens, rels, terms = _PRESENTATIONS[name]
        return from_presentation(gens, rels, terms, name)
    if name.startswith("F") and name[1:].isdigit() and int(name[1:]) in FIELD_ORDERS:
        return finite_field(int(name[1:]))
    k = _uk_index(name)
    if k is not None:
        return uk(k)
    raise PreconditionError(f"unknown pasture {name!r}")


def _uk_index(name):
    for prefix, suffix in (("U_k(", ")"), ("U_", ""), ("U", "")):
        if name.startswith(prefix) and name.endswith(suffix):
            body = name[len(prefix): len(name) - len(suffix)]
            if body.isdigit() and int(body) >= 1:
                return int(body)
    return None


def identification_catalog():
    """Pastures used by ``identify``: the named presentations, the fields
    and ``U_1 .. U_4``."""
    names = [n for n in _PRESENTATIONS] + [f"F{q}" for q in FIELD_ORDERS if q not in (2, 3)]
    names += [f"U{k}" for k in (2, 3, 4)]
    return [(n, named(n)) for n in names]
