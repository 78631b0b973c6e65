"""Command-line driver.

Exit codes: 0 success, 1 parse error, 2 precondition violation, 3 search
budget exceeded, 4 verification failure.  Errors are reported as one JSON
object on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import pasture as pmod
from .catalog import CATALOG_NAMES, named
from .errors import FoundryError, ParseError, PreconditionError
from .matroid import from_json as matroid_from_json
from .matroid import parse_canonical_text
from .matroid_catalog import CATALOG, named_matroid

METHOD_CHOICES = ("grs", "diagram", "diagram2", "diagram3", "lattice", "lattice3", "lattice-le4", "lattice-le3")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_json(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid {what} JSON: {exc}") from exc


def load_matroid(spec):
    """Catalog name first, then a JSON or canonical-text file."""
    try:
        return named_matroid(spec)
    except PreconditionError:
        if not os.path.exists(spec):
            raise
    text = _read(spec).strip()
    if text.startswith("{"):
        return matroid_from_json(_load_json(text, "matroid"))
    return parse_canonical_text(text)


def load_pasture(spec):
    """Catalog name first, then a ``pasture/v1`` file."""
    try:
        return named(spec)
    except PreconditionError:
        if not os.path.exists(spec):
            raise
    return pmod.from_json(_load_json(_read(spec), "pasture"))


def _pasture_node(obj):
    if isinstance(obj, str):
        return load_pasture(obj)
    return pmod.from_json(obj)


def load_diagram(path):
    """``{"nodes": [name | pasture/v1 ...], "edges": [{"source", "target", "images"}]}``;
    images are words in the target's generators, one per source generator."""
    doc = _load_json(_read(path), "diagram")
    if not isinstance(doc, dict) or "nodes" not in doc:
        raise ParseError("diagram document needs 'nodes'")
    nodes = [_pasture_node(n) for n in doc["nodes"]]
    edges = []
    for e in doc.get("edges", []):
        try:
            s, t, images = e["source"], e["target"], e["images"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad edge {e!r}") from exc
        if not (isinstance(s, int) and isinstance(t, int) and 0 <= s < len(nodes) and 0 <= t < len(nodes)):
            raise PreconditionError(f"edge {s}->{t} has invalid endpoints")
        vecs = []
        for w in images:
            v = pmod.parse_word(w, nodes[t].names) if isinstance(w, str) else pmod._json_elem(w, nodes[t].names)
            if v is None:
                raise PreconditionError("a morphism cannot send a unit to 0")
            vecs.append(v)
        edges.append((s, t, pmod.PastureMorphism(nodes[s], nodes[t], tuple(vecs))))
    return pmod.Diagram(nodes, edges)


def load_terms(path):
    """Null terms: a JSON list of triples, or ``{"add_relations": [...]}``."""
    doc = _load_json(_read(path), "relations")
    if isinstance(doc, dict):
        doc = doc.get("add_relations", [])
    if not isinstance(doc, list):
        raise ParseError("relations file must hold a list of triples")
    return doc


# ---------------------------------------------------------------------------
# commands


def cmd_compute(args):
    from .foundation import foundation

    M = load_matroid(args.matroid)
    report = foundation(M, args.method, cross_check=args.cross_check, identify_result=args.identify,
                        threads=args.threads)
    return report.to_json()


def cmd_hom(args):
    from .search import hom_enumerate

    P, Q = load_pasture(args.source), load_pasture(args.target)
    homs = hom_enumerate(P, Q)
    out = {"source": args.source, "target": args.target, "count": len(homs)}
    if args.list:
        out["morphisms"] = [f.describe() for f in homs]
    return out


def _generators(auts, identity):
    """A generating set of the automorphism group, chosen greedily in order."""
    key = lambda f: f.image_coords()  # noqa: E731
    group = {key(identity): identity}
    gens = []
    for f in auts:
        if key(f) in group:
            continue
        gens.append(f)
        frontier = list(group.values())
        while frontier:
            nxt = []
            for g in frontier:
                for h in gens:
                    c = h.compose(g)
                    if key(c) not in group:
                        group[key(c)] = c
                        nxt.append(c)
            frontier = nxt
    return gens


def cmd_aut(args):
    from .search import automorphisms

    P = load_pasture(args.pasture)
    auts = automorphisms(P)
    gens = _generators(auts, pmod.identity_morphism(P))
    return {"pasture": args.pasture, "count": len(auts), "generators": [f.describe() for f in gens]}


def cmd_representable(args):
    from .foundation import grs_presentation
    from .search import hom_exists

    M = load_matroid(args.matroid)
    F = grs_presentation(M).pasture
    targets = [t for t in args.over.split(",") if t]
    row = {}
    for t in targets:
        T = load_pasture(t)
        if not T.group.is_finite():
            raise PreconditionError(f"target {t} has an infinite unit group")
        row[t] = hom_exists(F, T)
    return {"matroid": args.matroid, "row": row}


def cmd_tensor(args):
    if len(args.pastures) < 2:
        raise ParseError("tensor needs at least two pastures")
    return pmod.to_json(pmod.tensor(*(load_pasture(p) for p in args.pastures)))


def cmd_quotient(args):
    return pmod.to_json(pmod.quotient(load_pasture(args.pasture), load_terms(args.relations)))


def cmd_colimit(args):
    return pmod.to_json(pmod.colimit(load_diagram(args.diagram)))


def cmd_catalog(args):
    if args.list == "matroids":
        return {"matroids": list(CATALOG)}
    return {"pastures": list(CATALOG_NAMES)}


def cmd_table(args):
    from .represent import DEFAULT_TARGETS, morphism_table, table_tsv

    rows = args.rows.split(",")
    targets = args.targets.split(",") if args.targets else list(DEFAULT_TARGETS)
    table = morphism_table(rows, targets)
    if args.format == "tsv":
        return table_tsv(table)
    return {"rows": rows, "columns": targets, "table": table}


def cmd_verify_suite(args):
    from .acceptance import run_suite

    results = run_suite(fast=args.fast)
    for r in results:
        print(r.line(), file=sys.stderr)
    out = {"results": [{"criterion": r.number, "title": r.title, "passed": r.passed, "detail": r.detail}
                       for r in results]}
    if not all(r.passed for r in results):
        out["_exit"] = 4
    return out


def build_parser():
    p = _Parser(prog="foundry", description="Pastures, matroid foundations and representability.")
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--budget", type=int, help="search budget (overrides FOUNDRY_BUDGET)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="foundation of a matroid")
    c.add_argument("--matroid", required=True)
    c.add_argument("--method", choices=METHOD_CHOICES, default="grs")
    c.add_argument("--cross-check", action="store_true", default=None)
    c.add_argument("--identify", action="store_true")
    c.add_argument("--threads", type=int, default=1)
    c.set_defaults(func=cmd_compute)

    h = sub.add_parser("hom", help="morphisms between pastures")
    h.add_argument("--from", dest="source", required=True)
    h.add_argument("--to", dest="target", required=True)
    h.add_argument("--list", action="store_true")
    h.set_defaults(func=cmd_hom)

    a = sub.add_parser("aut", help="automorphism group of a pasture")
    a.add_argument("--pasture", required=True)
    a.set_defaults(func=cmd_aut)

    r = sub.add_parser("representable", help="representability over finite pastures")
    r.add_argument("--matroid", required=True)
    r.add_argument("--over", required=True)
    r.set_defaults(func=cmd_representable)

    t = sub.add_parser("tensor", help="tensor product of pastures")
    t.add_argument("pastures", nargs="+")
    t.set_defaults(func=cmd_tensor)

    q = sub.add_parser("quotient", help="quotient by null terms")
    q.add_argument("pasture")
    q.add_argument("--relations", required=True)
    q.set_defaults(func=cmd_quotient)

    co = sub.add_parser("colimit", help="colimit of a diagram of pastures")
    co.add_argument("--diagram", required=True)
    co.set_defaults(func=cmd_colimit)

    ca = sub.add_parser("catalog", help="list catalog names")
    ca.add_argument("--list", choices=("pastures", "matroids"), default="pastures")
    ca.set_defaults(func=cmd_catalog)

    tb = sub.add_parser("table", help="morphism-existence table")
    tb.add_argument("--rows", default="regular,U,V,F2,F3,K,S,H,D,G")
    tb.add_argument("--targets")
    tb.add_argument("--format", choices=("json", "tsv"), default="json")
    tb.set_defaults(func=cmd_table)

    v = sub.add_parser("verify-suite", help="run the acceptance suite")
    v.add_argument("--fast", action="store_true")
    v.set_defaults(func=cmd_verify_suite)
    return p


def _emit(result, out):
    if isinstance(result, str):
        text = result
    else:
        text = json.dumps(result, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(exc):
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
    witness = getattr(exc, "witness", None)
    if witness is not None:
        payload["witness"] = repr(witness)
    sys.stderr.write(json.dumps(payload, ensure_ascii=False) + "\n")
    return exc.exit_code


def main(argv=None):
    saved = os.environ.get("FOUNDRY_BUDGET")
    try:
        args = build_parser().parse_args(argv)
        if args.budget is not None:
            os.environ["FOUNDRY_BUDGET"] = str(args.budget)
        result = args.func(args)
        code = 0
        if isinstance(result, dict) and "_exit" in result:
            code = result.pop("_exit")
        _emit(result, args.out)
        return code
    except FoundryError as exc:
        return _fail(exc)
    except RecursionError as exc:
        return _fail(PreconditionError(f"input too large: {exc}"))
    finally:
        # --budget applies to this call only
        if saved is None:
            os.environ.pop("FOUNDRY_BUDGET", None)
        else:
            os.environ["FOUNDRY_BUDGET"] = saved


if __name__ == "__main__":
    sys.exit(main())
