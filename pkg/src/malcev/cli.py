"""Command line driver.

Exit codes: 0 the property holds (or the command succeeded), 1 the property
fails (a witness is printed), 2 bad input, 3 a capacity bound was hit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from collections import Counter

from . import corpus
from .core import (DEFAULT_MAX_ORDER, AssociativityError, CapacityError, FiniteSemigroup,
                   SemigroupError, validate_associativity)
from .formats import ParseError, format_text, parse, to_document
from .graphs import GraphKind, build_graph, decompose, export_dot
from .nilpotency import (is_malcev_nilpotent, is_neumann_taylor, is_positively_engel,
                         is_weakly_malcev_nilpotent)
from .pseudo import is_pseudo_nilpotent
from .stems import (analyze, is_strong_pseudo_nilpotent, k_a_sets, maximal_k_a,
                    verify_conformance)
from .structure import check_c0s_pseudo_constraint, principal_series, FactorKind

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


def _load(args) -> FiniteSemigroup:
    if args.fixture:
        s = corpus.get_fixture(args.fixture).semigroup
    else:
        text = sys.stdin.read() if args.input in (None, "-") else open(args.input).read()
        s = parse(text, validate=False)
    if s.order > args.max_order:
        raise CapacityError(f"order {s.order} exceeds --max-order {args.max_order}")
    if not args.skip_validate:
        bad = validate_associativity(s.table)
        if bad is not None:
            raise AssociativityError(bad, s.names)
    return s


def _digest(s: FiniteSemigroup) -> str:
    return hashlib.sha256(format_text(s).encode()).hexdigest()[:16]


def _pseudo_kw(args) -> dict:
    return {"max_order": args.max_order, "max_subsemigroups": args.max_subsemigroups}


# -- commands -----------------------------------------------------------------

def cmd_validate(args) -> int:
    s = _load(args)
    _emit({"input": _digest(s), "order": s.order, "associative": True,
           "identity": None if s.identity is None else s.names[s.identity],
           "zero": None if s.zero is None else s.names[s.zero]})
    return EXIT_OK


def cmd_nilpotency(args) -> int:
    s = _load(args)
    wanted = [p for p in ("mn", "nt", "pe", "wmn") if getattr(args, p)] or ["mn", "nt", "pe", "wmn"]
    out = {"input": _digest(s)}
    ok = True
    for p in wanted:
        if p == "mn":
            r = is_malcev_nilpotent(s)
            out["mn"] = {"holds": r.nilpotent, "class": r.nilpotency_class,
                         "witness": r.witness.as_dict(s) if r.witness else None}
            ok &= r.nilpotent
        else:
            r = {"nt": is_neumann_taylor, "pe": is_positively_engel,
                 "wmn": is_weakly_malcev_nilpotent}[p](s)
            entry = {"holds": r.holds, "witness": r.witness.as_dict(s) if r.witness else None}
            if r.detail:
                entry["multipliers"] = {k: (None if v is None else s.names[v]) for k, v in r.detail.items()}
            out[p] = entry
            ok &= r.holds
    _emit(out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_series(args) -> int:
    s = _load(args)
    series = principal_series(s, args.tie_break)
    factors = []
    for f in series.factors:
        entry = {"class": s.labels(f.j_class), "kind": f.kind.value, "nilpotent": f.nilpotent}
        if f.kind is not FactorKind.NULL:
            entry["rees"] = f.rees.as_dict(s)
            entry["constraint"] = check_c0s_pseudo_constraint(s, f).value
        factors.append(entry)
    _emit({"input": _digest(s), "chain": [s.labels(c) for c in series.chain], "factors": factors})
    return EXIT_OK


def cmd_graph(args) -> int:
    s = _load(args)
    g = build_graph(s, args.kind)
    d = decompose(g)
    if args.format == "dot":
        sys.stdout.write(export_dot(g, d))
    else:
        doc = g.as_dict()
        doc["components"] = [s.labels(c) for c in d.components]
        doc["isolated"] = s.labels(d.isolated)
        _emit(doc)
    return EXIT_OK


def cmd_pseudo(args) -> int:
    s = _load(args)
    r = is_pseudo_nilpotent(s, threads=args.threads, **_pseudo_kw(args))
    doc = {"input": _digest(s), "pseudo_nilpotent": r.holds,
           "subsemigroups": r.subsemigroups}
    if r.witness:
        doc["witness"] = r.witness.as_dict(s)
        doc["non_edge"] = [s.names[v] for v in r.witness.non_edge(s)]
    _emit(doc)
    return EXIT_OK if r.holds else EXIT_FAIL


def _analysis(args, s):
    r = is_pseudo_nilpotent(s, threads=args.threads, **_pseudo_kw(args))
    if not r.holds:
        _emit({"input": _digest(s), "pseudo_nilpotent": False,
               "witness": r.witness.as_dict(s) if r.witness else None})
        return None
    return analyze(s, args.tie_break, check_pseudo=False)


def cmd_strong(args) -> int:
    s = _load(args)
    a = _analysis(args, s)
    if a is None:
        return EXIT_FAIL
    rep = is_strong_pseudo_nilpotent(s, a)
    _emit({"input": _digest(s), "pseudo_nilpotent": True, "strong": rep.holds,
           "violations": rep.violations})
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_decompose(args) -> int:
    s = _load(args)
    a = _analysis(args, s)
    if a is None:
        return EXIT_FAIL
    doc = {"input": _digest(s), "pseudo_nilpotent": True}
    doc.update(a.as_dict())
    kas = k_a_sets(a)
    doc["K_a"] = {s.names[k.a]: s.labels(k.members) for k in kas}
    doc["K_a_maximal"] = [s.labels(m) for m in maximal_k_a(kas)]
    doc["components"] = [s.labels(c) for c in a.components.nontrivial()]
    _emit(doc)
    return EXIT_OK


def cmd_conform(args) -> int:
    s = _load(args)
    a = _analysis(args, s)
    if a is None:
        return EXIT_FAIL
    rep = verify_conformance(a)
    doc = {"input": _digest(s)}
    doc.update(rep.as_dict())
    _emit(doc)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_corpus(args) -> int:
    if args.action == "list":
        for key in corpus.fixture_keys():
            fx = corpus.get_fixture(key)
            print(f"{key}\t{fx.semigroup.order}\t{fx.provenance}")
        return EXIT_OK
    if not args.key:
        raise ParseError("corpus get needs a fixture key")
    fx = corpus.get_fixture(args.key)
    if args.json:
        _emit(to_document(fx.semigroup, fx.expected))
    else:
        sys.stdout.write(format_text(fx.semigroup))
    return EXIT_OK


def cmd_family(args) -> int:
    s = corpus.chained_band_family(args.n)
    if args.json:
        _emit(to_document(s))
    else:
        sys.stdout.write(format_text(s))
    return EXIT_OK


def cmd_census(args) -> int:
    sgs = corpus.enumerate_small(args.order, args.up_to, allow_order4=args.allow_order4)
    doc = {"order": args.order, "up_to": args.up_to, "count": len(sgs)}
    if args.properties:
        tally = Counter()
        for s in sgs:
            tally["mn"] += is_malcev_nilpotent(s).nilpotent
            tally["pseudo"] += is_pseudo_nilpotent(s, witness=False).holds
            tally["band"] += s.is_band()
            tally["commutative"] += s.is_commutative()
        doc["with_property"] = dict(sorted(tally.items()))
    _emit(doc)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="malcev", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(sp):
        sp.add_argument("input", nargs="?", help="table file (text or JSON); '-' or omitted reads stdin")
        sp.add_argument("--fixture", help="use a built-in fixture instead of a file")
        sp.add_argument("--skip-validate", action="store_true", help="do not check associativity")
        sp.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
        sp.add_argument("--max-subsemigroups", type=int, default=None)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--tie-break", choices=["lex", "reverse"], default="lex",
                        help="which minimal J-class to add first when building the principal series")
        return sp

    with_input(sub.add_parser("validate", help="check the table")).set_defaults(func=cmd_validate)
    sp = with_input(sub.add_parser("nilpotency", help="MN, NT, PE and WMN verdicts"))
    for flag in ("mn", "nt", "pe", "wmn"):
        sp.add_argument(f"--{flag}", action="store_true")
    sp.set_defaults(func=cmd_nilpotency)
    with_input(sub.add_parser("series", help="principal series and Rees coordinates")).set_defaults(func=cmd_series)
    sp = with_input(sub.add_parser("graph", help="non-nilpotent graphs"))
    sp.add_argument("--kind", choices=[k.value for k in GraphKind], default="upper")
    sp.add_argument("--format", choices=["dot", "json"], default="json")
    sp.set_defaults(func=cmd_graph)
    with_input(sub.add_parser("pseudo", help="pseudo-nilpotency with witness")).set_defaults(func=cmd_pseudo)
    with_input(sub.add_parser("strong", help="strong pseudo-nilpotency")).set_defaults(func=cmd_strong)
    with_input(sub.add_parser("decompose", help="K, roots, stems, connections, K_a")).set_defaults(func=cmd_decompose)
    with_input(sub.add_parser("conform", help="structural consequence checks")).set_defaults(func=cmd_conform)

    sp = sub.add_parser("corpus", help="built-in fixtures")
    sp.add_argument("action", choices=["list", "get"])
    sp.add_argument("key", nargs="?")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_corpus)

    sp = sub.add_parser("family", help="print a member of the chained band family")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("census", help="count small semigroups")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--up-to", choices=["iso", "iso_and_anti"], default="iso")
    sp.add_argument("--allow-order4", action="store_true")
    sp.add_argument("--properties", action="store_true", help="also tally MN, pseudo, band, commutative")
    sp.set_defaults(func=cmd_census)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as e:
        print(f"capacity: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (SemigroupError, KeyError, OSError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
