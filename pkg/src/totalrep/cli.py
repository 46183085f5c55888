"""Command-line front end.

Decision verbs exit 0 for yes and 1 for no; malformed input exits 2.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import baire, hierarchy, lattice
from .degrees import DegreeSpace, minimize
from .enumeration import random_word
from .errors import TotalRepError
from .forest import find_morphism
from .textio import (
    as_table,
    export_dot,
    format_forest,
    format_set,
    format_transducer,
    format_word,
    parse_families,
    parse_forest,
    parse_poset,
    parse_transducer,
    parse_word,
)

YES, NO, USAGE = 0, 1, 2


class _Out:
    def __init__(self, stream, as_json):
        self.stream = stream
        self.as_json = as_json

    def emit(self, text, data=None):
        if self.as_json:
            text = json.dumps(data, sort_keys=True)
        if not text.endswith("\n"):
            text += "\n"
        self.stream.write(text)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _forests(args, *texts):
    if args.k is not None:
        return [parse_forest(t, args.k) for t in texts]
    # infer one shared k so that the forests are comparable
    loose = [parse_forest(t) for t in texts]
    k = max(F.k for F in loose)
    return [parse_forest(t, k) for t in texts]


def _yesno(flag):
    return "yes" if flag else "no"


def _lattice_data(L, extra=None):
    data = {"size": L.size, "elements": list(L.captions)}
    data.update(extra or {})
    return data


def _lattice_text(L, extra=None):
    lines = [f"size: {L.size}"]
    lines += [f"{key}: {_yesno(v) if isinstance(v, bool) else v}" for key, v in (extra or {}).items()]
    lines += L.captions
    return "\n".join(lines)


# -- verbs ----------------------------------------------------------------------


def cmd_canon(args, out):
    (F,) = _forests(args, args.forest)
    text = format_forest(F)
    out.emit(text, {"canonical": text, "size": F.n, "k": F.k})
    return YES


def cmd_min(args, out):
    (F,) = _forests(args, args.forest)
    M = minimize(F)
    text = format_forest(M)
    out.emit(text, {"minimal": text, "size": M.n, "k": M.k})
    return YES


def cmd_leq(args, out):
    G, F = _forests(args, args.lower, args.upper)
    m = find_morphism(G, F)
    data = {"leq": m is not None, "morphism": None if m is None else list(m.map)}
    out.emit(_yesno(m is not None), data)
    return YES if m is not None else NO


def cmd_ideal(args, out):
    (F,) = _forests(args, args.forest)
    if args.trees:
        T = lattice.tree_poset(F)
        caps = list(T.captions())
        out.emit("\n".join([f"trees: {T.size}"] + caps), {"trees": T.size, "elements": caps})
        return YES
    L = lattice.principal_ideal(F)
    out.emit(_lattice_text(L), _lattice_data(L))
    return YES


def cmd_lattice(args, out):
    P = parse_poset(_read(args.poset))
    L = lattice.lattice_L(P) if args.onto else lattice.lattice_Lstar(P)
    if args.bottom:
        L = L.with_bottom()
    extra = {"distributive": L.is_distributive(), "all_joins": L.has_all_joins()}
    out.emit(_lattice_text(L, extra), _lattice_data(L, extra))
    return YES


def cmd_iso(args, out):
    A = parse_poset(_read(args.a))
    B = parse_poset(_read(args.b))
    if args.lattice:
        report = lattice.smain_check(A, B)
        out.emit(report.to_text(), report.to_dict())
        return YES if report.posets_isomorphic else NO
    w = lattice.poset_iso(A, B, respect_labels=args.labels)
    out.emit(_yesno(w is not None), {"isomorphic": w is not None, "map": None if w is None else list(w)})
    return YES if w is not None else NO


def _perm_verb(fn, args, out, key):
    x, y = _forests(args, args.x, args.y)
    phi = fn(x, y)
    text = "no" if phi is None else "yes\n" + "permutation: " + format_word(phi)
    out.emit(text, {key: phi is not None, "permutation": None if phi is None else list(phi)})
    return YES if phi is not None else NO


def cmd_automorphic(args, out):
    return _perm_verb(lattice.automorphic, args, out, "automorphic")


def cmd_er_reduce(args, out):
    return _perm_verb(lattice.er_reduce, args, out, "reducible")


def cmd_eval(args, out):
    (F,) = _forests(args, args.forest)
    word = parse_word(" ".join(args.word))
    d = baire.xi_eval(F, word)
    out.emit(str(d), {"determined": isinstance(d, baire.Determined), "labels": sorted(d.labels)})
    return YES


def cmd_exact(args, out):
    (F,) = _forests(args, args.forest)
    word = parse_word(" ".join(args.word))
    v = baire.exact_value(F, word)
    out.emit(str(v), {"value": v})
    return YES


def cmd_realize(args, out):
    G, F = _forests(args, args.lower, args.upper)
    m = find_morphism(G, F)
    if m is None:
        out.emit("no", {"leq": False})
        return NO
    t = baire.synthesize_realizer(m)
    text = format_transducer(t)
    data = {"leq": True, "morphism": list(m.map), "table": text}
    ok = True
    if args.check:
        rng = np.random.default_rng(args.seed)
        bad = 0
        for _ in range(args.check):
            x = random_word(rng)
            if baire.exact_value(G, x) != baire.realized_value(t, F, x):
                bad += 1
        ok = bad == 0
        text += f"checked: {args.check}\nmismatches: {bad}\n"
        data.update(checked=args.check, mismatches=bad)
    out.emit(text, data)
    return YES if ok else NO


def cmd_totalize(args, out):
    psi = parse_transducer(_read(args.table))
    g = as_table(baire.totalize(psi))
    text = format_transducer(g)
    data = {"table": text}
    if args.run is not None:
        word = parse_word(args.run)
        a, b = baire.run_transducer(psi, word), baire.run_transducer(g, word)
        text += f"psi: {format_word(a)}\ntotal: {format_word(b)}\n"
        data.update(psi=a, total=b)
    out.emit(text, data)
    return YES


def _family(families, name):
    if name not in families:
        raise TotalRepError(f"no family named {name!r}")
    return families[name]


def cmd_dh(args, out):
    universe, _, families = parse_families(_read(args.file))
    D = hierarchy.diff_op(_family(families, args.family))
    out.emit(format_set(universe, D), {"set": list(universe.elements(D))})
    return YES


def cmd_uniformize(args, out):
    universe, _, families = parse_families(_read(args.file))
    if args.rows < 1 or universe.size % args.rows:
        raise TotalRepError(f"universe of size {universe.size} is not {args.rows} rows of equal width")
    U = hierarchy.ProductUniverse.of(args.rows, universe.size // args.rows)
    B = hierarchy.IndexedFamily(U, _family(families, args.b).sets)
    C = hierarchy.IndexedFamily(U, _family(families, args.c).sets)
    A = hierarchy.sigma02_set(B, C)
    D = hierarchy.uniformize_sigma02(B, C)

    def pairs(mask):
        return [(n, x) for n in range(U.rows) for x in U.base.elements(U.section(mask, n))]

    text = "A: " + " ".join(f"({n},{x})" for n, x in pairs(A)) + "\n"
    text += "D: " + " ".join(f"({n},{x})" for n, x in pairs(D))
    out.emit(text, {"A": pairs(A), "D": pairs(D)})
    return YES


def cmd_dot(args, out):
    if args.poset:
        P = parse_poset(_read(args.source))
        L = lattice.lattice_L(P) if args.onto else lattice.lattice_Lstar(P)
    else:
        (F,) = _forests(args, args.source)
        L = lattice.principal_ideal(F, DegreeSpace(F.k))
    text = export_dot(L)
    out.emit(text, {"dot": text})
    return YES


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--k", type=int, default=None, help="label count (default: 1 + largest label)")

    p = argparse.ArgumentParser(prog="totalrep", description="Forest degrees, lattices and Baire-space semantics.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    verb("canon", cmd_canon, "canonical form of a forest").add_argument("forest")
    verb("min", cmd_min, "minimal h-equivalent forest").add_argument("forest")
    sp = verb("leq", cmd_leq, "decide G <=_h F")
    sp.add_argument("lower")
    sp.add_argument("upper")
    sp = verb("ideal", cmd_ideal, "principal ideal of a forest's degree")
    sp.add_argument("forest")
    sp.add_argument("--trees", action="store_true", help="list only the tree degrees below the forest")

    sp = verb("lattice", cmd_lattice, "L* (or L with --onto) of a poset file")
    sp.add_argument("poset")
    sp.add_argument("--onto", action="store_true")
    sp.add_argument("--bottom", action="store_true", help="adjoin a least element")

    sp = verb("iso", cmd_iso, "isomorphism of two poset files")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--lattice", action="store_true", help="also compare the L* lattices")
    sp.add_argument("--labels", action="store_true", help="require labels to match")

    for name, fn in (("automorphic", cmd_automorphic), ("er-reduce", cmd_er_reduce)):
        sp = verb(name, fn, "search a label permutation")
        sp.add_argument("x")
        sp.add_argument("y")

    for name, fn in (("eval", cmd_eval), ("exact", cmd_exact)):
        sp = verb(name, fn, "evaluate xi_F on a word" if name == "eval" else "value on word then zeros")
        sp.add_argument("forest")
        sp.add_argument("word", nargs="*")

    sp = verb("realize", cmd_realize, "transducer realizing G <=_h F")
    sp.add_argument("lower")
    sp.add_argument("upper")
    sp.add_argument("--check", type=int, default=0, metavar="N", help="spot-check on N random inputs")
    sp.add_argument("--seed", type=int, default=0)

    sp = verb("totalize", cmd_totalize, "total version of a transducer table")
    sp.add_argument("table")
    sp.add_argument("--run", default=None, metavar="WORD", help="run both machines on WORD")

    sp = verb("dh", cmd_dh, "difference operator of a family")
    sp.add_argument("file")
    sp.add_argument("family")

    sp = verb("uniformize", cmd_uniformize, "uniformize a Sigma^0_2 presentation")
    sp.add_argument("file")
    sp.add_argument("b")
    sp.add_argument("c")
    sp.add_argument("--rows", type=int, required=True)

    sp = verb("dot", cmd_dot, "Hasse diagram in DOT")
    sp.add_argument("source", help="a forest, or a poset file with --poset")
    sp.add_argument("--poset", action="store_true")
    sp.add_argument("--onto", action="store_true")
    return p


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    out = _Out(stdout, args.json)
    try:
        return args.fn(args, out)
    except (TotalRepError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
