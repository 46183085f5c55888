"""Text formats: forests, posets, set families, transducer tables, pi-names, DOT."""
from __future__ import annotations

import re

from .baire import Pattern, Rule, TableTransducer, Transducer
from .errors import ParseError
from .forest import LabeledForest, LabeledPoset, canonical_term, format_term
from .hierarchy import FiniteUniverse, IndexedFamily
from .lattice import DegreeLattice

_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\|)|(\d+)|(\S))")


def _tokens(text):
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            return
        start = m.start(m.lastindex)
        if m.group(5) is not None:
            raise ParseError(f"unexpected character {m.group(5)!r}", start)
        kind = ("(", ")", "|", "int")[m.lastindex - 1]
        yield kind, m.group(m.lastindex), start
        pos = m.end()


def parse_forest_term(text: str) -> tuple:
    """Parse ``(L child ...) | (L ...)`` into a nested term without validation."""
    toks = list(_tokens(text))
    toks.append(("end", "", len(text)))
    i = 0

    def expect(kind):
        nonlocal i
        t = toks[i]
        if t[0] != kind:
            want = "a label" if kind == "int" else repr(kind)
            got = "end of input" if t[0] == "end" else repr(t[1])
            raise ParseError(f"expected {want}, found {got}", t[2])
        i += 1
        return t

    def tree():
        expect("(")
        label = int(expect("int")[1])
        kids = []
        while toks[i][0] == "(":
            kids.append(tree())
        expect(")")
        return (label, tuple(kids))

    trees = [tree()]
    while toks[i][0] == "|":
        i += 1
        trees.append(tree())
    expect("end")
    return tuple(trees)


def _max_label(term):
    return max(max(label, _max_label(kids)) for label, kids in term) if term else -1


def parse_forest(text: str, k: int | None = None) -> LabeledForest:
    """Parse the s-expression forest syntax; k defaults to 1 + the largest label."""
    term = parse_forest_term(text)
    if k is None:
        k = _max_label(term) + 1
    return LabeledForest.from_term(term, k)


def format_forest(F: LabeledForest, canonical: bool = True) -> str:
    return format_term(canonical_term(F) if canonical else F.to_term())


# -- posets -----------------------------------------------------------------


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_poset(text: str) -> LabeledPoset:
    """Read ``k=<n>``, ``elem <id> label <l>`` and ``order <a> < <b>`` lines."""
    k = None
    ids: dict[str, int] = {}
    labels: list[int | None] = []
    orders = []
    for lineno, line in _lines(text):
        words = line.split()
        if m := re.fullmatch(r"k\s*=\s*(\d+)", line):
            if k is not None:
                raise ParseError("duplicate k= header", f"line {lineno}")
            k = int(m.group(1))
        elif words[0] == "elem":
            if len(words) == 2:
                ids.setdefault(words[1], len(ids))
                if len(labels) < len(ids):
                    labels.append(None)
                continue
            if len(words) != 4 or words[2] != "label" or not words[3].isdigit():
                raise ParseError("expected 'elem <id> label <l>'", f"line {lineno}")
            if words[1] in ids and labels[ids[words[1]]] is not None:
                raise ParseError(f"element {words[1]} declared twice", f"line {lineno}")
            idx = ids.setdefault(words[1], len(ids))
            if idx == len(labels):
                labels.append(None)
            labels[idx] = int(words[3])
        elif words[0] == "order":
            if len(words) != 4 or words[2] != "<":
                raise ParseError("expected 'order <a> < <b>'", f"line {lineno}")
            orders.append((words[1], words[3], lineno))
        else:
            raise ParseError(f"unknown directive {words[0]!r}", f"line {lineno}")
    if k is None:
        raise ParseError("missing k=<n> header", "line 1")
    if not ids:
        raise ParseError("no elements declared", "end")
    for name, idx in ids.items():
        if labels[idx] is None:
            raise ParseError(f"element {name} has no label line", "end")
    pairs = []
    for a, b, lineno in orders:
        for name in (a, b):
            if name not in ids:
                raise ParseError(f"order line names unknown element {name}", f"line {lineno}")
        pairs.append((ids[a], ids[b]))
    return LabeledPoset.from_relation(k, labels, pairs)


def format_poset(P: LabeledPoset) -> str:
    lines = [f"k={P.k}"]
    lines += [f"elem {x} label {P.label[x]}" for x in range(P.n)]
    lines += [f"order {a} < {b}" for a, b in sorted(P.covers)]
    return "\n".join(lines) + "\n"


# -- set families -------------------------------------------------------------


def parse_families(text: str) -> tuple:
    """Read a universe, named sets and named families.

    Returns ``(universe, sets, families)`` where ``sets`` maps names to
    bit masks and ``families`` maps names to :class:`IndexedFamily`.
    """
    universe = None
    sets: dict[str, int] = {}
    families: dict[str, IndexedFamily] = {}
    for lineno, line in _lines(text):
        where = f"line {lineno}"
        if m := re.fullmatch(r"universe\s+(\d+)", line):
            if universe is not None:
                raise ParseError("duplicate universe line", where)
            universe = FiniteUniverse(int(m.group(1)))
            continue
        if universe is None:
            raise ParseError("the universe line must come first", where)
        if m := re.fullmatch(r"set\s+(\w+)\s*=\s*\{([^}]*)\}", line):
            body = m.group(2).strip()
            try:
                elems = [int(x) for x in body.split(",")] if body else []
            except ValueError:
                raise ParseError(f"bad element list {{{body}}}", where) from None
            sets[m.group(1)] = universe.set(elems)
        elif m := re.fullmatch(r"family\s+(\w+)\s*=\s*\[([^\]]*)\]", line):
            body = m.group(2).strip()
            names = [x.strip() for x in body.split(",")] if body else []
            missing = [x for x in names if x not in sets]
            if missing:
                raise ParseError(f"unknown sets {missing}", where)
            families[m.group(1)] = IndexedFamily(universe, [sets[x] for x in names])
        else:
            raise ParseError("expected 'universe', 'set' or 'family'", where)
    if universe is None:
        raise ParseError("missing universe line", "end")
    return universe, sets, families


def format_set(universe: FiniteUniverse, mask: int) -> str:
    return "{" + ",".join(map(str, universe.elements(mask))) + "}"


# -- transducer tables --------------------------------------------------------


def parse_transducer(text: str) -> TableTransducer:
    """Read a state table.

    ``initial <state>``, optional ``burst <symbols>``, then rules
    ``<state> <pattern> -> <next> : <symbols>``. Patterns are ``*``, a
    number, or ``%m=r``. Rules of a state are tried in file order.
    """
    initial = None
    burst: tuple = ()
    rules: dict[str, list] = {}
    for lineno, line in _lines(text):
        where = f"line {lineno}"
        words = line.split()
        if words[0] == "initial":
            if len(words) != 2:
                raise ParseError("expected 'initial <state>'", where)
            initial = words[1]
        elif words[0] == "burst":
            burst = tuple(_symbols(words[1:], where))
        else:
            lhs, arrow, rhs = line.partition("->")
            if not arrow:
                raise ParseError("expected '<state> <pattern> -> <next> : <symbols>'", where)
            left = lhs.split()
            if len(left) != 2:
                raise ParseError("rule needs a state and a pattern before '->'", where)
            target, _, outs = rhs.partition(":")
            target = target.strip()
            if not target or len(target.split()) != 1:
                raise ParseError("rule needs exactly one target state", where)
            try:
                pattern = Pattern.parse(left[1])
            except ValueError:
                raise ParseError(f"bad pattern {left[1]!r}", where) from None
            rules.setdefault(left[0], []).append(Rule(pattern, target, tuple(_symbols(outs.split(), where))))
    if initial is None:
        raise ParseError("missing 'initial <state>' line", "end")
    return TableTransducer(initial, {s: tuple(r) for s, r in rules.items()}, burst)


def _symbols(words, where):
    out = []
    for w in words:
        if not w.isdigit():
            raise ParseError(f"expected a natural number, found {w!r}", where)
        out.append(int(w))
    return out


def format_transducer(t: TableTransducer) -> str:
    lines = [f"initial {t.initial}"]
    if t.burst:
        lines.append("burst " + " ".join(map(str, t.burst)))
    for state in t.states:
        for r in t.rules.get(state, ()):
            outs = " ".join(map(str, r.output))
            lines.append(f"{state} {r.pattern} -> {r.target} : {outs}".rstrip())
    return "\n".join(lines) + "\n"


def as_table(t: Transducer) -> TableTransducer:
    if isinstance(t, TableTransducer):
        return t
    raise TypeError(f"{type(t).__name__} has no table form")


# -- words ----------------------------------------------------------------------


def parse_word(text: str) -> tuple:
    """Whitespace-separated naturals (commas are accepted as separators too)."""
    out = []
    for m in re.finditer(r"[^\s,]+", text):
        if not m.group().isdigit():
            raise ParseError(f"expected a natural number, found {m.group()!r}", m.start())
        out.append(int(m.group()))
    return tuple(out)


def format_word(word) -> str:
    return " ".join(map(str, word))


# -- DOT ------------------------------------------------------------------------


def export_dot(L: DegreeLattice, name: str = "lattice") -> str:
    """Hasse diagram: one node per degree captioned by its term, covering edges only."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
    for i, cap in enumerate(L.captions):
        esc = cap.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{i} [label="{esc}"];')
    cov = L.covers
    for i in range(L.size):
        for j in range(L.size):
            if cov[i, j]:
                lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
