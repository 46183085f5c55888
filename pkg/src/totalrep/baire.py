"""Prefix semantics on Baire space.

Infinite sequences are never materialized: partitions are queried on finite
words and report what every infinite extension can still evaluate to, and
continuous functions are prefix-monotone transducers.
"""
from __future__ import annotations

import enum
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from math import comb

from .errors import EmptyList, InvalidMorphism, LabelCountMismatch, LabelOutOfRange, ValidationError
from .forest import LabeledForest, Morphism

Word = Sequence[int]


def _check_word(word):
    for j in word:
        if j < 0:
            raise ValidationError(f"symbols must be natural numbers, got {j}")


# ---------------------------------------------------------------------------
# Determinations and prefix partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Determined:
    label: int

    @property
    def labels(self) -> frozenset:
        return frozenset((self.label,))

    def __str__(self):
        return f"Determined({self.label})"


@dataclass(frozen=True)
class Possible:
    """Over-approximation of the values reachable from a prefix."""

    labels: frozenset

    def __str__(self):
        return "Possible({" + ",".join(map(str, sorted(self.labels))) + "})"


def determination(labels) -> Determined | Possible:
    labels = frozenset(labels)
    if not labels:
        raise ValueError("a determination needs at least one label")
    if len(labels) == 1:
        return Determined(next(iter(labels)))
    return Possible(labels)


def merge(*dets) -> Determined | Possible:
    return determination(frozenset().union(*(d.labels for d in dets)))


@dataclass(frozen=True)
class PrefixPartition:
    """A k-partition of Baire space evaluated on finite prefixes."""

    k: int
    evaluate: Callable[[tuple], Determined | Possible] = field(repr=False)
    name: str = ""

    def __call__(self, word: Word = ()) -> Determined | Possible:
        word = tuple(word)
        _check_word(word)
        return self.evaluate(word)


def constant(label: int, k: int) -> PrefixPartition:
    if not 0 <= label < k:
        raise LabelOutOfRange(f"label {label} outside [0,{k})")
    det = Determined(label)
    return PrefixPartition(k, lambda word: det, name=f"const({label})")


# -- xi_F ---------------------------------------------------------------------
#
# Walk states: ("sel", nodes) waits for a symbol choosing among several trees,
# ("node", x) sits at node x (0 stays, 1 enters the children, >=2 freezes),
# ("frozen", x) has value label(x) whatever follows. A leaf is constant.


def _enter(nodes):
    return ("node", nodes[0]) if len(nodes) == 1 else ("sel", nodes)


def walk(F: LabeledForest, word: Word):
    state = _enter(F.roots)
    for j in word:
        kind, at = state
        if kind == "frozen":
            break
        if kind == "sel":
            state = ("node", at[j % len(at)])
            continue
        kids = F.children[at]
        if not kids:
            state = ("frozen", at)
            break
        if j == 1:
            state = _enter(kids)
        elif j >= 2:
            state = ("frozen", at)
    if state[0] == "node" and not F.children[state[1]]:
        state = ("frozen", state[1])
    return state


def xi_eval(F: LabeledForest, word: Word) -> Determined | Possible:
    word = tuple(word)
    _check_word(word)
    kind, at = walk(F, word)
    if kind == "frozen":
        return Determined(F.label[at])
    nodes = at if kind == "sel" else (at,)
    return determination(F.label[y] for x in nodes for y in F.upper_cone(x))


def exact_value(F: LabeledForest, word: Word) -> int:
    """Value of xi_F (composed with the labels) on ``word`` followed by 0^omega."""
    word = tuple(word)
    _check_word(word)
    kind, at = walk(F, word)
    if kind == "sel":
        at = at[0]
    return F.label[at]


def xi_partition(F: LabeledForest) -> PrefixPartition:
    return PrefixPartition(F.k, lambda word: xi_eval(F, word), name=f"xi[{F}]")


# -- combinators ----------------------------------------------------------------


def _same_k(parts):
    ks = {p.k for p in parts}
    if len(ks) != 1:
        raise LabelCountMismatch(f"partitions have different label counts {sorted(ks)}")
    return ks.pop()


def combinator_sup(parts: Sequence[PrefixPartition]) -> PrefixPartition:
    """Finitary supremum: the first symbol j routes to ``parts[j mod len]``."""
    parts = tuple(parts)
    if not parts:
        raise EmptyList("supremum of an empty list")
    k = _same_k(parts)

    def evaluate(word):
        if not word:
            return merge(*(p(()) for p in parts))
        return parts[word[0] % len(parts)](word[1:])

    return PrefixPartition(k, evaluate, name="sup(" + ", ".join(p.name for p in parts) + ")")


def combinator_oplus(mu: PrefixPartition, nu: PrefixPartition) -> PrefixPartition:
    """Even first symbols route to ``mu``, odd ones to ``nu``."""
    out = combinator_sup((mu, nu))
    return PrefixPartition(out.k, out.evaluate, name=f"({mu.name} + {nu.name})")


def combinator_push(s: int, nu: PrefixPartition) -> PrefixPartition:
    """Value s unless the input starts 0^n 1, in which case nu on the rest."""
    if not 0 <= s < nu.k:
        raise LabelOutOfRange(f"label {s} outside [0,{nu.k})")

    def evaluate(word):
        for i, j in enumerate(word):
            if j == 1:
                return nu(word[i + 1 :])
            if j >= 2:
                return Determined(s)
        return merge(Determined(s), nu(()))

    return PrefixPartition(nu.k, evaluate, name=f"p{s}({nu.name})")


# ---------------------------------------------------------------------------
# Transducers
# ---------------------------------------------------------------------------


class Transducer:
    """Deterministic prefix-monotone word function.

    State is passed explicitly: ``start()`` gives the initial state and the
    output emitted before any input, ``step(state, j)`` consumes one symbol.
    """

    def start(self):
        raise NotImplementedError

    def step(self, state, symbol: int):
        raise NotImplementedError


def run_transducer(t: Transducer, word: Word) -> list:
    state, out = t.start()
    out = list(out)
    for j in word:
        state, emitted = t.step(state, j)
        out.extend(emitted)
    return out


class Identity(Transducer):
    def start(self):
        return None, ()

    def step(self, state, symbol):
        return None, (symbol,)


@dataclass(frozen=True)
class Pattern:
    """Symbol pattern of a table rule: ``*``, an exact value, or a residue."""

    value: int | None = None
    modulus: int | None = None

    def matches(self, j: int) -> bool:
        if self.modulus is not None:
            return j % self.modulus == self.value
        return self.value is None or j == self.value

    def __str__(self):
        if self.modulus is not None:
            return f"%{self.modulus}={self.value}"
        return "*" if self.value is None else str(self.value)

    @classmethod
    def parse(cls, text: str) -> Pattern:
        if text == "*":
            return cls()
        if text.startswith("%"):
            mod, _, res = text[1:].partition("=")
            mod, res = int(mod), int(res)
            if mod < 1 or not 0 <= res < mod:
                raise ValueError(f"bad residue pattern {text!r}")
            return cls(res, mod)
        value = int(text)
        if value < 0:
            raise ValueError(f"negative symbol in pattern {text!r}")
        return cls(value)


@dataclass(frozen=True)
class Rule:
    pattern: Pattern
    target: str
    output: tuple = ()


@dataclass(frozen=True)
class TableTransducer(Transducer):
    """Finite state table over the infinite alphabet of naturals.

    The first rule of the current state whose pattern matches fires. With no
    matching rule the machine stalls: it keeps its state and emits nothing,
    which models partial continuous functions.
    """

    initial: str
    rules: dict = field(default_factory=dict)
    burst: tuple = ()

    def start(self):
        return self.initial, self.burst

    def step(self, state, symbol):
        for rule in self.rules.get(state, ()):
            if rule.pattern.matches(symbol):
                return rule.target, rule.output
        return state, ()

    @property
    def states(self) -> tuple:
        seen = {self.initial: None}
        for s, rules in self.rules.items():
            seen.setdefault(s, None)
            for r in rules:
                seen.setdefault(r.target, None)
        return tuple(seen)


def _nav_within(F: LabeledForest, a: int, b: int) -> list:
    """Symbols moving xi_F's walk from node a up to node b (a <= b)."""
    word = []
    chain = F.path_between(a, b)
    for x, y in zip(chain, chain[1:]):
        word.append(1)
        kids = F.children[x]
        if len(kids) > 1:
            word.append(kids.index(y))
    return word


def _nav_from_top(F: LabeledForest, b: int) -> list:
    r = b
    while F.parent[r] >= 0:
        r = F.parent[r]
    word = [] if len(F.roots) == 1 else [F.roots.index(r)]
    return word + _nav_within(F, r, b)


def synthesize_realizer(m: Morphism) -> TableTransducer:
    """Transducer t with exact_value(G, x) == exact_value(F, t(x)).

    While G's walk sits at node g, the output has driven F's walk to m(g).
    Every input symbol produces at least one output symbol, so t is total.
    """
    m.check()
    G, F, f = m.source, m.target, m.map

    def nav(g_from, g_to):
        return tuple(_nav_within(F, f[g_from], f[g_to])) or (0,)

    def top(g):
        return tuple(_nav_from_top(F, f[g]))

    pad = (0,)
    rules = {}
    every = Pattern()
    for g in range(G.n):
        kids = G.children[g]
        if not kids:
            rules[f"n{g}"] = (Rule(every, f"n{g}", pad),)
            continue
        on_one = (
            Rule(Pattern(1), f"n{kids[0]}", nav(g, kids[0]))
            if len(kids) == 1
            else Rule(Pattern(1), f"s{g}", pad)
        )
        rules[f"n{g}"] = (Rule(Pattern(0), f"n{g}", pad), on_one, Rule(every, f"f{g}", pad))
        rules[f"f{g}"] = (Rule(every, f"f{g}", pad),)
        if len(kids) > 1:
            d = len(kids)
            rules[f"s{g}"] = tuple(
                Rule(Pattern(i, d), f"n{c}", nav(g, c)) for i, c in enumerate(kids)
            )
    if len(G.roots) == 1:
        r = G.roots[0]
        return TableTransducer(f"n{r}", rules, top(r))
    d = len(G.roots)
    rules["top"] = tuple(Rule(Pattern(i, d), f"n{r}", top(r) or pad) for i, r in enumerate(G.roots))
    return TableTransducer("top", rules, ())


def realizer_for(G: LabeledForest, F: LabeledForest) -> TableTransducer:
    from .forest import find_morphism

    m = find_morphism(G, F)
    if m is None:
        raise InvalidMorphism("no morphism exists between the given forests")
    return synthesize_realizer(m)


def realized_value(t: TableTransducer, F: LabeledForest, word: Word) -> int:
    """exact_value of F on the output of t for the input ``word`` followed by 0^omega.

    Zeros are fed until the table state repeats; the output of the repeating
    cycle must consist of zeros, so the whole output is itself eventually zero.
    """
    state, out = t.start()
    out = list(out)
    for j in word:
        state, emitted = t.step(state, j)
        out.extend(emitted)
    seen = {state: len(out)}
    while True:
        state, emitted = t.step(state, 0)
        out.extend(emitted)
        if state in seen:
            if any(out[seen[state] :]):
                raise ValueError("output on trailing zeros is not eventually zero")
            return exact_value(F, out)
        seen[state] = len(out)


class _Padded(Transducer):
    def __init__(self, psi):
        self.psi = psi

    def start(self):
        return self.psi.start()

    def step(self, state, symbol):
        state, out = self.psi.step(state, symbol)
        return state, tuple(out) + (0,)


def totalize(psi: Transducer) -> Transducer:
    """Total transducer emitting psi's symbols in order, padded by zeros.

    One 0 follows the output of each input step, so the result is total even
    where psi stalls, and its non-zero symbols are exactly psi's.
    """
    if not isinstance(psi, TableTransducer):
        return _Padded(psi)
    every = Pattern()
    rules = {}
    for s in psi.states:
        old = psi.rules.get(s, ())
        new = [Rule(r.pattern, r.target, tuple(r.output) + (0,)) for r in old]
        if not any(r.pattern == every for r in old):
            new.append(Rule(every, s, (0,)))
        rules[s] = tuple(new)
    return TableTransducer(psi.initial, rules, psi.burst)


# ---------------------------------------------------------------------------
# The open-set representation pi
# ---------------------------------------------------------------------------
#
# Finite words are enumerated by weight |s| + sum(s), then length, then
# lexicographically. There are exactly 2^(w-1) words of weight w >= 1, so the
# words of weight w occupy indices [2^(w-1), 2^w) and the empty word is 0.
# Basic open sets: B_0 is empty and B_{i+1} is the cylinder of word i.


def _count(length, total):
    """Words of the given length over the naturals with the given symbol sum."""
    if length == 0:
        return 1 if total == 0 else 0
    return comb(total + length - 1, length - 1)


def word_at(index: int) -> tuple:
    if index < 0:
        raise ValueError("index must be non-negative")
    if index == 0:
        return ()
    w = index.bit_length()
    offset = index - (1 << (w - 1))
    for length in range(1, w + 1):
        c = _count(length, w - length)
        if offset < c:
            break
        offset -= c
    total = w - length
    out = []
    for pos in range(length):
        rest = length - pos - 1
        for a in range(total + 1):
            c = _count(rest, total - a)
            if offset < c:
                out.append(a)
                total -= a
                break
            offset -= c
    return tuple(out)


def index_of(word: Word) -> int:
    word = tuple(word)
    _check_word(word)
    if not word:
        return 0
    length = len(word)
    w = length + sum(word)
    index = 1 << (w - 1)
    for shorter in range(1, length):
        index += _count(shorter, w - shorter)
    total = w - length
    for pos, a in enumerate(word):
        rest = length - pos - 1
        for smaller in range(a):
            index += _count(rest, total - smaller)
        total -= a
    return index


def cylinder_symbol(word: Word) -> int:
    """The pi-name symbol denoting the cylinder of ``word``."""
    return index_of(word) + 1


class Membership(enum.Enum):
    """Open sets are only confirmable from finite data: YES or UNKNOWN."""

    YES = "yes"
    UNKNOWN = "unknown"


def pi_eval(name_prefix: Word, point_prefix: Word) -> Membership:
    """Whether the cylinder of ``point_prefix`` lies in pi(a) for every a extending ``name_prefix``."""
    point = tuple(point_prefix)
    _check_word(point)
    for j in name_prefix:
        if j < 0:
            raise ValidationError(f"symbols must be natural numbers, got {j}")
        if j > 0:
            s = word_at(j - 1)
            if point[: len(s)] == s:
                return Membership.YES
    return Membership.UNKNOWN
