"""Random instances shared by the unit and acceptance suites."""
import numpy as np

from totalrep import LabeledForest, Morphism, Pattern, Rule, TableTransducer, Transducer
from totalrep.enumeration import random_forest


def random_morphism(rng, max_target=6, max_source=7, max_k=3):
    """A target F, a source G grown along a random monotone map into F, and the map.

    Roots of G go anywhere in F; every later node of G picks a parent in G
    and an image in the upper cone of that parent's image. Labels are read
    off the images, so the map is a morphism by construction.
    """
    k = int(rng.integers(1, max_k + 1))
    F = random_forest(rng, int(rng.integers(1, max_target + 1)), k)
    n = int(rng.integers(1, max_source + 1))
    parent, image = [-1], [int(rng.integers(0, F.n))]
    for i in range(1, n):
        if rng.random() < 0.25:
            parent.append(-1)
            image.append(int(rng.integers(0, F.n)))
        else:
            p = int(rng.integers(0, i))
            parent.append(p)
            cone = F.upper_cone(image[p])
            image.append(int(cone[rng.integers(0, len(cone))]))
    G = LabeledForest(k, tuple(parent), tuple(F.label[t] for t in image))
    return Morphism(G, F, tuple(image))


def random_stalling_transducer(rng, max_states=4):
    """A table transducer whose rules often miss and often emit nothing."""
    q = int(rng.integers(1, max_states + 1))
    names = [f"q{i}" for i in range(q)]
    rules = {}
    for s in names:
        out = []
        for _ in range(int(rng.integers(0, 4))):
            kind = rng.integers(0, 3)
            if kind == 0:
                pat = Pattern(int(rng.integers(0, 4)))
            elif kind == 1:
                mod = int(rng.integers(2, 4))
                pat = Pattern(int(rng.integers(0, mod)), mod)
            else:
                pat = Pattern()
            emit = tuple(int(x) for x in rng.integers(0, 10, size=int(rng.integers(0, 3))))
            out.append(Rule(pat, names[int(rng.integers(0, q))], emit))
        rules[s] = tuple(out)
    burst = tuple(int(x) for x in rng.integers(0, 10, size=int(rng.integers(0, 3))))
    return TableTransducer(names[0], rules, burst)


class Counter(Transducer):
    """Emits 1, 2, 3, ... one per input symbol."""

    def start(self):
        return 0, ()

    def step(self, state, symbol):
        return state + 1, (state + 1,)


def nonzero(word):
    return [j for j in word if j != 0]


def random_input(rng, max_len=50):
    n = int(rng.integers(0, max_len + 1))
    return tuple(int(x) for x in rng.integers(0, 5, size=n))
