"""Plain-Python reference implementations used as test oracles.

They share only the floating-point convention with the package (distance =
sqrt of squared differences summed over axes in order; score = k smallest
distances summed in ascending order), not its code.
"""

import math
from collections import deque
from fractions import Fraction


def dist(a, b):
    total = 0.0
    for x, y in zip(a, b):
        total += (x - y) * (x - y)
    return math.sqrt(total)


def score(bag, z, k):
    total = 0.0
    for v in sorted(dist(b, z) for b in bag)[:k]:
        total += v
    return total


def p_value(points, z, k):
    bag = [list(map(float, p)) for p in points] + [list(map(float, z))]
    alphas = []
    for i in range(len(bag)):
        others = bag[:i] + bag[i + 1 :]
        alphas.append(score(others, bag[i], k))
    return Fraction(sum(1 for a in alphas if a >= alphas[-1]), len(bag))


def flood_fill(resolution, members, moore=True):
    """Breadth-first labelling; returns a list of frozensets of flat indices."""
    import itertools

    import numpy as np

    members = set(int(m) for m in members)
    offs = [o for o in itertools.product((-1, 0, 1), repeat=len(resolution)) if any(o)]
    if not moore:
        offs = [o for o in offs if sum(map(abs, o)) == 1]
    seen, comps = set(), []
    for start in sorted(members):
        if start in seen:
            continue
        comp, queue = {start}, deque([start])
        seen.add(start)
        while queue:
            cur = np.unravel_index(queue.popleft(), resolution)
            for o in offs:
                nb = tuple(c + d for c, d in zip(cur, o))
                if all(0 <= v < r for v, r in zip(nb, resolution)):
                    flat = int(np.ravel_multi_index(nb, resolution))
                    if flat in members and flat not in seen:
                        seen.add(flat)
                        comp.add(flat)
                        queue.append(flat)
        comps.append(frozenset(comp))
    return comps
