"""Independent reference computations for the tests.

Nothing here uses the package's group algorithms: groups are enumerated by
breadth-first closure, tree actions come from hand-written recursions.
"""

from __future__ import annotations

from collections import deque
from itertools import product


def pmul(p, q):
    """``p`` after ``q``."""
    return tuple(p[i] for i in q)


def pinv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def closure(gens, n, limit=2_000_000):
    """All elements of the group generated by ``gens`` on ``n`` points."""
    e = tuple(range(n))
    seen = {e}
    queue = deque([e])
    gens = [tuple(g) for g in gens]
    while queue:
        x = queue.popleft()
        for g in gens:
            y = pmul(g, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    raise RuntimeError("closure limit")
                queue.append(y)
    return seen


def orbit(gens, x):
    seen = {x}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for g in gens:
            z = g[y]
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return seen


def count_cosets(group_elems, sub_elems):
    """Number of left cosets ``gH`` by explicit set partition."""
    sub = list(sub_elems)
    seen = set()
    count = 0
    for g in group_elems:
        if g in seen:
            continue
        count += 1
        for h in sub:
            seen.add(pmul(g, h))
    return count


def cycle(n, *cycles):
    p = list(range(n))
    for c in cycles:
        for i, x in enumerate(c):
            p[x] = c[(i + 1) % len(c)]
    return tuple(p)


# -- tree actions by direct recursion --------------------------------------


def grig(letter, w):
    """Grigorchuk generators: a swap, b=(a,c), c=(a,d), d=(1,b)."""
    if not w:
        return ()
    x, rest = w[0], w[1:]
    if letter == "a":
        return (1 - x,) + rest
    if letter == "b":
        return (x,) + (grig("a", rest) if x == 0 else grig("c", rest))
    if letter == "c":
        return (x,) + (grig("a", rest) if x == 0 else grig("d", rest))
    if letter == "d":
        return (x,) + (rest if x == 0 else grig("b", rest))
    raise KeyError(letter)


def gs3(letter, w):
    """Gupta-Sidki p=3: t = (0 1 2), u = (t, t^-1, u); T = t^-1."""
    if not w:
        return ()
    x, rest = w[0], w[1:]
    if letter == "t":
        return ((x + 1) % 3,) + rest
    if letter == "T":
        return ((x - 1) % 3,) + rest
    if letter == "u":
        sub = {0: "t", 1: "T", 2: "u"}[x]
        return (x,) + gs3(sub, rest)
    raise KeyError(letter)


def word_action(act, word, w):
    """Left action of a word: the rightmost letter acts first."""
    for letter in reversed(word):
        w = act(letter, w)
    return w


def level_perm(act, word, k, n):
    """Permutation of level ``n`` (mixed radix, most significant first)."""
    verts = list(product(range(k), repeat=n))
    index = {v: i for i, v in enumerate(verts)}
    return tuple(index[word_action(act, word, v)] for v in verts)


def wreath_order(n, top=60):
    return top ** ((5 ** n - 1) // 4)
