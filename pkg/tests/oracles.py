"""Reference implementations used as test oracles.

Nothing here goes through the library's canonical forms or expansions:
strings are plain tuples of ``(int, bool)`` and equivalences are computed
by brute force.
"""

from __future__ import annotations

from itertools import permutations, product


def swap_word(word, a, b):
    return tuple(((b if n == a else a if n == b else n), bar) for n, bar in word)


def literal_support(word):
    return {n for n, _ in word}


def all_words(n_atoms, length):
    alphabet = [(i, bar) for bar in (False, True) for i in range(n_atoms)]
    return [tuple(w) for w in product(alphabet, repeat=length)]


class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def alpha_closure(n_atoms: int, max_len: int) -> UnionFind:
    """Least equivalence generated by ``x|av ~ x|bw`` whenever b is not in v
    and w = (a b).v, over all strings on ``n_atoms`` names."""
    uf = UnionFind()
    for length in range(max_len + 1):
        for w in all_words(n_atoms, length):
            uf.find(w)
            for i, (a, bar) in enumerate(w):
                if not bar:
                    continue
                rest = w[i + 1:]
                used = literal_support(rest)
                for b in range(n_atoms):
                    if b != a and b not in used:
                        uf.union(w, w[:i] + ((b, True),) + swap_word(rest, a, b))
    return uf


def free_names(word):
    bound, out = set(), set()
    for n, bar in word:
        if bar:
            bound.add(n)
        elif n not in bound:
            out.add(n)
    return out


# -- symbolic runs straight from a description ------------------------------


def _rule_steps(spec, orbit, args, letter, pool):
    """Literal successors of orbit(args) on ``letter`` = (name, bar), by
    matching rules under injective assignments into ``range(pool)``."""
    name, bar = letter
    out = set()
    for r in spec.rules:
        if r.source != orbit or r.bar != bar:
            continue
        env = dict(zip(r.src_vars, args))
        extra = [v for v in r.variables() if v not in env]
        used = set(args)
        for image in permutations(sorted(set(range(pool)) - used), len(extra)):
            full = dict(env, **dict(zip(extra, image)))
            target = tuple(full[v] for v in r.tgt_vars)
            if not bar:
                if full[r.letter] == name:
                    out.add((r.target, target))
                continue
            b = full[r.letter]
            # alpha-variants: q -|c-> (b c).q' for c = b or c fresh for <b>q'
            body_support = set(target) - {b}
            if name == b:
                out.add((r.target, target))
            elif name not in body_support:
                out.add((r.target, tuple(name if x == b else b if x == name else x
                                         for x in target)))
    return out


def literal_accepts(spec, orbit, args, word, pool: int) -> bool:
    """Literal acceptance of a word, with bar transitions closed under
    alpha-renaming, computed without expanding the description."""
    configs = {(orbit, tuple(args))}
    for letter in word:
        nxt = set()
        for o, a in configs:
            nxt |= _rule_steps(spec, o, a, letter, pool)
        configs = nxt
        if not configs:
            return False
    return any(spec.orbits[o].final for o, _ in configs)
