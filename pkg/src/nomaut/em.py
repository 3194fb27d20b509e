"""Generalized determinization and language semantics.

A set of states (a macro-state) is unfolded into a deterministic-style
step: acceptance, one successor macro-state per pool name, and for bar
automata one abstracted successor ``<c>S'`` collecting every bound
transition under a single fresh binder.  Macro-states are generated on
demand and memoized.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from typing import Callable, Iterable

from .automata import ConcreteAutomaton, PoolError, State
from .barlang import BAR, DATA, LangApprox, Letter
from .kleisli import (
    UNIT,
    Bind,
    Pair,
    coalgebra_of,
    empty_word,
    lambda_F,
    trace_iterate,
)
from .nominal import Abs, Name, Perm, SuppSet, fresh, render, set_mult
from .report import Report


@dataclass(frozen=True)
class GValue:
    """(accept, a -> successor for a in the pool, optional bound successor)."""

    accept: bool
    free: tuple[tuple[Name, object], ...]
    bar: Abs | None = None

    def succ(self, a: Name):
        for b, s in self.free:
            if b == a:
                return s
        raise KeyError(f"{a} is outside the letters of this step")

    def act(self, p: Perm) -> "GValue":
        moved = sorted(((p(a), s.act(p)) for a, s in self.free), key=lambda t: int(t[0]))
        return GValue(self.accept, tuple(moved), None if self.bar is None else self.bar.act(p))

    def support(self) -> frozenset:
        out = frozenset().union(*(s.support() for _, s in self.free))
        return out if self.bar is None else out | self.bar.support()

    def sort_key(self):
        return (self.accept, tuple((int(a), s.sort_key()) for a, s in self.free),
                () if self.bar is None else self.bar.sort_key())

    def map(self, f: Callable) -> "GValue":
        """The functor G on a plain map."""
        return GValue(self.accept, tuple((a, f(s)) for a, s in self.free),
                      None if self.bar is None else self.bar.map(f))

    def __str__(self) -> str:
        parts = [f"accept={'true' if self.accept else 'false'}"]
        parts += [f"{a}: {render(s)}" for a, s in self.free if s]
        if self.bar is not None:
            parts.append(f"|: {self.bar}")
        return "; ".join(parts)


def psi_abs(sets: SuppSet[Abs], pool: Iterable[Name] | None = None) -> Abs[SuppSet]:
    """{<a>x, ...} -> <a>{x : <a>x in S} for the least name a fresh for S."""
    a = fresh(sets.support())
    if pool is not None and a not in set(pool):
        raise PoolError(f"no name in the pool is fresh for {sets}")
    return Abs(a, SuppSet(ab.at(a) for ab in sets.elems))


def epsilon(values: SuppSet, letters: Iterable[Name], kind: str = BAR,
            fresh_pool: Iterable[Name] | None = None) -> GValue:
    """Split a set of one-layer values into acceptance and successor sets."""
    letters = tuple(sorted(Name(a) for a in letters))
    by_letter: dict[Name, list] = {a: [] for a in letters}
    binds = []
    for v in values.elems:
        if isinstance(v, Pair):
            if v.name not in by_letter:
                raise PoolError(f"letter {v.name} is outside {list(letters)}")
            by_letter[v.name].append(v.value)
        elif isinstance(v, Bind):
            binds.append(v.abs)
    if binds and kind != BAR:
        raise ValueError("bound transitions in a data signature")
    free = tuple((a, SuppSet(by_letter[a])) for a in letters)
    bar = psi_abs(SuppSet(binds), fresh_pool) if kind == BAR else None
    return GValue(UNIT in values, free, bar)


def g_mu(g: GValue) -> GValue:
    """G applied to union: flatten every successor set of sets."""
    return g.map(set_mult)


def rho_g(values: SuppSet[GValue], letters: Iterable[Name], kind: str = BAR,
          fresh_pool: Iterable[Name] | None = None) -> GValue:
    """The lifting law: a set of steps becomes one step over sets."""
    letters = tuple(sorted(Name(a) for a in letters))
    accept = any(g.accept for g in values.elems)
    free = tuple((a, SuppSet(g.succ(a) for g in values.elems)) for a in letters)
    bar = None
    if kind == BAR:
        bar = psi_abs(SuppSet(g.bar for g in values.elems), fresh_pool)
    return GValue(accept, free, bar)


# -- determinization --------------------------------------------------------


class Determinizer:
    """Lazy determinization of one automaton with memoized steps.

    The memo tables only ever receive the value a pure computation would
    produce, so concurrent readers see a consistent (if partial) cache.
    """

    def __init__(self, A: ConcreteAutomaton):
        self.A = A
        self.coalgebra = coalgebra_of(A)
        self._steps: dict[SuppSet, GValue] = {}
        self._langs: dict[tuple[SuppSet, int], LangApprox] = {}
        self._lock = threading.Lock()

    def step(self, macro: SuppSet) -> GValue:
        g = self._steps.get(macro)
        if g is None:
            g = determinize_step(self.A, macro, self.coalgebra)
            with self._lock:
                self._steps.setdefault(macro, g)
        return g

    def language(self, macro: SuppSet, depth: int) -> LangApprox:
        key = (macro, depth)
        lang = self._langs.get(key)
        if lang is not None:
            return lang
        kind = self.A.lang_kind
        g = self.step(macro)
        words = [empty_word(kind)] if g.accept else []
        if depth > 0:
            for a, succ in g.free:
                if succ:
                    words.extend(w.prepend(Letter(a, False))
                                 for w in self.language(succ, depth - 1).all_words())
            if g.bar is not None and g.bar.body:
                sub = self.language(g.bar.body, depth - 1)
                words.extend(w.prepend(Letter(g.bar.binder, True)) for w in sub.all_words())
        lang = LangApprox.from_words(kind, depth, words)
        with self._lock:
            self._langs.setdefault(key, lang)
        return lang

    def explored(self) -> dict[SuppSet, GValue]:
        return dict(self._steps)


def determinize_step(A: ConcreteAutomaton, macro: SuppSet,
                     coalgebra=None) -> GValue:
    """epsilon of the union of the one-step behaviours of the members."""
    c = coalgebra if coalgebra is not None else coalgebra_of(A)
    merged = set_mult(c(q) for q in macro.elems)
    return epsilon(merged, A.pool, A.lang_kind, fresh_pool=A.pool)


def lang_semantics(A: ConcreteAutomaton, q: State | str | SuppSet, depth: int,
                   determinizer: Determinizer | None = None) -> LangApprox:
    """Language of ``q`` (or of a macro-state) up to length ``depth``."""
    d = determinizer or Determinizer(A)
    macro = q if isinstance(q, SuppSet) else SuppSet((A.state(q),))
    return d.language(macro, depth)


def check_relation(A: ConcreteAutomaton, depth: int,
                   determinizer: Determinizer | None = None) -> Report:
    """Language semantics at ``depth`` against the Kleisli trace at ``depth + 1``."""
    d = determinizer or Determinizer(A)
    tr = trace_iterate(A, depth + 1)
    bad = []
    for q in A.states:
        em = d.language(SuppSet((q,)), depth)
        kl = LangApprox.from_words(A.lang_kind, depth, tr(q))
        if not em.same_words(kl):
            bad.append(str(q))
    report = Report(f"language semantics vs trace at depth {depth}")
    report.add("lang_semantics(q, d) = trace(q, d+1)", not bad, len(A.states),
               f"mismatch at {', '.join(bad[:5])}" if bad else "")
    return report


# -- extension laws ---------------------------------------------------------


def _rand_names(rng, pool, k):
    return SuppSet(rng.choice(pool) for _ in range(rng.randint(0, k)))


def _rand_layer(rng, pool, inner, kind):
    r = rng.random()
    if r < 0.2:
        return UNIT
    if kind == DATA or r < 0.6:
        return Pair(rng.choice(pool), inner())
    return Bind(Abs(rng.choice(pool), inner()))


def _rand_set(rng, gen, k=2):
    return SuppSet(gen() for _ in range(rng.randint(0, k)))


def eps_left_square(values: SuppSet, letters, kind: str = BAR,
                    law: Callable = lambda_F) -> tuple[GValue, GValue]:
    """Both paths of the left square, for a set of layers over sets."""
    upper = epsilon(set_mult(law(v) for v in values.elems), letters, kind)
    lower = g_mu(epsilon(values, letters, kind))
    return upper, lower


def eps_right_square(sets: SuppSet, letters, kind: str = BAR) -> tuple[GValue, GValue]:
    """Both paths of the right square, for a set of sets of layers."""
    upper = epsilon(set_mult(sets.elems), letters, kind)
    lower = g_mu(rho_g(SuppSet(epsilon(s, letters, kind) for s in sets.elems), letters, kind))
    return upper, lower


def check_eps_laws(seed: int = 0, cases: int = 200, pool_size: int = 3, kind: str = BAR,
                   law: Callable = lambda_F) -> Report:
    """Evaluate both paths of both extension squares on random nested sets."""
    rng = random.Random(seed)
    pool = [Name(i) for i in range(pool_size)]
    report = Report(f"extension laws ({kind}, {pool_size} atoms)")

    def left_input():
        inner = lambda: _rand_names(rng, pool, 2)
        return _rand_set(rng, lambda: _rand_layer(rng, pool, inner, kind))

    def right_input():
        layer = lambda: _rand_layer(rng, pool, lambda: rng.choice(pool), kind)
        return _rand_set(rng, lambda: _rand_set(rng, layer))

    for label, gen, square in (
        ("left square (with lambda and union)", left_input,
         lambda s: eps_left_square(s, pool, kind, law)),
        ("right square (with the lifting law)", right_input,
         lambda s: eps_right_square(s, pool, kind)),
    ):
        bad = None
        for _ in range(cases):
            s = gen()
            upper, lower = square(s)
            if upper != lower:
                bad = f"input {s}: {upper} != {lower}"
                break
        report.add(label, bad is None, cases, bad or "")
    return report

