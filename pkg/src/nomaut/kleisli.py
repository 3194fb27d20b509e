"""Kleisli maps for the finite powerset monad, the extension of the
automaton signatures to them, and trace semantics by Kleene iteration.

A Kleisli map ``X -> T Y`` is a finite table from concrete values to
:class:`SuppSet`.  One layer of automaton structure is an :class:`FValue`:
``Unit`` (accept), ``Pair(a, x)`` (read ``a``) or ``Bind(<a>x)`` (read a
bound name; bar automata only).
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

from .automata import ConcreteAutomaton, State, enum_language
from .barlang import BAR, BarString, CanonicalBarString, LangApprox, Letter, canonicalize
from .nominal import (
    EMPTY, Abs, Name, Perm, SuppSet, act, render, set_mult, set_unit, sort_key, support,
)
from .report import Report


class CarrierError(ValueError):
    """Kleisli maps whose carriers do not line up."""


class KleisliMap:
    """A total map from a finite carrier to finite sets, ordered pointwise."""

    __slots__ = ("table",)

    def __init__(self, table: Mapping):
        self.table = MappingProxyType(
            {x: v if isinstance(v, SuppSet) else SuppSet(v) for x, v in table.items()})

    @classmethod
    def identity(cls, carrier: Iterable) -> "KleisliMap":
        return cls({x: set_unit(x) for x in carrier})

    @classmethod
    def bottom(cls, carrier: Iterable) -> "KleisliMap":
        return cls({x: EMPTY for x in carrier})

    @classmethod
    def from_function(cls, carrier: Iterable, f: Callable) -> "KleisliMap":
        return cls({x: f(x) for x in carrier})

    @property
    def carrier(self) -> frozenset:
        return frozenset(self.table)

    def image(self) -> frozenset:
        return frozenset(y for s in self.table.values() for y in s.elems)

    def __call__(self, x) -> SuppSet:
        try:
            return self.table[x]
        except KeyError:
            raise CarrierError(f"{render(x)} is outside the carrier") from None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, KleisliMap) and dict(self.table) == dict(other.table)

    def __hash__(self) -> int:
        return hash(frozenset(self.table.items()))

    def __le__(self, other: "KleisliMap") -> bool:
        if self.carrier != other.carrier:
            raise CarrierError("maps on different carriers are incomparable")
        return all(v <= other.table[x] for x, v in self.table.items())

    def is_equivariant(self, perms: Iterable[Perm]) -> bool:
        """f(p.x) = p.f(x) wherever p.x stays inside the carrier."""
        for p in perms:
            for x, v in self.table.items():
                px = act(p, x)
                if px in self.table and self.table[px] != v.act(p):
                    return False
        return True

    def __repr__(self) -> str:
        body = ", ".join(f"{render(x)} -> {v}" for x, v in sorted(
            self.table.items(), key=lambda kv: str(kv[0])))
        return f"KleisliMap({body})"


def kleisli_compose(g: KleisliMap, f: KleisliMap) -> KleisliMap:
    """``g . f``: x goes to the union of g(y) over y in f(x)."""
    missing = f.image() - g.carrier
    if missing:
        raise CarrierError(f"{len(missing)} values of f fall outside the carrier of g")
    return KleisliMap({x: set_mult(g.table[y] for y in s.elems) for x, s in f.table.items()})


def kleisli_join(maps: Iterable[KleisliMap], carrier: Iterable | None = None) -> KleisliMap:
    maps = list(maps)
    if not maps:
        if carrier is None:
            raise CarrierError("the join of no maps needs an explicit carrier")
        return KleisliMap.bottom(carrier)
    dom = maps[0].carrier
    if carrier is not None and frozenset(carrier) != dom:
        raise CarrierError("carrier mismatch")
    if any(m.carrier != dom for m in maps):
        raise CarrierError("carrier mismatch")
    return KleisliMap({x: set_mult(m.table[x] for m in maps) for x in dom})


# -- one layer of automaton structure ---------------------------------------


@dataclass(frozen=True)
class Unit:
    def act(self, p: Perm) -> "Unit":
        return self

    def support(self) -> frozenset:
        return frozenset()

    def sort_key(self):
        return (0,)

    def __str__(self) -> str:
        return "*"


UNIT = Unit()


@dataclass(frozen=True)
class Pair:
    name: Name
    value: object

    def act(self, p: Perm) -> "Pair":
        return Pair(p(self.name), act(p, self.value))

    def support(self) -> frozenset:
        return frozenset((self.name,)) | support(self.value)

    def sort_key(self):
        return (1, int(self.name), sort_key(self.value))

    def __str__(self) -> str:
        return f"({self.name}, {render(self.value)})"


@dataclass(frozen=True)
class Bind:
    abs: Abs

    def act(self, p: Perm) -> "Bind":
        return Bind(self.abs.act(p))

    def support(self) -> frozenset:
        return self.abs.support()

    def sort_key(self):
        return (2, self.abs.sort_key())

    def __str__(self) -> str:
        return str(self.abs)


FValue = Unit | Pair | Bind


def fmap(v: FValue, f: Callable) -> FValue:
    """The functor on plain maps; ``f`` must be equivariant under Bind."""
    if isinstance(v, Pair):
        return Pair(v.name, f(v.value))
    if isinstance(v, Bind):
        return Bind(v.abs.map(f))
    return v


def rho_abs(v: Abs[SuppSet]) -> SuppSet[Abs]:
    """<a>S  ->  {<a>s : s in S}."""
    return SuppSet(Abs(v.binder, s) for s in v.body.elems)


def lambda_F(v: FValue) -> SuppSet:
    """Distribute one layer over a set: the extension's distributive law."""
    if isinstance(v, Pair):
        return SuppSet(Pair(v.name, x) for x in v.value.elems)
    if isinstance(v, Bind):
        return SuppSet(Bind(ab) for ab in rho_abs(v.abs).elems)
    return set_unit(v)


def quotient(v: tuple[Name, object]) -> Abs:
    """The quotient map ``(a, x) -> <a>x``."""
    return Abs(v[0], v[1])


def fbar_apply(f: KleisliMap, v: FValue, law: Callable = lambda_F) -> SuppSet:
    """The extended functor on a Kleisli map, at one value: law(F f (v))."""
    return law(fmap(v, f))


def fbar(f: KleisliMap, values: Iterable[FValue], law: Callable = lambda_F) -> KleisliMap:
    """The extension of ``f`` as a Kleisli map on the given F-values."""
    return KleisliMap({v: fbar_apply(f, v, law) for v in values})


def coalgebra_of(A: ConcreteAutomaton) -> KleisliMap:
    """The automaton as a map ``q -> {*} + {(a, q')} + {<a>q'}``."""
    table = {}
    for q in A.states:
        out = [UNIT] if A.is_final(q) else []
        out.extend(Pair(a, q2) for a, q2 in A.free_out(q))
        out.extend(Bind(ab) for ab in A.bar_out(q))
        table[q] = SuppSet(out)
    return KleisliMap(table)


# -- initial algebra: words and alpha-classes -------------------------------


def empty_word(kind: str) -> BarString:
    return CanonicalBarString() if kind == BAR else BarString()


def iota_step(v: FValue, kind: str = BAR) -> BarString:
    """Build a word from one layer: * -> eps, (a, w) -> aw, <a>w -> [|aw]."""
    if isinstance(v, Pair):
        return v.value.prepend(Letter(v.name, False))
    if isinstance(v, Bind):
        return canonicalize(v.abs.body.prepend(Letter(v.abs.binder, True)))
    return empty_word(kind)


def iota_inverse(w: BarString) -> FValue:
    if not w.letters:
        return UNIT
    head = w.letters[0]
    rest = type(w)(w.letters[1:])
    if head.bar:
        return Bind(Abs(head.name, rest))
    return Pair(head.name, rest)


def trace_step(c: KleisliMap, tr: KleisliMap, kind: str, law: Callable = lambda_F) -> KleisliMap:
    """One Kleene step ``tr -> J(iota) . Fbar(tr) . c``."""
    layer = fbar(tr, c.image(), law)
    composite = kleisli_compose(layer, c)
    return KleisliMap({q: s.map(lambda v: iota_step(v, kind)) for q, s in composite.table.items()})


def trace_chain(A: ConcreteAutomaton, depth: int) -> list[KleisliMap]:
    """The iterates tr(0) = bottom, ..., tr(depth)."""
    c = coalgebra_of(A)
    chain = [KleisliMap.bottom(A.states)]
    for _ in range(depth):
        chain.append(trace_step(c, chain[-1], A.lang_kind))
    return chain


def trace_iterate(A: ConcreteAutomaton, depth: int) -> KleisliMap:
    """The ``depth``-th Kleene iterate: all accepted words shorter than ``depth``."""
    return trace_chain(A, depth)[-1]


def as_language(words: SuppSet, kind: str, depth: int) -> LangApprox:
    return LangApprox.from_words(kind, depth, words)


def trace_language(A: ConcreteAutomaton, q: State | str, depth: int) -> LangApprox:
    """Trace of ``q`` from iterate ``depth`` as a language of words < depth."""
    return as_language(trace_iterate(A, depth)(A.state(q)), A.lang_kind, max(depth - 1, 0))


def check_trace_square(A: ConcreteAutomaton, depth: int,
                       coalgebra: KleisliMap | None = None) -> Report:
    """Check ``Fbar(L) . c = J(iota^-1) . L`` for L the enumerated languages.

    Both sides are compared on words of length <= depth.  Passing a
    different ``coalgebra`` changes the left-hand side only.
    """
    c = coalgebra if coalgebra is not None else coalgebra_of(A)
    lang = KleisliMap({
        q: SuppSet(enum_language(A, q, depth).all_words()) for q in A.states})
    left = kleisli_compose(fbar(lang, c.image()), c)
    right = KleisliMap({q: s.map(iota_inverse) for q, s in lang.table.items()})
    report = Report(f"trace square at depth {depth}")
    bad = []
    for q in A.states:
        lhs = SuppSet(v for v in left(q).elems if len(iota_step(v, A.lang_kind)) <= depth)
        if lhs != right(q):
            bad.append(str(q))
    report.add("Fbar(L) . c = J(iota^-1) . L", not bad, len(A.states),
               f"mismatch at {', '.join(bad[:5])}" if bad else "")
    return report
