"""Names, finite permutations, supports, abstractions and finite supported sets.

Every value type in the package speaks the same small protocol: ``act(p)``
returns the permuted value, ``support()`` the least support, and
``sort_key()`` a key giving a deterministic total order.  The module-level
:func:`act`, :func:`support` and :func:`sort_key` extend the protocol to
names, tuples and plain constants.

All values are immutable and safe to share between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations
from typing import Any, Callable, Generic, Iterable, Iterator, TypeVar

T = TypeVar("T")
U = TypeVar("U")

_NAME_RE = re.compile(r"^(?:([a-z])|#(\d+))$")


class Name(int):
    """An atom.  Names are ordered by index; ``a``..``z`` render 0..25."""

    __slots__ = ()

    def __new__(cls, index: int) -> "Name":
        if index < 0:
            raise ValueError(f"name index must be non-negative, got {index}")
        return super().__new__(cls, index)

    @classmethod
    def parse(cls, text: str) -> "Name":
        m = _NAME_RE.match(text)
        if m is None:
            raise ValueError(f"not a name: {text!r}")
        if m.group(1):
            return cls(ord(m.group(1)) - ord("a"))
        return cls(int(m.group(2)))

    @property
    def index(self) -> int:
        return int(self)

    def __str__(self) -> str:
        i = int(self)
        return chr(ord("a") + i) if i < 26 else f"#{i}"

    __repr__ = __str__


def names(text: str) -> list[Name]:
    """``names("a b c")`` -> ``[a, b, c]``; handy in tests and fixtures."""
    return [Name.parse(t) for t in text.split()]


def fresh(avoid: Iterable[int], start: int = 0) -> Name:
    """Least name with index >= ``start`` not in ``avoid``."""
    taken = set(avoid)
    i = start
    while i in taken:
        i += 1
    return Name(i)


class Perm:
    """A finite permutation stored as a product of transpositions.

    ``Perm([(a, b), (b, c)])`` is ``(a b)(b c)``: swaps apply right to left.
    Equality and hashing go through the normalized finite mapping.
    """

    __slots__ = ("swaps", "_map")

    def __init__(self, swaps: Iterable[tuple[Name, Name]] = ()):
        self.swaps: tuple[tuple[Name, Name], ...] = tuple(
            (Name(a), Name(b)) for a, b in swaps
        )
        self._map: dict[Name, Name] | None = None

    @classmethod
    def identity(cls) -> "Perm":
        return cls()

    @classmethod
    def swap(cls, a: Name, b: Name) -> "Perm":
        return cls([(a, b)]) if a != b else cls()

    @classmethod
    def from_mapping(cls, mapping: dict) -> "Perm":
        """Build a permutation from a bijection given on finitely many atoms."""
        mapping = {Name(k): Name(v) for k, v in mapping.items()}
        if set(mapping) != set(mapping.values()):
            raise ValueError("mapping is not a permutation of its domain")
        swaps = []
        seen = set()
        for start in sorted(mapping):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = mapping[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = mapping[nxt]
            # (c0 c1 ... ck) = (c0 c1)(c1 c2)...(c_{k-1} c_k)
            swaps.extend((cycle[i], cycle[i + 1]) for i in range(len(cycle) - 1))
        return cls(swaps)

    def __call__(self, x: Name) -> Name:
        for a, b in reversed(self.swaps):
            if x == a:
                x = b
            elif x == b:
                x = a
        return x if isinstance(x, Name) else Name(x)

    def compose(self, other: "Perm") -> "Perm":
        """``self.compose(q)(x) == self(q(x))``."""
        return Perm(self.swaps + other.swaps)

    __mul__ = compose

    def inverse(self) -> "Perm":
        return Perm(reversed(self.swaps))

    def mapping(self) -> dict[Name, Name]:
        """Normalized mapping restricted to the atoms actually moved."""
        if self._map is None:
            atoms = {x for s in self.swaps for x in s}
            self._map = {x: self(x) for x in sorted(atoms) if self(x) != x}
        return self._map

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self.mapping() == other.mapping()

    def __hash__(self) -> int:
        return hash(frozenset(self.mapping().items()))

    def __repr__(self) -> str:
        if not self.swaps:
            return "id"
        return "".join(f"({a} {b})" for a, b in self.swaps)


def pool_perms(pool: Iterable[Name]) -> Iterator[Perm]:
    """All permutations of a finite pool of names."""
    pool = sorted(pool)
    for image in permutations(pool):
        yield Perm.from_mapping(dict(zip(pool, image)))


def pool_generators(pool: Iterable[Name]) -> list[Perm]:
    """Adjacent transpositions; they generate every permutation of the pool."""
    pool = sorted(pool)
    return [Perm.swap(pool[i], pool[i + 1]) for i in range(len(pool) - 1)]


# -- the nominal protocol, extended to names, tuples and constants -----------

_CONSTANTS = (str, bool, type(None))


def act(p: Perm, x: Any) -> Any:
    if isinstance(x, Name):
        return p(x)
    if hasattr(x, "act"):
        return x.act(p)
    if isinstance(x, tuple):
        return tuple(act(p, y) for y in x)
    if isinstance(x, _CONSTANTS):
        return x
    raise TypeError(f"not a nominal value: {x!r}")


def support(x: Any) -> frozenset:
    if isinstance(x, Name):
        return frozenset((x,))
    if hasattr(x, "support"):
        return x.support()
    if isinstance(x, tuple):
        return frozenset().union(*(support(y) for y in x))
    if isinstance(x, _CONSTANTS):
        return frozenset()
    raise TypeError(f"not a nominal value: {x!r}")


def sort_key(x: Any) -> Any:
    # tagged by kind so that values of mixed shape stay comparable
    if isinstance(x, Name):
        return (0, int(x))
    if hasattr(x, "sort_key"):
        return (1, type(x).__name__, x.sort_key())
    if isinstance(x, tuple):
        return (2, tuple(sort_key(y) for y in x))
    if isinstance(x, _CONSTANTS):
        return (3, type(x).__name__, x)
    raise TypeError(f"not a nominal value: {x!r}")


def render(x: Any) -> str:
    if isinstance(x, tuple):
        return "(" + ", ".join(render(y) for y in x) + ")"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def is_fresh(a: Name, x: Any) -> bool:
    return a not in support(x)


# -- abstraction ------------------------------------------------------------


class ConcretionError(ValueError):
    """Concretion at a name that is neither the binder nor fresh for the body."""


@dataclass(frozen=True)
class Abs(Generic[T]):
    """The abstraction <binder>body, stored in canonical form.

    On construction the binder is replaced by the least name outside the
    support of the abstraction and the body is swapped to match, so
    structural equality coincides with equality of abstractions.
    """

    binder: Name
    body: T

    def __post_init__(self):
        a = Name(self.binder)
        outside = support(self.body) - {a}
        c = fresh(outside)
        body = self.body if c == a else act(Perm.swap(a, c), self.body)
        object.__setattr__(self, "binder", c)
        object.__setattr__(self, "body", body)

    def act(self, p: Perm) -> "Abs[T]":
        return Abs(p(self.binder), act(p, self.body))

    def support(self) -> frozenset:
        return support(self.body) - {self.binder}

    def sort_key(self):
        return (int(self.binder), sort_key(self.body))

    def at(self, b: Name) -> T:
        """Concretion ``<a>x @ b``."""
        if b == self.binder:
            return self.body
        if b in support(self.body):
            raise ConcretionError(f"{b} is not fresh for {render(self.body)}")
        return act(Perm.swap(self.binder, b), self.body)

    def map(self, f: Callable[[T], U]) -> "Abs[U]":
        """``[A]f``; ``f`` must be equivariant for this to be well defined."""
        return Abs(self.binder, f(self.body))

    def __str__(self) -> str:
        return f"<{self.binder}>{render(self.body)}"


def abs_eq(left, right) -> bool:
    """Equality of abstractions, decided on representatives.

    ``left`` and ``right`` are :class:`Abs` values or ``(binder, body)``
    pairs.  <a>x = <b>y iff a = b and x = y, or b is fresh for x and
    (a b).x = y.
    """
    a, x = (left.binder, left.body) if isinstance(left, Abs) else left
    b, y = (right.binder, right.body) if isinstance(right, Abs) else right
    if a == b and x == y:
        return True
    return b not in support(x) and act(Perm.swap(a, b), x) == y


def abs_concretion(v: Abs[T], b: Name) -> T:
    return v.at(b)


# -- finite supported sets --------------------------------------------------


class SuppSet(Generic[T]):
    """A finite set of nominal values, iterated in canonical order.

    Finite sets are uniformly finitely supported, so this one type stands
    for both powerset monads; which one a use site means is a matter of
    the surrounding signature.
    """

    __slots__ = ("_elems", "_order")

    def __init__(self, elems: Iterable[T] = ()):
        self._elems = frozenset(elems)
        self._order: tuple | None = None

    def __iter__(self) -> Iterator[T]:
        if self._order is None:
            self._order = tuple(sorted(self._elems, key=sort_key))
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._elems)

    def __contains__(self, x: object) -> bool:
        return x in self._elems

    def __bool__(self) -> bool:
        return bool(self._elems)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SuppSet) and self._elems == other._elems

    def __hash__(self) -> int:
        return hash(self._elems)

    def __le__(self, other: "SuppSet") -> bool:
        return self._elems <= other._elems

    def __or__(self, other: "SuppSet[T]") -> "SuppSet[T]":
        return SuppSet(self._elems | other._elems)

    @property
    def elems(self) -> frozenset:
        return self._elems

    def act(self, p: Perm) -> "SuppSet[T]":
        return SuppSet(act(p, x) for x in self._elems)

    def support(self) -> frozenset:
        return frozenset().union(*(support(x) for x in self._elems))

    def sort_key(self):
        return (len(self._elems), tuple(sort_key(x) for x in self))

    def map(self, f: Callable[[T], U]) -> "SuppSet[U]":
        return SuppSet(f(x) for x in self._elems)

    def __str__(self) -> str:
        return "{" + ", ".join(render(x) for x in self) + "}"

    __repr__ = __str__


EMPTY: SuppSet = SuppSet()


def set_unit(x: T) -> SuppSet[T]:
    return SuppSet((x,))


def set_mult(sets: Iterable[SuppSet[T]]) -> SuppSet[T]:
    return SuppSet(x for s in sets for x in s.elems)


def set_join(sets: Iterable[SuppSet[T]]) -> SuppSet[T]:
    return set_mult(sets)


def strength(x: T, s: SuppSet[U]) -> SuppSet[tuple[T, U]]:
    return SuppSet((x, y) for y in s.elems)


def costrength(s: SuppSet[T], y: U) -> SuppSet[tuple[T, U]]:
    return SuppSet((x, y) for x in s.elems)


def comm_pair(s: SuppSet[T], u: SuppSet[U]) -> SuppSet[tuple[T, U]]:
    """The double strength; for finite powersets simply the cartesian product."""
    return SuppSet((x, y) for x in s.elems for y in u.elems)


def comm_pair_upper(s: SuppSet[T], u: SuppSet[U]) -> SuppSet[tuple[T, U]]:
    """Strength first, then costrength inside, then flatten."""
    return set_mult(costrength(ts, y) for ts, y in strength(s, u))


def comm_pair_lower(s: SuppSet[T], u: SuppSet[U]) -> SuppSet[tuple[T, U]]:
    """Costrength first, then strength inside, then flatten."""
    return set_mult(strength(x, tu) for x, tu in costrength(s, u))

