"""Bar strings, alpha-equivalence, and depth-bounded languages.

A bar string is a word over names and bar letters ``|a``; ``|a`` binds
``a`` in the rest of the word.  Words are written either compactly
(``a|ab``) or with whitespace between letters (``a |a #27``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .nominal import Abs, Name, Perm, SuppSet, fresh

_TOKEN_RE = re.compile(r"\|?(?:[a-z]|#\d+)")


class Letter(NamedTuple):
    name: Name
    bar: bool = False

    def act(self, p: Perm) -> "Letter":
        return Letter(p(self.name), self.bar)

    def support(self) -> frozenset:
        return frozenset((self.name,))

    def sort_key(self):
        return (int(self.name), self.bar)

    def __str__(self) -> str:
        return f"|{self.name}" if self.bar else str(self.name)


def Free(a: Name) -> Letter:
    return Letter(Name(a), False)


def Bar(a: Name) -> Letter:
    return Letter(Name(a), True)


def parse_letters(text: str) -> tuple[Letter, ...]:
    text = text.strip()
    if text in ("", "ε", "eps"):
        return ()
    tokens = text.split() if any(c.isspace() for c in text) else None
    if tokens is None:
        tokens = _TOKEN_RE.findall(text)
        if "".join(tokens) != text:
            raise ValueError(f"cannot parse word {text!r}")
    letters = []
    for tok in tokens:
        bar = tok.startswith("|")
        letters.append(Letter(Name.parse(tok[1:] if bar else tok), bar))
    return tuple(letters)


def render_letters(letters: tuple[Letter, ...]) -> str:
    if not letters:
        return "ε"
    parts = [str(x) for x in letters]
    if all(x.name < 26 for x in letters):
        return "".join(parts)
    return " ".join(parts)


def _swap_letters(letters, a, b):
    if a == b:
        return letters
    out = []
    for x in letters:
        n = x.name
        if n == a:
            out.append(Letter(b, x.bar))
        elif n == b:
            out.append(Letter(a, x.bar))
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class BarString:
    """A literal bar string; its support is every name occurring in it."""

    letters: tuple[Letter, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "BarString":
        return cls(parse_letters(text))

    def __len__(self) -> int:
        return len(self.letters)

    def act(self, p: Perm) -> "BarString":
        return BarString(tuple(x.act(p) for x in self.letters))

    def support(self) -> frozenset:
        return frozenset(x.name for x in self.letters)

    def sort_key(self):
        return (len(self.letters), tuple((int(x.name), x.bar) for x in self.letters))

    def prepend(self, letter: Letter) -> "BarString":
        return BarString((letter,) + self.letters)

    def has_bars(self) -> bool:
        return any(x.bar for x in self.letters)

    def __str__(self) -> str:
        return render_letters(self.letters)


class CanonicalBarString(BarString):
    """An alpha-equivalence class of bar strings, held by its canonical form.

    Build these with :func:`canonicalize`.  The action re-canonicalizes and
    the support is the set of free names.
    """

    def act(self, p: Perm) -> "CanonicalBarString":
        return _canonical(tuple(x.act(p) for x in self.letters))

    def support(self) -> frozenset:
        return _free_names(self.letters)

    def prepend(self, letter: Letter) -> "CanonicalBarString":
        if letter.bar:
            return _canonical((letter,) + self.letters)
        # a.canon(w) is canon(a.w)
        return CanonicalBarString((letter,) + self.letters)

    def tail(self) -> "CanonicalBarString":
        return CanonicalBarString(self.letters[1:])


@lru_cache(maxsize=None)
def _free_names(letters: tuple[Letter, ...]) -> frozenset:
    bound = set()
    free = set()
    for x in letters:
        if x.bar:
            bound.add(x.name)
        elif x.name not in bound:
            free.add(x.name)
    return frozenset(free)


def free_names(w: BarString | Iterable[Letter]) -> frozenset:
    letters = w.letters if isinstance(w, BarString) else tuple(w)
    return _free_names(letters)


@lru_cache(maxsize=None)
def _canon(letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    if not letters:
        return ()
    head, rest = letters[0], letters[1:]
    if not head.bar:
        return (head,) + _canon(rest)
    a = head.name
    b = fresh(_free_names(rest) - {a})
    return (Letter(b, True),) + _canon(_swap_letters(rest, a, b))


def _canonical(letters: tuple[Letter, ...]) -> CanonicalBarString:
    return CanonicalBarString(_canon(letters))


def canonicalize(w: BarString | str) -> CanonicalBarString:
    """Canonical representative of ``[w]``.

    Each binder becomes the least name outside the support of the
    abstraction it heads; the suffix is renamed and canonicalized again.
    """
    if isinstance(w, str):
        w = BarString.parse(w)
    return _canonical(w.letters)


def alpha_eq(v: BarString | str, w: BarString | str) -> bool:
    """Alpha-equivalence by structural recursion on abstraction equality."""
    if isinstance(v, str):
        v = BarString.parse(v)
    if isinstance(w, str):
        w = BarString.parse(w)
    return _alpha_eq(v.letters, w.letters)


def _alpha_eq(v, w) -> bool:
    if len(v) != len(w):
        return False
    if not v:
        return True
    hv, hw = v[0], w[0]
    if hv.bar != hw.bar:
        return False
    if not hv.bar:
        return hv.name == hw.name and _alpha_eq(v[1:], w[1:])
    a, b = hv.name, hw.name
    rv, rw = v[1:], w[1:]
    if a == b:
        return _alpha_eq(rv, rw)
    return b not in _free_names(rv) and _alpha_eq(_swap_letters(rv, a, b), rw)


# -- depth-bounded languages ------------------------------------------------

DATA = "data"
BAR = "bar"


class LengthError(ValueError):
    pass


def _word(kind: str, w) -> BarString:
    if isinstance(w, str):
        w = BarString.parse(w)
    if kind == BAR:
        return w if isinstance(w, CanonicalBarString) else canonicalize(w)
    if w.has_bars():
        raise ValueError(f"data words cannot contain bar letters: {w}")
    return BarString(w.letters)


@dataclass(frozen=True)
class LangApprox:
    """All words of a language up to length ``depth``.

    The empty word lives in ``eps``; ``words`` holds the non-empty ones.
    Bar languages hold canonical forms only.
    """

    kind: str
    depth: int
    eps: bool = False
    words: frozenset = frozenset()

    @classmethod
    def empty(cls, kind: str, depth: int) -> "LangApprox":
        return cls(kind, depth)

    @classmethod
    def from_words(cls, kind: str, depth: int, words: Iterable) -> "LangApprox":
        eps = False
        ws = set()
        for w in words:
            w = _word(kind, w)
            if len(w) > depth:
                raise LengthError(f"word {w} longer than depth {depth}")
            if len(w) == 0:
                eps = True
            else:
                ws.add(w)
        return cls(kind, depth, eps, frozenset(ws))

    def __contains__(self, w) -> bool:
        w = _word(self.kind, w)
        if len(w) == 0:
            return self.eps
        return w in self.words

    def insert(self, w) -> "LangApprox":
        w = _word(self.kind, w)
        if len(w) > self.depth:
            raise LengthError(f"word {w} longer than depth {self.depth}")
        if len(w) == 0:
            return LangApprox(self.kind, self.depth, True, self.words)
        return LangApprox(self.kind, self.depth, self.eps, self.words | {w})

    def members(self) -> list:
        """Non-empty words in canonical order."""
        return sorted(self.words, key=lambda w: w.sort_key())

    def all_words(self) -> list:
        empty = CanonicalBarString() if self.kind == BAR else BarString()
        return ([empty] if self.eps else []) + self.members()

    def truncate(self, depth: int) -> "LangApprox":
        return LangApprox(
            self.kind, depth, self.eps, frozenset(w for w in self.words if len(w) <= depth)
        )

    def same_words(self, other: "LangApprox") -> bool:
        return self.eps == other.eps and self.words == other.words

    def act(self, p: Perm) -> "LangApprox":
        return LangApprox(self.kind, self.depth, self.eps, frozenset(w.act(p) for w in self.words))

    def support(self) -> frozenset:
        return frozenset().union(*(w.support() for w in self.words))

    def sort_key(self):
        return (self.kind, self.depth, self.eps, tuple(w.sort_key() for w in self.members()))

    def derive_free(self, a: Name) -> "LangApprox":
        depth = max(self.depth - 1, 0)
        eps = False
        tails = set()
        for w in self.words:
            head = w.letters[0]
            if head.bar or head.name != a:
                continue
            t = type(w)(w.letters[1:])
            if len(t) == 0:
                eps = True
            else:
                tails.add(t)
        return LangApprox(self.kind, depth, eps, frozenset(tails))

    def derive_bar(self) -> Abs["LangApprox"]:
        """<a>{[w] : [|a w] in L} for the least name a fresh for L."""
        if self.kind != BAR:
            raise ValueError("bar derivative is only defined for bar languages")
        a = fresh(self.support())
        return Abs(a, self.bar_body(a))

    def bar_body(self, a: Name) -> "LangApprox":
        """{[w] : [|a w] in L}; ``a`` must be fresh for L."""
        if a in self.support():
            raise ValueError(f"{a} is not fresh for the language")
        eps = False
        tails = set()
        for w in self.words:
            head = w.letters[0]
            if not head.bar:
                continue
            t = _canonical(_swap_letters(w.letters[1:], head.name, a))
            if len(t) == 0:
                eps = True
            else:
                tails.add(t)
        return LangApprox(self.kind, max(self.depth - 1, 0), eps, frozenset(tails))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "depth": self.depth,
            "eps": self.eps,
            "words": [str(w) for w in self.members()],
        }

    def __str__(self) -> str:
        body = ", ".join(str(w) for w in self.all_words())
        return "{" + body + "}"


class Tau(NamedTuple):
    eps: bool
    free: dict
    bar: Abs | None


def lang_eps(lang: LangApprox) -> bool:
    return lang.eps


def lang_insert(lang: LangApprox, w) -> LangApprox:
    return lang.insert(w)


def derive_free(lang: LangApprox, a: Name) -> LangApprox:
    return lang.derive_free(a)


def derive_bar(lang: LangApprox) -> Abs[LangApprox]:
    return lang.derive_bar()


def lang_tau(lang: LangApprox, pool: Iterable[Name]) -> Tau:
    """The derivative structure: acceptance, free derivatives, bar derivative."""
    free = {Name(a): lang.derive_free(Name(a)) for a in sorted(pool)}
    bar = lang.derive_bar() if lang.kind == BAR else None
    return Tau(lang.eps, free, bar)


def member_by_derivatives(lang: LangApprox, w) -> bool:
    """Decide membership by stepping the derivative structure along ``w``."""
    w = _word(lang.kind, w)
    current = lang
    letters = w.letters
    while letters:
        head = letters[0]
        if head.bar:
            abs_ = current.derive_bar()
            rest = _canonical(letters[1:])
            # concretize both abstractions at one name fresh for both
            c = fresh(abs_.support() | (_free_names(letters[1:]) - {head.name}))
            current = abs_.at(c)
            letters = _canon(_swap_letters(rest.letters, head.name, c))
        else:
            current = current.derive_free(head.name)
            letters = letters[1:]
    return current.eps


def all_bar_strings(pool: Iterable[Name], length: int, bars: bool = True):
    """Every bar string of exactly ``length`` letters over ``pool``."""
    alphabet = [Letter(a, False) for a in sorted(pool)]
    if bars:
        alphabet += [Letter(a, True) for a in sorted(pool)]
    words = [()]
    for _ in range(length):
        words = [w + (x,) for w in words for x in alphabet]
    return [BarString(w) for w in words]
