"""Symbolic NOFA/RNNA descriptions, their expansion over a finite name pool,
membership, and brute-force enumeration of accepted languages.

A description file has one declaration per line::

    rnna EX2
    state q0
    state q1(x)
    state q2 final
    trans q0 -|x-> q1(x)
    trans q1(x) -x-> q2

Variables stand for pairwise distinct names within one rule, so a finite
rule set denotes an equivariant transition relation.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from importlib import resources
from itertools import permutations
from typing import Iterable

from .barlang import (
    BAR,
    DATA,
    BarString,
    LangApprox,
    Letter,
    _canon,
    _free_names,
    _swap_letters,
    canonicalize,
)
from .nominal import Abs, Name, Perm, fresh, pool_generators
from .report import Report

NOFA = "nofa"
RNNA = "rnna"

_ID = r"[A-Za-z_][A-Za-z0-9_']*"
_HEADER_RE = re.compile(rf"^(nofa|rnna)\s+({_ID})\s*$")
_STATE_RE = re.compile(rf"^state\s+({_ID})\s*(?:\(([^()]*)\))?\s*(final)?\s*$")
_TRANS_RE = re.compile(
    rf"^trans\s+({_ID})\s*(?:\(([^()]*)\))?\s*-(\|?)({_ID})->\s*({_ID})\s*(?:\(([^()]*)\))?\s*$"
)
_VAR_RE = re.compile(rf"^{_ID}$")


class SpecError(ValueError):
    """A description that cannot be read; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        self.message = message
        where = f"line {line}, col {col}: " if line else ""
        super().__init__(where + message)


class ConditionViolation(SpecError):
    """A well-formed description breaking a side condition, e.g. RNNA-(b)."""

    def __init__(self, condition: str, message: str, line: int = 0, col: int = 0):
        self.condition = condition
        super().__init__(f"{condition} violation: {message}", line, col)


class PoolError(ValueError):
    """The finite name pool is too small for the requested computation."""


@dataclass(frozen=True)
class Orbit:
    id: str
    arity: int
    final: bool = False
    params: tuple[str, ...] = ()


@dataclass(frozen=True)
class Rule:
    source: str
    src_vars: tuple[str, ...]
    letter: str
    bar: bool
    target: str
    tgt_vars: tuple[str, ...]
    line: int = 0

    def variables(self) -> tuple[str, ...]:
        seen = []
        for v in self.src_vars + (self.letter,) + self.tgt_vars:
            if v not in seen:
                seen.append(v)
        return tuple(seen)

    def __str__(self) -> str:
        src = _state_text(self.source, self.src_vars)
        tgt = _state_text(self.target, self.tgt_vars)
        return f"trans {src} -{'|' if self.bar else ''}{self.letter}-> {tgt}"


def _state_text(orbit: str, args) -> str:
    return f"{orbit}({','.join(str(a) for a in args)})" if args else orbit


@dataclass
class AutomatonSpec:
    kind: str
    name: str
    orbits: dict[str, Orbit] = field(default_factory=dict)
    rules: list[Rule] = field(default_factory=list)

    @property
    def max_arity(self) -> int:
        return max((o.arity for o in self.orbits.values()), default=0)

    @property
    def max_rule_vars(self) -> int:
        return max((len(r.variables()) for r in self.rules), default=0)

    def violations(self) -> list[ConditionViolation]:
        """Side-condition violations of a structurally valid description."""
        found = []
        for r in self.rules:
            if self.kind != RNNA:
                continue
            src = set(r.src_vars)
            if not r.bar and r.letter not in src:
                found.append(ConditionViolation(
                    "RNNA-(b)",
                    f"free letter variable {r.letter} is not a source parameter "
                    f"(infinitely many free transitions) in `{r}`",
                    r.line, 1,
                ))
            allowed = src | ({r.letter} if r.bar else set())
            for v in r.tgt_vars:
                if v not in allowed:
                    found.append(ConditionViolation(
                        "RNNA-(b)",
                        f"target variable {v} is neither a source parameter nor the "
                        f"bound name in `{r}`",
                        r.line, 1,
                    ))
        return found

    def to_text(self) -> str:
        lines = [f"{self.kind} {self.name}"]
        for o in self.orbits.values():
            params = o.params or tuple(f"x{i + 1}" for i in range(o.arity))
            lines.append(f"state {_state_text(o.id, params)}{' final' if o.final else ''}")
        lines.extend(str(r) for r in self.rules)
        return "\n".join(lines) + "\n"


def _split_vars(text: str | None, line: int, col: int) -> tuple[str, ...]:
    if text is None or not text.strip():
        return ()
    out = tuple(v.strip() for v in text.split(","))
    for v in out:
        if not _VAR_RE.match(v):
            raise SpecError(f"bad variable {v!r}", line, col)
    return out


def parse_spec(text: str, check: bool = True) -> AutomatonSpec:
    """Read a description.  With ``check`` the RNNA side conditions are enforced."""
    spec = None
    pending: list[tuple[int, re.Match, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if spec is None:
            m = _HEADER_RE.match(stripped)
            if not m:
                raise SpecError("expected `nofa NAME` or `rnna NAME` header", lineno, col)
            spec = AutomatonSpec(m.group(1), m.group(2))
            continue
        if _HEADER_RE.match(stripped):
            raise SpecError("duplicate header", lineno, col)
        m = _STATE_RE.match(stripped)
        if m:
            oid = m.group(1)
            params = _split_vars(m.group(2), lineno, col)
            if oid in spec.orbits:
                raise SpecError(f"duplicate orbit id {oid}", lineno, col)
            if len(set(params)) != len(params):
                raise SpecError(f"repeated parameter in state {oid}", lineno, col)
            spec.orbits[oid] = Orbit(oid, len(params), bool(m.group(3)), params)
            continue
        m = _TRANS_RE.match(stripped)
        if m:
            pending.append((lineno, m, line))
            continue
        raise SpecError(f"cannot parse {stripped!r}", lineno, col)
    if spec is None:
        raise SpecError("empty description", 1, 1)

    for lineno, m, line in pending:
        def col_of(group: int) -> int:
            return len(line) - len(line.lstrip()) + m.start(group) + 1

        src, tgt = m.group(1), m.group(5)
        src_vars = _split_vars(m.group(2), lineno, col_of(1))
        tgt_vars = _split_vars(m.group(6), lineno, col_of(5))
        bar = bool(m.group(3))
        letter = m.group(4)
        for oid, vs, g in ((src, src_vars, 1), (tgt, tgt_vars, 5)):
            if oid not in spec.orbits:
                raise SpecError(f"unknown orbit {oid}", lineno, col_of(g))
            if len(vs) != spec.orbits[oid].arity:
                raise SpecError(
                    f"arity mismatch: {oid} has arity {spec.orbits[oid].arity}, "
                    f"got {len(vs)} arguments", lineno, col_of(g))
            if len(set(vs)) != len(vs):
                raise SpecError(f"repeated variable in {oid}(...)", lineno, col_of(g))
        if bar and spec.kind == NOFA:
            raise SpecError("bar letter in a nofa rule", lineno, col_of(4))
        spec.rules.append(Rule(src, src_vars, letter, bar, tgt, tgt_vars, lineno))

    if check:
        bad = spec.violations()
        if bad:
            raise bad[0]
    return spec


def load_fixture(name: str) -> AutomatonSpec:
    """Bundled examples: ``ex1`` (nofa), ``ex2`` and ``ex3`` (rnna)."""
    text = resources.files("nomaut.fixtures").joinpath(f"{name.lower()}.aut").read_text()
    return parse_spec(text)


# -- concrete automata ------------------------------------------------------


@dataclass(frozen=True)
class State:
    orbit: str
    args: tuple[Name, ...] = ()

    def act(self, p: Perm) -> "State":
        return State(self.orbit, tuple(p(a) for a in self.args))

    def support(self) -> frozenset:
        return frozenset(self.args)

    def sort_key(self):
        return (self.orbit, tuple(int(a) for a in self.args))

    def __str__(self) -> str:
        return _state_text(self.orbit, self.args)

    __repr__ = __str__


_STATE_TEXT_RE = re.compile(rf"^\s*({_ID})\s*(?:\(([^()]*)\))?\s*$")


def parse_state(text: str) -> State:
    m = _STATE_TEXT_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse state {text!r}")
    args = tuple(Name.parse(x.strip()) for x in (m.group(2) or "").split(",") if x.strip())
    return State(m.group(1), args)


class ConcreteAutomaton:
    """An automaton expanded over a finite pool of names.

    Bar transitions are stored as canonical abstractions ``<a>q'``, so the
    set of bar transitions is alpha-invariant by construction.
    """

    def __init__(self, kind: str, pool: Iterable[Name], states: Iterable[State],
                 finals: Iterable[State], free: Iterable[tuple[State, Name, State]],
                 bar: Iterable[tuple[State, Abs]] = (), spec: AutomatonSpec | None = None):
        self.kind = kind
        self.pool = tuple(sorted(Name(a) for a in pool))
        self.states = tuple(sorted(set(states), key=State.sort_key))
        self.finals = frozenset(finals)
        self.free = frozenset(free)
        self.bar = frozenset(bar)
        self.spec = spec
        self._free_out: dict[State, list] = {q: [] for q in self.states}
        self._bar_out: dict[State, list] = {q: [] for q in self.states}
        for q, a, q2 in sorted(self.free, key=lambda t: (t[0].sort_key(), int(t[1]), t[2].sort_key())):
            self._free_out.setdefault(q, []).append((a, q2))
        for q, ab in sorted(self.bar, key=lambda t: (t[0].sort_key(), t[1].sort_key())):
            self._bar_out.setdefault(q, []).append(ab)

    @property
    def lang_kind(self) -> str:
        return BAR if self.kind == RNNA else DATA

    @property
    def max_arity(self) -> int:
        return max((len(q.args) for q in self.states), default=0)

    def free_out(self, q: State) -> list[tuple[Name, State]]:
        return self._free_out.get(q, [])

    def bar_out(self, q: State) -> list[Abs]:
        return self._bar_out.get(q, [])

    def is_final(self, q: State) -> bool:
        return q in self.finals

    def act(self, p: Perm) -> tuple:
        """The permuted (states, finals, free, bar) components."""
        return (
            frozenset(q.act(p) for q in self.states),
            frozenset(q.act(p) for q in self.finals),
            frozenset((q.act(p), p(a), q2.act(p)) for q, a, q2 in self.free),
            frozenset((q.act(p), ab.act(p)) for q, ab in self.bar),
        )

    def components(self) -> tuple:
        return (frozenset(self.states), self.finals, self.free, self.bar)

    def state(self, text: str | State) -> State:
        q = text if isinstance(text, State) else parse_state(text)
        if q not in self._free_out:
            raise KeyError(f"no state {q} in the expansion over pool {list(self.pool)}")
        return q


def auto_pool(depth: int, max_arity: int) -> int:
    """Default pool size: room for every letter of a run, the largest state
    and one extra fresh binder."""
    return depth + max_arity + 1


def spec_pool(spec: AutomatonSpec, depth: int) -> int:
    """:func:`auto_pool` for a description, never below what its rules need."""
    return max(auto_pool(depth, spec.max_arity), spec.max_rule_vars)


def expand(spec: AutomatonSpec, pool_size: int) -> ConcreteAutomaton:
    need = max(spec.max_arity, spec.max_rule_vars)
    if pool_size < need:
        raise PoolError(f"pool of {pool_size} names is too small; rules need {need}")
    pool = tuple(Name(i) for i in range(pool_size))
    states = []
    finals = []
    for o in spec.orbits.values():
        for args in permutations(pool, o.arity):
            q = State(o.id, args)
            states.append(q)
            if o.final:
                finals.append(q)
    free = set()
    bar = set()
    for r in spec.rules:
        vs = r.variables()
        for image in permutations(pool, len(vs)):
            env = dict(zip(vs, image))
            q = State(r.source, tuple(env[v] for v in r.src_vars))
            q2 = State(r.target, tuple(env[v] for v in r.tgt_vars))
            if r.bar:
                bar.add((q, Abs(env[r.letter], q2)))
            else:
                free.add((q, env[r.letter], q2))
    return ConcreteAutomaton(spec.kind, pool, states, finals, free, bar, spec)


# -- semantics by runs ------------------------------------------------------


def accepts(A: ConcreteAutomaton, q: State | str, w: BarString | str) -> bool:
    """Whether ``q`` accepts ``w`` (for an RNNA: some member of ``[w]``)."""
    q = A.state(q)
    if isinstance(w, str):
        w = BarString.parse(w)
    outside = w.support() - set(A.pool)
    if outside:
        raise PoolError(f"word uses names {sorted(outside)} outside the pool")
    if A.kind == NOFA:
        if w.has_bars():
            raise ValueError("a nofa reads no bar letters")
        return _accepts_plain(A, q, w.letters)
    return _accepts_classes(A, q, canonicalize(w).letters, {})


def _accepts_plain(A, q, letters) -> bool:
    if not letters:
        return A.is_final(q)
    a = letters[0].name
    return any(b == a and _accepts_plain(A, q2, letters[1:]) for b, q2 in A.free_out(q))


def _accepts_classes(A, q, letters, memo) -> bool:
    key = (q, letters)
    if key in memo:
        return memo[key]
    if not letters:
        result = A.is_final(q)
    elif not letters[0].bar:
        a = letters[0].name
        result = any(b == a and _accepts_classes(A, q2, letters[1:], memo)
                     for b, q2 in A.free_out(q))
    else:
        a, rest = letters[0].name, letters[1:]
        word_support = _free_names(rest) - {a}
        result = False
        for ab in A.bar_out(q):
            # concretize <a>[rest] and <b>q' at one name fresh for both
            taken = word_support | ab.support()
            c = next((n for n in A.pool if n not in taken), None)
            if c is None:
                raise PoolError(f"no name in the pool is fresh for {ab} and the word")
            if _accepts_classes(A, ab.at(c), _canon(_swap_letters(rest, a, c)), memo):
                result = True
                break
    memo[key] = result
    return result


def _check_enum_pool(A: ConcreteAutomaton) -> None:
    if A.kind == RNNA and len(A.pool) < A.max_arity + 1:
        raise PoolError(
            f"pool of {len(A.pool)} names leaves no fresh binder for arity {A.max_arity}")


def enum_language(A: ConcreteAutomaton, q: State | str, depth: int,
                  all_binders: bool = False) -> LangApprox:
    """Accepted words of length <= depth, by exhaustive run enumeration.

    Each run spells a literal word; bar languages keep its alpha-class.  By
    default a bar step follows the stored representative ``<b>q'`` (the
    literal transition ``q -|b-> q'``); ``all_binders`` follows every
    alpha-variant ``q -|c-> (b c).q'`` with ``c`` in the pool instead.
    """
    q = A.state(q)
    _check_enum_pool(A)
    found = []

    def runs(state, word, left):
        if A.is_final(state):
            found.append(word)
        if left == 0:
            return
        for a, q2 in A.free_out(state):
            runs(q2, word + ((a, False),), left - 1)
        for ab in A.bar_out(state):
            if all_binders:
                for c in A.pool:
                    if c == ab.binder or c not in ab.body.support():
                        runs(ab.at(c), word + ((c, True),), left - 1)
            else:
                runs(ab.body, word + ((ab.binder, True),), left - 1)

    runs(q, (), depth)
    words = [BarString(tuple(Letter(n, b) for n, b in w)) for w in found]
    return LangApprox.from_words(A.lang_kind, depth, words)


def validate(target: AutomatonSpec | ConcreteAutomaton, pool_size: int | None = None) -> Report:
    """Check the side conditions of a description or an expansion.

    A description is checked symbolically and then expanded (over
    ``pool_size`` names, default ``max_arity + 2``) and checked concretely.
    """
    if isinstance(target, AutomatonSpec):
        spec = target
        report = Report(f"validate {spec.kind} {spec.name}")
        bad = spec.violations()
        report.add("symbolic branching condition RNNA-(b)" if spec.kind == RNNA
                   else "symbolic rules", not bad, len(spec.rules),
                   "; ".join(str(v) for v in bad))
        if bad:
            return report
        size = pool_size or max(spec.max_arity + 2, spec.max_rule_vars)
        concrete = validate(expand(spec, size))
        report.checks.extend(concrete.checks)
        return report

    A = target
    report = Report(f"validate expansion over {len(A.pool)} names")
    base = A.components()
    labels = ("states", "finals", "free transitions", "bar transitions")
    problems = []
    for p in pool_generators(A.pool):
        moved = A.act(p)
        for label, mine, theirs in zip(labels, base, moved):
            missing = theirs - mine
            if missing:
                sample = sorted(missing, key=str)[0]
                problems.append(f"{label} not closed under {p}: missing {_render(sample)}")
    report.add("equivariance under pool permutations", not problems,
               len(A.pool) - 1 if A.pool else 0, "; ".join(problems[:3]))

    non_canonical = [ab for _, ab in A.bar if Abs(ab.binder, ab.body) != ab]
    report.add("alpha-invariance of bar transitions", not non_canonical, len(A.bar),
               f"{len(non_canonical)} non-canonical abstractions" if non_canonical else "")

    if A.kind == RNNA:
        wide = [f"{q} -{a}-> {q2}" for q, a, q2 in A.free if not ({a} | q2.support()) <= q.support()]
        wide += [f"{q} -> {ab}" for q, ab in A.bar if not ab.support() <= q.support()]
        report.add("finite branching RNNA-(b)", not wide, len(A.free) + len(A.bar),
                   "; ".join(sorted(wide)[:3]))
    elif A.bar:
        report.add("nofa without bar transitions", False, len(A.bar))
    return report


def _render(x) -> str:
    if isinstance(x, tuple):
        return " ".join(str(y) for y in x)
    return str(x)


# -- random descriptions ----------------------------------------------------


def random_spec(rng: random.Random, kind: str, max_orbits: int = 3, max_arity: int = 2,
                max_rules: int = 5, name: str = "RANDOM") -> AutomatonSpec:
    """A random description satisfying the side conditions of ``kind``."""
    spec = AutomatonSpec(kind, name)
    n = rng.randint(1, max_orbits)
    for i in range(n):
        arity = rng.randint(0, max_arity)
        params = tuple(f"x{j + 1}" for j in range(arity))
        spec.orbits[f"q{i}"] = Orbit(f"q{i}", arity, rng.random() < 0.5, params)
    if not any(o.final for o in spec.orbits.values()):
        oid = rng.choice(list(spec.orbits))
        o = spec.orbits[oid]
        spec.orbits[oid] = Orbit(o.id, o.arity, True, o.params)
    orbits = list(spec.orbits.values())
    for _ in range(rng.randint(1, max_rules)):
        src = rng.choice(orbits)
        tgt = rng.choice(orbits)
        src_vars = src.params
        bar = kind == RNNA and rng.random() < 0.4
        if bar:
            letter = rng.choice(src_vars + ("y",)) if src_vars else "y"
            pool = list(src_vars) + ([letter] if letter not in src_vars else [])
        elif kind == RNNA:
            if not src_vars:
                continue
            letter = rng.choice(src_vars)
            pool = list(src_vars)
        else:
            letter = rng.choice(src_vars + ("y",))
            pool = list(src_vars) + ([letter] if letter not in src_vars else [])
        if len(pool) < tgt.arity:
            continue
        tgt_vars = tuple(rng.sample(pool, tgt.arity))
        spec.rules.append(Rule(src.id, src_vars, letter, bar, tgt.id, tgt_vars))
    return spec


def random_automaton(rng: random.Random, kind: str, depth: int) -> ConcreteAutomaton:
    """A random description expanded over the default pool for ``depth``."""
    spec = random_spec(rng, kind)
    return expand(spec, spec_pool(spec, depth))
