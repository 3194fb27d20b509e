"""Randomized law suites: monad, distributive laws, hom-lattices, extension laws.

Every suite draws ``cases`` inputs from a seeded generator over a three-atom
pool and reports the first counterexample it meets.
"""

from __future__ import annotations

import random
import warnings
from typing import Callable

from .automata import auto_pool, expand, load_fixture
from .barlang import BAR, DATA
from .em import check_eps_laws, check_relation, psi_abs
from .kleisli import (
    UNIT,
    Bind,
    KleisliMap,
    Pair,
    fbar,
    kleisli_compose,
    kleisli_join,
    lambda_F,
    quotient,
    rho_abs,
)
from .nominal import (
    Abs,
    Name,
    Perm,
    SuppSet,
    abs_eq,
    act,
    comm_pair,
    comm_pair_lower,
    comm_pair_upper,
    pool_perms,
    set_mult,
    set_unit,
    strength,
    support,
)
from .report import Check, Report

POOL = tuple(Name(i) for i in range(3))


def _names(rng, k=3):
    return SuppSet(rng.choice(POOL) for _ in range(rng.randint(0, k)))


def _sets(rng, gen, k=2):
    return SuppSet(gen() for _ in range(rng.randint(0, k)))


def _perm(rng) -> Perm:
    image = list(POOL) + [Name(3)]
    rng.shuffle(image)
    return Perm.from_mapping(dict(zip(list(POOL) + [Name(3)], image)))


def _layer(rng, inner, kind=BAR):
    r = rng.random()
    if r < 0.2:
        return UNIT
    if kind == DATA or r < 0.6:
        return Pair(rng.choice(POOL), inner())
    return Bind(Abs(rng.choice(POOL), inner()))


def _first_failure(cases: int, trial: Callable[[], str | None]) -> str | None:
    for _ in range(cases):
        bad = trial()
        if bad:
            return bad
    return None


def _check(name: str, cases: int, bad: str | None) -> Check:
    return Check(name, bad is None, cases, bad or "")


def monad_laws(rng: random.Random, cases: int) -> Check:
    def trial():
        s = _names(rng)
        ss = _sets(rng, lambda: _names(rng))
        sss = _sets(rng, lambda: _sets(rng, lambda: _names(rng)))
        if set_mult(s.map(set_unit)) != s:
            return f"mult . T unit != id at {s}"
        if set_mult(set_unit(s)) != s:
            return f"mult . unit != id at {s}"
        if set_mult(set_mult(sss)) != set_mult(sss.map(set_mult)):
            return f"associativity fails at {sss}"
        p = _perm(rng)
        if set_mult(ss.act(p)) != set_mult(ss).act(p):
            return f"mult not equivariant at {ss}"
        return None
    return _check("monad laws", cases, _first_failure(cases, trial))


def commutativity(rng: random.Random, cases: int) -> Check:
    def trial():
        s, u = _names(rng), _names(rng)
        direct = comm_pair(s, u)
        if not (direct == comm_pair_upper(s, u) == comm_pair_lower(s, u)):
            return f"the two pairing paths differ at {s}, {u}"
        p = _perm(rng)
        if comm_pair(s.act(p), u.act(p)) != direct.act(p):
            return f"pairing not equivariant at {s}, {u}"
        x = rng.choice(POOL)
        if strength(p(x), u.act(p)) != strength(x, u).act(p):
            return f"strength not equivariant at {x}, {u}"
        return None
    return _check("strength and commutativity", cases, _first_failure(cases, trial))


def lambda_laws(rng: random.Random, cases: int, law: Callable = lambda_F) -> Check:
    def trial():
        v = _layer(rng, lambda: rng.choice(POOL))
        lifted = v if v is UNIT else (
            Pair(v.name, set_unit(v.value)) if isinstance(v, Pair)
            else Bind(v.abs.map(set_unit)))
        if law(lifted) != set_unit(v):
            return f"unit square fails at {v}"
        w = _layer(rng, lambda: _sets(rng, lambda: _names(rng)))
        flat = w if w is UNIT else (
            Pair(w.name, set_mult(w.value)) if isinstance(w, Pair)
            else Bind(w.abs.map(set_mult)))
        lhs = law(flat)
        rhs = set_mult(law(x) for x in law(w).elems)
        if lhs != rhs:
            return f"multiplication square fails at {w}: {lhs} != {rhs}"
        return None
    return _check("lambda distributive-law squares", cases, _first_failure(cases, trial))


def _rho_raw(a, s):
    """rho on a representative (a, S), without first normalizing <a>S."""
    return SuppSet(Abs(a, x) for x in s.elems)


def rho_laws(rng: random.Random, cases: int) -> Check:
    def trial():
        a, s = rng.choice(POOL), _names(rng)
        lhs = SuppSet(quotient(pair) for pair in strength(a, s).elems)
        if lhs != rho_abs(Abs(a, s)):
            return f"quotient square fails at ({a}, {s})"
        b = rng.choice([n for n in POOL + (Name(3),) if n == a or n not in s.support()])
        t = s.act(Perm.swap(a, b))
        if not abs_eq((a, s), (b, t)):
            return f"generator produced unequal representatives ({a}, {s}), ({b}, {t})"
        if _rho_raw(a, s) != _rho_raw(b, t):
            return f"rho depends on the representative: ({a}, {s}) vs ({b}, {t})"
        bigger = s | _names(rng)
        if not rho_abs(Abs(a, s)) <= rho_abs(Abs(a, bigger)):
            return f"rho not monotone at <{a}>{s}"
        return None
    return _check("rho quotient square and representative independence", cases,
                  _first_failure(cases, trial))


_NATURAL_MAPS = (
    ("swap", lambda x: (x[1], x[0])),
    ("first", lambda x: x[0]),
    ("second", lambda x: x[1]),
    ("diagonal", lambda x: (x[0], x[0])),
)


def psi_laws(rng: random.Random, cases: int) -> Check:
    def pair():
        a, b = rng.sample(POOL, 2)
        return (a, b)

    def trial():
        s = SuppSet(Abs(rng.choice(POOL), pair()) for _ in range(rng.randint(0, 3)))
        if rho_abs(psi_abs(s)) != s:
            return f"rho . psi != id at {s}"
        v = Abs(rng.choice(POOL), SuppSet(pair() for _ in range(rng.randint(0, 3))))
        if psi_abs(rho_abs(v)) != v:
            return f"psi . rho != id at {v}"
        label, f = rng.choice(_NATURAL_MAPS)
        lhs = psi_abs(SuppSet(ab.map(f) for ab in s.elems))
        rhs = psi_abs(s).map(lambda body: body.map(f))
        if lhs != rhs:
            return f"psi not natural for {label} at {s}"
        return None
    return _check("psi/rho inversion and psi naturality", cases, _first_failure(cases, trial))


def _random_map(rng, carrier, equivariant=False) -> KleisliMap:
    """A random Kleisli map on ``carrier``.

    Equivariant maps must send x to values supported within supp(x); a map
    that is merely symmetric under pool permutations is not enough.
    """
    carrier = list(carrier)
    if not equivariant:
        return KleisliMap({x: SuppSet(rng.sample(carrier, rng.randint(0, 2))) for x in carrier})
    table = {}
    for x in carrier:
        allowed = [y for y in carrier if support(y) <= support(x)]
        table[x] = set(rng.sample(allowed, min(len(allowed), rng.randint(0, 2))))
    sym = {x: set() for x in carrier}
    for p in pool_perms(POOL):
        inv = p.inverse()
        for x in carrier:
            sym[x] |= {act(p, y) for y in table[act(inv, x)]}
    return KleisliMap(sym)


CARRIER = POOL + tuple((a, b) for a in POOL for b in POOL)


def lattice_laws(rng: random.Random, cases: int) -> Check:
    carrier = CARRIER
    perms = list(pool_perms(POOL))

    def trial():
        f, g, h = (_random_map(rng, carrier) for _ in range(3))
        j = kleisli_join([f, g])
        if not (f <= j and g <= j):
            return "join is not an upper bound"
        k = kleisli_join([j, h])
        if not (j <= k):
            return "join is not least"
        if kleisli_join([], carrier) != KleisliMap.bottom(carrier):
            return "empty join is not bottom"
        if kleisli_compose(h, j) != kleisli_join([kleisli_compose(h, f), kleisli_compose(h, g)]):
            return "composition does not distribute over joins on the left"
        if kleisli_compose(j, h) != kleisli_join([kleisli_compose(f, h), kleisli_compose(g, h)]):
            return "composition does not distribute over joins on the right"
        bottom = KleisliMap.bottom(carrier)
        if kleisli_compose(bottom, f) != bottom:
            return "left strictness fails"
        ident = KleisliMap.identity(carrier)
        if kleisli_compose(f, ident) != f or kleisli_compose(ident, f) != f:
            return "identity law fails"
        if kleisli_compose(h, kleisli_compose(g, f)) != kleisli_compose(kleisli_compose(h, g), f):
            return "composition is not associative"
        e1, e2 = _random_map(rng, carrier, True), _random_map(rng, carrier, True)
        if not (e1.is_equivariant(perms) and kleisli_join([e1, e2]).is_equivariant(perms)):
            return "join of equivariant maps is not equivariant"
        return None
    return _check("hom-lattice laws and left strictness", cases, _first_failure(cases, trial))


def _f_carrier():
    out = [UNIT]
    out += [Pair(a, x) for a in POOL for x in CARRIER]
    out += list({Bind(Abs(a, x)) for a in POOL for x in CARRIER})
    return out


def fbar_laws(rng: random.Random, cases: int, law: Callable = lambda_F) -> Check:
    values = _f_carrier()

    def trial():
        f = _random_map(rng, CARRIER, True)
        g = _random_map(rng, CARRIER, True)
        ident = KleisliMap.identity(CARRIER)
        if fbar(ident, values, law) != KleisliMap.identity(values):
            return "extension does not preserve identities"
        lhs = fbar(kleisli_compose(g, f), values, law)
        rhs = kleisli_compose(fbar(g, values, law), fbar(f, values, law))
        if lhs != rhs:
            return "extension does not preserve composition"
        bigger = kleisli_join([f, g])
        if not fbar(f, values, law) <= fbar(bigger, values, law):
            return "extension is not locally monotone"
        return None
    return _check("extension functoriality and monotonicity", cases, _first_failure(cases, trial))


def eps_laws(seed: int, cases: int, law: Callable = lambda_F) -> list[Check]:
    out = []
    for kind in (DATA, BAR):
        rep = check_eps_laws(seed, cases, 3, kind, law)
        for c in rep.checks:
            out.append(Check(f"epsilon {c.name} [{kind}]", c.passed, c.cases, c.detail))
    return out


def fixture_relation(depth: int = 3) -> Check:
    bad = []
    for name in ("ex1", "ex2", "ex3"):
        spec = load_fixture(name)
        A = expand(spec, auto_pool(depth + 1, spec.max_arity))
        if not check_relation(A, depth).ok:
            bad.append(name)
    return Check(f"trace = language semantics on fixtures (depth {depth})", not bad, 3,
                 ", ".join(bad))


def _broken_lambda(v):
    out = lambda_F(v)
    if len(out) > 1:
        return SuppSet(list(out)[:-1])
    return out


def run_selfcheck(seed: int = 0, cases: int = 200, defect: bool = False) -> Report:
    """Run every law suite.  ``defect`` swaps in a lossy distributive law."""
    if cases == 0:
        warnings.warn("cases=0: law suites pass vacuously", stacklevel=2)
    law = _broken_lambda if defect else lambda_F
    report = Report(f"selfcheck seed={seed} cases={cases}")
    suites = [
        lambda r: monad_laws(r, cases),
        lambda r: commutativity(r, cases),
        lambda r: lambda_laws(r, cases, law),
        lambda r: rho_laws(r, cases),
        lambda r: psi_laws(r, cases),
        lambda r: lattice_laws(r, cases),
        lambda r: fbar_laws(r, cases, law),
    ]
    for i, suite in enumerate(suites):
        report.checks.append(suite(random.Random(seed * 1000 + i)))
    report.checks.extend(eps_laws(seed, cases, law))
    report.checks.append(fixture_relation())
    return report
