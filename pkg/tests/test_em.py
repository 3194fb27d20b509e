import random
import threading

import pytest

from nomaut.automata import NOFA, RNNA, PoolError, State, enum_language, random_automaton
from nomaut.barlang import BAR, DATA
from nomaut.em import (
    Determinizer,
    GValue,
    check_eps_laws,
    check_relation,
    eps_left_square,
    eps_right_square,
    epsilon,
    lang_semantics,
    psi_abs,
    rho_g,
)
from nomaut.kleisli import UNIT, Bind, Pair, rho_abs
from nomaut.nominal import EMPTY, Abs, SuppSet, abs_eq, names

a, b, c, d = names("a b c d")
pool = names("a b c")
q, q2 = State("q", ()), State("r", ())


def _words(lang):
    return [str(w) for w in lang.all_words()]


def test_epsilon_examples():
    g = epsilon(SuppSet([UNIT]), pool)
    assert g.accept and not any(s for _, s in g.free) and not g.bar.body
    g = epsilon(SuppSet([Pair(a, q), Pair(b, q2)]), pool)
    assert g.succ(a) == SuppSet([q]) and g.succ(b) == SuppSet([q2]) and not g.succ(c)
    q1 = lambda n: State("q1", (n,))  # noqa: E731
    g = epsilon(SuppSet([Bind(Abs(a, q1(a)))]), pool)
    assert g.bar == Abs(a, SuppSet([q1(a)]))
    assert abs_eq((g.bar.binder, g.bar.body), (c, SuppSet([q1(c)])))


def test_epsilon_rejects_letters_outside_pool():
    with pytest.raises(PoolError):
        epsilon(SuppSet([Pair(d, q)]), pool)


def test_epsilon_data_kind_has_no_bar():
    g = epsilon(SuppSet([Pair(a, q)]), pool, DATA)
    assert g.bar is None
    with pytest.raises(ValueError):
        epsilon(SuppSet([Bind(Abs(a, a))]), pool, DATA)


def test_psi_examples():
    assert psi_abs(SuppSet([Abs(a, a)])) == Abs(a, SuppSet([a]))
    assert psi_abs(SuppSet([Abs(a, a)])) == Abs(c, SuppSet([c]))
    assert psi_abs(EMPTY) == Abs(a, EMPTY)
    assert psi_abs(SuppSet([Abs(a, b)])) == Abs(a, SuppSet([b]))


def test_psi_needs_a_fresh_pool_name():
    with pytest.raises(PoolError):
        psi_abs(SuppSet([Abs(a, (b, c))]), pool=[b, c])


def test_psi_rho_roundtrip():
    rng = random.Random(0)
    for _ in range(200):
        s = SuppSet(Abs(rng.choice(pool), (rng.choice(pool), rng.choice(pool)))
                    for _ in range(rng.randint(0, 3)))
        assert rho_abs(psi_abs(s)) == s


def test_rho_g_merges_steps():
    g1 = GValue(False, ((a, q),), Abs(a, q))
    g2 = GValue(True, ((a, q2),), Abs(b, b))
    merged = rho_g(SuppSet([g1, g2]), [a])
    assert merged.accept
    assert merged.succ(a) == SuppSet([q, q2])
    assert merged.bar == Abs(a, SuppSet([q, a]))


def test_determinize_step_examples(expanded):
    A1 = expanded("ex1", pool=2)
    d1 = Determinizer(A1)
    g = d1.step(SuppSet([State("q2", ())]))
    assert g.accept and not any(s for _, s in g.free)
    g = d1.step(SuppSet([State("q0", ())]))
    assert g.succ(a) == SuppSet([State("q1", (a,))])
    assert g.succ(b) == SuppSet([State("q1", (b,))])
    d2 = Determinizer(expanded("ex2"))
    g = d2.step(SuppSet([State("q0", ())]))
    assert g.bar == Abs(c, SuppSet([State("q1", (c,))]))


def test_lang_semantics_examples(expanded):
    assert _words(lang_semantics(expanded("ex1", pool=3), "q0", 3)) == ["aa", "bb", "cc"]
    assert _words(lang_semantics(expanded("ex2"), "q0", 2)) == ["|aa"]
    assert _words(lang_semantics(expanded("ex3"), "q0", 1)) == ["|a"]


def test_relation_on_fixtures(expanded):
    for name in ("ex1", "ex2", "ex3"):
        A = expanded(name, depth=4)
        for depth in range(4):
            assert check_relation(A, depth).ok


class _DroppingDeterminizer(Determinizer):
    """Forgets the first free successor of every macro-state."""

    def step(self, macro):
        g = super().step(macro)
        free = tuple((x, EMPTY if i == 0 else s) for i, (x, s) in enumerate(g.free))
        return GValue(g.accept, free, g.bar)


def test_relation_detects_dropped_macro_transition(expanded):
    A = expanded("ex1")
    assert not check_relation(A, 3, determinizer=_DroppingDeterminizer(A)).ok


def test_random_relation():
    rng = random.Random(4)
    for kind in (NOFA, RNNA):
        for _ in range(10):
            A = random_automaton(rng, kind, 3)
            assert check_relation(A, 3).ok
            for st in A.states[:3]:
                assert lang_semantics(A, st, 3).same_words(enum_language(A, st, 3))


def test_macro_state_language_is_union(expanded):
    A = expanded("ex1", pool=3)
    both = SuppSet([State("q0", ()), State("q2", ())])
    assert _words(lang_semantics(A, both, 2)) == ["ε", "aa", "bb", "cc"]


def test_determinizer_is_safe_across_threads(expanded):
    A = expanded("ex3", depth=4)
    det = Determinizer(A)
    expected = lang_semantics(A, "q0", 4)
    out = []

    def work():
        out.append(det.language(SuppSet([State("q0", ())]), 4))

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(x.same_words(expected) for x in out)


def test_eps_squares_degenerate_inputs():
    for kind in (DATA, BAR):
        upper, lower = eps_left_square(EMPTY, pool, kind)
        assert upper == lower and not upper.accept
        upper, lower = eps_right_square(SuppSet([SuppSet([UNIT])]), pool, kind)
        assert upper == lower and upper.accept


@pytest.mark.parametrize("kind", [DATA, BAR])
def test_eps_laws(kind):
    report = check_eps_laws(seed=0, cases=200, kind=kind)
    assert report.ok, str(report)
