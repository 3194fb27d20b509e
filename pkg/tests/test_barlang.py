import random

import pytest
from hypothesis import given, strategies as st

from oracles import alpha_closure, all_words, free_names as oracle_free_names
from nomaut.barlang import (
    BAR,
    DATA,
    BarString,
    LangApprox,
    Letter,
    LengthError,
    alpha_eq,
    all_bar_strings,
    canonicalize,
    derive_bar,
    derive_free,
    free_names,
    lang_tau,
    member_by_derivatives,
    parse_letters,
    render_letters,
)
from nomaut.nominal import Abs, Name, Perm, abs_eq, fresh, names

a, b, c, d = names("a b c d")

letters = st.builds(Letter, st.integers(0, 3).map(Name), st.booleans())
bar_strings = st.lists(letters, max_size=5).map(lambda ls: BarString(tuple(ls)))


def _bs(word):
    return BarString(tuple(Letter(Name(n), bar) for n, bar in word))


def test_parse_and_render():
    assert parse_letters("a|ab") == (Letter(a, False), Letter(a, True), Letter(b, False))
    assert parse_letters("a |a b") == parse_letters("a|ab")
    assert parse_letters("") == parse_letters("ε") == ()
    assert render_letters(()) == "ε"
    assert str(BarString.parse("|a#30")) == "|a #30"
    with pytest.raises(ValueError):
        parse_letters("A")


def test_free_names_examples():
    assert free_names(BarString.parse("a|aba")) == {a, b}
    assert free_names(BarString.parse("|aaba")) == {b}
    assert free_names(BarString.parse("")) == frozenset()


@given(bar_strings)
def test_free_names_match_oracle(w):
    word = tuple((int(x.name), x.bar) for x in w.letters)
    assert free_names(w) == {Name(n) for n in oracle_free_names(word)}


def test_alpha_eq_examples():
    assert alpha_eq("|aa", "|bb")
    assert alpha_eq("|ab", "|cb")
    assert not alpha_eq("a|ab", "b|ba")
    assert alpha_eq("|aa|bb", "|cc|bb")


def test_canonical_examples():
    assert str(canonicalize("|bb")) == "|aa"
    assert str(canonicalize("|ab")) == "|ab"
    assert str(canonicalize("abc")) == "abc"
    assert str(canonicalize("|ba")) == "|ba"
    assert str(canonicalize("|bb|cc")) == "|aa|aa"


def test_canonical_form_separates_nested_binders():
    # a naive rule that renames after canonicalizing the tail fails here
    assert canonicalize("|aa|bb") == canonicalize("|cc|bb")
    assert str(canonicalize("|cc|bb")) == "|aa|aa"


@pytest.fixture(scope="module")
def closure():
    # five names leave room for every renaming path between 3-name strings
    return alpha_closure(5, 4)


def test_canonical_partition_matches_oracle(closure):
    for length in range(5):
        by_canon, by_oracle = {}, {}
        for w in all_words(3, length):
            by_canon.setdefault(canonicalize(_bs(w)), set()).add(w)
            by_oracle.setdefault(closure.find(w), set()).add(w)
        assert sorted(map(sorted, by_canon.values())) == sorted(map(sorted, by_oracle.values()))


def test_alpha_eq_exhaustive_to_length_3(closure):
    words = [w for n in range(4) for w in all_words(3, n)]
    strings = [_bs(w) for w in words]
    roots = [closure.find(w) for w in words]
    bad = 0
    for i, v in enumerate(strings):
        for j, w in enumerate(strings):
            if alpha_eq(v, w) != (roots[i] == roots[j]):
                bad += 1
    assert bad == 0


def test_alpha_eq_sampled_at_length_4(closure):
    rng = random.Random(0)
    words = all_words(3, 4)
    classes = {}
    for w in words:
        classes.setdefault(closure.find(w), []).append(w)
    groups = [g for g in classes.values() if len(g) > 1]
    bad = 0
    for i in range(100_000):
        if i % 2:
            v, w = rng.choice(words), rng.choice(words)
        else:
            v, w = rng.choice(rng.choice(groups)), rng.choice(rng.choice(groups))
        if alpha_eq(_bs(v), _bs(w)) != (closure.find(v) == closure.find(w)):
            bad += 1
    assert bad == 0


@given(bar_strings)
def test_canonical_is_idempotent_and_equivalent(w):
    cw = canonicalize(w)
    assert canonicalize(cw) == cw
    assert alpha_eq(w, BarString(cw.letters))


@given(bar_strings, st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=4))
def test_alpha_eq_is_equivariant(w, swaps):
    p = Perm(swaps)
    pw = w.act(p)
    assert canonicalize(pw) == canonicalize(w).act(p)
    assert alpha_eq(pw, BarString(canonicalize(w).act(p).letters))


@given(bar_strings)
def test_class_support_is_free_names(w):
    assert canonicalize(w).support() == free_names(w)


def test_lang_basics():
    assert LangApprox.from_words(DATA, 2, [""]).eps
    bar = LangApprox.empty(BAR, 3).insert("|bb")
    assert "|aa" in bar and "|cc" in bar
    data = LangApprox.empty(DATA, 2).insert("ab")
    assert "ab" in data and "ba" not in data
    with pytest.raises(LengthError):
        data.insert("abc")


def test_derive_free_examples():
    L = LangApprox.from_words(DATA, 2, ["aa", "ab"])
    assert sorted(str(w) for w in derive_free(L, a).all_words()) == ["a", "b"]
    assert derive_free(L, b).all_words() == []
    bar = LangApprox.from_words(BAR, 3, ["a|bb"])
    assert [str(w) for w in derive_free(bar, a).all_words()] == ["|aa"]


def test_derive_bar_examples():
    L = LangApprox.from_words(BAR, 2, ["|aa"])
    d = derive_bar(L)
    assert abs_eq((d.binder, d.body), (c, LangApprox.from_words(BAR, 1, ["c"])))
    assert d == Abs(a, LangApprox.from_words(BAR, 1, ["a"]))
    empty = derive_bar(LangApprox.empty(BAR, 2))
    assert not empty.body.eps and not empty.body.words
    no_bar = derive_bar(LangApprox.from_words(BAR, 2, ["ab"]))
    assert not no_bar.body.words


def test_derive_bar_matches_brute_force():
    # bodies for two fresh choices differ by the swap of the two names
    L = LangApprox.from_words(BAR, 3, ["|aab", "|ab", "b|aa"])
    x, y = fresh(L.support()), fresh(L.support() | {fresh(L.support())})
    assert L.bar_body(y) == L.bar_body(x).act(Perm.swap(x, y))
    assert sorted(str(w) for w in L.bar_body(x).all_words()) == ["ab", "b"]


def test_derive_bar_needs_fresh_name():
    with pytest.raises(ValueError):
        LangApprox.from_words(BAR, 2, ["|ab"]).bar_body(b)
    with pytest.raises(ValueError):
        derive_bar(LangApprox.empty(DATA, 2))


def test_lang_tau_examples():
    pool = names("a b c")
    eps, free, bar = lang_tau(LangApprox.from_words(DATA, 1, [""]), pool)
    assert eps and not any(x.eps or x.words for x in free.values()) and bar is None
    eps, free, _ = lang_tau(LangApprox.from_words(DATA, 2, ["aa"]), pool)
    assert not eps
    assert [str(w) for w in free[a].all_words()] == ["a"]
    assert not free[b].words and not free[c].words
    L = LangApprox.from_words(BAR, 2, ["|aa"])
    eps, free, bar = lang_tau(L, pool)
    assert not eps and not any(x.words for x in free.values())
    assert bar == derive_bar(L)


def _random_bar_lang(rng, depth=3):
    pool = names("a b c")
    words = []
    for _ in range(rng.randint(0, 6)):
        n = rng.randint(0, depth)
        words.append(BarString(tuple(Letter(rng.choice(pool), rng.random() < 0.5)
                                     for _ in range(n))))
    return LangApprox.from_words(BAR, depth, words)


def test_bar_body_fresh_choice_independence():
    rng = random.Random(0)
    for _ in range(100):
        L = _random_bar_lang(rng)
        supp = L.support()
        x = fresh(supp)
        y = fresh(supp | {x})
        z = fresh(supp | {x, y})
        bx = L.bar_body(x)
        assert Abs(x, bx) == Abs(y, L.bar_body(y)) == Abs(z, L.bar_body(z))
        assert L.bar_body(y) == bx.act(Perm.swap(x, y))


def test_member_by_derivatives_on_random_languages():
    rng = random.Random(1)
    pool = names("a b c d")
    for _ in range(50):
        L = _random_bar_lang(rng)
        for n in range(4):
            for w in all_bar_strings(pool, n):
                assert member_by_derivatives(L, w) == (w in L)


def test_all_bar_strings_counts():
    pool = names("a b c")
    assert len(all_bar_strings(pool, 2)) == 36
    assert len(all_bar_strings(pool, 2, bars=False)) == 9
