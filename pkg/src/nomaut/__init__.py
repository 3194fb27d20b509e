"""Nominal automata over infinite alphabets: NOFAs, RNNAs, and their
trace and language semantics."""

from .automata import (
    NOFA,
    RNNA,
    AutomatonSpec,
    ConcreteAutomaton,
    ConditionViolation,
    PoolError,
    SpecError,
    State,
    accepts,
    auto_pool,
    enum_language,
    expand,
    load_fixture,
    parse_spec,
    random_automaton,
    spec_pool,
    validate,
)
from .barlang import (
    BAR,
    DATA,
    BarString,
    CanonicalBarString,
    LangApprox,
    Letter,
    alpha_eq,
    canonicalize,
    derive_bar,
    derive_free,
    lang_tau,
    member_by_derivatives,
)
from .em import Determinizer, GValue, check_relation, epsilon, lang_semantics, psi_abs, rho_g
from .kleisli import (
    KleisliMap,
    coalgebra_of,
    fbar,
    kleisli_compose,
    kleisli_join,
    lambda_F,
    rho_abs,
    trace_iterate,
    trace_language,
)
from .laws import run_selfcheck
from .nominal import Abs, ConcretionError, Name, Perm, SuppSet, act, fresh, support

__all__ = [name for name in dir() if not name.startswith("_")]
