"""Command-line interface.

Exit codes: 0 pass/true, 1 fail/false/violation, 2 usage or parse error.
Pool sizes and warnings go to stderr so that listings stay comparable
across ``--via`` back ends.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .automata import (
    NOFA,
    RNNA,
    AutomatonSpec,
    ConcreteAutomaton,
    PoolError,
    SpecError,
    State,
    accepts,
    enum_language,
    expand,
    parse_spec,
    parse_state,
    spec_pool,
    validate,
)
from .barlang import BarString, LangApprox, alpha_eq, canonicalize
from .em import Determinizer
from .kleisli import trace_iterate
from .laws import run_selfcheck
from .nominal import Name, Perm, SuppSet

DEFAULT_VIA = {"enum": "oracle", "trace": "kl", "lang": "em"}


class UsageError(Exception):
    pass


def _natural(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {n}")
    return n


def _pool_arg(text: str):
    return None if text == "auto" else _natural(text)


def _load(path: str, check: bool = True) -> AutomatonSpec:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return parse_spec(text, check=check)
    except SpecError as e:
        where = f"{path}:{e.line}:{e.col}" if e.line else path
        raise UsageError(f"{where}: {e.message}") from None


def _choose_pool(args, needed: int) -> int:
    if args.pool is None:
        print(f"pool: {needed} (auto)", file=sys.stderr)
        return needed
    if args.pool < needed:
        print(f"warning: pool {args.pool} is below the automatic size {needed}",
              file=sys.stderr)
    else:
        print(f"pool: {args.pool}", file=sys.stderr)
    return args.pool


def _expand(spec: AutomatonSpec, size: int) -> ConcreteAutomaton:
    try:
        return expand(spec, size)
    except PoolError as e:
        raise UsageError(str(e)) from None


def _states(spec: AutomatonSpec, A: ConcreteAutomaton, text: str | None) -> list[State]:
    if text is None:
        # one representative per orbit, over the least names
        return [State(o.id, tuple(Name(i) for i in range(o.arity))) for o in spec.orbits.values()]
    try:
        return [A.state(text)]
    except (KeyError, ValueError) as e:
        raise UsageError(str(e).strip("'\"")) from None


def _emit(args, inputs: dict, depth, pool, result, text_lines: list[str]) -> None:
    if args.json:
        doc = {"command": args.command, "inputs": inputs, "depth": depth,
               "pool": pool, "result": result}
        print(json.dumps(doc, indent=2))
    else:
        for line in text_lines:
            print(line)


# -- commands ---------------------------------------------------------------


def cmd_validate(args) -> int:
    spec = _load(args.file, check=False)
    size = args.pool
    if size is not None and size < max(spec.max_arity, spec.max_rule_vars):
        raise UsageError(f"pool of {size} names is too small for {spec.name}")
    report = validate(spec, size)
    _emit(args, {"file": args.file}, None, size, report.to_json(), [str(report)])
    return 0 if report.ok else 1


def _compact(names) -> Perm:
    """A permutation sending the given names onto the least ones."""
    names = sorted(set(names))
    target = [Name(i) for i in range(len(names))]
    mapping = dict(zip(names, target))
    spare_src = [t for t in target if t not in mapping]
    spare_dst = [n for n in names if n not in target]
    mapping.update(zip(spare_src, spare_dst))
    return Perm.from_mapping(mapping)


def cmd_member(args) -> int:
    spec = _load(args.file)
    try:
        word = BarString.parse(args.word)
        q = parse_state(args.state)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if spec.kind == NOFA and word.has_bars():
        raise UsageError("a nofa reads no bar letters")
    if spec.kind == RNNA:
        word = BarString(canonicalize(word).letters)
    # membership is equivariant, so move the names in play to the least ones
    p = _compact(set(q.args) | {x.name for x in word.letters})
    q, word = q.act(p), word.act(p)
    in_play = len(set(q.args) | {x.name for x in word.letters})
    size = _choose_pool(args, max(spec_pool(spec, len(word)), in_play + 1))
    A = _expand(spec, size)
    try:
        result = accepts(A, A.state(q), word)
    except (KeyError, PoolError) as e:
        raise UsageError(str(e).strip("'\"")) from None
    text = "true" if result else "false"
    _emit(args, {"file": args.file, "state": args.state, "word": args.word},
          len(word), size, result, [text])
    return 0 if result else 1


def _language(A: ConcreteAutomaton, q: State, depth: int, via: str,
              det: Determinizer | None) -> LangApprox:
    if via == "oracle":
        return enum_language(A, q, depth)
    if via == "kl":
        return LangApprox.from_words(A.lang_kind, depth, trace_iterate(A, depth + 1)(q))
    return det.language(SuppSet((q,)), depth)


def _listing(lang: LangApprox) -> list[str]:
    return [f"eps: {'true' if lang.eps else 'false'}"] + [str(w) for w in lang.members()]


def cmd_language(args) -> int:
    spec = _load(args.file)
    via = args.via or DEFAULT_VIA[args.command]
    size = _choose_pool(args, spec_pool(spec, args.depth))
    A = _expand(spec, size)
    states = _states(spec, A, args.state)
    det = Determinizer(A) if via == "em" else None
    lines, result = [], {}
    try:
        for q in states:
            lang = _language(A, q, args.depth, via, det)
            result[str(q)] = {"eps": lang.eps, "words": [str(w) for w in lang.members()]}
            if args.state is None:
                lines.append(f"[{q}]")
            lines.extend(_listing(lang))
    except PoolError as e:
        raise UsageError(str(e)) from None
    inputs = {"file": args.file, "state": args.state, "via": via}
    _emit(args, inputs, args.depth, size, result, lines)
    return 0


def cmd_determinize(args) -> int:
    spec = _load(args.file)
    size = _choose_pool(args, spec_pool(spec, args.depth))
    A = _expand(spec, size)
    states = _states(spec, A, args.state)
    det = Determinizer(A)
    try:
        for q in states:
            det.language(SuppSet((q,)), args.depth)
    except PoolError as e:
        raise UsageError(str(e)) from None
    explored = sorted(det.explored().items(), key=lambda kv: kv[0].sort_key())
    lines = [f"{macro} => {g}" for macro, g in explored]
    result = {str(macro): str(g) for macro, g in explored}
    _emit(args, {"file": args.file, "state": args.state}, args.depth, size, result, lines)
    return 0


def cmd_alpha(args) -> int:
    try:
        if args.op == "eq":
            if len(args.words) != 2:
                raise UsageError("alpha eq takes two words")
            result = alpha_eq(*args.words)
            text = "true" if result else "false"
        else:
            if len(args.words) != 1:
                raise UsageError("alpha canon takes one word")
            result = str(canonicalize(args.words[0]))
            text = result
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit(args, {"op": args.op, "words": args.words}, None, None, result, [text])
    return 1 if result is False else 0


def cmd_selfcheck(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = run_selfcheck(args.seed, args.cases, defect=args.inject_defect)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    passed = sum(c.passed for c in report.checks)
    lines = report.lines() + [f"{passed}/{len(report.checks)} suites passed"]
    _emit(args, {"seed": args.seed, "cases": args.cases}, None, None, report.to_json(), lines)
    return 0 if report.ok else 1


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    pooled = argparse.ArgumentParser(add_help=False)
    pooled.add_argument("--pool", type=_pool_arg, default=None,
                        help="number of concrete names (default: auto)")

    parser = argparse.ArgumentParser(
        prog="nomaut", description="Nominal automata over infinite alphabets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common, pooled],
                       help="check an automaton description")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("member", parents=[common, pooled], help="test membership of a word")
    p.add_argument("file")
    p.add_argument("state")
    p.add_argument("word")
    p.set_defaults(func=cmd_member)

    for name, text in (("enum", "run enumeration"), ("trace", "the Kleisli fixpoint"),
                       ("lang", "determinization")):
        p = sub.add_parser(name, parents=[common, pooled],
                           help=f"list the language up to a length, by {text}")
        p.add_argument("file")
        p.add_argument("state", nargs="?")
        p.add_argument("--depth", type=_natural, default=3)
        p.add_argument("--via", choices=("kl", "em", "oracle"), default=None)
        p.set_defaults(func=cmd_language)

    p = sub.add_parser("determinize", parents=[common, pooled],
                       help="show the explored macro-states")
    p.add_argument("file")
    p.add_argument("state", nargs="?")
    p.add_argument("--depth", type=_natural, default=3)
    p.set_defaults(func=cmd_determinize)

    p = sub.add_parser("alpha", parents=[common], help="alpha-equivalence of bar strings")
    p.add_argument("op", choices=("eq", "canon"))
    p.add_argument("words", nargs="+")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("selfcheck", parents=[common], help="run the law suites")
    p.add_argument("--seed", type=_natural, default=0)
    p.add_argument("--cases", type=_natural, default=200)
    p.add_argument("--inject-defect", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
