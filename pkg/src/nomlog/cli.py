"""The ``nomlog`` command line.

Exit status: 0 success, 1 logical failure (false, no answer), 2 usage or
parse error, 3 a resource bound ran out (depth, fuel, model bounds).
"""

from __future__ import annotations

import argparse
import shlex
import sys
import warnings
from pathlib import Path
from typing import Optional, TextIO

from .clauses import Program
from .engine import Floundered, Search
from .evaluate import OpenFormulaError, eval_formula
from .lam import LAMBDA_SIG, NbeExhausted, beta_normalize, nbe_normalize, normalize
from .model import Bound, least_model_enum
from .names import IDENTITY, Name, NameSupply
from .syntax import ElabError, ParseError, parse_formula, parse_goals, parse_program, parse_term, parse_terms, show, show_goal
from .terms import Abs, App, SortError, Susp, Term, alpha_eq_ground, fresh_ground, is_ground, support, swap_term, variables
from .unify import UnificationFailure, alpha_eq_open, apply_subst, fresh_open, unify

OK, FAIL, USAGE, EXHAUSTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Session:
    """State shared by the commands of one invocation or one REPL session."""

    def __init__(self, out: TextIO = sys.stdout, err: TextIO = sys.stderr):
        self.out = out
        self.err = err
        self.supply = NameSupply(start=1_000_000)
        self.program: Optional[Program] = None
        self.program_path: Optional[str] = None

    def say(self, line: str = "") -> None:
        print(line, file=self.out)

    def warn(self, msg: str) -> None:
        print(f"warning: {msg}", file=self.err)

    def load(self, path: str) -> Program:
        try:
            src = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot read {path}: {e.strerror}") from None
        self.program = parse_program(src, supply=self.supply)
        self.program_path = path
        return self.program

    def signature(self, path: Optional[str]):
        if path:
            return self.load(path).signature
        if self.program is not None:
            return self.program.signature
        return LAMBDA_SIG.copy()


# ---------------------------------------------------------------------------
# Commands


def cmd_check(s: Session, a) -> int:
    prog = s.load(a.file)
    preds = {c.head.pred for c in prog.clauses}
    s.say(f"ok: {len(prog.clauses)} clauses, {len(preds)} predicates")
    return OK


def cmd_eq(s: Session, a) -> int:
    sig = s.signature(a.program)
    t, u = parse_terms([a.left, a.right], sig, supply=s.supply)
    if is_ground(t) and is_ground(u):
        same = alpha_eq_ground(t, u)
    else:
        same = alpha_eq_open(frozenset(), t, u)
    s.say("true" if same else "false")
    return OK if same else FAIL


def cmd_fresh(s: Session, a) -> int:
    sig = s.signature(a.program)
    name, t = _name_and_term(s, sig, a.name, a.term)
    if is_ground(t):
        ok = fresh_ground(name, t)
        s.say("true" if ok else "false")
        return OK if ok else FAIL
    try:
        residue = fresh_open(frozenset(), name, t)
    except UnificationFailure:
        s.say("false")
        return FAIL
    if not residue:
        s.say("true")
    else:
        s.say("true given:")
        for c in sorted(residue, key=lambda c: (c.target.ident, c.name.sort_key())):
            s.say(f"{c.name} # {c.target.ident}")
    return OK


def _name_and_term(s: Session, sig, name_src: str, term_src: str):
    name = parse_term(name_src, sig, supply=s.supply)
    if not isinstance(name, Name):
        raise UsageError(f"not a name: {name_src}")
    return name, parse_term(term_src, sig, supply=s.supply)


def cmd_unify(s: Session, a) -> int:
    sig = s.signature(a.program)
    t, u = parse_terms([a.left, a.right], sig, supply=s.supply)
    try:
        sol = unify(t, u)
    except UnificationFailure as e:
        s.say(f"fail: {e.describe()}")
        return FAIL
    seen = []
    for x in list(variables(t)) + list(variables(u)):
        if x not in seen:
            seen.append(x)
    for x in seen:
        s.say(f"{x.ident} = {show(apply_subst(sol.subst, Susp(IDENTITY, x)), a.sugar)}")
    for c in sorted(sol.context, key=lambda c: (c.target.ident, c.name.sort_key())):
        s.say(f"{c.name} # {c.target.ident}")
    return OK


def cmd_query(s: Session, a) -> int:
    prog = s.load(a.file) if a.file else s.program
    if prog is None:
        raise UsageError("no program loaded")
    goals = _parse_with_warnings(s, lambda: parse_goals(a.goal, prog.signature, warn=True, supply=s.supply))
    limit = a.max_answers if a.max_answers > 0 else None
    search = Search(prog, goals, a.depth, a.equivariant, limit, s.supply)
    n = 0
    try:
        for ans in search:
            if n:
                s.say(";")
            lines = ans.lines(a.sugar)
            for line in lines or ["yes"]:
                s.say(line)
            n += 1
    except Floundered as e:
        print(f"error: {e}", file=s.err)
        return USAGE
    if n:
        return OK
    if search.exhausted:
        s.say(f"no answer within depth {a.depth}")
        return EXHAUSTED
    s.say("no")
    return FAIL


def cmd_norm(s: Session, a) -> int:
    t = parse_term(a.term, LAMBDA_SIG.copy(), supply=s.supply)
    if not is_ground(t):
        raise UsageError("norm needs a term without variables")
    if a.strategy == "nbe":
        try:
            nf = nbe_normalize(t, budget=a.fuel * 100, supply=s.supply)
        except NbeExhausted:
            nf = None
    elif a.eta:
        nf = normalize(t, a.fuel, eta=True, supply=s.supply)
    else:
        nf = beta_normalize(t, a.fuel, supply=s.supply)
    if nf is None:
        s.say("no normal form within fuel")
        return EXHAUSTED
    s.say(show(readable(nf, s.supply), sugar=not a.raw))
    return OK


def readable(t: Term, supply: NameSupply) -> Term:
    """Rename bound names to short labels that print and re-read unambiguously."""
    taken = {b.label for b in support(t)}
    labels = _labels(taken)

    def go(t):
        if isinstance(t, Abs):
            b = Name(t.name.type, supply.next_id(), next(labels))
            return Abs(b, swap_term((t.name, b), go(t.body)))
        if isinstance(t, App):
            return App(t.symbol, tuple(go(x) for x in t.args))
        return t

    return go(t)


def _labels(taken):
    base = ["x", "y", "z", "w", "u"]
    for b in base:
        if b not in taken:
            yield b
    k = 1
    while True:
        for b in base:
            if f"{b}{k}" not in taken:
                yield f"{b}{k}"
        k += 1


def _model(s: Session, a):
    prog = s.load(a.file) if a.file else s.program
    if prog is None:
        raise UsageError("no program loaded")
    return least_model_enum(prog, Bound(a.term_depth, a.universe), supply=s.supply)


def cmd_model(s: Session, a) -> int:
    m = _model(s, a)
    s.say(f"{len(m)} atoms")
    if a.show:
        lines = sorted(show_goal(x, a.sugar) for x in m.atoms())
        for line in lines:
            s.say(line)
    return OK


def cmd_eval(s: Session, a) -> int:
    m = _model(s, a)
    phi = _parse_with_warnings(s, lambda: parse_formula(a.formula, m.program.signature, supply=s.supply))
    try:
        verdict = eval_formula(m, phi, s.supply)
    except OpenFormulaError as e:
        raise UsageError(str(e)) from None
    s.say(str(verdict))
    if verdict.value is None:
        return EXHAUSTED
    return OK if verdict.value else FAIL


def _parse_with_warnings(s: Session, thunk):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        out = thunk()
    for w in caught:
        s.warn(str(w.message))
    return out


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nomlog", description="Nominal terms, unification and logic programs.")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_):
        q = sub.add_parser(name, help=help_)
        q.set_defaults(fn=fn)
        q.add_argument("--sugar", action="store_true", help="print lambda-terms with \\x. sugar")
        return q

    q = cmd("check", cmd_check, "parse and sort-check a program")
    q.add_argument("file")

    for name, fn, help_ in (
        ("eq", cmd_eq, "alpha-equality of two terms"),
        ("unify", cmd_unify, "most general nominal unifier of two terms"),
    ):
        q = cmd(name, fn, help_)
        q.add_argument("left")
        q.add_argument("right")
        q.add_argument("--program", help="take the signature from this program")

    q = cmd("fresh", cmd_fresh, "is a name fresh for a term")
    q.add_argument("name")
    q.add_argument("term")
    q.add_argument("--program")

    q = cmd("query", cmd_query, "solve a goal against a program")
    q.add_argument("file")
    q.add_argument("goal")
    q.add_argument("--depth", type=_nat, default=50)
    q.add_argument("--equivariant", action="store_true")
    q.add_argument("--max-answers", type=_nat, default=1, help="0 means all")

    q = cmd("norm", cmd_norm, "normalize a lambda-term")
    q.add_argument("term")
    q.add_argument("--strategy", choices=("beta", "nbe"), default="beta")
    q.add_argument("--fuel", type=_nat, default=1000)
    q.add_argument("--eta", action="store_true", help="also contract eta-redexes (beta strategy)")
    q.add_argument("--raw", action="store_true", help="print constructor form")

    for name, fn, help_ in (
        ("model", cmd_model, "enumerate the bounded least model"),
        ("eval", cmd_eval, "evaluate a closed formula in the bounded least model"),
    ):
        q = cmd(name, fn, help_)
        q.add_argument("file")
        if name == "eval":
            q.add_argument("formula")
        else:
            q.add_argument("--show", action="store_true", help="list the atoms")
        q.add_argument("--universe", type=_nat, default=3, help="names per name-type")
        q.add_argument("--term-depth", type=_nat, default=2)

    q = sub.add_parser("repl", help="interactive session")
    q.add_argument("file", nargs="?")
    q.set_defaults(fn=None)
    return p


def _nat(s: str) -> int:
    n = int(s)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def run(argv, session: Session) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else USAGE
    if args.command == "repl":
        return repl(session, args.file)
    return dispatch(session, args)


def dispatch(s: Session, args) -> int:
    try:
        return args.fn(s, args)
    except (ParseError, ElabError, SortError) as e:
        print(f"error: {e}", file=s.err)
        return USAGE
    except UsageError as e:
        print(f"error: {e}", file=s.err)
        return USAGE


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv, Session())


# ---------------------------------------------------------------------------
# REPL

REPL_HELP = """\
  load FILE                 load a program
  GOAL                      query the loaded program
  eq T U | unify T U | fresh A T | norm T | model | eval PHI
                            as on the command line; quote arguments with spaces
  set depth N | set equivariant on|off | set answers N
  help | quit"""


def repl(s: Session, path: Optional[str] = None, stdin: TextIO = sys.stdin) -> int:
    opts = {"depth": 50, "equivariant": False, "answers": 1}
    if path:
        try:
            s.load(path)
        except (ParseError, ElabError, SortError, UsageError) as e:
            print(f"error: {e}", file=s.err)
            return USAGE
    interactive = stdin.isatty()
    while True:
        if interactive:
            print("?- ", end="", file=s.out, flush=True)
        line = stdin.readline()
        if not line:
            return OK
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        if line in ("quit", "exit", ":q"):
            return OK
        if line == "help":
            s.say(REPL_HELP)
            continue
        try:
            words = shlex.split(line)
        except ValueError as e:
            print(f"error: {e}", file=s.err)
            continue
        head = words[0]
        if head == "set" and len(words) == 3:
            _set(s, opts, words[1], words[2])
            continue
        if head == "load" and len(words) == 2:
            try:
                s.load(words[1])
                s.say(f"loaded {words[1]}")
            except (ParseError, ElabError, SortError, UsageError) as e:
                print(f"error: {e}", file=s.err)
            continue
        if head in ("eq", "unify", "fresh", "norm"):
            run(words, s)
            continue
        if head in ("model", "eval"):
            run([head, s.program_path or ""] + words[1:], s)
            continue
        argv = ["query", s.program_path or "", line, "--depth", str(opts["depth"]), "--max-answers", str(opts["answers"])]
        if opts["equivariant"]:
            argv.append("--equivariant")
        run(argv, s)


def _set(s: Session, opts: dict, key: str, value: str) -> None:
    if key == "equivariant" and value in ("on", "off"):
        opts[key] = value == "on"
    elif key in ("depth", "answers") and value.isdigit():
        opts[key] = int(value)
    else:
        print(f"error: cannot set {key} to {value}", file=s.err)
        return
    s.say(f"{key} = {value}")


if __name__ == "__main__":
    sys.exit(main())
