"""Concrete syntax: tokenizer, parser, sort-inferring elaborator and printer.

Terms::

    t ::= a | X | c | f(t, ..., t) | <a> t | (a b). t
        | [] | [t | t] | [t, ..., t] | (t, t)
        | \\x y. t | t t            (lambda sugar over var/lam/app)

Programs are sequences of ``.``-terminated statements::

    name a, b : var.      nametype var.      type exp, ty.
    func lam(<var>exp) -> exp.      func o -> ty.
    pred typ(list(var * ty), exp, ty).
    head :- goal, ..., goal.        head.

Goals are atoms ``p(t, ...)``, equations ``t = u`` and freshness ``a # t``.
Formulas add ``~ /\\ \\/ => <=> true false`` and the binders
``forall X:s.``, ``exists X:s.`` and ``new a:nu.``.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from itertools import count
from typing import Optional

from .clauses import Atom, Equation, FreshGoal, HornClause, Program
from .formulas import And, Bot, Exists, Forall, Iff, Implies, New, Not, Or, Top
from .names import DEFAULT_SUPPLY, IDENTITY, Name, NameSupply, NameType
from .terms import (
    CONS,
    NIL,
    PAIR,
    AbsSort,
    Abs,
    App,
    Const,
    DataSort,
    NameSort,
    Signature,
    SortError,
    Susp,
    Var,
    cons_symbol,
    list_sort,
    nil_symbol,
    pair_symbol,
    product_sort,
    swap_term,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        super().__init__(f"line {line}, col {col}: {msg}" if line else msg)


class ElabError(SortError):
    """A sort or scoping error, annotated with a source position."""

    def __init__(self, msg: str, pos=(0, 0)):
        self.msg = msg
        self.line, self.col = pos
        super().__init__(f"line {self.line}, col {self.col}: {msg}" if self.line else msg)


# ---------------------------------------------------------------------------
# Tokens

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<op><=>|:-|->|=>|/\\|\\/|[()<>\[\]|,.:#=\\~*λ⟨⟩])
  | (?P<var>[A-Z_][A-Za-z0-9_']*)
  | (?P<ident>[a-z][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)
_ALIASES = {"λ": "\\", "⟨": "<", "⟩": ">"}
KEYWORDS = {"new", "forall", "exists", "true", "false"}


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # op, var, ident, eof
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "comment"):
            out.append(Token(kind, _ALIASES.get(text, text), line, pos - line_start + 1))
        nl = text.count("\n")
        if nl:
            line += nl
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# ---------------------------------------------------------------------------
# Abstract syntax produced by the parser


@dataclass(eq=False)
class Node:
    pos: tuple


@dataclass(eq=False)
class AVar(Node):
    ident: str


@dataclass(eq=False)
class AIdent(Node):
    ident: str


@dataclass(eq=False)
class AApp(Node):
    ident: str
    args: list


@dataclass(eq=False)
class AAbs(Node):
    name: str
    body: Node


@dataclass(eq=False)
class ASwap(Node):
    a: str
    b: str
    body: Node


@dataclass(eq=False)
class ALam(Node):
    name: str
    body: Node


@dataclass(eq=False)
class AJux(Node):
    fun: Node
    arg: Node


@dataclass(eq=False)
class ANil(Node):
    pass


@dataclass(eq=False)
class ACons(Node):
    head: Node
    tail: Node


@dataclass(eq=False)
class APair(Node):
    left: Node
    right: Node


# goals and formulas


@dataclass(eq=False)
class AEq(Node):
    left: Node
    right: Node


@dataclass(eq=False)
class AFresh(Node):
    name: Node
    term: Node


@dataclass(eq=False)
class AConn(Node):
    op: str  # not, and, or, imp, iff, true, false
    args: list


@dataclass(eq=False)
class AQuant(Node):
    q: str  # forall, exists, new
    ident: str
    sort: object  # unresolved sort syntax
    body: Node


@dataclass(eq=False)
class SortSyn:
    ident: str
    params: list
    pos: tuple
    abs_of: Optional[str] = None  # <nu>body


# ---------------------------------------------------------------------------
# Parser

_JUX_START = {"(", "[", "\\"}
_FORMULA_STOP = {"/\\", "\\/", "=>", "<=>"}


class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0
        self.lam_bound: list[str] = []  # inside \x. a following '(' means juxtaposition, not a call

    # helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            self.fail(f"expected {what}")
        return self.advance()

    def fail(self, msg: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"{msg}, found {found}", t.line, t.col)

    def pos(self) -> tuple:
        return (self.tok.line, self.tok.col)

    def at_eof(self) -> bool:
        return self.tok.kind == "eof"

    # terms
    def term(self) -> Node:
        p = self.pos()
        if self.at("\\"):
            self.advance()
            idents = [self.expect_kind("ident", "a name after \\").text]
            while self.tok.kind == "ident":
                idents.append(self.advance().text)
            self.expect(".")
            self.lam_bound.extend(idents)
            try:
                body = self.term()
            finally:
                del self.lam_bound[len(self.lam_bound) - len(idents) :]
            for x in reversed(idents):
                body = ALam(p, x, body)
            return body
        if self.at("<"):
            self.advance()
            a = self.expect_kind("ident", "a name in <...>").text
            self.expect(">")
            return AAbs(p, a, self.term())
        if self._at_swap():
            self.advance()
            a = self.advance().text
            b = self.advance().text
            self.advance()
            self.advance()
            return ASwap(p, a, b, self.term())
        return self.jux()

    def _at_swap(self) -> bool:
        return (
            self.at("(")
            and self.peek(1).kind == "ident"
            and self.peek(2).kind == "ident"
            and self.peek(3).text == ")"
            and self.peek(4).text == "."
        )

    def _jux_continues(self) -> bool:
        t = self.tok
        if t.kind == "var":
            return True
        if t.kind == "ident":
            return t.text not in KEYWORDS
        return t.kind == "op" and t.text in _JUX_START

    def jux(self) -> Node:
        p = self.pos()
        node = self.atom()
        while self._jux_continues():
            if self.at("\\"):
                node = AJux(p, node, self.term())
                break
            node = AJux(p, node, self.atom())
        return node

    def atom(self) -> Node:
        p = self.pos()
        t = self.tok
        if t.kind == "var":
            self.advance()
            return AVar(p, t.text)
        if t.kind == "ident":
            self.advance()
            if self.at("(") and t.text not in self.lam_bound:
                self.advance()
                args = self.term_list(")")
                self.expect(")")
                return AApp(p, t.text, args)
            return AIdent(p, t.text)
        if self.at("("):
            if self._at_swap():
                return self.term()
            self.advance()
            first = self.term()
            if self.at(","):
                self.advance()
                rest = self.term_list(")")
                self.expect(")")
                items = [first] + rest
                node = items[-1]
                for x in reversed(items[:-1]):
                    node = APair(p, x, node)
                return node
            self.expect(")")
            return first
        if self.at("["):
            self.advance()
            if self.at("]"):
                self.advance()
                return ANil(p)
            items = self.term_list("]", "|")
            tail: Node = ANil(p)
            if self.at("|"):
                self.advance()
                tail = self.term()
            self.expect("]")
            for x in reversed(items):
                tail = ACons(p, x, tail)
            return tail
        if self.at("\\") or self.at("<"):
            return self.term()
        self.fail("expected a term")

    def term_list(self, *closers: str) -> list:
        if any(self.at(c) for c in closers):
            return []
        items = [self.term()]
        while self.at(","):
            self.advance()
            items.append(self.term())
        return items

    # goals and formulas
    def goal(self) -> Node:
        p = self.pos()
        left = self.term()
        if self.at("="):
            self.advance()
            return AEq(p, left, self.term())
        if self.at("#"):
            self.advance()
            return AFresh(p, left, self.term())
        return left

    def goals(self) -> list:
        out = [self.goal()]
        while self.at(","):
            self.advance()
            out.append(self.goal())
        return out

    def formula(self) -> Node:
        return self._iff()

    def _iff(self) -> Node:
        p = self.pos()
        left = self._imp()
        while self.at("<=>"):
            self.advance()
            left = AConn(p, "iff", [left, self._imp()])
        return left

    def _imp(self) -> Node:
        p = self.pos()
        left = self._or()
        if self.at("=>"):
            self.advance()
            return AConn(p, "imp", [left, self._imp()])
        return left

    def _or(self) -> Node:
        p = self.pos()
        left = self._and()
        while self.at("\\/"):
            self.advance()
            left = AConn(p, "or", [left, self._and()])
        return left

    def _and(self) -> Node:
        p = self.pos()
        left = self._unary()
        while self.at("/\\"):
            self.advance()
            left = AConn(p, "and", [left, self._unary()])
        return left

    def _unary(self) -> Node:
        p = self.pos()
        t = self.tok
        if self.at("~"):
            self.advance()
            return AConn(p, "not", [self._unary()])
        if t.kind == "ident" and t.text in ("forall", "exists", "new"):
            self.advance()
            binders = [self._binder()]
            while self.at(","):
                self.advance()
                binders.append(self._binder())
            self.expect(".")
            body = self.formula()
            for ident, sort in reversed(binders):
                body = AQuant(p, t.text, ident, sort, body)
            return body
        if t.kind == "ident" and t.text in ("true", "false") and self.peek().text != "(":
            self.advance()
            return AConn(p, t.text, [])
        if self.at("(") and not self._at_swap() and self._paren_formula():
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        return self.goal()

    def _binder(self):
        t = self.tok
        if t.kind not in ("ident", "var"):
            self.fail("expected a bound identifier")
        self.advance()
        self.expect(":")
        return t.text, self.sort()

    def _paren_formula(self) -> bool:
        """A parenthesised group is a formula when a formula-only token sits at its top level."""
        depth = 0
        toks = self.toks
        for j in range(self.i, len(toks)):
            tk = toks[j]
            if tk.kind == "op" and tk.text in ("(", "["):
                depth += 1
            elif tk.kind == "op" and tk.text in (")", "]"):
                depth -= 1
                if depth == 0:
                    return False
            elif depth == 1 and (
                (tk.kind == "op" and tk.text in _FORMULA_STOP | {"~", "=", "#"})
                or (tk.kind == "ident" and tk.text in KEYWORDS and toks[j + 1].text != "(")
            ):
                return True
        return False

    # sorts
    def sort(self) -> SortSyn:
        left = self._sort_prim()
        if self.at("*"):
            p = self.pos()
            self.advance()
            right = self.sort()
            return SortSyn("*", [left, right], p)
        return left

    def _sort_prim(self) -> SortSyn:
        p = self.pos()
        if self.at("<"):
            self.advance()
            nu = self.expect_kind("ident", "a name-type").text
            self.expect(">")
            body = self._sort_prim()
            return SortSyn("<>", [body], p, abs_of=nu)
        if self.at("("):
            self.advance()
            s = self.sort()
            self.expect(")")
            return s
        ident = self.expect_kind("ident", "a sort").text
        params = []
        if self.at("("):
            self.advance()
            params.append(self.sort())
            while self.at(","):
                self.advance()
                params.append(self.sort())
            self.expect(")")
        return SortSyn(ident, params, p)

    def sort_list(self) -> list:
        if not self.at("("):
            return []
        self.advance()
        if self.at(")"):
            self.advance()
            return []
        out = [self.sort()]
        while self.at(","):
            self.advance()
            out.append(self.sort())
        self.expect(")")
        return out




# ---------------------------------------------------------------------------
# Sort inference


class Meta:
    _ids = count()

    def __init__(self, kind: str = "sort"):
        self.kind = kind  # "sort" or "nametype"
        self.ref = None
        self.id = next(Meta._ids)

    def __repr__(self) -> str:
        return f"?{self.id}"


def _walk(s):
    while isinstance(s, Meta) and s.ref is not None:
        s = s.ref
    return s


def _occurs(m: Meta, s) -> bool:
    s = _walk(s)
    if s is m:
        return True
    if isinstance(s, NameSort):
        return _occurs(m, s.nametype)
    if isinstance(s, DataSort):
        return any(_occurs(m, p) for p in s.params)
    if isinstance(s, AbsSort):
        return _occurs(m, s.nametype) or _occurs(m, s.body)
    return False


def _show_sort(s) -> str:
    s = _walk(s)
    if isinstance(s, Meta):
        return "?"
    if isinstance(s, NameType):
        return s.ident
    if isinstance(s, NameSort):
        return _show_sort(s.nametype)
    if isinstance(s, AbsSort):
        return f"<{_show_sort(s.nametype)}>{_show_sort(s.body)}"
    if isinstance(s, DataSort):
        if s.ident == "*" and len(s.params) == 2:
            return f"({_show_sort(s.params[0])} * {_show_sort(s.params[1])})"
        if s.params:
            return f"{s.ident}({', '.join(_show_sort(p) for p in s.params)})"
        return s.ident
    return str(s)


def _resolve(s, default):
    s = _walk(s)
    if isinstance(s, Meta):
        if default is None:
            return s
        return default(s)
    if isinstance(s, NameSort):
        return NameSort(_resolve(s.nametype, default))
    if isinstance(s, DataSort):
        return DataSort(s.ident, tuple(_resolve(p, default) for p in s.params))
    if isinstance(s, AbsSort):
        return AbsSort(_resolve(s.nametype, default), _resolve(s.body, default))
    return s


def _has_meta(s) -> bool:
    s = _walk(s)
    if isinstance(s, Meta):
        return True
    if isinstance(s, NameSort):
        return _has_meta(s.nametype)
    if isinstance(s, DataSort):
        return any(_has_meta(p) for p in s.params)
    if isinstance(s, AbsSort):
        return _has_meta(s.nametype) or _has_meta(s.body)
    return False


def unify_sorts(x, y, pos=(0, 0), what: str = "") -> None:
    x, y = _walk(x), _walk(y)
    if x is y:
        return
    if isinstance(x, Meta) or isinstance(y, Meta):
        m, other = (x, y) if isinstance(x, Meta) else (y, x)
        if isinstance(other, Meta) and m.kind != other.kind:
            raise ElabError(f"sort mismatch{what}", pos)
        if m.kind == "nametype" and not isinstance(other, (NameType, Meta)):
            raise ElabError(f"expected a name-type{what}, got {_show_sort(other)}", pos)
        if m.kind == "sort" and isinstance(other, NameType):
            raise ElabError(f"expected a sort{what}, got name-type {other}", pos)
        if _occurs(m, other):
            raise ElabError(f"cyclic sort{what}", pos)
        m.ref = other
        return
    def mismatch():
        return ElabError(f"expected sort {_show_sort(x)}{what}, got {_show_sort(y)}", pos)

    if type(x) is not type(y):
        raise mismatch()
    if isinstance(x, NameType):
        if x != y:
            raise mismatch()
    elif isinstance(x, NameSort):
        unify_sorts(x.nametype, y.nametype, pos, what)
    elif isinstance(x, DataSort):
        if x.ident != y.ident or len(x.params) != len(y.params):
            raise mismatch()
        for p, q in zip(x.params, y.params):
            unify_sorts(p, q, pos, what)
    elif isinstance(x, AbsSort):
        unify_sorts(x.nametype, y.nametype, pos, what)
        unify_sorts(x.body, y.body, pos, what)
    elif x != y:
        raise mismatch()


# ---------------------------------------------------------------------------
# Elaboration


FUNC_DEFAULT_RESULT = "term"
NAME_DEFAULT_TYPE = "var"
_DECODE_FRESH = re.compile(r"^([a-z][A-Za-z_']*?)(\d+)$")


class Elaborator:
    """Turns syntax trees into sorted terms, goals and formulas.

    ``names`` selects how undeclared lowercase identifiers are treated:
    ``"local"`` makes them clause-local names whose type is inferred;
    ``"global"`` declares them in the signature (with a warning when
    ``warn`` is set). ``auto_funcs`` declares unknown function symbols
    on first use with result sort ``term``.
    """

    def __init__(
        self,
        sig: Signature,
        names: str = "global",
        auto_funcs: bool = False,
        warn: bool = False,
        supply: NameSupply = DEFAULT_SUPPLY,
    ):
        self.sig = sig
        self.names_mode = names
        self.auto_funcs = auto_funcs
        self.warn = warn
        self.supply = supply
        self.reset()

    def reset(self) -> None:
        self.var_sorts: dict[str, object] = {}
        self.local_names: dict[str, object] = {}  # label -> nametype or Meta
        self.scope: list[tuple[str, object]] = []  # formula binders: label -> Var | Name
        self.sorts: dict[int, object] = {}
        self.pending_funcs: dict[str, tuple[list, DataSort]] = {}
        self.anon = count(1)

    # -- lookups
    def _binder(self, ident: str):
        for label, b in reversed(self.scope):
            if label == ident:
                return b
        return None

    def _is_constant(self, ident: str) -> bool:
        f = self.sig.funcs.get(ident)
        return f is not None and not f.args and self._binder(ident) is None

    def _name_type_of(self, ident: str, pos):
        b = self._binder(ident)
        if isinstance(b, Name):
            return b.type
        if isinstance(b, Var):
            raise ElabError(f"{ident} is a quantified variable, not a name constant", pos)
        if ident in self.local_names:
            return self.local_names[ident]
        if ident in self.sig.names:
            if self.names_mode == "local":
                self.local_names[ident] = self.sig.names[ident].type
            return self.sig.names[ident].type
        decoded = self._decode_fresh(ident)
        if decoded is not None:
            return decoded.type
        if ident in self.sig.funcs:
            raise ElabError(f"function symbol {ident} used as a name", pos)
        if self.names_mode == "local":
            m = Meta("nametype")
            self.local_names[ident] = m
            return m
        if self.names_mode == "global":
            m = Meta("nametype")
            self.local_names[ident] = m
            return m
        raise ElabError(f"undeclared name {ident}", pos)

    def _decode_fresh(self, ident: str) -> Optional[Name]:
        m = _DECODE_FRESH.match(ident)
        if not m:
            return None
        nt = self.sig.nametypes.get(m.group(1))
        n = int(m.group(2))
        if nt is None or n < 1_000_000:
            return None
        self.supply.reserve(n)
        return Name(nt, n, ident)

    # -- desugaring
    def _exp(self, node: Node) -> Node:
        if isinstance(node, AIdent) and not self._is_constant(node.ident):
            b = self._binder(node.ident)
            if b is None or isinstance(b, (Name, Var)):
                return AApp(node.pos, "var", [node])
        return node

    def _lam_symbols(self, pos):
        for s in ("var", "lam", "app"):
            if s not in self.sig.funcs:
                raise ElabError(f"lambda sugar needs the function symbol {s}", pos)

    def desugar(self, node: Node) -> Node:
        if isinstance(node, ALam):
            self._lam_symbols(node.pos)
            return AApp(node.pos, "lam", [AAbs(node.pos, node.name, self.desugar(self._exp(node.body)))])
        if isinstance(node, AJux):
            self._lam_symbols(node.pos)
            return AApp(node.pos, "app", [self.desugar(self._exp(node.fun)), self.desugar(self._exp(node.arg))])
        if isinstance(node, AApp):
            node.args = [self.desugar(a) for a in node.args]
        elif isinstance(node, (AAbs, ASwap)):
            node.body = self.desugar(node.body)
        elif isinstance(node, ACons):
            node.head, node.tail = self.desugar(node.head), self.desugar(node.tail)
        elif isinstance(node, APair):
            node.left, node.right = self.desugar(node.left), self.desugar(node.right)
        return node

    # -- inference
    def _func(self, ident: str, nargs: int, pos):
        f = self.sig.funcs.get(ident)
        if f is not None:
            if len(f.args) != nargs:
                raise ElabError(f"{ident} expects {len(f.args)} arguments, got {nargs}", pos)
            return list(f.args), f.result
        if ident in self.pending_funcs:
            args, res = self.pending_funcs[ident]
            if len(args) != nargs:
                raise ElabError(f"{ident} expects {len(args)} arguments, got {nargs}", pos)
            return args, res
        if not self.auto_funcs:
            raise ElabError(f"undeclared function symbol {ident}", pos)
        sig = ([Meta() for _ in range(nargs)], DataSort(FUNC_DEFAULT_RESULT))
        self.pending_funcs[ident] = sig
        return sig

    def infer(self, node: Node):
        s = self._infer(node)
        self.sorts[id(node)] = s
        return s

    def _infer(self, node: Node):
        if isinstance(node, AVar):
            b = self._binder(node.ident)
            if isinstance(b, Var):
                return b.sort
            if node.ident == "_":
                node.ident = f"_{next(self.anon)}_"
            return self.var_sorts.setdefault(node.ident, Meta())
        if isinstance(node, AIdent):
            b = self._binder(node.ident)
            if isinstance(b, Var):
                return b.sort
            if self._is_constant(node.ident):
                return self.sig.funcs[node.ident].result
            if node.ident in self.sig.funcs:
                f = self.sig.funcs[node.ident]
                raise ElabError(f"{node.ident} expects {len(f.args)} arguments, got 0", node.pos)
            return NameSort(self._name_type_of(node.ident, node.pos))
        if isinstance(node, AApp):
            if node.ident in self.sig.preds and node.ident not in self.sig.funcs:
                raise ElabError(f"relation {node.ident} used as a term", node.pos)
            want, res = self._func(node.ident, len(node.args), node.pos)
            for i, (arg, w) in enumerate(zip(node.args, want)):
                unify_sorts(w, self.infer(arg), arg.pos, f" in argument {i + 1} of {node.ident}")
            return res
        if isinstance(node, AAbs):
            nt = self._name_type_of(node.name, node.pos)
            return AbsSort(nt, self.infer(node.body))
        if isinstance(node, ASwap):
            ta = self._name_type_of(node.a, node.pos)
            tb = self._name_type_of(node.b, node.pos)
            unify_sorts(ta, tb, node.pos, " in a swapping")
            return self.infer(node.body)
        if isinstance(node, ANil):
            return list_sort(Meta())
        if isinstance(node, ACons):
            h = self.infer(node.head)
            t = self.infer(node.tail)
            unify_sorts(list_sort(h), t, node.tail.pos, " in a list tail")
            return t
        if isinstance(node, APair):
            return product_sort(self.infer(node.left), self.infer(node.right))
        if isinstance(node, (ALam, AJux)):
            return self.infer(self.desugar(node))
        raise ElabError("expected a term", node.pos)

    def _resolve_sort(self, s, pos, what: str):
        def default(m: Meta):
            if self.names_mode == "local" and not self.auto_funcs:
                raise ElabError(f"cannot determine the sort of {what}", pos)
            if m.kind == "nametype":
                return self.sig.nametype(NAME_DEFAULT_TYPE)
            self.sig.datatype(FUNC_DEFAULT_RESULT)
            return DataSort(FUNC_DEFAULT_RESULT)

        return _resolve(s, default)

    def _finish(self) -> None:
        for ident, (args, res) in list(self.pending_funcs.items()):
            sorts = [self._resolve_sort(a, (0, 0), f"argument of {ident}") for a in args]
            self.sig.datatype(res.ident)
            self.sig.declare_func(ident, sorts, res)
        self.pending_funcs.clear()
        self._names: dict[str, Name] = {}
        for label, nt in self.local_names.items():
            nt = self._resolve_sort(nt, (0, 0), f"name {label}")
            if label in self.sig.names:
                if self.sig.names[label].type != nt:
                    raise ElabError(f"name {label} has type {self.sig.names[label].type}, used at {nt}")
                self._names[label] = self.sig.names[label]
            elif self.names_mode == "global":
                if self.warn:
                    warnings.warn(f"auto-declaring name {label} : {nt}", stacklevel=4)
                self._names[label] = self.sig.declare_name(label, nt, self.supply)
            else:
                self._names[label] = self.sig.declare_name(label, nt, self.supply)
        self._vars = {
            ident: Var(ident, self._resolve_sort(s, (0, 0), f"variable {ident}"))
            for ident, s in self.var_sorts.items()
        }

    # -- construction
    def _name(self, ident: str, pos) -> Name:
        b = self._binder(ident)
        if isinstance(b, Name):
            return b
        if ident in self._names:
            return self._names[ident]
        if ident in self.sig.names:
            return self.sig.names[ident]
        decoded = self._decode_fresh(ident)
        if decoded is not None:
            return decoded
        raise ElabError(f"unknown name {ident}", pos)

    def build(self, node: Node):
        if isinstance(node, AVar):
            b = self._binder(node.ident)
            if isinstance(b, Var):
                return Susp(IDENTITY, b)
            return Susp(IDENTITY, self._vars[node.ident])
        if isinstance(node, AIdent):
            b = self._binder(node.ident)
            if isinstance(b, Var):
                return Susp(IDENTITY, b)
            if self._is_constant(node.ident):
                return Const(self.sig.funcs[node.ident])
            return self._name(node.ident, node.pos)
        if isinstance(node, AApp):
            sym = self.sig.funcs[node.ident]
            try:
                return App(sym, tuple(self.build(a) for a in node.args))
            except SortError as e:
                raise ElabError(str(e), node.pos) from None
        if isinstance(node, AAbs):
            return Abs(self._name(node.name, node.pos), self.build(node.body))
        if isinstance(node, ASwap):
            a, b = self._name(node.a, node.pos), self._name(node.b, node.pos)
            return swap_term((a, b), self.build(node.body))
        if isinstance(node, (ANil, ACons)):
            s = self._resolve_sort(self.sorts[id(node)], node.pos, "a list")
            elem = s.params[0]
            if isinstance(node, ANil):
                return Const(nil_symbol(elem))
            return App(cons_symbol(elem), (self.build(node.head), self.build(node.tail)))
        if isinstance(node, APair):
            l, r = self.build(node.left), self.build(node.right)
            from .terms import sort_of

            return App(pair_symbol(sort_of(l), sort_of(r)), (l, r))
        raise ElabError("expected a term", node.pos)

    # -- goals
    def infer_goal(self, node: Node) -> None:
        if isinstance(node, AEq):
            unify_sorts(self.infer(node.left), self.infer(node.right), node.pos, " in an equation")
        elif isinstance(node, AFresh):
            s = self.infer(node.name)
            unify_sorts(NameSort(Meta("nametype")), s, node.name.pos, " on the left of #")
            self.infer(node.term)
        elif isinstance(node, (AApp, AIdent)):
            ident = node.ident
            args = node.args if isinstance(node, AApp) else []
            pred = self.sig.preds.get(ident)
            if pred is None:
                raise ElabError(f"undeclared relation {ident}", node.pos)
            if len(pred.args) != len(args):
                raise ElabError(f"{ident} expects {len(pred.args)} arguments, got {len(args)}", node.pos)
            for i, (arg, w) in enumerate(zip(args, pred.args)):
                unify_sorts(w, self.infer(arg), arg.pos, f" in argument {i + 1} of {ident}")
        else:
            raise ElabError("expected an atom, an equation or a freshness goal", node.pos)

    def build_goal(self, node: Node):
        try:
            if isinstance(node, AEq):
                return Equation(self.build(node.left), self.build(node.right))
            if isinstance(node, AFresh):
                return FreshGoal(self.build(node.name), self.build(node.term))
            args = node.args if isinstance(node, AApp) else []
            return Atom(self.sig.preds[node.ident], tuple(self.build(a) for a in args))
        except ElabError:
            raise
        except SortError as e:
            raise ElabError(str(e), node.pos) from None

    # -- formulas
    def _sort_of_syntax(self, syn: SortSyn):
        return resolve_sort_syntax(self.sig, syn)

    def infer_formula(self, node: Node) -> None:
        if isinstance(node, AConn):
            for a in node.args:
                self.infer_formula(a)
        elif isinstance(node, AQuant):
            sort = self._sort_of_syntax(node.sort)
            if node.q == "new":
                if not isinstance(sort, NameSort):
                    raise ElabError(f"new binds names, not values of sort {sort}", node.pos)
                binder = Name(sort.nametype, self.supply.next_id(), node.ident)
            else:
                binder = Var(node.ident, sort)
            node.binder = binder
            self.scope.append((node.ident, binder))
            try:
                self.infer_formula(node.body)
            finally:
                self.scope.pop()
        else:
            self.infer_goal(node)

    def build_formula(self, node: Node):
        if isinstance(node, AConn):
            args = [self.build_formula(a) for a in node.args]
            op = node.op
            if op == "true":
                return Top()
            if op == "false":
                return Bot()
            if op == "not":
                return Not(args[0])
            return {"and": And, "or": Or, "imp": Implies, "iff": Iff}[op](*args)
        if isinstance(node, AQuant):
            self.scope.append((node.ident, node.binder))
            try:
                body = self.build_formula(node.body)
            finally:
                self.scope.pop()
            if node.q == "new":
                return New(node.binder, body)
            return (Forall if node.q == "forall" else Exists)(node.binder, body)
        return self.build_goal(node)


def resolve_sort_syntax(sig: Signature, syn: SortSyn):
    if syn.abs_of is not None:
        nt = sig.nametypes.get(syn.abs_of)
        if nt is None:
            raise ElabError(f"unknown name-type {syn.abs_of}", syn.pos)
        return AbsSort(nt, resolve_sort_syntax(sig, syn.params[0]))
    if syn.ident == "*":
        return product_sort(*(resolve_sort_syntax(sig, p) for p in syn.params))
    if syn.ident == "list":
        if len(syn.params) != 1:
            raise ElabError("list takes exactly one sort parameter, as in list(exp)", syn.pos)
        return list_sort(resolve_sort_syntax(sig, syn.params[0]))
    if syn.params:
        raise ElabError(f"sort {syn.ident} takes no parameters", syn.pos)
    if syn.ident in sig.nametypes:
        return NameSort(sig.nametypes[syn.ident])
    if syn.ident in sig.datatypes:
        return DataSort(syn.ident)
    raise ElabError(f"unknown sort {syn.ident}", syn.pos)


# ---------------------------------------------------------------------------
# Entry points


def _check_end(p: Parser) -> None:
    if not p.at_eof():
        p.fail("unexpected trailing input")


def parse_term(
    src: str,
    sig: Signature,
    auto: bool = True,
    warn: bool = False,
    supply: NameSupply = DEFAULT_SUPPLY,
):
    """Parse and elaborate one term. With ``auto`` unknown symbols and names are declared."""
    p = Parser(src)
    node = p.term()
    _check_end(p)
    el = Elaborator(sig, names="global", auto_funcs=auto, warn=warn, supply=supply)
    node = el.desugar(node)
    el.infer(node)
    el._finish()
    return el.build(node)


def parse_terms(srcs, sig: Signature, auto: bool = True, supply: NameSupply = DEFAULT_SUPPLY):
    """Parse several terms sharing one variable scope, so equal idents denote equal variables."""
    el = Elaborator(sig, names="global", auto_funcs=auto, supply=supply)
    nodes = []
    for src in srcs:
        p = Parser(src)
        node = p.term()
        _check_end(p)
        node = el.desugar(node)
        el.infer(node)
        nodes.append(node)
    if len(nodes) == 2:
        unify_sorts(el.sorts[id(nodes[0])], el.sorts[id(nodes[1])], nodes[1].pos, " between the two terms")
    el._finish()
    return [el.build(n) for n in nodes]


def parse_goals(src: str, sig: Signature, warn: bool = True, supply: NameSupply = DEFAULT_SUPPLY) -> list:
    """A comma-separated conjunction of goals; names in it are global."""
    p = Parser(src)
    nodes = p.goals()
    if p.at("."):
        p.advance()
    _check_end(p)
    el = Elaborator(sig, names="global", auto_funcs=False, warn=warn, supply=supply)
    nodes = [el.desugar(n) for n in nodes]
    for n in nodes:
        el.infer_goal(n)
    el._finish()
    return [el.build_goal(n) for n in nodes]


def parse_formula(src: str, sig: Signature, warn: bool = True, supply: NameSupply = DEFAULT_SUPPLY):
    p = Parser(src)
    node = p.formula()
    _check_end(p)
    el = Elaborator(sig, names="global", auto_funcs=False, warn=warn, supply=supply)
    _desugar_formula(el, node)
    el.infer_formula(node)
    el._finish()
    return el.build_formula(node)


def _desugar_formula(el: Elaborator, node: Node) -> None:
    if isinstance(node, AConn):
        for a in node.args:
            _desugar_formula(el, a)
    elif isinstance(node, AQuant):
        _desugar_formula(el, node.body)
    elif isinstance(node, AEq):
        node.left, node.right = el.desugar(node.left), el.desugar(node.right)
    elif isinstance(node, AFresh):
        node.name, node.term = el.desugar(node.name), el.desugar(node.term)
    elif isinstance(node, AApp):
        el.desugar(node)


_DECL = {"name", "nametype", "type", "func", "pred"}


def parse_program(src: str, sig: Optional[Signature] = None, supply: NameSupply = DEFAULT_SUPPLY) -> Program:
    """Parse declarations and clauses. Names in clauses are clause-local."""
    sig = sig.copy() if sig is not None else Signature()
    prog = Program(sig)
    p = Parser(src)
    while not p.at_eof():
        t = p.tok
        if t.kind == "ident" and t.text in _DECL and p.peek().kind == "ident":
            _declaration(p, sig, supply)
        else:
            prog.clauses.append(_clause(p, sig, supply))
    return prog


def _ident_list(p: Parser) -> list[Token]:
    out = [p.expect_kind("ident", "an identifier")]
    while p.at(","):
        p.advance()
        out.append(p.expect_kind("ident", "an identifier"))
    return out


def _declaration(p: Parser, sig: Signature, supply: NameSupply) -> None:
    kw = p.advance()
    pos = (kw.line, kw.col)
    try:
        if kw.text == "name":
            labels = _ident_list(p)
            p.expect(":")
            nt = sig.nametype(p.expect_kind("ident", "a name-type").text)
            for lab in labels:
                sig.declare_name(lab.text, nt, supply)
        elif kw.text == "nametype":
            for lab in _ident_list(p):
                sig.nametype(lab.text)
        elif kw.text == "type":
            for lab in _ident_list(p):
                sig.datatype(lab.text)
        elif kw.text == "func":
            ident = p.expect_kind("ident", "a function symbol").text
            args = [resolve_sort_syntax(sig, s) for s in p.sort_list()]
            if p.at("->") or p.at(":"):
                p.advance()
            else:
                p.fail("expected '->'")
            res_syn = p.sort()
            sig.declare_func(ident, args, resolve_sort_syntax(sig, res_syn))
        elif kw.text == "pred":
            ident = p.expect_kind("ident", "a relation symbol").text
            args = [resolve_sort_syntax(sig, s) for s in p.sort_list()]
            sig.declare_pred(ident, args)
    except ElabError:
        raise
    except SortError as e:
        raise ElabError(str(e), pos) from None
    p.expect(".")


def _clause(p: Parser, sig: Signature, supply: NameSupply) -> HornClause:
    pos = p.pos()
    head = p.goal()
    body = []
    if p.at(":-"):
        p.advance()
        body = p.goals()
    p.expect(".")
    if not isinstance(head, (AApp, AIdent)):
        raise ElabError("clause head must be an atom p(t, ...)", pos)
    if isinstance(head, AIdent) and head.ident not in sig.preds:
        raise ElabError(f"undeclared relation {head.ident}", pos)
    el = Elaborator(sig, names="local", auto_funcs=False, supply=supply)
    head = el.desugar(head)
    body = [el.desugar(g) if not isinstance(g, (AEq, AFresh)) else g for g in body]
    for g in body:
        if isinstance(g, AEq):
            g.left, g.right = el.desugar(g.left), el.desugar(g.right)
        elif isinstance(g, AFresh):
            g.name, g.term = el.desugar(g.name), el.desugar(g.term)
    el.infer_goal(head)
    for g in body:
        el.infer_goal(g)
    el._finish()
    h = el.build_goal(head)
    return HornClause.build(h, [el.build_goal(g) for g in body])


# ---------------------------------------------------------------------------
# Printing


def _is_lam_shape(t) -> str:
    """Which lambda constructor ``t`` is, if any."""
    if isinstance(t, App) and t.symbol.name in ("var", "lam", "app"):
        f = t.symbol
        if f.name == "var" and len(f.args) == 1 and isinstance(f.args[0], NameSort):
            return "var"
        if f.name == "lam" and len(f.args) == 1 and isinstance(f.args[0], AbsSort):
            return "lam"
        if f.name == "app" and len(f.args) == 2:
            return "app"
    return ""


def _ends_in_free_name(f, bound: tuple) -> bool:
    while _is_lam_shape(f) == "app":
        f = f.args[1]
        if _is_lam_shape(f) != "var":
            return False
    return _is_lam_shape(f) == "var" and f.args[0] not in bound


def show(t, sugar: bool = False) -> str:
    """Print a term; ``sugar`` uses lambda notation for var/lam/app."""
    return _show(t, sugar, ())


def _show(t, sugar: bool, bound: tuple) -> str:
    if isinstance(t, Name):
        return str(t)
    if isinstance(t, Susp):
        return "".join(f"({a} {b})." for a, b in t.perm.swaps) + t.var.ident
    if isinstance(t, Const):
        return "[]" if t.symbol.name == NIL else t.symbol.name
    if isinstance(t, Abs):
        return f"<{t.name}>{_show(t.body, sugar, bound)}"
    if isinstance(t, App):
        name = t.symbol.name
        if name == CONS:
            items = []
            while isinstance(t, App) and t.symbol.name == CONS:
                items.append(_show(t.args[0], sugar, bound))
                t = t.args[1]
            if isinstance(t, Const) and t.symbol.name == NIL:
                return "[" + ", ".join(items) + "]"
            return "[" + ", ".join(items) + " | " + _show(t, sugar, bound) + "]"
        if name == PAIR:
            return f"({_show(t.args[0], sugar, bound)}, {_show(t.args[1], sugar, bound)})"
        if sugar:
            shape = _is_lam_shape(t)
            if shape == "var" and isinstance(t.args[0], Name):
                return str(t.args[0])
            if shape == "lam" and isinstance(t.args[0], Abs):
                return f"\\{t.args[0].name}. {_show(t.args[0].body, True, bound + (t.args[0].name,))}"
            if shape == "app":
                f, x = t.args
                fs = _show(f, True, bound)
                if _is_lam_shape(f) == "lam" and isinstance(f.args[0], Abs):
                    fs = f"({fs})"
                xs = _show(x, True, bound)
                if _is_lam_shape(x) == "app" or (_is_lam_shape(x) == "lam" and isinstance(x.args[0], Abs)):
                    xs = f"({xs})"
                if xs.startswith("(") and _ends_in_free_name(f, bound):
                    fs = f"({fs})"  # a free name before '(' would read back as a call
                return f"{fs} {xs}"
        return f"{name}(" + ", ".join(_show(a, sugar, bound) for a in t.args) + ")"
    raise TypeError(f"not a term: {t!r}")


def show_goal(g, sugar: bool = False) -> str:
    if isinstance(g, Atom):
        if not g.args:
            return g.pred.name
        return f"{g.pred.name}(" + ", ".join(show(a, sugar) for a in g.args) + ")"
    if isinstance(g, Equation):
        return f"{show(g.left, sugar)} = {show(g.right, sugar)}"
    if isinstance(g, FreshGoal):
        return f"{show(g.name, sugar)} # {show(g.term, sugar)}"
    raise TypeError(f"not a goal: {g!r}")


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}


def show_formula(phi, sugar: bool = False) -> str:
    return _showf(phi, 0, sugar)


def _showf(phi, ctx: int, sugar: bool) -> str:
    if isinstance(phi, (Atom, Equation, FreshGoal)):
        s = show_goal(phi, sugar)
        return f"({s})" if ctx > 4 and not isinstance(phi, Atom) else s
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bot):
        return "false"
    if isinstance(phi, Not):
        return "~" + _showf(phi.body, 5, sugar)
    if isinstance(phi, (Forall, Exists, New)):
        q = {Forall: "forall", Exists: "exists", New: "new"}[type(phi)]
        b = phi.name if isinstance(phi, New) else phi.var
        sort = NameSort(b.type) if isinstance(phi, New) else b.sort
        ident = str(b) if isinstance(phi, New) else b.ident
        s = f"{q} {ident}:{sort}. {_showf(phi.body, 0, sugar)}"
        return f"({s})" if ctx > 0 else s
    prec = _PREC[type(phi)]
    op = {Iff: "<=>", Implies: "=>", Or: "\\/", And: "/\\"}[type(phi)]
    if isinstance(phi, Implies):
        s = f"{_showf(phi.left, prec + 1, sugar)} {op} {_showf(phi.right, prec, sugar)}"
    else:
        s = f"{_showf(phi.left, prec, sugar)} {op} {_showf(phi.right, prec + 1, sugar)}"
    return f"({s})" if ctx > prec else s


def show_clause(c: HornClause, sugar: bool = False) -> str:
    h = show_goal(c.head, sugar)
    if not c.body:
        return h + "."
    return h + " :- " + ", ".join(show_goal(g, sugar) for g in c.body) + "."


def show_sort(s) -> str:
    return str(s)


def signature_source(sig: Signature) -> str:
    """Declarations reproducing ``sig`` in program syntax."""
    lines = []
    by_type: dict[str, list[str]] = {}
    for label, a in sig.names.items():
        by_type.setdefault(a.type.ident, []).append(label)
    for nt in sig.nametypes:
        if nt in by_type:
            lines.append(f"name {', '.join(by_type[nt])} : {nt}.")
        else:
            lines.append(f"nametype {nt}.")
    for d in sorted(sig.datatypes):
        lines.append(f"type {d}.")
    for f in sig.funcs.values():
        args = f"({', '.join(map(str, f.args))})" if f.args else ""
        lines.append(f"func {f.name}{args} -> {f.result}.")
    for pr in sig.preds.values():
        args = f"({', '.join(map(str, pr.args))})" if pr.args else ""
        lines.append(f"pred {pr.name}{args}.")
    return "\n".join(lines)
