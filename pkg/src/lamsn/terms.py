"""Named lambda terms: AST, substitution, alpha-equivalence, concrete syntax.

Terms are immutable.  Bound variables keep their names; substitution renames
binders by priming (``x -> x' -> x''``) only when capture would occur, so the
output is deterministic.  Alpha-equivalence goes through a locally nameless
key (bound occurrences become de Bruijn indices, free names stay).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "Var",
    "Abs",
    "App",
    "Term",
    "Hole",
    "AbsCtx",
    "AppCtx",
    "LeftContext",
    "ParseError",
    "size",
    "free_vars",
    "all_names",
    "nb_occurrences",
    "fresh_name",
    "substitute",
    "alpha_key",
    "alpha_eq",
    "plug",
    "app",
    "spine",
    "parse_term",
    "print_term",
    "term_to_json",
    "term_from_json",
]

IDENT = re.compile(r"[a-z][a-zA-Z0-9_']*")


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Abs:
    binder: str
    body: "Term"

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"

    def __str__(self) -> str:
        return print_term(self)


Term = Union[Var, Abs, App]


# Left contexts: a single hole on the leftmost spine.


@dataclass(frozen=True, slots=True)
class Hole:
    pass


@dataclass(frozen=True, slots=True)
class AbsCtx:
    binder: str
    inner: "LeftContext"


@dataclass(frozen=True, slots=True)
class AppCtx:
    inner: "LeftContext"
    arg: Term


LeftContext = Union[Hole, AbsCtx, AppCtx]


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


def size(t: Term) -> int:
    """Number of AST nodes."""
    n = 0
    stack = [t]
    while stack:
        u = stack.pop()
        n += 1
        if isinstance(u, Abs):
            stack.append(u.body)
        elif isinstance(u, App):
            stack.append(u.fun)
            stack.append(u.arg)
    return n


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Abs):
        return free_vars(t.body) - {t.binder}
    return free_vars(t.fun) | free_vars(t.arg)


def all_names(t: Term) -> set[str]:
    """Every identifier occurring in ``t``, free, bound or as a binder."""
    out: set[str] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            out.add(u.name)
        elif isinstance(u, Abs):
            out.add(u.binder)
            stack.append(u.body)
        else:
            stack.append(u.fun)
            stack.append(u.arg)
    return out


def nb_occurrences(t: Term, x: str) -> int:
    """Count free occurrences of ``x`` in ``t``."""
    if isinstance(t, Var):
        return 1 if t.name == x else 0
    if isinstance(t, Abs):
        return 0 if t.binder == x else nb_occurrences(t.body, x)
    return nb_occurrences(t.fun, x) + nb_occurrences(t.arg, x)


def fresh_name(x: str, avoid: Iterable[str] | set[str] | frozenset[str]) -> str:
    avoid = avoid if isinstance(avoid, (set, frozenset)) else set(avoid)
    name = x
    while name in avoid:
        name += "'"
    return name


def substitute(t: Term, sigma: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution ``sigma(t)``."""
    if not sigma:
        return t
    return _subst(t, dict(sigma), {x: free_vars(u) for x, u in sigma.items()})


def _subst(t: Term, sigma: dict[str, Term], fvs: dict[str, frozenset[str]]) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if isinstance(t, App):
        f = _subst(t.fun, sigma, fvs)
        a = _subst(t.arg, sigma, fvs)
        if f is t.fun and a is t.arg:
            return t
        return App(f, a)
    x = t.binder
    body_fv = free_vars(t.body)
    live = [y for y in sigma if y != x and y in body_fv]
    if not live:
        return t
    inner = {y: sigma[y] for y in live}
    inner_fvs = {y: fvs[y] for y in live}
    if any(x in fvs[y] for y in live):
        avoid = set(body_fv)
        for y in live:
            avoid |= fvs[y]
        x2 = fresh_name(x, avoid)
        inner[x] = Var(x2)
        inner_fvs[x] = frozenset((x2,))
        x = x2
    return Abs(x, _subst(t.body, inner, inner_fvs))


def alpha_key(t: Term) -> str:
    """Locally nameless serialization; equal keys iff alpha-equivalent terms."""
    out: list[str] = []
    _key(t, {}, 0, out)
    return "".join(out)


def _key(t: Term, env: dict[str, int], depth: int, out: list[str]) -> None:
    while isinstance(t, Abs):
        out.append("\\")
        env = {**env, t.binder: depth}
        depth += 1
        t = t.body
    if isinstance(t, Var):
        lvl = env.get(t.name)
        out.append(t.name if lvl is None else f"#{depth - lvl - 1}")
        return
    out.append("(")
    _key(t.fun, env, depth, out)
    out.append(" ")
    _key(t.arg, env, depth, out)
    out.append(")")


def alpha_eq(t: Term, u: Term) -> bool:
    return t is u or alpha_key(t) == alpha_key(u)


def plug(ctx: LeftContext, t: Term) -> Term:
    """Fill the hole of a left context; binders in the context may capture."""
    if isinstance(ctx, Hole):
        return t
    if isinstance(ctx, AbsCtx):
        return Abs(ctx.binder, plug(ctx.inner, t))
    return App(plug(ctx.inner, t), ctx.arg)


def app(head: Term, *args: Term) -> Term:
    """Left-nested application ``(head a1 ... an)``."""
    for a in args:
        head = App(head, a)
    return head


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``t`` into its non-application head and argument list."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


# Concrete syntax


def print_term(t: Term) -> str:
    out: list[str] = []
    _print(t, out)
    return "".join(out)


def _print(t: Term, out: list[str]) -> None:
    while isinstance(t, Abs):
        out.append("\\")
        out.append(t.binder)
        out.append(".")
        t = t.body
    if isinstance(t, Var):
        out.append(t.name)
        return
    head, args = spine(t)
    out.append("(")
    _print(head, out)
    for a in args:
        out.append(" ")
        _print(a, out)
    out.append(")")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.text, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def ident(self) -> str:
        self.skip_ws()
        m = IDENT.match(self.text, self.pos)
        if m is None:
            raise self.error("expected variable")
        self.pos = m.end()
        return m.group()

    def term(self) -> Term:
        c = self.peek()
        if c in ("\\", "λ"):
            self.pos += 1
            binder = self.ident()
            if self.peek() != ".":
                raise self.error("expected '.'")
            self.pos += 1
            return Abs(binder, self.term())
        if c == "(":
            self.pos += 1
            items = [self.term()]
            while self.peek() not in (")", ""):
                items.append(self.term())
            if self.peek() != ")":
                raise self.error("unclosed '('")
            if len(items) < 2:
                raise self.error("application needs at least two terms")
            self.pos += 1
            return app(items[0], *items[1:])
        if c == "":
            raise self.error("unexpected end of input")
        return Var(self.ident())


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek() != "":
        raise p.error("trailing input")
    return t


def term_to_json(t: Term) -> dict:
    if isinstance(t, Var):
        return {"var": t.name}
    if isinstance(t, Abs):
        return {"abs": t.binder, "body": term_to_json(t.body)}
    return {"fun": term_to_json(t.fun), "arg": term_to_json(t.arg)}


def term_from_json(obj: Mapping) -> Term:
    if "var" in obj:
        return Var(obj["var"])
    if "abs" in obj:
        return Abs(obj["abs"], term_from_json(obj["body"]))
    return App(term_from_json(obj["fun"]), term_from_json(obj["arg"]))


def subterms(t: Term) -> Iterator[tuple[tuple[str, ...], Term]]:
    """Pre-order walk yielding ``(path, subterm)`` pairs."""
    stack: list[tuple[tuple[str, ...], Term]] = [((), t)]
    while stack:
        path, u = stack.pop()
        yield path, u
        if isinstance(u, Abs):
            stack.append((path + ("body",), u.body))
        elif isinstance(u, App):
            stack.append((path + ("arg",), u.arg))
            stack.append((path + ("fun",), u.fun))
