"""The four rewrite rules, redex search and the head decompositions.

Rules::

    beta  : (\\x.M N)       -> M[x:=N]
    delta : (\\y.\\x.M N)    -> \\x.(\\y.M N)
    gamma : (\\x.M N P)     -> (\\x.(M P) N)
    assoc : (M (\\x.N P))   -> (\\x.(M N) P)

The freshness side conditions of delta/gamma/assoc are met by renaming the
moved binder before rewriting, so every structural match is a redex.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from .terms import (
    Abs,
    App,
    Term,
    Var,
    alpha_key,
    all_names,
    app,
    free_vars,
    fresh_name,
    spine,
    substitute,
)

__all__ = [
    "Rule",
    "BETA",
    "PERM",
    "ALL",
    "rules_from_name",
    "Redex",
    "StaleRedex",
    "HeadDecomposition",
    "HeadParts",
    "decompose",
    "find_redexes",
    "contract",
    "one_step_reducts",
    "one_step_reducts_tagged",
    "head_parts",
]


class Rule(enum.Enum):
    BETA = "beta"
    DELTA = "delta"
    GAMMA = "gamma"
    ASSOC = "assoc"

    def __str__(self) -> str:
        return self.value


RULE_ORDER = (Rule.BETA, Rule.DELTA, Rule.GAMMA, Rule.ASSOC)
BETA = frozenset({Rule.BETA})
PERM = frozenset({Rule.DELTA, Rule.GAMMA, Rule.ASSOC})
ALL = frozenset(RULE_ORDER)

_NAMED = {"beta": BETA, "perm": PERM, "all": ALL}


def rules_from_name(name: str) -> frozenset[Rule]:
    """Resolve ``beta``, ``perm``, ``all`` or a comma list of rule names."""
    if name in _NAMED:
        return _NAMED[name]
    try:
        return frozenset(Rule(part.strip()) for part in name.split(","))
    except ValueError:
        raise ValueError(f"unknown rule set {name!r}") from None


@dataclass(frozen=True)
class Redex:
    rule: Rule
    path: tuple[str, ...] = field(default=())

    def __str__(self) -> str:
        return f"{self.rule}@{'/'.join(self.path) or 'root'}"


class StaleRedex(ValueError):
    pass


@dataclass(frozen=True)
class HeadDecomposition:
    head: Term
    args: tuple[Term, ...]

    def recompose(self) -> Term:
        return app(self.head, *self.args)


def decompose(t: Term) -> HeadDecomposition | None:
    if not isinstance(t, App):
        return None
    head, args = spine(t)
    return HeadDecomposition(head, tuple(args))


def _matches(t: Term, rule: Rule) -> bool:
    if not isinstance(t, App):
        return False
    if rule is Rule.BETA:
        return isinstance(t.fun, Abs)
    if rule is Rule.DELTA:
        return isinstance(t.fun, Abs) and isinstance(t.fun.body, Abs)
    if rule is Rule.GAMMA:
        return isinstance(t.fun, App) and isinstance(t.fun.fun, Abs)
    return isinstance(t.arg, App) and isinstance(t.arg.fun, Abs)


def find_redexes(t: Term, rules: Iterable[Rule] = ALL) -> list[Redex]:
    """All redexes of the selected rules, outermost first then left to right."""
    wanted = [r for r in RULE_ORDER if r in frozenset(rules)]
    out: list[Redex] = []
    stack: list[tuple[tuple[str, ...], Term]] = [((), t)]
    while stack:
        path, u = stack.pop()
        if isinstance(u, Abs):
            stack.append((path + ("body",), u.body))
            continue
        if isinstance(u, Var):
            continue
        for r in wanted:
            if _matches(u, r):
                out.append(Redex(r, path))
        stack.append((path + ("arg",), u.arg))
        stack.append((path + ("fun",), u.fun))
    return out


def _rename_binder(lam: Abs, avoid: set[str]) -> Abs:
    """Alpha-rename ``lam``'s binder away from ``avoid``."""
    x = lam.binder
    if x not in avoid:
        return lam
    x2 = fresh_name(x, avoid | all_names(lam.body))
    return Abs(x2, substitute(lam.body, {x: Var(x2)}))


def rewrite_at_root(t: Term, rule: Rule) -> Term:
    if not _matches(t, rule):
        raise StaleRedex(f"{rule} does not match {t}")
    if rule is Rule.BETA:
        lam = t.fun
        return substitute(lam.body, {lam.binder: t.arg})
    if rule is Rule.DELTA:
        outer = t.fun
        inner = _rename_binder(outer.body, set(free_vars(t.arg)) | {outer.binder})
        return Abs(inner.binder, App(Abs(outer.binder, inner.body), t.arg))
    if rule is Rule.GAMMA:
        lam = _rename_binder(t.fun.fun, set(free_vars(t.arg)))
        return App(Abs(lam.binder, App(lam.body, t.arg)), t.fun.arg)
    lam = _rename_binder(t.arg.fun, set(free_vars(t.fun)))
    return App(Abs(lam.binder, App(t.fun, lam.body)), t.arg.arg)


def _replace(t: Term, path: tuple[str, ...], i: int, rule: Rule) -> Term:
    if i == len(path):
        return rewrite_at_root(t, rule)
    step = path[i]
    if step == "body" and isinstance(t, Abs):
        return Abs(t.binder, _replace(t.body, path, i + 1, rule))
    if step == "fun" and isinstance(t, App):
        return App(_replace(t.fun, path, i + 1, rule), t.arg)
    if step == "arg" and isinstance(t, App):
        return App(t.fun, _replace(t.arg, path, i + 1, rule))
    raise StaleRedex(f"path {'/'.join(path)} does not address a subterm")


def contract(t: Term, r: Redex) -> Term:
    return _replace(t, r.path, 0, r.rule)


def one_step_reducts_tagged(t: Term, rules: Iterable[Rule] = ALL) -> list[tuple[Rule, Term]]:
    """``(rule, reduct)`` pairs, deduplicated on (rule, alpha-class)."""
    seen: set[tuple[Rule, str]] = set()
    out = []
    for r in find_redexes(t, rules):
        u = contract(t, r)
        k = (r.rule, alpha_key(u))
        if k not in seen:
            seen.add(k)
            out.append((r.rule, u))
    return out


def one_step_reducts(t: Term, rules: Iterable[Rule] = ALL) -> list[Term]:
    seen: set[str] = set()
    out = []
    for r in find_redexes(t, rules):
        u = contract(t, r)
        k = alpha_key(u)
        if k not in seen:
            seen.add(k)
            out.append(u)
    return out


@dataclass(frozen=True)
class HeadParts:
    """Designated head reducts of ``t = (H M1 ... Mn)``.

    ``arg``/``b`` exist when H is an abstraction, ``c`` when additionally
    n >= 2, ``d`` when H is a double abstraction, and ``a[i]`` (1-based) for
    every argument that is itself a beta-redex.
    """

    head: Term
    args: tuple[Term, ...]
    arg: Term | None = None
    b: Term | None = None
    c: Term | None = None
    d: Term | None = None
    a: dict[int, Term] = field(default_factory=dict)


def head_parts(t: Term) -> HeadParts:
    dec = decompose(t)
    if dec is None:
        raise ValueError(f"{t} has no head decomposition")
    h, ms = dec.head, dec.args
    n = len(ms)
    arg = b = c = d = None
    if isinstance(h, Abs):
        arg = ms[0]
        b = app(substitute(h.body, {h.binder: ms[0]}), *ms[1:])
        if n >= 2:
            lam = _rename_binder(h, set(free_vars(ms[1])))
            c = app(Abs(lam.binder, App(lam.body, ms[1])), ms[0], *ms[2:])
        if isinstance(h.body, Abs):
            x = h.binder
            inner = _rename_binder(h.body, set(free_vars(ms[0])) | {x})
            d = app(Abs(inner.binder, App(Abs(x, inner.body), ms[0])), *ms[1:])
    a: dict[int, Term] = {}
    for i, m in enumerate(ms, start=1):
        if isinstance(m, App) and isinstance(m.fun, Abs):
            prefix = app(h, *ms[: i - 1])
            lam = _rename_binder(m.fun, set(free_vars(prefix)))
            a[i] = app(Abs(lam.binder, App(prefix, lam.body)), m.arg, *ms[i:])
    return HeadParts(h, ms, arg, b, c, d, a)
