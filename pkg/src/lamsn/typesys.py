"""Intersection types with no meet to the right of an arrow, and derivations.

Restricted grammar::

    simple ::= atom | type -> simple
    type   ::= simple | simple /\\ type

A meet is stored as a flat tuple of at least two simple types, read
right-nested: ``Meet((A, B, C))`` is ``A /\\ (B /\\ C)``.  Meets are compared
as ordered lists with duplicates kept unless ``mode="set"`` is requested,
which compares up to permutation and duplication.

Derivations are explicit trees over the six rules.  Search and inference
produce *skeletons* (derivations without contexts and terms) which
:func:`realize` fills in top-down from a root context and term; variable
uses expand to an axiom followed by the meet eliminations/introductions that
carve the needed type out of the declared one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

from .terms import Abs, App, Term, Var, print_term, spine

__all__ = [
    "Atom",
    "Arrow",
    "Meet",
    "Type",
    "UAtom",
    "UArrow",
    "UMeet",
    "UType",
    "O",
    "TypeSyntaxError",
    "components",
    "meet_of",
    "is_simple",
    "is_restricted",
    "types_equal",
    "type_size",
    "restrict_type",
    "parse_type",
    "parse_utype",
    "print_type",
    "context_meet",
    "contexts_equal",
    "Derivation",
    "check_derivation",
    "is_normal",
    "derivation_nodes",
    "derivation_to_json",
    "Use",
    "SArrowI",
    "SArrowE",
    "SMeetI",
    "Skeleton",
    "meet_intro",
    "realize",
    "find_derivation",
]


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "Type"
    cod: "Type"

    def __str__(self) -> str:
        return print_type(self)


@dataclass(frozen=True, slots=True)
class Meet:
    parts: tuple["Type", ...]

    def __str__(self) -> str:
        return print_type(self)


Type = Union[Atom, Arrow, Meet]

O = Atom("o")


# Unrestricted types, input to restrict_type.


@dataclass(frozen=True, slots=True)
class UAtom:
    name: str


@dataclass(frozen=True, slots=True)
class UArrow:
    dom: "UType"
    cod: "UType"


@dataclass(frozen=True, slots=True)
class UMeet:
    left: "UType"
    right: "UType"


UType = Union[UAtom, UArrow, UMeet]


class TypeSyntaxError(ValueError):
    pass


def components(a: Type) -> tuple[Type, ...]:
    return a.parts if isinstance(a, Meet) else (a,)


def meet_of(parts: Iterable[Type]) -> Type:
    """Flattened meet of ``parts``; a single part is returned as is."""
    flat: list[Type] = []
    for p in parts:
        flat.extend(components(p))
    if not flat:
        raise ValueError("empty meet")
    return flat[0] if len(flat) == 1 else Meet(tuple(flat))


def is_simple(a: Type) -> bool:
    return not isinstance(a, Meet)


def is_restricted(a: Type) -> bool:
    if isinstance(a, Atom):
        return True
    if isinstance(a, Arrow):
        return is_simple(a.cod) and is_restricted(a.dom) and is_restricted(a.cod)
    return len(a.parts) >= 2 and all(is_simple(p) and is_restricted(p) for p in a.parts)


def _canon_set(a: Type):
    if isinstance(a, Atom):
        return a.name
    if isinstance(a, Arrow):
        return ("->", _canon_set(a.dom), _canon_set(a.cod))
    parts = frozenset(_canon_set(p) for p in a.parts)
    return next(iter(parts)) if len(parts) == 1 else parts


def types_equal(a: Type, b: Type, mode: str = "ordered") -> bool:
    """Structural equality; ``mode="set"`` treats meets as sets."""
    if mode == "ordered":
        return a == b
    if mode == "set":
        return _canon_set(a) == _canon_set(b)
    raise ValueError(f"unknown comparison mode {mode!r}")


def type_size(a: Type) -> int:
    """Symbol count: one per atom, arrow and meet connective."""
    if isinstance(a, Atom):
        return 1
    if isinstance(a, Arrow):
        return 1 + type_size(a.dom) + type_size(a.cod)
    return len(a.parts) - 1 + sum(type_size(p) for p in a.parts)


def restrict_type(u: UType) -> Type:
    """Distribute meets out of arrow codomains and flatten nested meets."""
    if isinstance(u, UAtom):
        return Atom(u.name)
    if isinstance(u, UMeet):
        return meet_of((restrict_type(u.left), restrict_type(u.right)))
    dom = restrict_type(u.dom)
    return meet_of(Arrow(dom, c) for c in components(restrict_type(u.cod)))


# Concrete syntax: atoms [A-Z][a-zA-Z0-9]* or o, `->` right associative,
# `/\` binds tighter than `->`.

_TOKEN = re.compile(r"\s*(->|/\\|\(|\)|o(?![a-zA-Z0-9])|[A-Z][a-zA-Z0-9]*)")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TypeSyntaxError(f"bad type syntax at position {pos}: {text!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_utype(text: str) -> UType:
    toks = _tokens(text)
    pos = 0

    def arrow() -> UType:
        nonlocal pos
        left = meet()
        if pos < len(toks) and toks[pos] == "->":
            pos += 1
            return UArrow(left, arrow())
        return left

    def meet() -> UType:
        nonlocal pos
        left = atom()
        if pos < len(toks) and toks[pos] == "/\\":
            pos += 1
            return UMeet(left, meet())
        return left

    def atom() -> UType:
        nonlocal pos
        if pos >= len(toks):
            raise TypeSyntaxError(f"unexpected end of type: {text!r}")
        tok = toks[pos]
        pos += 1
        if tok == "(":
            inner = arrow()
            if pos >= len(toks) or toks[pos] != ")":
                raise TypeSyntaxError(f"unclosed '(' in {text!r}")
            pos += 1
            return inner
        if tok in ("->", "/\\", ")"):
            raise TypeSyntaxError(f"unexpected {tok!r} in {text!r}")
        return UAtom(tok)

    result = arrow()
    if pos != len(toks):
        raise TypeSyntaxError(f"trailing input in type {text!r}")
    return result


def _from_utype(u: UType) -> Type:
    if isinstance(u, UAtom):
        return Atom(u.name)
    if isinstance(u, UMeet):
        return meet_of((_from_utype(u.left), _from_utype(u.right)))
    cod = _from_utype(u.cod)
    if not is_simple(cod):
        raise TypeSyntaxError("meet to the right of an arrow; use restrict_type")
    return Arrow(_from_utype(u.dom), cod)


def parse_type(text: str) -> Type:
    """Parse a restricted type; nested meets are flattened."""
    return _from_utype(parse_utype(text))


def print_type(a: Type) -> str:
    if isinstance(a, Atom):
        return a.name
    if isinstance(a, Arrow):
        dom = print_type(a.dom)
        if not isinstance(a.dom, Atom):
            dom = f"({dom})"
        return f"{dom} -> {print_type(a.cod)}"
    return " /\\ ".join(p.name if isinstance(p, Atom) else f"({print_type(p)})" for p in a.parts)


# Contexts


def context_meet(*ctxs: Mapping[str, Type]) -> dict[str, Type]:
    """Pointwise meet; shared variables get the flattened meet in argument order."""
    out: dict[str, Type] = {}
    for ctx in ctxs:
        for x, a in ctx.items():
            out[x] = meet_of((out[x], a)) if x in out else a
    return out


def contexts_equal(g1: Mapping[str, Type], g2: Mapping[str, Type], mode: str = "ordered") -> bool:
    return g1.keys() == g2.keys() and all(types_equal(g1[x], g2[x], mode) for x in g1)


# Derivations

AX, ARROW_E, ARROW_I = "Ax", "ArrowE", "ArrowI"
MEET_E_LEFT, MEET_E_RIGHT, MEET_I = "MeetE_left", "MeetE_right", "MeetI"
_ARITY = {AX: 0, ARROW_I: 1, MEET_E_LEFT: 1, MEET_E_RIGHT: 1, ARROW_E: 2, MEET_I: 2}


@dataclass(frozen=True)
class Derivation:
    rule: str
    ctx: Mapping[str, Type]
    term: Term
    type: Type
    premises: tuple["Derivation", ...] = ()

    def __str__(self) -> str:
        return "\n".join(_render(self, 0))


def _judgment(d: Derivation) -> str:
    ctx = ", ".join(f"{x}: {print_type(a)}" for x, a in sorted(d.ctx.items()))
    return f"{ctx} |- {print_term(d.term)} : {print_type(d.type)}"


def _render(d: Derivation, depth: int) -> Iterator[str]:
    yield f"{'  ' * depth}[{d.rule}] {_judgment(d)}"
    for p in d.premises:
        yield from _render(p, depth + 1)


def derivation_nodes(d: Derivation) -> Iterator[Derivation]:
    stack = [d]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.premises))


def _node_ok(d: Derivation, mode: str) -> bool:
    if _ARITY.get(d.rule) != len(d.premises):
        return False
    if not is_restricted(d.type):
        return False
    eq = lambda a, b: types_equal(a, b, mode)  # noqa: E731
    t, prem = d.term, d.premises
    if d.rule == AX:
        return isinstance(t, Var) and t.name in d.ctx and eq(d.ctx[t.name], d.type)
    if d.rule == ARROW_I:
        (p,) = prem
        if not (isinstance(t, Abs) and isinstance(d.type, Arrow)):
            return False
        inner = {**d.ctx, t.binder: d.type.dom}
        return (
            p.term == t.body
            and contexts_equal(p.ctx, inner, mode)
            and eq(p.type, d.type.cod)
        )
    if d.rule == ARROW_E:
        f, a = prem
        if not isinstance(t, App) or f.term != t.fun or a.term != t.arg:
            return False
        if not (contexts_equal(f.ctx, d.ctx, mode) and contexts_equal(a.ctx, d.ctx, mode)):
            return False
        return isinstance(f.type, Arrow) and eq(f.type.cod, d.type) and eq(f.type.dom, a.type)
    # the meet rules keep subject and context
    if any(p.term != t or not contexts_equal(p.ctx, d.ctx, mode) for p in prem):
        return False
    if d.rule == MEET_I:
        left, right = prem
        return is_simple(left.type) and eq(d.type, meet_of((left.type, right.type)))
    (p,) = prem
    if not isinstance(p.type, Meet):
        return False
    if d.rule == MEET_E_LEFT:
        return eq(d.type, p.type.parts[0])
    return eq(d.type, meet_of(p.type.parts[1:]))


def check_derivation(d: Derivation, mode: str = "ordered") -> bool:
    """True iff every node is an instance of its rule and all types are restricted."""
    for n in derivation_nodes(d):
        if not _node_ok(n, mode):
            return False
        if not all(is_restricted(a) for a in n.ctx.values()):
            return False
    return True


def is_normal(d: Derivation) -> bool:
    """No meet elimination directly below a meet introduction."""
    return not any(
        n.rule in (MEET_E_LEFT, MEET_E_RIGHT) and n.premises[0].rule == MEET_I
        for n in derivation_nodes(d)
    )


def derivation_to_json(d: Derivation) -> dict:
    return {
        "rule": d.rule,
        "ctx": {x: print_type(a) for x, a in sorted(d.ctx.items())},
        "term": print_term(d.term),
        "type": print_type(d.type),
        "premises": [derivation_to_json(p) for p in d.premises],
    }


# Skeletons


@dataclass(frozen=True, slots=True)
class Use:
    """Variable occurrence used at ``type``."""

    type: Type


@dataclass(frozen=True, slots=True)
class SArrowI:
    type: Arrow
    body: "Skeleton"


@dataclass(frozen=True, slots=True)
class SArrowE:
    type: Type
    fun: "Skeleton"
    arg: "Skeleton"


@dataclass(frozen=True, slots=True)
class SMeetI:
    type: Meet
    left: "Skeleton"
    right: "Skeleton"


Skeleton = Union[Use, SArrowI, SArrowE, SMeetI]


def meet_intro(sks: list[Skeleton]) -> Skeleton:
    """Right-nested meet introduction over skeletons of simple types."""
    acc = sks[-1]
    for sk in reversed(sks[:-1]):
        acc = SMeetI(meet_of((sk.type, acc.type)), sk, acc)
    return acc


def _project(ctx: Mapping[str, Type], v: Var, want: Type) -> Derivation:
    declared = ctx[v.name]
    node = Derivation(AX, ctx, v, declared)
    if declared == want:
        return node
    parts = components(declared)
    i = parts.index(want)
    for k in range(i):
        node = Derivation(MEET_E_RIGHT, ctx, v, meet_of(parts[k + 1 :]), (node,))
    if isinstance(node.type, Meet):
        node = Derivation(MEET_E_LEFT, ctx, v, want, (node,))
    return node


def realize(sk: Skeleton, ctx: Mapping[str, Type], t: Term) -> Derivation:
    """Fill a skeleton in with contexts and subjects, starting from ``ctx |- t``."""
    if isinstance(sk, SMeetI):
        return Derivation(MEET_I, ctx, t, sk.type, (realize(sk.left, ctx, t), realize(sk.right, ctx, t)))
    if isinstance(sk, Use):
        if not isinstance(t, Var):
            raise ValueError(f"variable use skeleton at non-variable {print_term(t)}")
        if t.name not in ctx:
            raise ValueError(f"{t.name} is not declared")
        want = components(sk.type)
        if ctx[t.name] == sk.type or len(want) == 1:
            return _project(ctx, t, sk.type)
        ds = [_project(ctx, t, c) for c in want]
        acc = ds[-1]
        for d in reversed(ds[:-1]):
            acc = Derivation(MEET_I, ctx, t, meet_of((d.type, acc.type)), (d, acc))
        return acc
    if isinstance(sk, SArrowI):
        if not isinstance(t, Abs):
            raise ValueError(f"abstraction skeleton at {print_term(t)}")
        inner = {**ctx, t.binder: sk.type.dom}
        return Derivation(ARROW_I, ctx, t, sk.type, (realize(sk.body, inner, t.body),))
    if not isinstance(t, App):
        raise ValueError(f"application skeleton at {print_term(t)}")
    return Derivation(ARROW_E, ctx, t, sk.type, (realize(sk.fun, ctx, t.fun), realize(sk.arg, ctx, t.arg)))


# Bounded derivation search


class _OutOfBudget(Exception):
    pass


def _subtypes(a: Type, out: dict[Type, None]) -> None:
    if a in out:
        return
    out[a] = None
    if isinstance(a, Arrow):
        _subtypes(a.dom, out)
        _subtypes(a.cod, out)
    elif isinstance(a, Meet):
        for p in a.parts:
            _subtypes(p, out)


def _peel(a: Type, k: int) -> tuple[list[Type], Type] | None:
    doms = []
    for _ in range(k):
        if not isinstance(a, Arrow):
            return None
        doms.append(a.dom)
        a = a.cod
    return doms, a


class _Search:
    """Bidirectional search for normal derivations.

    Checking pushes a known type down; synthesis enumerates finitely many
    simple types for a term.  The only guess is the binder type of an
    abstraction in synthesis position, drawn from ``pool``.
    """

    def __init__(self, budget: int, pool: Iterable[Type]):
        self.budget = budget
        self.steps = 0
        self.pool = list(dict.fromkeys(pool))

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise _OutOfBudget

    def check(self, ctx: Mapping[str, Type], t: Term, a: Type) -> Skeleton | None:
        self.tick()
        if isinstance(t, Var):
            if t.name not in ctx:
                return None
            have = components(ctx[t.name])
            return Use(a) if all(c in have for c in components(a)) else None
        if isinstance(a, Meet):
            sks = []
            for c in a.parts:
                sk = self.check(ctx, t, c)
                if sk is None:
                    return None
                sks.append(sk)
            return meet_intro(sks)
        if isinstance(t, Abs):
            if not isinstance(a, Arrow):
                return None
            body = self.check({**ctx, t.binder: a.dom}, t.body, a.cod)
            return None if body is None else SArrowI(a, body)
        head, args = spine(t)
        for fun_sk in self._heads(ctx, head, args, a):
            if fun_sk is not None:
                return fun_sk
        return None

    def _apply(self, ctx, head_sk: Skeleton, args: list[Term], doms: list[Type]) -> Skeleton | None:
        sk = head_sk
        ftype = head_sk.type
        for arg, dom in zip(args, doms):
            arg_sk = self.check(ctx, arg, dom)
            if arg_sk is None:
                return None
            ftype = ftype.cod
            sk = SArrowE(ftype, sk, arg_sk)
        return sk

    def _heads(self, ctx, head: Term, args: list[Term], want: Type | None) -> Iterator[Skeleton | None]:
        """Skeletons for ``(head args...)``; result type ``want`` when given."""
        k = len(args)
        if isinstance(head, Var):
            if head.name not in ctx:
                return
            for c in components(ctx[head.name]):
                peeled = _peel(c, k)
                if peeled is None or (want is not None and peeled[1] != want):
                    continue
                yield self._apply(ctx, Use(c), args, peeled[0])
            return
        lam = head
        for d1, sk1 in self.arg_types(ctx, args[0]):
            inner = {**ctx, lam.binder: d1}
            tried: set[Type] = set()
            if want is not None:
                rest = [self.meet_all(ctx, a) for a in args[1:]]
                if all(r is not None for r in rest):
                    body_type: Type = want
                    for r in reversed(rest):
                        body_type = Arrow(r[0], body_type)
                    tried.add(body_type)
                    body = self.check(inner, lam.body, body_type)
                    if body is not None:
                        ftype = Arrow(d1, body_type)
                        sk: Skeleton = SArrowE(body_type, SArrowI(ftype, body), sk1)
                        for _, rsk in rest:
                            sk = SArrowE(sk.type.cod, sk, rsk)
                        yield sk
                        continue
            for s, body in self.synth(inner, lam.body):
                if s in tried:
                    continue
                peeled = _peel(s, k - 1)
                if peeled is None or (want is not None and peeled[1] != want):
                    continue
                fsk = SArrowE(s, SArrowI(Arrow(d1, s), body), sk1)
                yield self._apply(ctx, fsk, args[1:], peeled[0])

    def meet_all(self, ctx, t: Term) -> tuple[Type, Skeleton] | None:
        simple = self.synth(ctx, t)
        if not simple:
            return None
        if len(simple) == 1:
            return simple[0]
        return meet_of(s for s, _ in simple), meet_intro([sk for _, sk in simple])

    def arg_types(self, ctx, t: Term) -> list[tuple[Type, Skeleton]]:
        simple = self.synth(ctx, t)
        if len(simple) <= 1:
            return simple
        return [(meet_of(s for s, _ in simple), meet_intro([sk for _, sk in simple]))] + simple

    def synth(self, ctx: Mapping[str, Type], t: Term) -> list[tuple[Type, Skeleton]]:
        self.tick()
        found: dict[Type, Skeleton] = {}
        if isinstance(t, Var):
            if t.name in ctx:
                for c in components(ctx[t.name]):
                    found.setdefault(c, Use(c))
        elif isinstance(t, Abs):
            for d in self.pool:
                for s, body in self.synth({**ctx, t.binder: d}, t.body):
                    a = Arrow(d, s)
                    found.setdefault(a, SArrowI(a, body))
        else:
            head, args = spine(t)
            for sk in self._heads(ctx, head, args, None):
                if sk is not None:
                    found.setdefault(sk.type, sk)
        return list(found.items())


def find_derivation(
    ctx: Mapping[str, Type],
    t: Term,
    a: Type,
    budget: int = 10_000,
    pool: Iterable[Type] = (),
) -> Derivation | None:
    """A normal derivation of ``ctx |- t : a`` found within ``budget`` search steps.

    ``None`` only means nothing was found within the budget.  Extra binder
    type guesses may be passed in ``pool``; the subtypes of ``ctx`` and ``a``
    and the atom ``o`` are always candidates.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    seen: dict[Type, None] = {}
    for b in list(ctx.values()) + [a] + list(pool):
        _subtypes(b, seen)
    seen.setdefault(O, None)
    search = _Search(budget, seen)
    try:
        sk = search.check(ctx, t, a)
    except _OutOfBudget:
        return None
    if sk is None:
        return None
    return realize(sk, dict(ctx), t)
