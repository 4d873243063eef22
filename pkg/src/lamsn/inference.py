"""Typing beta-SN terms in the restricted intersection system.

The algorithm follows the classical induction on (longest beta reduction,
size):

* ``\\x.u`` -- type the body; ``x`` gets its declared type there, or ``o``
  when the binder is vacuous.
* ``(x v1 ... vn)`` -- type each argument on its own, give the head the meet
  of its argument-side uses with ``B1 -> ... -> Bn -> o``, merge contexts.
* ``(\\x.a b c...)`` -- type the head reduct ``(a[x:=b] c...)``.  If ``x``
  occurs in ``a`` the copies of ``b`` in that typing are traced back; their
  types form the meet given to both ``x`` and ``b``.  Otherwise ``b`` is
  typed separately and ``x`` gets its type.

Long head-reduction chains are unwound with an explicit frame stack rather
than recursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

from .normalization import (
    DEFAULT_FUEL,
    Exhausted,
    FuelExhausted,
    NotSN,
    NotStronglyNormalizing,
    decide_sn,
    eta,
    eta_sigma,
    size_sigma,
)
from .reduction import ALL, BETA, Rule
from .terms import Abs, App, Term, Var, all_names, app, free_vars, fresh_name, size, spine, substitute
from .typesys import (
    O,
    Arrow,
    Derivation,
    Meet,
    SArrowE,
    SArrowI,
    Skeleton,
    SMeetI,
    Type,
    Use,
    components,
    context_meet,
    meet_intro,
    meet_of,
    realize,
    type_size,
)

__all__ = [
    "NotBetaSN",
    "TypedResult",
    "Measure",
    "infer",
    "infer_skeleton",
    "substitute_tracking",
    "induction_measure",
    "is_fair",
]

Path = tuple[str, ...]


class NotBetaSN(NotStronglyNormalizing):
    """The term has an infinite beta reduction, hence no type."""


@dataclass(frozen=True)
class TypedResult:
    ctx: dict[str, Type]
    ty: Type
    deriv: Derivation


class Measure(NamedTuple):
    type_size: int
    eta: int
    size: int
    eta_sigma: int
    size_sigma: int


def substitute_tracking(a: Term, x: str, b: Term) -> tuple[Term, list[Path]]:
    """``a[x:=b]`` together with the paths where the copies of ``b`` landed."""
    positions: list[Path] = []
    fv_b = free_vars(b)

    def go(t: Term, path: Path) -> Term:
        if isinstance(t, Var):
            if t.name == x:
                positions.append(path)
                return b
            return t
        if isinstance(t, App):
            return App(go(t.fun, path + ("fun",)), go(t.arg, path + ("arg",)))
        if t.binder == x or x not in free_vars(t.body):
            return t
        y, body = t.binder, t.body
        if y in fv_b:
            y2 = fresh_name(y, fv_b | all_names(body) | {x})
            body = substitute(body, {y: Var(y2)})
            y = y2
        return Abs(y, go(body, path + ("body",)))

    return go(a, ()), positions


class _Frame(NamedTuple):
    binder: str
    body: Term
    arg: Term
    rest: tuple[Term, ...]
    positions: list[Path] | None
    arg_typing: tuple[dict[str, Type], Skeleton] | None


def _peel_spine(sk: Skeleton, n: int) -> tuple[Skeleton, list[Skeleton]]:
    """Split the skeleton of ``(h c1 ... cn)`` into that of ``h`` and the ``ci``."""
    args: list[Skeleton] = []
    for _ in range(n):
        if not isinstance(sk, SArrowE):
            raise AssertionError("application spine typed without arrow elimination")
        args.append(sk.arg)
        sk = sk.fun
    args.reverse()
    return sk, args


def _rewrap(head: Skeleton, args: list[Skeleton]) -> Skeleton:
    for a in args:
        head = SArrowE(head.type.cod, head, a)
    return head


def _split(sk: Skeleton) -> list[Skeleton]:
    """Simple-typed pieces of a skeleton whose type may be a meet."""
    if isinstance(sk, SMeetI):
        return [sk.left] + _split(sk.right)
    if isinstance(sk, Use) and isinstance(sk.type, Meet):
        return [Use(c) for c in sk.type.parts]
    return [sk]


def _unsubstitute(sk: Skeleton, targets: set[Path]) -> tuple[Skeleton, list[Skeleton]]:
    """Replace the typings of the tracked copies by uses of the bound variable.

    Returns the rewritten skeleton and the simple pieces of every replaced
    typing, in left-to-right order.
    """
    pieces: list[Skeleton] = []

    def go(s: Skeleton, path: Path) -> Skeleton:
        if path in targets:
            pieces.extend(_split(s))
            return Use(s.type)
        if isinstance(s, SMeetI):
            return SMeetI(s.type, go(s.left, path), go(s.right, path))
        if isinstance(s, SArrowI):
            return SArrowI(s.type, go(s.body, path + ("body",)))
        if isinstance(s, SArrowE):
            return SArrowE(s.type, go(s.fun, path + ("fun",)), go(s.arg, path + ("arg",)))
        return s

    out = go(sk, ())
    return out, pieces


def infer_skeleton(t: Term) -> tuple[dict[str, Type], Skeleton]:
    """Context and skeleton typing ``t``; ``t`` must be beta-SN or this diverges."""
    frames: list[_Frame] = []
    while True:
        head, args = spine(t)
        if not (isinstance(head, Abs) and args):
            break
        x, a, b, rest = head.binder, head.body, args[0], tuple(args[1:])
        if x in free_vars(a):
            reduct, positions = substitute_tracking(a, x, b)
            frames.append(_Frame(x, a, b, rest, positions, None))
        else:
            reduct = a
            frames.append(_Frame(x, a, b, rest, None, infer_skeleton(b)))
        t = app(reduct, *rest)

    ctx, sk = _infer_base(t)

    for fr in reversed(frames):
        body_sk, rest_sks = _peel_spine(sk, len(fr.rest))
        if fr.positions is not None:
            body_sk, pieces = _unsubstitute(body_sk, set(fr.positions))
            if not pieces:
                raise AssertionError("copy of the argument left untyped")
            dom = meet_of(p.type for p in pieces)
            arg_sk = meet_intro(pieces)
        else:
            arg_ctx, arg_sk = fr.arg_typing
            dom = arg_sk.type
            ctx = context_meet(ctx, arg_ctx)
        fun = Arrow(dom, body_sk.type)
        redex = SArrowE(body_sk.type, SArrowI(fun, body_sk), arg_sk)
        sk = _rewrap(redex, rest_sks)
    return ctx, sk


def _infer_base(t: Term) -> tuple[dict[str, Type], Skeleton]:
    if isinstance(t, Abs):
        ctx, body = infer_skeleton(t.body)
        ctx = dict(ctx)
        dom = ctx.pop(t.binder, O)
        return ctx, SArrowI(Arrow(dom, body.type), body)
    head, args = spine(t)
    assert isinstance(head, Var)
    typed = [infer_skeleton(v) for v in args]
    htype: Type = O
    for _, s in reversed(typed):
        htype = Arrow(s.type, htype)
    ctx = context_meet(*(c for c, _ in typed), {head.name: htype})
    return ctx, _rewrap(Use(htype), [s for _, s in typed])


def infer(t: Term, fuel: int = DEFAULT_FUEL) -> TypedResult:
    """Type a term that is certified beta-SN within ``fuel`` graph nodes.

    Raises :class:`NotBetaSN` on a reachable beta cycle and
    :class:`FuelExhausted` when the budget runs out first.
    """
    verdict = decide_sn(t, BETA, fuel)
    if isinstance(verdict, NotSN):
        raise NotBetaSN(t, verdict)
    if isinstance(verdict, Exhausted):
        raise FuelExhausted(t, verdict)
    ctx, sk = infer_skeleton(t)
    return TypedResult(ctx, sk.type, realize(sk, ctx, t))


def induction_measure(
    t: Term,
    sigma: Mapping[str, Term],
    a: Type,
    rules: frozenset[Rule] = ALL,
    fuel: int = DEFAULT_FUEL,
) -> Measure:
    return Measure(
        type_size(a),
        eta(t, rules, fuel),
        size(t),
        eta_sigma(sigma, t, rules, fuel),
        size_sigma(sigma, t),
    )


def is_fair(sigma: Mapping[str, Term], fuel: int = DEFAULT_FUEL) -> Type | None:
    """The common inferred type of all images, or ``None``.

    Images are typed independently, each in its own inferred context.  No
    common refinement is searched for: differing inferred types mean ``None``.
    """
    if not sigma:
        return O
    found: Type | None = None
    for u in sigma.values():
        try:
            ty = infer(u, fuel).ty
        except (NotStronglyNormalizing, FuelExhausted):
            return None
        if found is None:
            found = ty
        elif components(found) != components(ty):
            return None
    return found
