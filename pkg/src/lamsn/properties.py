"""Exhaustive property runs, one per published claim.

Every run walks an enumerated corpus, decides each instance with bounded
fuel and sorts it into tested / skipped (fuel or search budget ran out) /
vacuous (hypothesis false).  A counterexample records every term, verdict,
graph and derivation involved.
"""

from __future__ import annotations

import logging
import time
from functools import partial
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

from .enumeration import EnumSpec, enumerate_terms
from .inference import NotBetaSN, infer, induction_measure
from .normalization import (
    DEFAULT_FUEL,
    Exhausted,
    FuelExhausted,
    NotSN,
    SN,
    decide_sn,
    graph_to_json,
)
from .reduction import ALL, BETA, Rule, decompose, find_redexes, contract, head_parts
from .terms import Abs, Term, Var, all_names, alpha_key, app, free_vars, fresh_name, print_term, spine, substitute
from .typesys import check_derivation, derivation_nodes, derivation_to_json, find_derivation, is_normal, is_restricted

__all__ = ["PropertyReport", "PROPERTIES", "run_property", "UnknownProperty"]

log = logging.getLogger(__name__)


class UnknownProperty(KeyError):
    pass


@dataclass
class PropertyReport:
    property: str
    spec: dict
    tested: int = 0
    skipped: int = 0
    vacuous: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_json(self, timing: bool = True) -> dict:
        out = asdict(self)
        if not timing:
            out.pop("seconds")
        return out


class _Oracle:
    """Memoized SN verdicts keyed on alpha-class and rule set."""

    def __init__(self, fuel: int):
        self.fuel = fuel
        self.cache: dict[tuple[str, frozenset], SN | NotSN | Exhausted] = {}

    def verdict(self, t: Term, rules: frozenset[Rule] = ALL):
        k = (alpha_key(t), rules)
        v = self.cache.get(k)
        if v is None:
            v = decide_sn(t, rules, self.fuel)
            self.cache[k] = v
        return v


def _evidence(t: Term, rules: frozenset[Rule], fuel: int) -> dict:
    """Full verdict of ``t`` including its (possibly partial) graph."""
    v = decide_sn(t, rules, fuel)
    out = {"term": print_term(t), "rules": sorted(str(r) for r in rules), "verdict": str(v)}
    graph = getattr(v, "graph", None)
    if graph is not None:
        out["graph"] = graph_to_json(graph)
    return out


def _typing_evidence(t: Term, fuel: int) -> dict:
    try:
        res = infer(t, fuel)
    except (NotBetaSN, FuelExhausted) as exc:
        return {"term": print_term(t), "infer": str(exc)}
    return {"term": print_term(t), "derivation": derivation_to_json(res.deriv)}


def _spec_json(spec: EnumSpec, fuel: int, **extra) -> dict:
    return {
        "max_size": spec.max_size,
        "pool": list(spec.free_pool),
        "closed_only": spec.closed_only,
        "fuel": fuel,
        **extra,
    }


def _preservation(spec: EnumSpec, fuel: int, rep: PropertyReport, **_) -> None:
    for t in enumerate_terms(spec):
        vb = decide_sn(t, BETA, fuel)
        if isinstance(vb, Exhausted):
            rep.skipped += 1
            continue
        if isinstance(vb, NotSN):
            rep.vacuous += 1
            continue
        va = decide_sn(t, ALL, fuel)
        if isinstance(va, Exhausted):
            rep.skipped += 1
            continue
        rep.tested += 1
        if isinstance(va, NotSN):
            rep.counterexamples.append(
                {"term": print_term(t), "beta": _evidence(t, BETA, fuel), "all": _evidence(t, ALL, fuel)}
            )


def _derivation_problems(t: Term, res) -> list[str]:
    problems = []
    d = res.deriv
    if d.term != t:
        problems.append("conclusion subject differs from the input")
    if dict(d.ctx) != res.ctx or d.type != res.ty:
        problems.append("conclusion judgment differs from the reported typing")
    if not check_derivation(d):
        problems.append("check_derivation rejected the derivation")
    if not is_normal(d):
        problems.append("derivation is not normal")
    if not all(is_restricted(n.type) for n in derivation_nodes(d)):
        problems.append("unrestricted type in derivation")
    return problems


def _typable_iff_beta_sn(spec: EnumSpec, fuel: int, rep: PropertyReport, **_) -> None:
    typed = 0
    for t in enumerate_terms(spec):
        vb = decide_sn(t, BETA, fuel)
        if isinstance(vb, Exhausted):
            rep.skipped += 1
            continue
        rep.tested += 1
        try:
            res = infer(t, fuel)
        except NotBetaSN:
            if isinstance(vb, SN):
                rep.counterexamples.append(
                    {"term": print_term(t), "problem": "infer rejected a beta-SN term", "beta": _evidence(t, BETA, fuel)}
                )
            continue
        if isinstance(vb, NotSN):
            rep.counterexamples.append(
                {"term": print_term(t), "problem": "infer typed a non-SN term", "derivation": derivation_to_json(res.deriv)}
            )
            continue
        typed += 1
        problems = _derivation_problems(t, res)
        if problems:
            rep.counterexamples.append(
                {"term": print_term(t), "problem": "; ".join(problems), "derivation": derivation_to_json(res.deriv)}
            )
    rep.details["typed"] = typed


def _typable_implies_sn(spec: EnumSpec, fuel: int, rep: PropertyReport, **_) -> None:
    for t in enumerate_terms(spec):
        try:
            res = infer(t, fuel)
        except NotBetaSN:
            rep.vacuous += 1
            continue
        except FuelExhausted:
            rep.skipped += 1
            continue
        va = decide_sn(t, ALL, fuel)
        if isinstance(va, Exhausted):
            rep.skipped += 1
            continue
        rep.tested += 1
        if isinstance(va, NotSN):
            rep.counterexamples.append(
                {"term": print_term(t), "derivation": derivation_to_json(res.deriv), "all": _evidence(t, ALL, fuel)}
            )


def _arg_spec(spec: EnumSpec, arg_size: int | None, arg_pool: Iterable[str] | None) -> EnumSpec:
    return EnumSpec(
        arg_size if arg_size is not None else max(1, spec.max_size - 2),
        tuple(arg_pool) if arg_pool is not None else spec.free_pool,
        False,
    )


def _substitution_theorem(
    spec: EnumSpec,
    fuel: int,
    rep: PropertyReport,
    arg_size=None,
    arg_pool=None,
    var=None,
    typed: bool = False,
    budget: int = 10_000,
    **_,
) -> None:
    """Pairs ``(t, a)`` with ``t``, ``a`` SN and ``a`` typable: is ``t[x:=a]`` SN?

    With ``typed`` the pair must also share a type: ``x`` gets the type
    inferred for it inside ``t`` and ``a`` has to check against that type.
    """
    x = var or (spec.free_pool[0] if spec.free_pool else "x")
    oracle = _Oracle(fuel)
    args = []
    for a in enumerate_terms(_arg_spec(spec, arg_size, arg_pool)):
        va = oracle.verdict(a)
        if not isinstance(va, SN):
            continue
        try:
            res = infer(a, fuel)
        except (NotBetaSN, FuelExhausted):
            continue
        args.append((a, res))
    rep.details["arguments"] = len(args)
    worst = None
    untyped = 0
    for t in enumerate_terms(spec):
        vt = oracle.verdict(t)
        if isinstance(vt, Exhausted):
            rep.skipped += len(args)
            continue
        if isinstance(vt, NotSN):
            rep.vacuous += len(args)
            continue
        x_type = None
        if typed and x in free_vars(t):
            try:
                x_type = infer(t, fuel).ctx[x]
            except FuelExhausted:
                rep.skipped += len(args)
                continue
        for a, res in args:
            ty = res.ty
            if x_type is not None:
                if find_derivation(res.ctx, a, x_type, budget) is None:
                    untyped += 1
                    rep.vacuous += 1
                    continue
                ty = x_type
            s = substitute(t, {x: a})
            vs = oracle.verdict(s)
            if isinstance(vs, Exhausted):
                rep.skipped += 1
                continue
            rep.tested += 1
            if isinstance(vs, NotSN):
                rep.counterexamples.append(
                    {
                        "term": print_term(t),
                        "substitution": {x: print_term(a)},
                        "result": print_term(s),
                        "t": _evidence(t, ALL, fuel),
                        "argument": _typing_evidence(a, fuel),
                        "substituted": _evidence(s, ALL, fuel),
                    }
                )
                continue
            m = induction_measure(t, {x: a}, ty, ALL, fuel)
            log.debug("measure %s for %s[%s:=%s]", tuple(m), print_term(t), x, print_term(a))
            if worst is None or m > worst:
                worst = m
    if typed:
        rep.details["type_mismatched_pairs"] = untyped
    rep.details["largest_measure"] = list(worst) if worst is not None else None


def _commute_pairs(spec, arg_size, arg_pool, var):
    x = var or (spec.free_pool[0] if spec.free_pool else "x")
    args = list(enumerate_terms(_arg_spec(spec, arg_size, arg_pool)))
    return x, args


def _subst_commute(spec: EnumSpec, fuel: int, rep: PropertyReport, arg_size=None, arg_pool=None, var=None, **_) -> None:
    x, args = _commute_pairs(spec, arg_size, arg_pool, var)
    for t in enumerate_terms(spec):
        for r in find_redexes(t, ALL):
            t1 = contract(t, r)
            for u in args:
                want = alpha_key(substitute(t1, {x: u}))
                s = substitute(t, {x: u})
                got = {alpha_key(contract(s, q)) for q in find_redexes(s, {r.rule})}
                rep.tested += 1
                if want not in got:
                    rep.counterexamples.append(
                        {
                            "term": print_term(t),
                            "redex": str(r),
                            "reduct": print_term(t1),
                            "substitution": {x: print_term(u)},
                            "substituted": print_term(s),
                            "expected": print_term(substitute(t1, {x: u})),
                            "reducts": sorted(print_term(contract(s, q)) for q in find_redexes(s, {r.rule})),
                        }
                    )


def _eta_monotone(spec: EnumSpec, fuel: int, rep: PropertyReport, arg_size=None, arg_pool=None, var=None, **_) -> None:
    x, args = _commute_pairs(spec, arg_size, arg_pool, var)
    oracle = _Oracle(fuel)
    for t in enumerate_terms(spec):
        for u in args:
            s = substitute(t, {x: u})
            vs = oracle.verdict(s)
            if isinstance(vs, Exhausted):
                rep.skipped += 1
                continue
            if isinstance(vs, NotSN):
                rep.vacuous += 1
                continue
            vt = oracle.verdict(t)
            if isinstance(vt, Exhausted):
                rep.skipped += 1
                continue
            rep.tested += 1
            if not isinstance(vt, SN) or vt.eta > vs.eta:
                rep.counterexamples.append(
                    {
                        "term": print_term(t),
                        "substitution": {x: print_term(u)},
                        "t": _evidence(t, ALL, fuel),
                        "substituted": _evidence(s, ALL, fuel),
                    }
                )


def _cs_sn(spec: EnumSpec, fuel: int, rep: PropertyReport, **_) -> None:
    oracle = _Oracle(fuel)
    for t in enumerate_terms(spec):
        if decompose(t) is None:
            continue
        hp = head_parts(t)
        hyps = [hp.head, *hp.args]
        hyps += [p for p in (hp.d, hp.c, hp.arg, hp.b) if p is not None]
        hyps += [hp.a[i] for i in sorted(hp.a)]
        verdicts = [oracle.verdict(h) for h in hyps]
        if any(isinstance(v, NotSN) for v in verdicts):
            rep.vacuous += 1
            continue
        if any(isinstance(v, Exhausted) for v in verdicts):
            rep.skipped += 1
            continue
        vt = oracle.verdict(t)
        if isinstance(vt, Exhausted):
            rep.skipped += 1
            continue
        rep.tested += 1
        if isinstance(vt, NotSN):
            rep.counterexamples.append(
                {
                    "term": print_term(t),
                    "hypotheses": [print_term(h) for h in hyps],
                    "all": _evidence(t, ALL, fuel),
                }
            )


def prepa2_instances(s: Term) -> list[tuple[Term, Term]]:
    """``(split, wrapped)`` pairs: ``s = (t u...)`` and ``((\\x.t) x u...)``.

    ``x`` ranges over a fresh name and every free variable of ``s``.
    """
    head, args = spine(s)
    fresh = fresh_name("x", all_names(s))
    names = [fresh] + sorted(free_vars(s))
    out = []
    for j in range(len(args) + 1):
        t = app(head, *args[:j])
        rest = args[j:]
        for x in names:
            out.append((s, app(Abs(x, t), Var(x), *rest)))
    return out


def _prepa2(spec: EnumSpec, fuel: int, rep: PropertyReport, **_) -> None:
    oracle = _Oracle(fuel)
    for s in enumerate_terms(spec):
        vs = oracle.verdict(s)
        if isinstance(vs, Exhausted):
            rep.skipped += 1
            continue
        if isinstance(vs, NotSN):
            rep.vacuous += 1
            continue
        try:
            infer(s, fuel)
        except (NotBetaSN, FuelExhausted):
            rep.skipped += 1
            continue
        for _, w in prepa2_instances(s):
            vw = oracle.verdict(w)
            if isinstance(vw, Exhausted):
                rep.skipped += 1
                continue
            rep.tested += 1
            if isinstance(vw, NotSN):
                rep.counterexamples.append(
                    {"term": print_term(s), "wrapped": print_term(w), "s": _evidence(s, ALL, fuel), "w": _evidence(w, ALL, fuel)}
                )


def _subject_reduction(spec: EnumSpec, fuel: int, rep: PropertyReport, budget: int = 10_000, **_) -> None:
    retried = 0
    for t in enumerate_terms(spec):
        try:
            res = infer(t, fuel)
        except NotBetaSN:
            rep.vacuous += 1
            continue
        except FuelExhausted:
            rep.skipped += 1
            continue
        for r in find_redexes(t, ALL):
            t1 = contract(t, r)
            d = find_derivation(res.ctx, t1, res.ty, budget)
            if d is None:
                retried += 1
                d = find_derivation(res.ctx, t1, res.ty, 10 * budget)
            if d is None:
                rep.skipped += 1
                rep.details.setdefault("not_found", []).append(
                    {"term": print_term(t), "redex": str(r), "reduct": print_term(t1)}
                )
                continue
            rep.tested += 1
            if not (check_derivation(d) and is_normal(d) and d.term == t1 and d.type == res.ty):
                rep.counterexamples.append(
                    {
                        "term": print_term(t),
                        "redex": str(r),
                        "reduct": print_term(t1),
                        "typing": derivation_to_json(res.deriv),
                        "found": derivation_to_json(d),
                    }
                )
    rep.details["retried_with_10x_budget"] = retried
    rep.details["budget"] = budget


PROPERTIES: dict[str, Callable[..., None]] = {
    "preservation": _preservation,
    "typable_iff_beta_sn": _typable_iff_beta_sn,
    "subject_reduction": _subject_reduction,
    "subst_commute": _subst_commute,
    "eta_monotone": _eta_monotone,
    "cs_sn": _cs_sn,
    "prepa2": _prepa2,
    "substitution_theorem": _substitution_theorem,
    "substitution_theorem_typed": partial(_substitution_theorem, typed=True),
    "typable_implies_sn": _typable_implies_sn,
}


def run_property(name: str, spec: EnumSpec, fuel: int = DEFAULT_FUEL, **options) -> PropertyReport:
    """Run one named property exhaustively over ``enumerate_terms(spec)``.

    Extra options: ``arg_size``/``arg_pool``/``var`` for the properties that
    substitute into the corpus, ``budget`` for ``subject_reduction``.
    """
    try:
        fn = PROPERTIES[name]
    except KeyError:
        raise UnknownProperty(name) from None
    options = {k: v for k, v in options.items() if v is not None}
    opts = {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(options.items())}
    rep = PropertyReport(name, _spec_json(spec, fuel, **opts))
    start = time.perf_counter()
    fn(spec, fuel, rep, **options)
    rep.seconds = round(time.perf_counter() - start, 3)
    log.info(
        "%s: tested=%d skipped=%d vacuous=%d counterexamples=%d (%.1fs)",
        name, rep.tested, rep.skipped, rep.vacuous, len(rep.counterexamples), rep.seconds,
    )
    return rep
