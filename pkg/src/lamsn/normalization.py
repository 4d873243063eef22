"""Reduction graphs, strong-normalization verdicts and the eta measures.

Graph nodes are alpha-classes.  ``fuel`` bounds the number of nodes created,
so every verdict is computed in bounded memory; when the bound is hit without
having seen a cycle the honest answer is :class:`Exhausted`.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .reduction import ALL, Rule, find_redexes, contract
from .terms import Term, alpha_key, nb_occurrences, print_term, size

__all__ = [
    "DEFAULT_FUEL",
    "ReductionGraph",
    "SN",
    "NotSN",
    "Exhausted",
    "Verdict",
    "NotStronglyNormalizing",
    "FuelExhausted",
    "explore",
    "decide_sn",
    "eta",
    "size_sigma",
    "eta_sigma",
    "graph_to_dot",
    "graph_to_json",
]

DEFAULT_FUEL = 100_000
# Reducts larger than this end exploration like running out of fuel; keeps
# the recursive term operations well inside the interpreter's stack.
MAX_TERM_SIZE = 400


@dataclass
class ReductionGraph:
    terms: list[Term]
    keys: list[str]
    edges: list[tuple[int, Rule, int]]
    complete: bool
    root: int = 0
    expanded: int = 0

    @property
    def n_nodes(self) -> int:
        return len(self.terms)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.edges:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        arr = np.array([(s, d) for s, _, d in self.edges], dtype=np.int64)
        return arr[:, 0].copy(), arr[:, 1].copy()

    def heights(self) -> np.ndarray:
        src, dst = self.edge_arrays()
        return _kernels.heights(self.n_nodes, src, dst)

    def successors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.terms]
        for s, _, d in self.edges:
            out[s].append(d)
        return out


@dataclass(frozen=True)
class SN:
    eta: int
    graph: ReductionGraph = field(repr=False, compare=False)

    def __str__(self) -> str:
        return f"SN(eta={self.eta})"


@dataclass(frozen=True)
class NotSN:
    cycle_witness: tuple[Term, ...]
    cycle_start: int
    graph: ReductionGraph | None = field(default=None, repr=False, compare=False)

    def __str__(self) -> str:
        path = " -> ".join(print_term(t) for t in self.cycle_witness)
        return f"NotSN(cycle: {path})"


@dataclass(frozen=True)
class Exhausted:
    explored: int

    def __str__(self) -> str:
        return f"Exhausted(explored={self.explored})"


Verdict = SN | NotSN | Exhausted


class NotStronglyNormalizing(Exception):
    def __init__(self, term: Term, verdict: NotSN):
        super().__init__(f"{print_term(term)} is not strongly normalizing: {verdict}")
        self.term = term
        self.verdict = verdict


class FuelExhausted(Exception):
    def __init__(self, term: Term, verdict: Exhausted):
        super().__init__(f"fuel exhausted on {print_term(term)} after {verdict.explored} nodes")
        self.term = term
        self.verdict = verdict


class _Explorer:
    """Breadth-first closure of the one-step relation, resumable in chunks."""

    def __init__(self, t: Term, rules: Iterable[Rule], fuel: int, max_term_size: int = MAX_TERM_SIZE):
        if fuel < 1:
            raise ValueError("fuel must be >= 1")
        self.rules = frozenset(rules)
        self.fuel = fuel
        self.max_term_size = max_term_size
        k = alpha_key(t)
        self.terms = [t]
        self.keys = [k]
        self.index = {k: 0}
        self.edges: list[tuple[int, Rule, int]] = []
        self.queue = deque([0])
        self.expanded = 0
        self.out_of_fuel = False

    def run(self, node_limit: int) -> None:
        """Expand nodes until the queue empties or ``node_limit`` nodes exist."""
        terms, keys, index, edges, queue = self.terms, self.keys, self.index, self.edges, self.queue
        while queue and len(terms) < node_limit:
            v = queue.popleft()
            t = terms[v]
            seen: set[tuple[Rule, int]] = set()
            for r in find_redexes(t, self.rules):
                u = contract(t, r)
                k = alpha_key(u)
                w = index.get(k)
                if w is None:
                    if len(terms) >= self.fuel or size(u) > self.max_term_size:
                        self.out_of_fuel = True
                        queue.appendleft(v)
                        # the node goes back on the queue; drop its partial edges
                        del edges[len(edges) - len(seen):]
                        return
                    w = len(terms)
                    index[k] = w
                    terms.append(u)
                    keys.append(k)
                    queue.append(w)
                if (r.rule, w) not in seen:
                    seen.add((r.rule, w))
                    edges.append((v, r.rule, w))
            self.expanded += 1

    @property
    def complete(self) -> bool:
        return not self.queue

    def graph(self) -> ReductionGraph:
        return ReductionGraph(
            list(self.terms), list(self.keys), list(self.edges), self.complete, 0, self.expanded
        )


def explore(t: Term, rules: Iterable[Rule] = ALL, fuel: int = DEFAULT_FUEL) -> ReductionGraph:
    """Reachable reduction graph of ``t``, truncated at ``fuel`` nodes."""
    ex = _Explorer(t, rules, fuel)
    ex.run(fuel + 1)
    return ex.graph()


def _cycle_witness(g: ReductionGraph, height: np.ndarray) -> NotSN:
    succ = g.successors()
    path = [g.root]
    pos = {g.root: 0}
    v = g.root
    while True:
        v = next(w for w in succ[v] if height[w] < 0)
        if v in pos:
            return NotSN(tuple(g.terms[i] for i in path + [v]), pos[v], g)
        pos[v] = len(path)
        path.append(v)


def decide_sn(t: Term, rules: Iterable[Rule] = ALL, fuel: int = DEFAULT_FUEL) -> Verdict:
    """SN with eta, NotSN with a root-to-cycle path, or Exhausted.

    The partial graph is checked for cycles each time its node count doubles,
    so looping terms are caught long before the fuel runs out.
    """
    ex = _Explorer(t, rules, fuel)
    checkpoint = 64
    while True:
        ex.run(min(checkpoint, fuel + 1))
        g = ex.graph()
        h = g.heights()
        if h[0] < 0:
            return _cycle_witness(g, h)
        if ex.complete:
            return SN(int(h[0]), g)
        if ex.out_of_fuel:
            return Exhausted(len(ex.terms))
        checkpoint *= 2


def certify(t: Term, rules: Iterable[Rule] = ALL, fuel: int = DEFAULT_FUEL) -> SN:
    v = decide_sn(t, rules, fuel)
    if isinstance(v, NotSN):
        raise NotStronglyNormalizing(t, v)
    if isinstance(v, Exhausted):
        raise FuelExhausted(t, v)
    return v


def eta(t: Term, rules: Iterable[Rule] = ALL, fuel: int = DEFAULT_FUEL) -> int:
    """Length of the longest reduction from ``t``."""
    return certify(t, rules, fuel).eta


def size_sigma(sigma: Mapping[str, Term], t: Term) -> int:
    return sum(nb_occurrences(t, x) * size(u) for x, u in sigma.items())


def eta_sigma(
    sigma: Mapping[str, Term], t: Term, rules: Iterable[Rule] = ALL, fuel: int = DEFAULT_FUEL
) -> int:
    total = 0
    for x, u in sigma.items():
        e = eta(u, rules, fuel)
        total += nb_occurrences(t, x) * e
    return total


def graph_to_json(g: ReductionGraph) -> dict:
    return {
        "nodes": [{"id": i, "term": print_term(t)} for i, t in enumerate(g.terms)],
        "edges": [{"from": s, "rule": str(r), "to": d} for s, r, d in g.edges],
        "root": g.root,
        "complete": g.complete,
    }


def graph_to_dot(g: ReductionGraph) -> str:
    lines = ["digraph reductions {", "  node [shape=box, fontname=monospace];"]
    for i, t in enumerate(g.terms):
        label = json.dumps(print_term(t))
        extra = ", penwidth=2" if i == g.root else ""
        lines.append(f"  n{i} [label={label}{extra}];")
    for s, r, d in g.edges:
        lines.append(f'  n{s} -> n{d} [label="{r}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
