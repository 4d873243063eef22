"""Exhaustive enumeration of terms up to a size bound, one per alpha-class."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .terms import Abs, App, Term, Var

__all__ = ["EnumSpec", "binder_names", "enumerate_terms", "terms_of_size"]

_BASE_BINDERS = ("x", "y", "z", "u", "v", "w")


@dataclass(frozen=True)
class EnumSpec:
    max_size: int
    free_pool: tuple[str, ...] = field(default=("x", "y"))
    closed_only: bool = False

    def __post_init__(self):
        if self.max_size < 1:
            raise ValueError("max_size must be >= 1")
        object.__setattr__(self, "free_pool", tuple(self.free_pool))

    @property
    def pool(self) -> tuple[str, ...]:
        return () if self.closed_only else self.free_pool


def binder_names(pool: tuple[str, ...], count: int) -> tuple[str, ...]:
    """Canonical binder names by nesting depth, skipping the free pool."""
    out: list[str] = []
    i = 0
    while len(out) < count:
        base = _BASE_BINDERS[i % len(_BASE_BINDERS)]
        name = base if i < len(_BASE_BINDERS) else f"{base}{i // len(_BASE_BINDERS)}"
        if name not in pool:
            out.append(name)
        i += 1
    return tuple(out)


@lru_cache(maxsize=None)
def _terms(n: int, depth: int, pool: tuple[str, ...], names: tuple[str, ...]) -> tuple[Term, ...]:
    if n == 1:
        bound = [Var(names[d]) for d in reversed(range(depth))]
        return tuple(bound + [Var(p) for p in pool])
    out: list[Term] = []
    if depth < len(names):
        out.extend(Abs(names[depth], b) for b in _terms(n - 1, depth + 1, pool, names))
    for i in range(1, n - 1):
        funs = _terms(i, depth, pool, names)
        if not funs:
            continue
        args = _terms(n - 1 - i, depth, pool, names)
        out.extend(App(f, a) for f in funs for a in args)
    return tuple(out)


def terms_of_size(n: int, spec: EnumSpec) -> tuple[Term, ...]:
    names = binder_names(spec.pool, spec.max_size)
    return _terms(n, 0, spec.pool, names)


def enumerate_terms(spec: EnumSpec) -> Iterator[Term]:
    """Every term of size <= max_size, smaller sizes first, deterministic order."""
    for n in range(1, spec.max_size + 1):
        yield from terms_of_size(n, spec)
