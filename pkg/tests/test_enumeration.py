from functools import lru_cache

import pytest

from lamsn.enumeration import EnumSpec, binder_names, enumerate_terms
from lamsn.terms import Var, alpha_key, free_vars, parse_term as P, size


@lru_cache(maxsize=None)
def count(n, bound, free):
    """Terms of size n with `bound` binders in scope and `free` free names."""
    if n == 1:
        return bound + free
    total = count(n - 1, bound + 1, free)
    for i in range(1, n - 1):
        total += count(i, bound, free) * count(n - 1 - i, bound, free)
    return total


def test_spec_examples():
    assert list(enumerate_terms(EnumSpec(1, ("x",)))) == [Var("x")]
    assert list(enumerate_terms(EnumSpec(2, ("x",), closed_only=True))) == [P(r"\x.x")]
    assert sum(1 for _ in enumerate_terms(EnumSpec(3, ("x",)))) == sum(count(n, 0, 1) for n in range(1, 4))


@pytest.mark.parametrize("pool", [(), ("x",), ("x", "y")])
@pytest.mark.parametrize("n", range(1, 6))
def test_counts_match_grammar_oracle(pool, n):
    spec = EnumSpec(n, pool, closed_only=not pool)
    terms = list(enumerate_terms(spec))
    assert len(terms) == sum(count(k, 0, len(pool)) for k in range(1, n + 1))
    assert len({alpha_key(t) for t in terms}) == len(terms)


def test_known_counts():
    assert sum(1 for _ in enumerate_terms(EnumSpec(9, closed_only=True))) == 2622
    assert sum(1 for _ in enumerate_terms(EnumSpec(7))) == 1711


def test_order_and_pool():
    terms = list(enumerate_terms(EnumSpec(6)))
    sizes = [size(t) for t in terms]
    assert sizes == sorted(sizes)
    assert all(free_vars(t) <= {"x", "y"} for t in terms)
    assert terms == list(enumerate_terms(EnumSpec(6)))


def test_binders_skip_pool():
    assert binder_names(("x", "y"), 3) == ("z", "u", "v")
    assert len(set(binder_names((), 20))) == 20


def test_bad_spec():
    with pytest.raises(ValueError):
        EnumSpec(0)
