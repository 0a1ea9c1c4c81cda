"""Variable elimination over pairwise factor graphs.

Two semirings are supported: sum-product (homomorphism counting, weighted
densities) and max-plus (exact max-cut).  Both walk the same greedy
min-degree elimination order, so the cost is exponential only in the width
of that order, not in the number of variables.
"""

from __future__ import annotations

import string
from collections.abc import Iterable, Sequence

import numpy as np

_LETTERS = string.ascii_letters


def min_degree_order(
    variables: Iterable[int], scopes: Iterable[Sequence[int]], keep: Iterable[int] = ()
) -> tuple[list[int], int]:
    """Greedy min-degree order for the non-kept variables, plus its width.

    Width is the largest factor scope created along the way (kept variables
    included), i.e. the exponent of the domain size in the memory cost.
    """
    keep = set(keep)
    nbrs: dict[int, set[int]] = {v: set() for v in variables}
    for scope in scopes:
        for u in scope:
            nbrs[u].update(w for w in scope if w != u)
    todo = [v for v in nbrs if v not in keep]
    order: list[int] = []
    width = 0
    while todo:
        v = min(todo, key=lambda u: (len(nbrs[u]), u))
        todo.remove(v)
        order.append(v)
        nb = nbrs.pop(v)
        width = max(width, len(nb) + 1)
        for u in nb:
            nbrs[u].discard(v)
            nbrs[u].update(w for w in nb if w != u)
    return order, width


def _einsum(operands: list[tuple[tuple[int, ...], np.ndarray]], out: Sequence[int]) -> np.ndarray:
    letters: dict[int, str] = {}
    for scope, _ in operands:
        for v in scope:
            letters.setdefault(v, _LETTERS[len(letters)])
    for v in out:
        letters.setdefault(v, _LETTERS[len(letters)])
    spec = ",".join("".join(letters[v] for v in scope) for scope, _ in operands)
    spec += "->" + "".join(letters[v] for v in out)
    arrays = [a for _, a in operands]
    exact = any(a.dtype == object for a in arrays)
    result = np.einsum(spec, *arrays, optimize=not exact)
    return np.array(result, dtype=object) if exact else np.asarray(result)


def sum_product(
    variables: Sequence[int],
    factors: Iterable[tuple[tuple[int, ...], np.ndarray]],
    measure: np.ndarray,
    keep: Sequence[int] = (),
) -> np.ndarray:
    """Sum over all assignments of the non-kept variables of the factor product.

    Every variable ranges over ``range(len(measure))``; each summed-out
    variable contributes its ``measure`` weight.  Returns an array whose axes
    follow ``keep``.  Works for float arrays and for object arrays holding
    ints or Fractions (exact).
    """
    factors = [(tuple(s), a) for s, a in factors]
    keep = list(keep)
    kept = set(keep)
    for v in variables:
        if v not in kept:
            factors.append(((v,), measure))
    order, _ = min_degree_order(variables, [s for s, _ in factors], keep)
    for v in order:
        touching = [f for f in factors if v in f[0]]
        factors = [f for f in factors if v not in f[0]]
        scope: list[int] = []
        for s, _ in touching:
            scope.extend(u for u in s if u != v and u not in scope)
        factors.append((tuple(scope), _einsum(touching, scope)))
    ones = np.ones(len(measure), dtype=measure.dtype)
    if measure.dtype == object:
        ones[:] = 1
    for v in keep:
        factors.append(((v,), ones))
    if not factors:
        return np.array(1, dtype=measure.dtype)
    return _einsum(factors, keep)


def max_plus(
    variables: Sequence[int],
    factors: Iterable[tuple[tuple[int, ...], np.ndarray]],
    domain: int,
) -> int:
    """Maximum over all assignments of the sum of factor values."""
    factors = [(tuple(s), np.asarray(a)) for s, a in factors]
    order, _ = min_degree_order(variables, [s for s, _ in factors])
    total = 0
    for v in order:
        touching = [f for f in factors if v in f[0]]
        factors = [f for f in factors if v not in f[0]]
        if not touching:
            continue
        scope = [v]
        for s, _ in touching:
            scope.extend(u for u in s if u not in scope)
        acc = np.zeros((domain,) * len(scope), dtype=np.int64)
        for s, a in touching:
            perm = sorted(range(len(s)), key=lambda i: scope.index(s[i]))
            a = np.transpose(a, perm)
            shape = [domain if u in s else 1 for u in scope]
            acc = acc + a.reshape(shape)
        reduced = acc.max(axis=0)
        if len(scope) == 1:
            total += int(reduced)
        else:
            factors.append((tuple(scope[1:]), reduced))
    return total
