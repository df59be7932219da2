"""Shared test helpers and independent oracles.

The rank oracle enumerates minors, independent of the elimination code it
checks. The flatten oracle goes through dense numpy reshapes, independent
of the sparse index packing.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import numpy as np

from tpl.matrix import Matrix
from tpl.scalars import QC, RATIONAL
from tpl.tensor import Tensor


def rank_by_minors(m):
    """Largest k with a nonzero k x k minor; brute force, exact."""
    dense = [[m.get(i, j) for j in range(m.cols)] for i in range(m.rows)]
    upper = min(m.rows, m.cols)
    for k in range(upper, 0, -1):
        for rows in combinations(range(m.rows), k):
            for cols in combinations(range(m.cols), k):
                if _det([[dense[i][j] for j in cols] for i in rows]):
                    return k
    return 0


def _det(a):
    n = len(a)
    if n == 1:
        return a[0][0]
    acc = QC(0)
    for i in range(n):
        v = a[i][0]
        if not v:
            continue
        sub = [row[1:] for r, row in enumerate(a) if r != i]
        term = v * _det(sub)
        acc = acc + term if i % 2 == 0 else acc - term
    return acc


def flatten_dense(t, left):
    """Flattening via numpy moveaxis/reshape; float entries."""
    a = t.to_numpy()
    left = sorted(left)
    right = [p for p in range(t.order) if p not in left]
    a = np.transpose(a, left + right)
    rows = int(np.prod([t.dims[p] for p in left]))
    return a.reshape(rows, -1)


def random_rational_tensor(rng, dims, density=0.6, den=8):
    entries = {}
    for idx in product(*(range(d) for d in dims)):
        if rng.random() < density:
            v = QC(Fraction(rng.randint(-den, den), rng.choice([1, 2, 4, den])))
            if v:
                entries[idx] = v
    return Tensor(dims, entries, RATIONAL)


def random_rational_matrix(rng, rows, cols, den=8):
    entries = {}
    for i in range(rows):
        for j in range(cols):
            v = QC(Fraction(rng.randint(-den, den), rng.choice([1, 2, den])))
            if v:
                entries[(i, j)] = v
    return Matrix(rows, cols, entries, RATIONAL)


def random_invertible(rng, n, span=4):
    while True:
        m = random_rational_matrix(rng, n, n, den=span)
        dense = [[m.get(i, j) for j in range(n)] for i in range(n)]
        if _det(dense):
            return m
