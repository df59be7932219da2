"""Monotone functionals used as obstructions.

Gauge points (single-factor flattening ranks), the 2x2x2 hyperdeterminant,
Koszul flattenings on the third factor with the normalized ratio bound, and
point evaluation of the entropy-weighted spectral functional.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import scalars
from .matrix import Matrix, rank
from .scalars import EPS, RATIONAL, QC
from .tensor import Tensor, flatten


def gauge_points(t):
    """Flattening rank of each single factor against the rest."""
    return tuple(rank(flatten(t, {j})) for j in range(t.order))


def hyperdeterminant_222(t):
    """Cayley's degree-4 hyperdeterminant of a 2x2x2 tensor, exactly.

    Vanishes on the W orbit closure and is nonzero on GHZ; under factor maps
    it scales by the squared product of the determinants.
    """
    if t.dims != (2, 2, 2):
        raise ValueError(f"hyperdeterminant needs dims (2,2,2), got {t.dims}")
    if t.domain != RATIONAL:
        raise ValueError("hyperdeterminant needs the exact rational domain")

    def e(i, j, k):
        return t.entries.get((i, j, k), scalars.QC_ZERO)

    t000, t001, t010, t011 = e(0, 0, 0), e(0, 0, 1), e(0, 1, 0), e(0, 1, 1)
    t100, t101, t110, t111 = e(1, 0, 0), e(1, 0, 1), e(1, 1, 0), e(1, 1, 1)
    sq = (
        t000 * t000 * t111 * t111
        + t001 * t001 * t110 * t110
        + t010 * t010 * t101 * t101
        + t100 * t100 * t011 * t011
    )
    pairs = (
        t000 * t001 * t110 * t111
        + t000 * t010 * t101 * t111
        + t000 * t011 * t100 * t111
        + t001 * t010 * t101 * t110
        + t001 * t011 * t110 * t100
        + t010 * t011 * t101 * t100
    )
    quads = t000 * t011 * t101 * t110 + t001 * t010 * t100 * t111
    return sq - QC(2) * pairs + QC(4) * quads


@dataclass(frozen=True)
class KoszulSpec:
    """Koszul flattening parameters: third-factor dimension and wedge level p."""

    d3: int
    p: int

    def __post_init__(self):
        if self.d3 < 1:
            raise ValueError("d3 must be positive")
        if not (0 <= self.p <= self.d3 - 1):
            raise ValueError(f"need 0 <= p <= d3-1, got p={self.p}, d3={self.d3}")

    @property
    def out_rows(self):
        return math.comb(self.d3, self.p + 1)

    @property
    def out_cols(self):
        return math.comb(self.d3, self.p)


def _subset_index(n, p):
    subs = list(combinations(range(n), p))
    return subs, {s: i for i, s in enumerate(subs)}


def _wedge_insert(subset, c):
    """Index set and sign of e_subset ^ e_c, or None when c is repeated."""
    if c in subset:
        return None, 0
    bigger = sum(1 for s in subset if s > c)
    merged = tuple(sorted(subset + (c,)))
    sign = -1 if bigger % 2 else 1
    return merged, sign


def koszul_flatten(t, spec):
    """Apply the Koszul intertwiner on the third factor of an order-3 tensor.

    Result shape: (d1 * C(d3, p+1)) x (d2 * C(d3, p)), wedge basis ordered
    lexicographically by index set, signs from sorted insertion. Entries stay
    in the tensor's domain.
    """
    if t.order != 3:
        raise ValueError("koszul_flatten needs an order-3 tensor")
    d1, d2, d3 = t.dims
    if d3 != spec.d3:
        raise ValueError(f"third dimension {d3} does not match spec d3={spec.d3}")
    rows_subs, rows_of = _subset_index(d3, spec.p + 1)
    cols_subs, cols_of = _subset_index(d3, spec.p)
    n_rows, n_cols = len(rows_subs), len(cols_subs)
    entries = {}
    for (a, b, c), v in t.entries.items():
        for s in cols_subs:
            merged, sign = _wedge_insert(s, c)
            if merged is None:
                continue
            key = (a * n_rows + rows_of[merged], b * n_cols + cols_of[s])
            w = v if sign > 0 else -v
            acc = entries.get(key)
            acc = w if acc is None else acc + w
            if acc:
                entries[key] = acc
            else:
                entries.pop(key, None)
    return Matrix(d1 * n_rows, d2 * n_cols, entries, t.domain)


def wedge_power_matrix(g, p):
    """Exact p-th wedge power of a rational matrix: minors det(g[T, S])."""
    if g.domain != RATIONAL:
        raise ValueError("wedge power needs a rational matrix")
    rows_subs, _ = _subset_index(g.rows, p)
    cols_subs, _ = _subset_index(g.cols, p)
    entries = {}
    for i, trows in enumerate(rows_subs):
        for j, tcols in enumerate(cols_subs):
            d = _minor_det(g, trows, tcols)
            if d:
                entries[(i, j)] = d
    return Matrix(len(rows_subs), len(cols_subs), entries, RATIONAL)


def _minor_det(g, rows, cols):
    n = len(rows)
    if n == 0:
        return QC(1)
    if n == 1:
        return g.get(rows[0], cols[0])
    acc = scalars.QC_ZERO
    for i, r in enumerate(rows):
        v = g.get(r, cols[0])
        if not v:
            continue
        sub = _minor_det(g, rows[:i] + rows[i + 1 :], cols[1:])
        term = v * sub
        acc = acc + term if i % 2 == 0 else acc - term
    return acc


# Simple-tensor rank of the Koszul flattening, when a closed value is known.
KNOWN_SIMPLE_KOSZUL_RANK = {(3, 1): 2}


def max_simple_koszul_rank(spec, trials=64, seed=0):
    """Denominator of the ratio bound: max flattening rank of simple tensors.

    Samples ``trials`` random dense simple tensors with rational entries in
    [-1, 1] and takes the max together with the known closed value when one
    is available. A larger denominator only weakens the resulting lower
    bound, so maximizing is the safe direction.
    """
    rng = random.Random(seed)
    best = KNOWN_SIMPLE_KOSZUL_RANK.get((spec.d3, spec.p), 0)
    for _ in range(trials):
        vecs = [_random_vector(rng, spec.d3) for _ in range(3)]
        entries = {}
        for a, va in enumerate(vecs[0]):
            for b, vb in enumerate(vecs[1]):
                for c, vc in enumerate(vecs[2]):
                    v = va * vb * vc
                    if v:
                        entries[(a, b, c)] = v
        s = Tensor((spec.d3,) * 3, entries, RATIONAL)
        if s.is_zero():
            continue
        best = max(best, rank(koszul_flatten(s, spec)))
    return best


def _random_vector(rng, n, den=16):
    return [QC(Fraction(rng.randint(-den, den), den)) for _ in range(n)]


def flattening_ratio(t, spec, trials=64, seed=0):
    """Ratio lower bound: rank F(t) / max over simple tensors of rank F(s).

    The numerator is exact; the denominator combines sampling with the known
    closed value when available. Returned as an exact Fraction.
    """
    if t.order != 3:
        raise ValueError("flattening_ratio needs an order-3 tensor")
    num = rank(koszul_flatten(t, spec))
    den = max_simple_koszul_rank(spec, trials=trials, seed=seed)
    if den == 0:
        raise ArithmeticError("no nonzero simple sample; cannot normalize")
    return Fraction(num, den)


@dataclass(frozen=True)
class ThetaWeights:
    """Probability weights over the factor positions."""

    weights: tuple

    def __post_init__(self):
        w = tuple(self.weights)
        object.__setattr__(self, "weights", w)
        if any((x < 0) for x in w):
            raise ValueError("theta weights must be nonnegative")
        total = sum(w)
        if isinstance(total, Fraction):
            if total != 1:
                raise ValueError(f"theta weights sum to {total}, expected 1")
        elif abs(float(total) - 1.0) > 1e-12:
            raise ValueError(f"theta weights sum to {total}, expected 1")

    @classmethod
    def uniform(cls, k):
        return cls(tuple(Fraction(1, k) for _ in range(k)))


def flattening_entropy(t, j):
    """Base-2 Shannon entropy of the normalized squared singular values."""
    m = flatten(t, {j})
    sigma = np.linalg.svd(m.to_numpy(), compute_uv=False)
    sq = sigma**2
    total = sq.sum()
    if total == 0.0:
        raise ValueError("zero tensor has no flattening spectrum")
    probs = sq / total
    probs = probs[probs > 0]
    return float(-(probs * np.log2(probs)).sum())


def quantum_functional_point(t, theta):
    """Point evaluation 2^(sum_j theta_j H(t_j)) at the tensor itself.

    This is the inner expression of the entropy functional evaluated at
    t' = t, hence a lower bound on the supremum over degenerations.
    """
    if t.is_zero():
        raise ValueError("quantum functional of the zero tensor is undefined")
    if t.domain == EPS:
        raise ValueError("quantum functional needs a numeric or rational tensor")
    if not isinstance(theta, ThetaWeights):
        theta = ThetaWeights(tuple(theta))
    if len(theta.weights) != t.order:
        raise ValueError(f"{len(theta.weights)} weights for order-{t.order} tensor")
    exponent = sum(
        float(w) * flattening_entropy(t, j) for j, w in enumerate(theta.weights) if w
    )
    return float(2.0**exponent)
