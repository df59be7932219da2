"""Constructors for the standard named tensors.

All constructors return rational-domain tensors with entries equal to 1
unless stated otherwise. ``unit`` is an alias for ``ghz``: the unit tensor
of size r on k factors is the r-level GHZ state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .scalars import QC_ONE, RATIONAL
from .tensor import Tensor

NAMES = ("GHZ", "W", "EPR", "MaMu", "CW", "Unit")


def ghz(r, k=3):
    """r-level GHZ state on k factors: entries 1 at (i, i, ..., i)."""
    if r < 1 or k < 1:
        raise ValueError("ghz needs r >= 1 and k >= 1")
    return Tensor((r,) * k, {(i,) * k: QC_ONE for i in range(r)}, RATIONAL)


def unit(r, k=3):
    return ghz(r, k)


def w_state():
    """Order-3 W state on qubit dimensions: entries at 001, 010, 100."""
    return Tensor(
        (2, 2, 2),
        {(0, 0, 1): QC_ONE, (0, 1, 0): QC_ONE, (1, 0, 0): QC_ONE},
        RATIONAL,
    )


def epr(d):
    """d-level EPR pair: the d-by-d identity matrix as a 2-tensor."""
    return ghz(d, 2)


def mamu(d):
    """d-by-d matrix multiplication tensor, dims (d^2, d^2, d^2).

    Entry 1 at ((i1,i2), (i2,i3), (i3,i1)) with each pair packed row-major.
    """
    if d < 1:
        raise ValueError("mamu needs d >= 1")
    entries = {}
    for i1 in range(d):
        for i2 in range(d):
            for i3 in range(d):
                entries[(i1 * d + i2, i2 * d + i3, i3 * d + i1)] = QC_ONE
    return Tensor((d * d,) * 3, entries, RATIONAL)


def cw(q):
    """q-level EPR pairs embedded in a W pattern: dims (q+1)^3, 3q entries."""
    if q < 1:
        raise ValueError("cw needs q >= 1")
    entries = {}
    for i in range(1, q + 1):
        entries[(i, i, 0)] = QC_ONE
        entries[(0, i, i)] = QC_ONE
        entries[(i, 0, i)] = QC_ONE
    return Tensor((q + 1,) * 3, entries, RATIONAL)


def simple(k=3):
    """Order-k simple (product) tensor of dimension 1 per factor."""
    return ghz(1, k)


@dataclass(frozen=True)
class NamedTensorSpec:
    """Name plus parameters selecting one of the named tensors."""

    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in NAMES:
            raise ValueError(f"unknown tensor name {self.name!r}; expected one of {NAMES}")


def make_named(spec):
    """Build the tensor a NamedTensorSpec describes."""
    p = spec.params
    if spec.name == "GHZ":
        return ghz(int(p["r"]), int(p.get("k", 3)))
    if spec.name == "Unit":
        return unit(int(p["r"]), int(p.get("k", 3)))
    if spec.name == "W":
        return w_state()
    if spec.name == "EPR":
        return epr(int(p["d"]))
    if spec.name == "MaMu":
        return mamu(int(p["d"]))
    if spec.name == "CW":
        return cw(int(p["q"]))
    raise ValueError(f"unknown tensor name {spec.name!r}")
