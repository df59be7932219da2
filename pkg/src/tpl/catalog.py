"""Persistent store of named tensors, decompositions and certificates.

A catalog is a directory of JSON entry files plus a manifest listing the
entry ids. Every stored decomposition and degeneration certificate is
re-verified exactly on load and on put; corrupted data fails loudly.
Literature-sourced values live in entry metadata as provenance strings and
are never used as bounds without a verifying witness.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from . import jsonio, scalars
from .preorder import verify_degeneration
from .scalars import RATIONAL
from .tensor import Tensor, add

ENV_CATALOG_DIR = "TPL_CATALOG"
_PACKAGED_CATALOG = Path(__file__).parent / "data" / "catalog"


class CatalogError(ValueError):
    """Unknown id, malformed entry, or verification failure."""


@dataclass(frozen=True)
class Degeneration:
    """Source tensor plus an eps certificate degenerating it to the entry tensor."""

    source: Tensor
    cert: object


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    tensor: Tensor
    decomposition: list | None = None
    degeneration: Degeneration | None = None
    metadata: dict = field(default_factory=dict)


def term_tensor(dims, term):
    """Simple tensor from one decomposition term (one vector per factor)."""
    if len(term) != len(dims):
        raise CatalogError(f"term has {len(term)} factors for order {len(dims)}")
    entries = {}

    def rec(j, idx, val):
        if j == len(dims):
            if val:
                prev = entries.get(idx)
                entries[idx] = val if prev is None else prev + val
            return
        vec = term[j]
        if len(vec) != dims[j]:
            raise CatalogError(
                f"term factor {j} has length {len(vec)}, dimension is {dims[j]}"
            )
        for i, c in enumerate(vec):
            if c:
                rec(j + 1, idx + (i,), val * c)

    rec(0, (), scalars.QC_ONE)
    return Tensor(dims, entries, RATIONAL)


def decomposition_tensor(dims, terms):
    """Exact sum of the simple tensors of a decomposition."""
    acc = Tensor(dims, {}, RATIONAL)
    for term in terms:
        acc = add(acc, term_tensor(dims, term))
    return acc


def verify_entry(entry):
    """Exact verification of everything the entry claims; raises on failure."""
    if entry.decomposition is not None:
        total = decomposition_tensor(entry.tensor.dims, entry.decomposition)
        if total != entry.tensor:
            raise CatalogError(
                f"entry {entry.id!r}: decomposition does not sum to the stored tensor"
            )
    if entry.degeneration is not None:
        deg = entry.degeneration
        try:
            ok, d, e = verify_degeneration(deg.source, entry.tensor, deg.cert)
        except Exception as exc:
            raise CatalogError(f"entry {entry.id!r}: degeneration check failed: {exc}") from exc
        if not ok:
            raise CatalogError(
                f"entry {entry.id!r}: degeneration certificate does not reach the tensor"
            )
        if (d, e) != (deg.cert.d, deg.cert.e):
            raise CatalogError(
                f"entry {entry.id!r}: declared degrees (d={deg.cert.d}, e={deg.cert.e}) "
                f"differ from measured (d={d}, e={e})"
            )


def entry_to_json(entry):
    obj = {"id": entry.id, "tensor": jsonio.tensor_to_json(entry.tensor)}
    if entry.decomposition is not None:
        obj["decomposition"] = jsonio.decomposition_to_json(entry.decomposition)
    if entry.degeneration is not None:
        obj["degeneration"] = {
            "source": jsonio.tensor_to_json(entry.degeneration.source),
            "cert": jsonio.certificate_to_json(entry.degeneration.cert),
        }
    if entry.metadata:
        obj["metadata"] = entry.metadata
    return obj


def entry_from_json(obj):
    try:
        entry_id = obj["id"]
        tensor = jsonio.tensor_from_json(obj["tensor"])
    except (KeyError, jsonio.FormatError) as exc:
        raise CatalogError(f"malformed catalog entry: {exc}") from exc
    decomposition = None
    if "decomposition" in obj:
        try:
            decomposition = jsonio.decomposition_from_json(obj["decomposition"])
        except jsonio.FormatError as exc:
            raise CatalogError(f"entry {entry_id!r}: bad decomposition: {exc}") from exc
    degeneration = None
    if "degeneration" in obj:
        try:
            degeneration = Degeneration(
                source=jsonio.tensor_from_json(obj["degeneration"]["source"]),
                cert=jsonio.certificate_from_json(obj["degeneration"]["cert"]),
            )
        except (KeyError, jsonio.FormatError) as exc:
            raise CatalogError(f"entry {entry_id!r}: bad degeneration: {exc}") from exc
    return CatalogEntry(
        id=entry_id,
        tensor=tensor,
        decomposition=decomposition,
        degeneration=degeneration,
        metadata=obj.get("metadata", {}),
    )


class Catalog:
    """Directory-backed store; reads verify, puts verify before writing."""

    def __init__(self, path):
        self.path = Path(path)

    @classmethod
    def default(cls):
        """Catalog from $TPL_CATALOG, falling back to the packaged data."""
        env = os.environ.get(ENV_CATALOG_DIR)
        return cls(env) if env else cls(_PACKAGED_CATALOG)

    @classmethod
    def packaged(cls):
        return cls(_PACKAGED_CATALOG)

    def _manifest_path(self):
        return self.path / "manifest.json"

    def ids(self):
        manifest = self._manifest_path()
        if not manifest.exists():
            return []
        obj = jsonio.load_path(manifest)
        entries = obj.get("entries")
        if not isinstance(entries, list):
            raise CatalogError(f"{manifest}: manifest has no entry list")
        return list(entries)

    def get(self, entry_id):
        path = self.path / f"{entry_id}.json"
        if not path.exists():
            raise CatalogError(f"unknown catalog id {entry_id!r}")
        entry = entry_from_json(jsonio.load_path(path))
        if entry.id != entry_id:
            raise CatalogError(f"{path}: id field {entry.id!r} disagrees with filename")
        verify_entry(entry)
        return entry

    def put(self, entry):
        verify_entry(entry)
        self.path.mkdir(parents=True, exist_ok=True)
        jsonio.dump_path(self.path / f"{entry.id}.json", entry_to_json(entry))
        ids = self.ids()
        if entry.id not in ids:
            ids.append(entry.id)
        jsonio.dump_path(self._manifest_path(), {"entries": sorted(ids)})
        return entry

    def load_all(self):
        """Read and verify every entry; fails loudly on the first mismatch."""
        return [self.get(entry_id) for entry_id in self.ids()]
