"""JSON wire formats for tensors, matrices, certificates and hypergraphs.

Exact scalars serialize as fraction strings ("p" or "p/q"), so files in the
rational and eps domains round-trip bit-exactly. Entry lists are written in
sorted index order and dict keys in a fixed order, making every writer
deterministic byte for byte.
"""

from __future__ import annotations

import json

from . import scalars
from .matrix import Matrix
from .preorder import CertificateError, DegenerationCertificate, RestrictionCertificate
from .hypergraph import GroupingMap, Hypergraph
from .scalars import EPS, FLOAT, RATIONAL, EpsPoly, QC
from .tensor import Tensor


class FormatError(ValueError):
    """Malformed or inconsistent JSON payload."""


def _qc_fields(v):
    return {
        "re": scalars.format_fraction(v.re),
        "im": scalars.format_fraction(v.im),
    }


def _qc_from_fields(obj):
    try:
        return QC(scalars.parse_fraction(obj["re"]), scalars.parse_fraction(obj["im"]))
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational scalar {obj!r}") from exc


def scalar_to_json(domain, v):
    if domain == RATIONAL:
        return _qc_fields(v)
    if domain == EPS:
        return {
            "coeffs": {
                str(d): _qc_fields(c) for d, c in sorted(v.coeffs.items())
            }
        }
    if domain == FLOAT:
        return {"re": v.real, "im": v.imag}
    raise FormatError(f"unknown domain {domain!r}")


def scalar_from_json(domain, obj):
    if domain == RATIONAL:
        return _qc_from_fields(obj)
    if domain == EPS:
        coeffs = obj.get("coeffs")
        if not isinstance(coeffs, dict):
            raise FormatError(f"eps scalar needs a coeffs map, got {obj!r}")
        try:
            return EpsPoly({int(d): _qc_from_fields(c) for d, c in coeffs.items()})
        except ValueError as exc:
            raise FormatError(f"bad eps scalar {obj!r}") from exc
    if domain == FLOAT:
        try:
            return complex(float(obj["re"]), float(obj["im"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad float scalar {obj!r}") from exc
    raise FormatError(f"unknown domain {domain!r}")


def tensor_to_json(t):
    entries = []
    for idx, v in t.sorted_items():
        item = {"i": list(idx)}
        item.update(scalar_to_json(t.domain, v))
        entries.append(item)
    return {
        "order": t.order,
        "dims": list(t.dims),
        "domain": t.domain,
        "entries": entries,
    }


def tensor_from_json(obj):
    try:
        dims = tuple(int(d) for d in obj["dims"])
        domain = obj["domain"]
        raw = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"tensor object missing fields: {exc}") from exc
    if domain not in scalars.DOMAINS:
        raise FormatError(f"unknown domain {domain!r}")
    if "order" in obj and int(obj["order"]) != len(dims):
        raise FormatError("order field disagrees with dims length")
    entries = {}
    for item in raw:
        idx = tuple(int(i) for i in item["i"])
        entries[idx] = scalar_from_json(domain, item)
    try:
        return Tensor(dims, entries, domain)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from exc


def matrix_to_json(m):
    entries = []
    for (i, j), v in sorted(m.entries.items()):
        item = {"i": [i, j]}
        item.update(scalar_to_json(m.domain, v))
        entries.append(item)
    return {"rows": m.rows, "cols": m.cols, "domain": m.domain, "entries": entries}


def matrix_from_json(obj):
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        domain = obj["domain"]
        raw = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"matrix object missing fields: {exc}") from exc
    entries = {}
    for item in raw:
        i, j = (int(x) for x in item["i"])
        entries[(i, j)] = scalar_from_json(domain, item)
    try:
        return Matrix(rows, cols, entries, domain)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from exc


def certificate_to_json(cert):
    if isinstance(cert, RestrictionCertificate):
        return {"kind": "restriction", "maps": [matrix_to_json(m) for m in cert.maps]}
    if isinstance(cert, DegenerationCertificate):
        return {
            "kind": "degeneration",
            "maps": [matrix_to_json(m) for m in cert.maps],
            "d": cert.d,
            "e": cert.e,
        }
    raise FormatError(f"not a certificate: {cert!r}")


def certificate_from_json(obj):
    try:
        kind = obj["kind"]
        maps = tuple(matrix_from_json(m) for m in obj["maps"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"certificate object missing fields: {exc}") from exc
    try:
        if kind == "restriction":
            return RestrictionCertificate(maps)
        if kind == "degeneration":
            return DegenerationCertificate(maps, int(obj.get("d", 0)), int(obj.get("e", 0)))
    except CertificateError as exc:
        raise FormatError(str(exc)) from exc
    raise FormatError(f"unknown certificate kind {kind!r}")


def hypergraph_to_json(h):
    return {"vertices": h.n_vertices, "edges": [list(e) for e in h.edges]}


def hypergraph_from_json(obj):
    try:
        return Hypergraph(int(obj["vertices"]), [tuple(e) for e in obj["edges"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad hypergraph object: {exc}") from exc


def grouping_map_to_json(gm):
    return {"map": list(gm.mapping)}


def grouping_map_from_json(obj):
    try:
        mapping = tuple(int(v) for v in obj["map"])
        return GroupingMap(mapping, max(mapping) + 1)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad grouping map object: {exc}") from exc


def vector_to_json(vec):
    return [_qc_fields(v) for v in vec]


def vector_from_json(raw):
    return [_qc_from_fields(x) for x in raw]


def decomposition_to_json(terms):
    """Terms are lists of k rational vectors (one per factor)."""
    return [[vector_to_json(vec) for vec in term] for term in terms]


def decomposition_from_json(raw):
    return [[vector_from_json(vec) for vec in term] for term in raw]


def dumps_pretty(obj):
    return json.dumps(obj, indent=2) + "\n"


def dumps_compact(obj):
    return json.dumps(obj, separators=(",", ":")) + "\n"


def load_path(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def dump_path(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_pretty(obj))
