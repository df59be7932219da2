import math
import random
from fractions import Fraction

import pytest

import util
from tpl.asymptotic import (
    Bound,
    BoundReport,
    StructureTooLarge,
    disjoint_rank_bounds,
    lattice_construction,
    lattice_obstruction,
    omega_bound,
    strassen_rank_bounds,
    unit_size,
)
from tpl.catalog import Catalog
from tpl.hypergraph import build_structure, make_family
from tpl.matrix import Matrix
from tpl.named import ghz, mamu, simple, w_state
from tpl.obstructions import KoszulSpec
from tpl.preorder import DegenerationCertificate, verify_restriction
from tpl.scalars import EPS, EpsPoly, QC
from tpl.tensor import Tensor, direct_sum_many


def w_border_cert():
    c, e = EpsPoly.const, EpsPoly.eps
    m = Matrix(2, 2, {(0, 0): c(1), (1, 0): e(1), (0, 1): c(-1)}, EPS)
    return DegenerationCertificate((m, m, m), d=1, e=2)


def test_unit_size():
    assert unit_size(ghz(4)) == 4
    assert unit_size(simple(3)) == 1
    padded = Tensor((3, 3, 3), dict(ghz(2).entries))
    assert unit_size(padded) == 2
    assert unit_size(w_state()) is None


def test_bound_report_orders_bounds():
    with pytest.raises(ValueError):
        BoundReport("x", lower=Bound(Fraction(3), "a"), upper=Bound(Fraction(2), "b"))


def test_disjoint_bounds_w():
    report = disjoint_rank_bounds(w_state(), Catalog.packaged())
    assert report.lower.value == Fraction(2)
    assert report.lower.ref["kind"] == "gauge"
    assert report.upper.value == Fraction(2)
    assert report.upper.ref == {
        "kind": "certificate",
        "id": "w-border2-degeneration",
        "r": 2,
    }


def test_disjoint_bounds_simple():
    report = disjoint_rank_bounds(simple(3), Catalog.packaged())
    assert report.lower.value == Fraction(1)
    assert report.upper.value == Fraction(1)


def test_disjoint_bounds_random_dense_has_koszul_lower():
    rng = random.Random(12)
    t = util.random_rational_tensor(rng, (3, 3, 3), density=1.0, den=16)
    report = disjoint_rank_bounds(t, Catalog.packaged(), trials=4)
    assert report.lower.value == Fraction(9, 2)
    assert report.lower.ref["kind"] == "koszul"
    assert report.upper is None


def test_strassen_bounds_ghz():
    report = strassen_rank_bounds(ghz(3), n_max=1, catalog=Catalog.packaged())
    assert report.lower.value == Fraction(3)
    assert report.upper.value == Fraction(3)


def test_strassen_lower_is_max_gauge():
    report = strassen_rank_bounds(mamu(2), n_max=1, catalog=Catalog.packaged())
    assert report.lower.value == Fraction(4)


def test_monotone_consistency_disjoint_vs_strassen():
    # never report a Strassen lower bound above a verified Disjoint upper bound
    for t in (w_state(), ghz(2), ghz(3), simple(3)):
        disjoint = disjoint_rank_bounds(t, Catalog.packaged())
        strassen = strassen_rank_bounds(t, n_max=1, catalog=Catalog.packaged())
        if disjoint.upper and strassen.lower:
            assert strassen.lower.as_float() <= disjoint.upper.as_float() + 1e-12


def test_reports_are_reproducible():
    a = disjoint_rank_bounds(w_state(), Catalog.packaged(), trials=8, seed=3)
    b = disjoint_rank_bounds(w_state(), Catalog.packaged(), trials=8, seed=3)
    assert a.to_json() == b.to_json()


def test_lattice_obstruction_ghz3_vs_dense():
    rng = random.Random(4)
    dense = util.random_rational_tensor(rng, (3, 3, 3), density=1.0, den=16)
    spec = KoszulSpec(3, 1)
    assert lattice_obstruction(ghz(3), dense, 1, spec) is True
    assert lattice_obstruction(dense, ghz(3), 1, spec) is False
    assert lattice_obstruction(ghz(3), ghz(3), 1, spec) is False


def test_lattice_obstruction_covering_power():
    rng = random.Random(4)
    dense = util.random_rational_tensor(rng, (3, 3, 3), density=1.0, den=16)
    spec = KoszulSpec(3, 1)
    assert lattice_obstruction(ghz(3), dense, 2, spec) is True


def test_lattice_obstruction_guard():
    spec = KoszulSpec(3, 1)
    with pytest.raises(StructureTooLarge):
        lattice_obstruction(ghz(3), ghz(3), 8, spec)


def test_lattice_construction_single_triangle():
    cert = lattice_construction(ghz(2), w_state(), w_border_cert(), "Triangular", 1)
    source = direct_sum_many([ghz(2)] * 3)
    assert verify_restriction(source, w_state(), cert)


def test_lattice_construction_two_face_patch():
    h = make_family("Triangular", 2)
    source_structure = build_structure(h, ghz(2))
    target_structure = build_structure(h, w_state())
    cert = lattice_construction(ghz(2), w_state(), w_border_cert(), "Triangular", 2)
    summands = cert.maps[0].cols // source_structure.dims[0]
    assert summands == 5
    source = direct_sum_many([source_structure] * 5)
    assert verify_restriction(source, target_structure, cert)


def test_lattice_construction_small_random_property():
    rng = random.Random(8)
    rounds = 0
    while rounds < 3:
        t = util.random_rational_tensor(rng, (2, 2, 2), density=0.6, den=2)
        if t.is_zero():
            continue
        maps = []
        for _ in range(3):
            entries = {}
            for i in range(2):
                for j in range(2):
                    coeffs = {}
                    for deg in (0, 1):
                        if rng.random() < 0.6:
                            v = QC(Fraction(rng.randint(-1, 1)))
                            if v:
                                coeffs[deg] = v
                    if coeffs:
                        entries[(i, j)] = EpsPoly(coeffs)
            maps.append(Matrix(2, 2, entries, EPS))
        from tpl.preorder import verify_degeneration

        cert = DegenerationCertificate(tuple(maps))
        try:
            from tpl.tensor import apply_product_map

            image = apply_product_map(maps, t.to_eps(), domain=EPS)
        except ValueError:
            continue
        if image.is_zero():
            continue
        degrees = set()
        for p in image.entries.values():
            degrees.update(p.coeffs)
        e = max(degrees) - min(degrees)
        if e > 2:
            continue
        d = min(degrees)
        target = Tensor(
            image.dims,
            {i: p.coefficient(d) for i, p in image.entries.items() if p.coefficient(d)},
        )
        out = lattice_construction(t, target, cert, "Triangular", 2)
        h = make_family("Triangular", 2)
        src_structure = build_structure(h, t)
        dst_structure = build_structure(h, target)
        reps = out.maps[0].cols // src_structure.dims[0]
        assert verify_restriction(
            direct_sum_many([src_structure] * reps), dst_structure, out
        )
        rounds += 1


def test_lattice_construction_guards_and_errors():
    bad = DegenerationCertificate(
        (Matrix.identity(2).to_eps(),) * 3
    )
    with pytest.raises(Exception):
        lattice_construction(ghz(2), w_state(), bad, "Triangular", 1)
    with pytest.raises(StructureTooLarge):
        lattice_construction(ghz(2), w_state(), w_border_cert(), "Triangular", 30)


def test_omega_bound_values():
    assert omega_bound(4, 1) == 2.0
    assert omega_bound(8, 1) == 3.0
    assert abs(omega_bound(7, 1) - math.log2(7)) < 1e-15
    assert omega_bound(6, 3) == 1.0
    with pytest.raises(ValueError):
        omega_bound(0, 1)
    with pytest.raises(ValueError):
        omega_bound(1, 2)
