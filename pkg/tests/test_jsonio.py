import json
import random

import pytest

import util
from tpl import jsonio
from tpl.hypergraph import GroupingMap, make_family
from tpl.matrix import Matrix
from tpl.named import ghz, w_state
from tpl.preorder import DegenerationCertificate, RestrictionCertificate
from tpl.scalars import EPS, FLOAT, EpsPoly, QC
from tpl.tensor import Tensor


def test_tensor_round_trip_bit_exact():
    rng = random.Random(71)
    for _ in range(20):
        t = util.random_rational_tensor(rng, (2, 3, 2), density=0.5, den=7)
        obj = jsonio.tensor_to_json(t)
        text = jsonio.dumps_pretty(obj)
        back = jsonio.tensor_from_json(json.loads(text))
        assert back == t
        assert jsonio.dumps_pretty(jsonio.tensor_to_json(back)) == text


def test_eps_tensor_round_trip():
    p = EpsPoly({0: QC(1), 2: QC(-1, 2)})
    t = Tensor((2, 2), {(0, 1): p}, EPS)
    back = jsonio.tensor_from_json(jsonio.tensor_to_json(t))
    assert back == t


def test_float_tensor_round_trip():
    t = Tensor((2, 2), {(0, 0): complex(0.5, -0.25)}, FLOAT)
    back = jsonio.tensor_from_json(jsonio.tensor_to_json(t))
    assert back == t


def test_tensor_json_shape_checks():
    obj = jsonio.tensor_to_json(ghz(2))
    obj["order"] = 5
    with pytest.raises(jsonio.FormatError):
        jsonio.tensor_from_json(obj)
    obj = jsonio.tensor_to_json(ghz(2))
    obj["entries"][0]["i"] = [9, 9, 9]
    with pytest.raises(jsonio.FormatError):
        jsonio.tensor_from_json(obj)
    with pytest.raises(jsonio.FormatError):
        jsonio.tensor_from_json({"dims": [2], "domain": "nope", "entries": []})


def test_matrix_round_trip():
    from fractions import Fraction

    m = Matrix.from_rows([[1, 0], [Fraction(1, 2), -2]])
    back = jsonio.matrix_from_json(jsonio.matrix_to_json(m))
    assert back == m


def test_certificate_round_trip():
    ident = Matrix.identity(2)
    rc = RestrictionCertificate((ident, ident, ident))
    back = jsonio.certificate_from_json(jsonio.certificate_to_json(rc))
    assert isinstance(back, RestrictionCertificate)
    assert back.maps == rc.maps

    c, e = EpsPoly.const, EpsPoly.eps
    m = Matrix(2, 2, {(0, 0): c(1), (1, 0): e(1), (0, 1): c(-1)}, EPS)
    dc = DegenerationCertificate((m, m, m), d=1, e=2)
    back = jsonio.certificate_from_json(jsonio.certificate_to_json(dc))
    assert isinstance(back, DegenerationCertificate)
    assert back.maps == dc.maps
    assert (back.d, back.e) == (1, 2)


def test_certificate_kind_checked():
    obj = jsonio.certificate_to_json(RestrictionCertificate((Matrix.identity(2),)))
    obj["kind"] = "mystery"
    with pytest.raises(jsonio.FormatError):
        jsonio.certificate_from_json(obj)


def test_hypergraph_round_trip():
    h = make_family("Triangular", 5)
    back = jsonio.hypergraph_from_json(jsonio.hypergraph_to_json(h))
    assert back == h


def test_grouping_map_round_trip():
    gm = GroupingMap((0, 1, 0, 2), 3)
    back = jsonio.grouping_map_from_json(jsonio.grouping_map_to_json(gm))
    assert back.mapping == gm.mapping


def test_decomposition_round_trip():
    terms = [[[QC(1), QC(0)], [QC("1/2"), QC(1)]], [[QC(0), QC(-1)], [QC(2), QC(0)]]]
    back = jsonio.decomposition_from_json(jsonio.decomposition_to_json(terms))
    assert back == terms


def test_writer_is_deterministic():
    t = w_state()
    a = jsonio.dumps_pretty(jsonio.tensor_to_json(t))
    b = jsonio.dumps_pretty(jsonio.tensor_to_json(t))
    assert a == b
    assert '"re": "1"' in a
