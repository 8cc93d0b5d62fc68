import numpy as np
import pytest

from quiverflow.cyclic_systems import DarbouxChart, from_darboux
from quiverflow.hamiltonian_dynamics import hlr_element
from quiverflow.quiver_core import builtin_quiver, cyclic_quiver, framed_cyclic
from quiverflow.rep_variety import zero_point
from quiverflow.utils.common import ChartKind
from quiverflow.utils.json_io import (
    SchemaError,
    cyclic_point_from_dict,
    decode_array,
    decode_complex,
    dumps,
    encode_array,
    fixed_digits,
    framed_from_point,
    lzeta_from_dict,
    lzeta_to_dict,
    point_to_dict,
    quiver_document,
    read_json,
    resolve_quiver,
    write_json,
)

LAM2 = (1.0, 0.5)


def test_numbers():
    assert fixed_digits(0.1 + 0.2) == 0.30000000000000004
    assert str(fixed_digits(-0.0)) == "0.0"
    assert decode_complex([1.5, -2.0]) == 1.5 - 2j
    assert decode_complex(3) == 3
    with pytest.raises(SchemaError):
        decode_complex([1.0, 2.0, 3.0])

    matrix = np.array([[1 + 2j, 0], [0.5, -1j]])
    np.testing.assert_array_equal(decode_array(encode_array(matrix), (2, 2)), matrix)
    assert decode_array([], (0, 3)).shape == (0, 3)
    with pytest.raises(SchemaError):
        decode_array(encode_array(matrix), (3, 2))


def test_documents(tmp_path):
    path = write_json(tmp_path / "quiver.json", quiver_document(builtin_quiver("A:3")))
    assert resolve_quiver(path.as_posix()) == builtin_quiver("A:3")
    assert resolve_quiver("cyclic:2") == cyclic_quiver(2)

    with pytest.raises(SchemaError):
        read_json(path, "point")
    with pytest.raises(SchemaError):
        read_json(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(SchemaError):
        read_json(broken)


def test_points_keep_their_framing(rng, tmp_path):
    chart = DarbouxChart.random(ChartKind.DELTA, 2, 2, 1, LAM2, rng)
    cp = from_darboux(chart, LAM2)
    doc = point_to_dict(cp.point)
    assert dumps(doc) == dumps(point_to_dict(cp.point))

    path = write_json(tmp_path / "point.json", doc)
    back = cyclic_point_from_dict(read_json(path, "point"))
    assert back.framed == cp.framed
    for a in cp.point.mats:
        np.testing.assert_array_equal(back.point.mat(a), cp.point.mat(a))

    with pytest.raises(SchemaError):
        framed_from_point(zero_point(cyclic_quiver(2), (1, 1)))


def test_lzeta_documents(tmp_path):
    framed = framed_cyclic(2, 1)
    element = hlr_element(framed, 2, 1)
    path = write_json(tmp_path / "a.json", lzeta_to_dict(element))
    back = lzeta_from_dict(read_json(path, "lzeta"))
    assert back.framed == framed
    assert back.cap == element.cap
    assert set(back.components) == set(element.components)
    for path_key, matrix in element.components.items():
        np.testing.assert_array_equal(back.components[path_key], matrix)
