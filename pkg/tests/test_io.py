import json
from fractions import Fraction as F

import pytest

from bodymetric import GeneralBody, InputError, UnimodularAffine, apply, polygon_from_vertices
from bodymetric.io import body_from_dict, body_to_dict, group_element_from_json, load_body, read_json


def test_polygon_roundtrip():
    P = polygon_from_vertices([(0, 0), (F(1, 2), 0), (0, F(1, 3))])
    d = body_to_dict(P)
    assert d["vertices"][1] == ["1/2", "0"]
    assert body_from_dict(d) == P


def test_decimal_strings_are_exact():
    P = body_from_dict({"dim": 2, "kind": "convex-polygon", "vertices": [["0", "0"], ["0.5", "0"], ["0", "0.5"]]})
    assert P.exact and P.area == F(1, 8)


def test_boxes_roundtrip():
    B = GeneralBody.from_boxes([((0, 0, 0), (1, 2, 3))])
    back = body_from_dict(body_to_dict(B))
    assert back.boxes == B.boxes


def test_halfspace_union_roundtrip():
    B = GeneralBody.from_boxes([((0, 0), (1, 1)), ((2, 0), (3, 1))])
    gB = apply(UnimodularAffine(((1, 1), (0, 1)), (0, 0)), B)
    d = body_to_dict(gB)
    assert d["kind"] == "halfspace-union"
    back = body_from_dict(d)
    assert back.bbox[0] == pytest.approx(gB.bbox[0]) and back.bbox[1] == pytest.approx(gB.bbox[1])


@pytest.mark.parametrize(
    "d",
    [
        {"dim": 2, "kind": "blob"},
        {"dim": 3, "kind": "convex-polygon", "vertices": []},
        {"dim": 2, "kind": "convex-polygon"},
        {"dim": 2, "kind": "convex-polygon", "vertices": [["0", "0"], ["1", "1"], ["2", "2"]]},
        {"dim": 2, "kind": "convex-polygon", "vertices": [["x", "0"], ["1", "0"], ["0", "1"]]},
        {"dim": 2, "kind": "halfspaces", "rows": [{"a": [1, 0], "b": 1}]},
        {"dim": 3, "kind": "union-of-boxes", "boxes": [{"lo": [0, 0], "hi": [1, 1]}]},
        "not a dict",
    ],
)
def test_bad_bodies(d):
    with pytest.raises(InputError):
        body_from_dict(d)


def test_read_json_digest(tmp_path):
    p = tmp_path / "b.json"
    p.write_text('{"a": 1}')
    data, digest = read_json(p)
    assert data == {"a": 1} and len(digest) == 64


def test_invalid_json(tmp_path):
    p = tmp_path / "b.json"
    p.write_text("{oops")
    with pytest.raises(InputError):
        load_body(p)


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_body(tmp_path / "nope.json")


def test_group_element_inline_and_file(tmp_path):
    g = group_element_from_json('{"A": [[1, 1], [0, 1]], "t": ["1/2", "0"]}')
    assert g.A == ((1, 1), (0, 1)) and g.t == (F(1, 2), 0)
    p = tmp_path / "g.json"
    p.write_text(json.dumps(g.to_dict()))
    assert group_element_from_json(str(p)) == g


@pytest.mark.parametrize(
    "text",
    ['{"A": [[2, 0], [0, 1]], "t": [0, 0]}', '{"A": [[1.5, 0], [0, 1]], "t": [0, 0]}', '{"A": [[1, 0], [0, 1]]}', "{bad"],
)
def test_bad_group_elements(text):
    with pytest.raises(InputError):
        group_element_from_json(text)
