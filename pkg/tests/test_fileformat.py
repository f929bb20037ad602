import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings

from csframes import AlgebraSpec, BlockMatrix, OperatorFrame, VectorFrame
from csframes.fileformat import FileFormatError, FrameFile, canonical_json, dumps, load, loads, save
from csframes.sampling import random_frame, random_projection, random_vector
from strategies import setups

FIXTURES = Path(__file__).parent / "fixtures"
# the unit of C as a serialized algebra element
ONE = [[[[1, 0]]]]


def same(x, y):
    return x.shape == y.shape and all(np.array_equal(a, b) for a, b in zip(x.data, y.data))


@pytest.mark.parametrize("name", ["identity", "mercedes", "parseval_generated", "projection"])
def test_fixtures_are_canonical(name):
    text = (FIXTURES / f"{name}.json").read_text()
    assert dumps(loads(text)) == text


@given(setups(max_rank=3))
@settings(max_examples=25, deadline=None)
def test_operator_frame_round_trip_is_exact(setup):
    spec, n, rng = setup
    e0 = random_projection(rng, spec, n)
    f = random_frame(rng, spec, n, 2, codomain=e0)
    text = dumps(FrameFile.from_frame(f, {"seed": 1, "note": "x"}))
    g = loads(text).to_frame()
    assert all(same(a, b) for a, b in zip(f, g))
    assert same(f.codomain, g.codomain)
    assert dumps(loads(text)) == text


@given(setups(max_rank=3))
@settings(max_examples=25, deadline=None)
def test_vector_frame_round_trip_is_exact(setup):
    spec, n, rng = setup
    vf = VectorFrame([random_vector(rng, spec, n) for _ in range(2)])
    g = loads(dumps(FrameFile.from_frame(vf))).to_frame()
    assert isinstance(g, VectorFrame)
    assert all(same(a, b) for a, b in zip(vf, g))


def test_identity_codomain_is_omitted_and_domain_kept(tmp_path):
    spec = AlgebraSpec((2,))
    rng = np.random.default_rng(0)
    e = random_projection(rng, spec, 2, ranks=(2,))
    f = OperatorFrame([e], domain=e)
    doc = json.loads(dumps(FrameFile.from_frame(f)))
    assert "E0" not in doc and "domain" in doc
    save(FrameFile.from_frame(f), tmp_path / "f.json")
    g = load(tmp_path / "f.json").to_frame()
    assert same(g.domain, e)


def test_negative_zero_and_float_format():
    assert canonical_json([-0.0, 0.1, 1e-300]) == "[0,0.10000000000000001,1e-300]\n"
    with pytest.raises(ValueError):
        canonical_json([float("nan")])


def test_keys_sorted_and_complex_pairs():
    spec = AlgebraSpec((1,))
    f = OperatorFrame([BlockMatrix.identity(spec, 1) * 1j])
    text = dumps(FrameFile.from_frame(f, {"b": 1, "a": 2}))
    doc = json.loads(text)
    assert list(doc) == sorted(doc)
    assert doc["elements"] == [[[[[[[0, 1]]]]]]]


def test_syntax_error_reports_position():
    with pytest.raises(FileFormatError) as exc:
        loads('{"version": 1,\n  "algebra": [1,,]}')
    assert exc.value.line == 2 and exc.value.column is not None
    assert "line 2" in str(exc.value)


@pytest.mark.parametrize(
    "patch, where",
    [
        ({"version": 2}, "version"),
        ({"algebra": [0]}, "algebra"),
        ({"ambient_rank": "2"}, "ambient_rank"),
        ({"kind": "frame"}, "kind"),
        ({"elements": [[[ONE, ONE]]]}, "elements[0][0]"),
        ({"elements": [[[[[[[1, "x"]]]]]]]}, "elements[0][0][0][0][0][0]"),
        ({"elements": [[[[[[[1, 0, 0]]]]]]]}, "elements[0][0][0][0][0][0]"),
    ],
)
def test_structural_errors_name_the_location(patch, where):
    doc = {"version": 1, "algebra": [1], "ambient_rank": 1, "kind": "operator_frame",
           "elements": [[[ONE]]], "metadata": {}}
    doc.update(patch)
    with pytest.raises(FileFormatError) as exc:
        loads(json.dumps(doc))
    assert where in str(exc.value)


def test_unknown_and_missing_keys():
    with pytest.raises(FileFormatError, match="unknown"):
        loads('{"version": 1, "extra": 0}')
    with pytest.raises(FileFormatError, match="missing"):
        loads('{"version": 1}')
    with pytest.raises(FileFormatError):
        loads("[]")


def test_inconsistent_frame_data():
    doc = {"version": 1, "algebra": [1], "ambient_rank": 1, "kind": "operator_frame",
           "elements": [[[ONE]]], "E0": [[[[[[2, 0]]]]]]}
    with pytest.raises(FileFormatError, match="inconsistent"):
        loads(json.dumps(doc)).to_frame()
