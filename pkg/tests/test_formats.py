import json

import pytest

from catcohom.corpus import FIXTURES, write_fixture
from catcohom.errors import FunctorialityViolation, ParseError
from catcohom.formats import dumps, load, natsys_json, roundtrip
from catcohom.fincat import FinCat, cyclic_group
from catcohom.natsys import NaturalSystem, trivial_system
from catcohom.exactalg import RAT


@pytest.mark.parametrize("name", FIXTURES)
def test_every_bundled_fixture_loads_and_roundtrips(tmp_path, name):
    files = write_fixture(name, str(tmp_path))
    assert files
    for f in files:
        path = tmp_path / f
        assert load(str(path)) is not None
        assert roundtrip(str(path))


def test_truncated_file_reports_line_and_column(tmp_path):
    path = tmp_path / "cat.json"
    path.write_text('{\n  "objects": ["x"],\n  "morphisms": [\n')
    with pytest.raises(ParseError) as info:
        load(str(path))
    assert info.value.line is not None and info.value.column is not None


def test_unknown_field_is_named(tmp_path):
    path = tmp_path / "cat.json"
    path.write_text(json.dumps({"objects": ["x"], "morphisms": [{"name": "id", "src": "x",
                                                                 "tgt": "x"}],
                                "identities": {"x": "id"}, "composition": [],
                                "colour": "blue"}))
    with pytest.raises(ParseError) as info:
        load(str(path))
    assert "colour" in str(info.value)


def test_identity_pairs_may_be_omitted(tmp_path):
    path = tmp_path / "bz2.json"
    path.write_text(json.dumps({
        "objects": ["*"],
        "morphisms": [{"name": "e", "src": "*", "tgt": "*"}, {"name": "g", "src": "*", "tgt": "*"}],
        "identities": {"*": "e"},
        "composition": [["g", "g", "e"]],
    }))
    C = load(str(path))
    assert isinstance(C, FinCat) and C == cyclic_group(2)


def test_rational_entries_and_inline_category(tmp_path):
    C = cyclic_group(2)
    data = natsys_json(trivial_system(C, RAT))
    path = tmp_path / "d.json"
    path.write_text(dumps(data, pretty=True))
    D = load(str(path))
    assert isinstance(D, NaturalSystem) and D.ring == RAT
    data["right"][0]["matrix"] = [["1/2"]]
    path.write_text(dumps(data))
    with pytest.raises(FunctorialityViolation):
        load(str(path))


def test_bad_matrix_shape_is_a_parse_error(tmp_path):
    C = cyclic_group(2)
    data = natsys_json(trivial_system(C, RAT))
    data["left"][0]["matrix"] = [["1", "0"]]
    path = tmp_path / "d.json"
    path.write_text(dumps(data))
    with pytest.raises(ParseError):
        load(str(path))


def test_dumps_is_compact_and_stable():
    assert dumps({"b": 1, "a": [1, 2]}) == '{"b":1,"a":[1,2]}\n'
