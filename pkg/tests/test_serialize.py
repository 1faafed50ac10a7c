import json
from importlib import resources

import pytest

from spkahler import fixtures as F
from spkahler.errors import ParseError
from spkahler.serialize import algebra_from_dict, algebra_to_dict, dumps, parse_vector_text


@pytest.mark.parametrize("name", F.SHIPPED)
def test_roundtrip(name):
    a = F.get(name).data
    text = dumps(algebra_to_dict(a))
    back = algebra_from_dict(json.loads(text))
    assert dumps(algebra_to_dict(back)) == text
    if hasattr(a, "omega"):
        assert back == a
    else:
        assert back.lie.bracket == a.lie.bracket and back.metric.matrix == a.metric.matrix
    assert back.lie.basis_names == a.lie.basis_names


@pytest.mark.parametrize("name", F.SHIPPED)
def test_shipped_files_are_current(name):
    path = resources.files("spkahler") / "data" / "fixtures" / f"{F.file_stem(name)}.json"
    assert path.read_text(encoding="utf-8") == dumps(algebra_to_dict(F.get(name).data))


def _base():
    return {"name": "t", "dim": 2, "brackets": [], "omega": [["0", "1"], ["-1", "0"]],
            "j": [["0", "-1"], ["1", "0"]], "product": []}


def test_inconsistent_mirror_reaches_antisymmetry():
    d = _base()
    d["brackets"] = [{"i": 0, "j": 1, "coeffs": {"1": "1"}}, {"i": 1, "j": 0, "coeffs": {"1": "1"}}]
    a = algebra_from_dict(d)
    assert a.report.failed()[0] == "antisymmetry"


def test_lower_entries_mirrored():
    d = _base()
    d["brackets"] = [{"i": 1, "j": 0, "coeffs": {"1": "-1"}}]
    a = algebra_from_dict(d)
    assert a.lie.bracket[0, 1, 1] == 1


@pytest.mark.parametrize("mutate", [
    lambda d: d["omega"][0].__setitem__(1, 1.0),
    lambda d: d["omega"][0].__setitem__(1, "1/0"),
    lambda d: d["omega"].pop(),
    lambda d: d.pop("j"),
    lambda d: d.pop("dim"),
    lambda d: d.__setitem__("dim", "2"),
    lambda d: d.__setitem__("brackets", [{"i": 0, "j": 5, "coeffs": {}}]),
    lambda d: d.__setitem__("product", [{"i": 0, "j": 0, "coeffs": {"0": "x"}}]),
    lambda d: d.__setitem__("basis", ["a"]),
    lambda d: d.__setitem__("dim", 3),
])
def test_parse_errors(mutate):
    d = _base()
    mutate(d)
    with pytest.raises(ParseError):
        algebra_from_dict(d)


def test_field_order_irrelevant():
    d = _base()
    assert algebra_from_dict(dict(reversed(list(d.items())))) == algebra_from_dict(d)


def test_parse_vector_text():
    v = parse_vector_text("1, 0,-1/2", 3)
    assert list(v.entries) == [1, 0, -0.5]
    with pytest.raises(ParseError):
        parse_vector_text("1,2", 3)
