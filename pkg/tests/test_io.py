import json
from importlib import resources

import jsonschema
import pytest

from ainftycat import io
from ainftycat.corpus import BUILDERS, DEFORMATIONS, UNDEFORMED
from ainftycat.fixtures import dumps_report

CORPUS = resources.files("ainftycat") / "data" / "corpus"
EXPECTED = resources.files("ainftycat") / "data" / "expected"


def test_corpus_complete():
    assert io.bundled_names() == sorted(UNDEFORMED + DEFORMATIONS)


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_roundtrip_byte_identity(name):
    text = (CORPUS / f"{name}.json").read_text()
    assert io.dumps(io.loads(text)) == text


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_builders_match_files(name):
    assert io.dumps(BUILDERS[name]()) == (CORPUS / f"{name}.json").read_text()


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_schema(name):
    jsonschema.validate(json.loads((CORPUS / f"{name}.json").read_text()), io.schema())


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_expected_reports(name):
    assert dumps_report(name) == (EXPECTED / f"{name}.json").read_text()


def test_digest_stable():
    assert io.load("pt").digest() == io.load("pt").digest()
    assert io.load("pt").digest() != io.load("dual0").digest()


def test_load_falls_back_to_bundled():
    assert io.load("examples/pt.json").name == "pt"


def _pt_data():
    return json.loads((CORPUS / "pt.json").read_text())


@pytest.mark.parametrize("edit", [
    lambda d: d.update(format="ainfty-v0"),
    lambda d: d.update(base="Z"),
    lambda d: d["homs"].update({"X|Q": []}),
    lambda d: d["mu"][0].update(output=["X|X", "nope"]),
    lambda d: d["mu"][0].update(coeff=[[1, "1"]]),
    lambda d: d["mu"][0].update(d=3),
    lambda d: d.update(mu0={"X": [["X|X", "e", "1"]]}),
    lambda d: d["mu"].append(dict(d["mu"][0])),
    lambda d: d.update(objects=["X", "X"]),
])
def test_format_errors(edit):
    d = _pt_data()
    edit(d)
    with pytest.raises(io.FormatError):
        io.parse(d)


def test_invalid_json():
    with pytest.raises(io.FormatError):
        io.loads("{not json")


def test_input_order_is_leftmost_first():
    inst = io.load("dual_t")
    x = ("X", "X", "x")
    e = ("X", "X", "e")
    assert inst.category.mu[((x, x), e)]
    data = io.to_data(io.load("rankjump"))
    entry = next(m for m in data["mu"] if m["inputs"] == [["Y|X", "b"], ["X|Y", "a"]])
    # b o a lands in hom(X, X)
    assert entry["output"] == ["X|X", "ex"]
