import json
from pathlib import Path

import jsonschema
import pytest

from simpsec import cli

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "report_schema.json").read_text())

CASES = [
    ["mh", "--space", "point", "--r", "1", "--n", "2", "--filtration", "whole"],
    ["dchar", "--group", "z2", "--k", "1", "--r", "1"],
    ["cohomology", "--space", "circle"],
    ["cohomology", "--group", "z2", "--model", "cone"],
    ["nerve", "--group", "z2", "--N", "2"],
    ["les", "--space", "circle"],
    ["xi", "--space", "circle"],
    ["xi", "--bundle", "flat:1/3"],
    ["verify", "chain"],
    ["mh", "--space", "point", "--r", "9", "--n", "0"],
    ["mh", "--space", "mars"],
]


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


@pytest.mark.parametrize("argv", CASES, ids=lambda a: " ".join(a))
def test_reports_match_schema(argv, tmp_path):
    out = tmp_path / "r.json"
    code = cli.main(argv + ["--output", str(out)])
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, SCHEMA, cls=jsonschema.Draft202012Validator)
    assert code == {"ok": 0, "invalid": 2, "failed": 3}[doc["status"]]
