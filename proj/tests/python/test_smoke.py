import json
import os
from pathlib import Path

import pytest

import dla

ROOT = Path(os.environ.get("DLA_SOURCE_DIR", Path(__file__).resolve().parents[2]))
FIXTURES = ROOT / "fixtures"


def cells(table):
    out = []
    for row in table["rows"]:
        if not row["permitted"]:
            out.append("No")
        elif row["obligations"]:
            out.append("Yes(" + "+".join(row["obligations"]) + ")")
        else:
            out.append("Yes")
    return "/".join(out)


def test_assess_reproduces_results_table():
    names = ["cifar-10", "imagenet", "cityscapes", "ffhq", "vggface2", "ms-coco", "ms-coco-annotations"]
    reports = dla.assess([FIXTURES / n for n in names])["reports"]
    got = {r["assessment"]["dataset_id"]: cells(r["assessment"]) for r in reports}
    assert got == {
        "cifar-10": "No/No/No",
        "imagenet": "No/No/No",
        "cityscapes": "No/No/No",
        "ffhq": "Yes(C+D)/No/No",
        "vggface2": "Yes(A+E+D)/No/No",
        "ms-coco": "No/No/No",
        "ms-coco-annotations": "Yes(B+E+D)/Yes(B)/Yes(B)",
    }


def test_verify_cifar10():
    v = dla.verify(FIXTURES / "cifar-10")
    assert v["changed"] == ["Tagging", "Distribute", "Rerepresent", "CommercializeOutput", "CommercializeModel"]
    assert v["residual_risk_flags"] == ["80m-tiny-images", "cydral"]
    assert v["audit"]["engine_version"] == dla.ENGINE_VERSION


def test_license_ranges():
    ranges = dla.license_ranges(FIXTURES / "cifar-10")
    assert ranges["cifar-10"] == (2008, 2009)
    assert all(r == (2005, 2006) for k, r in ranges.items() if k != "cifar-10")


def test_validation_and_key():
    lineage = json.loads((FIXTURES / "cifar-10" / "lineage.json").read_text())
    cifar = next(r for r in lineage["records"] if r["subject_id"] == "cifar-10")
    assert dla.validate_provenance(cifar) == []
    broken = dict(cifar, digest={"algorithm": "MD5", "hex": cifar["digest"]["hex"][:-1]})
    assert [v["field"] for v in dla.validate_provenance(broken)] == ["digest.hex"]
    golden = json.loads((FIXTURES / "cifar-10" / "analysis_key.golden.json").read_text())
    assert dla.analysis_key(cifar) == golden["default"]


def test_templates_and_errors():
    t = dla.lookup_template("CC-BY-NC-SA-4.0")
    assert t["rights_vector"]["model_rights"]["CommercializeModel"]["grant"] == "Denied"
    with pytest.raises(dla.DlaError) as info:
        dla.lookup_template("GPL-3.0")
    assert info.value.code == "UnknownLicense"
    with pytest.raises(dla.DlaError) as info:
        dla.verify(FIXTURES / "cyclic")
    assert info.value.code == "CycleDetected"


def test_cli_exit_codes():
    assert dla.run_cli("assess", FIXTURES / "cifar-10")[0] == 3
    assert dla.run_cli("assess", FIXTURES / "synthetic-permissive")[0] == 0
    assert dla.run_cli("range", FIXTURES / "cyclic")[0] == 2
    assert dla.run_cli("validate", FIXTURES / "malformed-vector")[0] == 1
