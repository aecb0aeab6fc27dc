"""Smoke test for the magicdistill_py extension module.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import json
import math
import pathlib
import sys

import magicdistill_py as md

SCHEMA_DIR = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "schema"


def validate(name, value):
    try:
        import jsonschema
    except ImportError:
        return
    schema = json.loads((SCHEMA_DIR / name).read_text())
    jsonschema.validate(value, schema)


def main():
    x = md.PauliOperator("XI")
    z = md.PauliOperator("ZI")
    assert not x.commutes_with(z)
    assert str(x * z) == "-iYI"
    assert str(x.m3_conjugate()) == "YI"
    assert md.PauliOperator("XYZ").weight == 3

    five = md.StabilizerCode(["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"])
    report = five.analyze()
    validate("report.schema.json", report)
    assert report["w_i"] == [1, 0, 0, 0, 15, 0]
    assert report["w_x"] == report["w_y"] == report["w_z"] == [0, 0, 0, 10, 0, -6]
    assert report["useful"]
    assert abs(float(report["threshold"]) - math.sqrt(21) / 7) < 1e-9
    assert report["success_probability_at_r1"] == "1/6"

    flipped = five.flip_sign(0).analyze()
    assert flipped["t_axis_preserving"] and not flipped["useful"]

    steane = md.StabilizerCode.parse(
        "XXXXIII\nXXIIXXI\nXIXIXIX\nZZZZIII\nZZIIZZI\nZIZIZIZ\n"
    )
    assert steane.is_m3_code()
    assert not steane.analyze()["useful"]

    t = md.threshold(report["w_dist"])
    assert t["useful"] and t["radical"] == "sqrt(21)/7"

    assert md.x_code_enumerator(4, [0b0011, 0b1100]) == [1, 0, 2, 0, 1]

    summary, records = md.search(5, m3=True)
    validate("search_summary.schema.json", summary)
    assert summary["distinct_useful_sets"] == 1
    assert records and all(r["report"]["w_i"] == [1, 0, 0, 0, 15, 0] for r in records)
    for r in records[:5]:
        validate("search_record.schema.json", r)

    try:
        md.StabilizerCode(["XI", "ZI"])
    except ValueError:
        pass
    else:
        raise AssertionError("anticommuting generators accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
