import csv
import json
import math

import pytest

from wearout import oracles
from wearout.cli import main
from wearout.code_size import AliveChannel
from wearout.prob_core import DamageParams


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def rows_of(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def test_achievability_csv_matches_brute_force(capsys):
    rc, out, _ = run(capsys, "achievability", "--n-max", "10", "--wear-threshold", "2",
                     "--eta", "0.3")
    assert rc == 0
    assert out.startswith("# config ")
    rows = rows_of(out)
    assert len(rows) == 10 and list(rows[0]) == ["N", "value_bits", "m", "blocks"]
    ch, p = AliveChannel.bsc(0.11), DamageParams(0.5, 2)
    for r in rows:
        N = int(r["N"])
        assert abs(float(r["value_bits"]) - oracles.achievability_brute(N, 0.3, ch, p)) <= 1e-9


def test_nats_scaling(capsys):
    _, bits, _ = run(capsys, "achievability", "--n-max", "12", "--eta", "0.2", "--format", "json")
    _, nats, _ = run(capsys, "achievability", "--n-max", "12", "--eta", "0.2", "--format", "json",
                     "--log-base", "nats")
    b, n = json.loads(bits), json.loads(nats)
    assert n["metadata"]["unit"] == "nats"
    for rb, rn in zip(b["rows"], n["rows"]):
        assert rn["value_nats"] == rb["value_bits"] * math.log(2)
        assert rn["blocks"] == rb["blocks"]


def test_converse_csv_and_join(capsys, tmp_path):
    a_path, c_path = tmp_path / "a.csv", tmp_path / "c.csv"
    assert main(["achievability", "--n-max", "40", "--eta", "0.05", "--out", str(a_path)]) == 0
    assert main(["converse", "--n-max", "40", "--eta", "0.05", "--out", str(c_path)]) == 0
    a = rows_of(a_path.read_text())
    c = rows_of(c_path.read_text())
    for ra, rc in zip(a, c):
        assert float(rc["value_bits"]) >= float(ra["value_bits"]) - 1e-9


def test_single_block_command(capsys):
    rc, out, _ = run(capsys, "single-block", "--n-max", "30", "--eta", "0.05")
    assert rc == 0
    for r in rows_of(out):
        assert float(r["achievability_single"]) <= float(r["achievability_multi"]) + 1e-12
        assert float(r["converse_single"]) <= float(r["converse_multi"]) + 1e-9


def test_simulate_is_deterministic(capsys, tmp_path):
    args = ["simulate", "--schedule", "60:4;40:3", "--trials", "50000", "--seed", "9"]
    rc1, out1, _ = run(capsys, *args)
    rc2, out2, _ = run(capsys, *args)
    assert rc1 == rc2 == 0 and out1 == out2
    rows = rows_of(out1)
    assert [r["within"] for r in rows] == ["yes", "yes"]
    meta = json.loads(out1.splitlines()[0][len("# config "):])
    assert meta["feedback_identity_pass"] is True


def test_simulate_from_schedule_file(capsys, tmp_path):
    path = tmp_path / "a.csv"
    assert main(["achievability", "--n-max", "80", "--out", str(path)]) == 0
    rc, out, _ = run(capsys, "simulate", "--schedule-file", str(path), "--row", "80",
                     "--trials", "20000")
    assert rc == 0 and len(rows_of(out)) >= 1


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n_max": 6, "eta": 0.3, "s_threshold": 1}))
    rc, out, _ = run(capsys, "achievability", "--config", str(cfg), "--n-max", "5")
    assert rc == 0 and len(rows_of(out)) == 5
    meta = json.loads(out.splitlines()[0][len("# config "):])
    assert meta["eta"] == 0.3 and meta["s_threshold"] == 1


def test_config_schema_lists_every_field():
    import dataclasses
    import pathlib

    from wearout.cli import RunConfig
    schema = json.loads((pathlib.Path(__file__).parents[1] / "docs" / "config.schema.json").read_text())
    assert set(schema["properties"]) == {f.name for f in dataclasses.fields(RunConfig)}
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(dataclasses.asdict(RunConfig()), schema)


def test_bad_config_is_reported(capsys, tmp_path):
    rc, _, err = run(capsys, "achievability", "--eta", "1.5")
    assert rc == 2 and "eta" in err
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    rc, _, err = run(capsys, "achievability", "--config", str(cfg))
    assert rc == 2 and "bogus" in err
    rc, _, err = run(capsys, "simulate")
    assert rc == 2


def test_selftest_passes_and_detects_fault(capsys):
    rc, _, _ = run(capsys, "selftest")
    assert rc == 0
    rc, out, _ = run(capsys, "selftest", "--be-scale", "0.9")
    assert rc == 1 and "FAIL envelope" in out
