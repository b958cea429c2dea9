"""Configuration validation, report serialization and the command line."""

import json
from fractions import Fraction

import pytest

from rpqw.catalog import BY_ID, CATALOG, CONFORMANCE, FORCED, IN_SCOPE, list_checks
from rpqw.cli import main
from rpqw.config import make_config, parse_modes, parse_toy
from rpqw.errors import ConfigInvalid
from rpqw.outcome import FAIL, PASS, SKIPPED
from rpqw.report import Record, Report, emit, grid_points, run, run_point, to_plain


def test_parse_helpers():
    assert parse_modes("-4..4") == (-4, 4)
    assert parse_toy("1:0,2:1") == ((1, 0), (2, 1))
    with pytest.raises(ConfigInvalid):
        parse_modes("4")
    with pytest.raises(ConfigInvalid):
        parse_toy("1:2:3")


@pytest.mark.parametrize(
    "kwargs, field",
    [
        ({"window": 20}, "--window"),
        ({"modes": (-7, 7)}, "--modes"),
        ({"max_rank": 5}, "--max-rank"),
        ({"max_arity": 7}, "--max-arity"),
        ({"t_order": 9}, "--t-order"),
        ({"p": "1/5", "q": "2/3"}, "--p/--q"),
        ({"p": "x"}, "--p"),
        ({"jobs": 0}, "--jobs"),
    ],
)
def test_config_rejects(kwargs, field):
    with pytest.raises(ConfigInvalid, match=field):
        make_config("pq", **kwargs)


def test_config_echo_for_q_family():
    echo = make_config("q", p="1", q="1/3").echo()
    assert echo["p"] == "1" and echo["family"] == "q"
    assert "jobs" not in echo and "out" not in echo


def test_custom_family_from_file(tmp_path):
    path = tmp_path / "r.json"
    path.write_text(json.dumps({"l": 0, "terms": [[1, 0, "15/7"], [0, 1, "-15/7"]]}))
    config = make_config(f"custom:{path}")
    assert config.family == "custom"
    assert config.deformation().terms == ((0, 1, Fraction(-15, 7)), (1, 0, Fraction(15, 7)))
    with pytest.raises(ConfigInvalid):
        make_config(f"custom:{tmp_path / 'missing.json'}")


def test_to_plain_formats_fractions():
    assert to_plain({"a": Fraction(3), "b": (Fraction(-1, 2), 4)}) == {"a": "3/1", "b": ["-1/2", 4]}


def test_exit_codes():
    forced_id = next(c.id for c in CATALOG if c.suite == FORCED)
    conf_id = next(c.id for c in CATALOG if c.suite == CONFORMANCE)
    assert Report({}, [Record(forced_id, {}, PASS)], []).exit_code() == 0
    assert Report({}, [Record(conf_id, {}, FAIL)], []).exit_code() == 2
    assert Report({}, [Record(forced_id, {}, FAIL), Record(conf_id, {}, FAIL)], []).exit_code() == 1
    assert Report({}, [Record(conf_id, {}, FAIL, engine_error=True)], []).exit_code() == 1
    assert Report({}, [Record(conf_id, {}, SKIPPED)], []).exit_code() == 0


def test_classified_errors_become_skips():
    config = make_config("classical")
    (record,) = run_point(config, "wtilde_specialization", {"m": 0, "N": 1, "W": 6, "r": 2, "sign": "displays"})
    assert record.status == SKIPPED
    assert record.note.startswith("DivisionByZeroMode")


def test_unclassified_errors_are_engine_failures():
    config = make_config("pq")
    (record,) = run_point(config, "det_property", {"m": 1, "x": [1, 2], "W": 8})
    assert record.status == PASS
    # a missing grid key is a programming error, not a classified skip
    (broken,) = run_point(config, "det_property", {"m": 1, "W": 8})
    assert broken.status == FAIL and broken.engine_error


def test_grid_respects_only():
    config = make_config("pq", only=("bell_oracle", "fock_relations"))
    assert sorted({cid for cid, _ in grid_points(config)}) == ["bell_oracle", "fock_relations"]


def test_json_report_shape():
    report = run(make_config("pq", only=("bell_oracle", "central_virasoro")))
    data = json.loads(emit(report))
    assert set(data) == {"config", "checks", "summary", "conventions"}
    assert sum(data["summary"].values()) == len(data["checks"])
    assert all(c["ms"] == 0 for c in data["checks"])
    failing = [c for c in data["checks"] if c["status"] == FAIL]
    assert all(set(c["witness"]) == {"mode", "target", "expected", "got"} for c in failing)


def test_markdown_report():
    report = run(make_config("q", p="1", only=("bell_oracle",)))
    text = emit(report, "markdown").decode()
    assert text.startswith("# Verification report")
    assert "| bell_oracle |" in text


def test_cli_list(capsys):
    assert main(["list", "--suite", "forced"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert [line.split("\t")[0] for line in lines] == [c.id for c in list_checks(FORCED)]


def test_cli_verify_to_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["verify", "--check", "bell_oracle", "--check", "fock_relations", "--family", "q", "--q", "1/3", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert {c["id"] for c in data["checks"]} == {"bell_oracle", "fock_relations"}
    assert "2 pass" in capsys.readouterr().err


def test_cli_conformance_failure_exit_code(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--check", "sub2n_vanishing", "--out", str(out)]) == 2


def test_cli_invalid_config(capsys):
    assert main(["verify", "--window", "40"]) == 1
    assert "--window" in capsys.readouterr().err
    assert main(["verify", "--check", "no_such_check"]) == 1


def test_catalog_anchors_cover_scope():
    assert len(CATALOG) == len(IN_SCOPE) == len(BY_ID)
    assert sorted(c.anchor for c in CATALOG) == sorted(IN_SCOPE)
    assert {c.suite for c in CATALOG} == {FORCED, CONFORMANCE}
