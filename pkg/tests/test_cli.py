import json

import numpy as np
import pytest

from dipolegauge import ConfigError
from dipolegauge.cli import (
    DEFAULTS,
    SCHEMA_VERSION,
    TOLERANCES,
    Comparison,
    main,
    parse_results,
    render_csv,
    render_json,
)


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def run(tmp_path, command, data, *extra):
    return main([command, "--config", write_config(tmp_path, data), *extra])


def vc_config(**overrides):
    cfg = {
        "schema_version": SCHEMA_VERSION,
        "separations": [[0.0, 0.0, 0.2]],
        "half_extents": [8],
        "sigma": 0.04,
        "tolerances": {"commutator_rel": 0.05},
    }
    cfg.update(overrides)
    return cfg


def bch_config(**overrides):
    cfg = {
        "schema_version": SCHEMA_VERSION,
        "xi_values": [0.3],
        "truncation": 20,
        "interior": 10,
    }
    cfg.update(overrides)
    return cfg


def two_dipoles(sep):
    return [
        {"position": [0.0, 0.0, 0.0], "moment": [1.0, 0.0, 0.0]},
        {"position": list(sep), "moment": [1.0, 0.0, 0.0]},
    ]


# --- validation failures (exit 2) -------------------------------------------


def test_missing_config_file(capsys):
    assert main(["bch-check", "--config", "/nonexistent/nope.json"]) == 2
    assert "config error" in capsys.readouterr().err


def test_invalid_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["bch-check", "--config", str(path)]) == 2
    assert "not valid JSON" in capsys.readouterr().err


def test_config_must_be_object(tmp_path):
    path = tmp_path / "arr.json"
    path.write_text("[1, 2]", encoding="utf-8")
    assert main(["bch-check", "--config", str(path)]) == 2


def test_missing_schema_version(tmp_path, capsys):
    cfg = bch_config()
    del cfg["schema_version"]
    assert run(tmp_path, "bch-check", cfg) == 2
    assert "schema_version" in capsys.readouterr().err


def test_wrong_schema_version(tmp_path):
    assert run(tmp_path, "bch-check", bch_config(schema_version=99)) == 2


def test_unknown_key_rejected(tmp_path, capsys):
    assert run(tmp_path, "bch-check", bch_config(surprise=1)) == 2
    assert "surprise" in capsys.readouterr().err


def test_bad_units(tmp_path):
    assert run(tmp_path, "bch-check", bch_config(units={"hbar": -1.0})) == 2
    assert run(tmp_path, "bch-check", bch_config(units={"planck": 1.0})) == 2


def test_unknown_tolerance_rejected(tmp_path):
    assert run(tmp_path, "bch-check", bch_config(tolerances={"nope": 0.1})) == 2


def test_bad_output_format_value(tmp_path):
    assert run(tmp_path, "bch-check", bch_config(output_format="xml")) == 2


def test_vc_missing_separations(tmp_path):
    cfg = vc_config()
    del cfg["separations"]
    assert run(tmp_path, "verify-commutator", cfg) == 2


def test_vc_empty_separations(tmp_path):
    assert run(tmp_path, "verify-commutator", vc_config(separations=[])) == 2


def test_vc_window_ordering_enforced(tmp_path, capsys):
    # |rho| must sit inside (sigma, box_length)
    assert (
        run(
            tmp_path,
            "verify-commutator",
            vc_config(separations=[[0.0, 0.0, 1.5]]),
        )
        == 2
    )
    assert "box_length" in capsys.readouterr().err
    assert run(tmp_path, "verify-commutator", vc_config(sigma=0.3)) == 2


def test_vc_bad_half_extents(tmp_path):
    assert run(tmp_path, "verify-commutator", vc_config(half_extents=[])) == 2
    assert run(tmp_path, "verify-commutator", vc_config(half_extents=[0])) == 2
    assert run(tmp_path, "verify-commutator", vc_config(half_extents=[2.5])) == 2


def test_de_missing_dipoles(tmp_path):
    assert run(tmp_path, "dipole-energy", {"schema_version": 1}) == 2


def test_de_coincident_dipoles(tmp_path, capsys):
    cfg = {"schema_version": 1, "dipoles": two_dipoles([0.0, 0.0, 0.0])}
    assert run(tmp_path, "dipole-energy", cfg) == 2
    assert "coincide" in capsys.readouterr().err


def test_de_dipole_entry_keys(tmp_path):
    cfg = {
        "schema_version": 1,
        "dipoles": [{"position": [0, 0, 0], "moment": [1, 0, 0], "label": "a"}],
    }
    assert run(tmp_path, "dipole-energy", cfg) == 2
    cfg = {"schema_version": 1, "dipoles": [{"position": [0, 0, 0]}]}
    assert run(tmp_path, "dipole-energy", cfg) == 2


def test_de_bad_sigma(tmp_path):
    cfg = {"schema_version": 1, "dipoles": two_dipoles([0, 0, 0.2]), "sigma": -0.1}
    assert run(tmp_path, "dipole-energy", cfg) == 2


def test_fs_point_on_dipole(tmp_path, capsys):
    cfg = {
        "schema_version": 1,
        "dipoles": two_dipoles([0.0, 0.0, 0.2]),
        "field_points": [[0.0, 0.0, 0.2]],
    }
    assert run(tmp_path, "field-shift", cfg) == 2
    assert "coincides" in capsys.readouterr().err


def test_fs_missing_lists(tmp_path):
    assert run(tmp_path, "field-shift", {"schema_version": 1}) == 2
    cfg = {"schema_version": 1, "dipoles": two_dipoles([0, 0, 0.2])}
    assert run(tmp_path, "field-shift", cfg) == 2


def test_cp_origin_point_rejected(tmp_path):
    cfg = {"schema_version": 1, "field_points": [[0.0, 0.0, 0.0]]}
    assert run(tmp_path, "coulomb-path", cfg) == 2


def test_cp_path_pairs_need_paths(tmp_path):
    cfg = {
        "schema_version": 1,
        "field_points": [[0, 0, 2.0]],
        "path_pairs": [[0, 1]],
    }
    assert run(tmp_path, "coulomb-path", cfg) == 2


def test_cp_pair_indices_validated(tmp_path):
    cfg = {
        "schema_version": 1,
        "field_points": [[0, 0, 2.0]],
        "charge_paths": [
            {"vertices": [[0, 0, 0], [0, 0, -100.0]]},
            {"vertices": [[0, 0, 0], [-1.0, 0, -100.0]]},
        ],
        "path_pairs": [[0, 5]],
    }
    assert run(tmp_path, "coulomb-path", cfg) == 2
    cfg["path_pairs"] = [[1, 1]]
    assert run(tmp_path, "coulomb-path", cfg) == 2


def test_cp_pair_charge_mismatch(tmp_path, capsys):
    cfg = {
        "schema_version": 1,
        "field_points": [[0, 0, 2.0]],
        "charge_paths": [
            {"vertices": [[0, 0, 0], [0, 0, -100.0]], "charge": 1.0},
            {"vertices": [[0, 0, 0], [-1.0, 0, -100.0]], "charge": 2.0},
        ],
        "path_pairs": [[0, 1]],
    }
    assert run(tmp_path, "coulomb-path", cfg) == 2
    assert "charges" in capsys.readouterr().err


def test_cp_bad_path_vertices(tmp_path, capsys):
    cfg = {
        "schema_version": 1,
        "field_points": [[0, 0, 2.0]],
        "charge_paths": [{"vertices": [[1.0, 0, 0], [0, 0, -100.0]]}],
    }
    assert run(tmp_path, "coulomb-path", cfg) == 2
    assert "origin" in capsys.readouterr().err


def test_cp_path_through_point(tmp_path, capsys):
    # clean at validation time, singular at run time
    cfg = {
        "schema_version": 1,
        "field_points": [[0, 0, 2.0]],
        "charge_paths": [{"vertices": [[0, 0, 0], [0, 0, 4.0]]}],
    }
    assert run(tmp_path, "coulomb-path", cfg) == 2
    assert "validation error" in capsys.readouterr().err


def test_bch_interior_exceeds_truncation(tmp_path):
    assert run(tmp_path, "bch-check", bch_config(interior=30)) == 2


def test_bch_dim_cap_enforced(tmp_path, capsys):
    assert run(tmp_path, "bch-check", bch_config(truncation=5000, interior=10)) == 2
    assert "validation error" in capsys.readouterr().err


def test_bch_bad_xi(tmp_path):
    assert run(tmp_path, "bch-check", bch_config(xi_values=["big"])) == 2
    assert run(tmp_path, "bch-check", bch_config(xi_values=[])) == 2


def test_unknown_command_exits_via_argparse(tmp_path):
    with pytest.raises(SystemExit):
        main(["frobnicate", "--config", "x.json"])
    with pytest.raises(SystemExit):
        main(["bch-check"])  # --config is required


# --- exit 1 on tolerance failure --------------------------------------------


def test_tolerance_failure_exits_one(tmp_path, capsys):
    cfg = bch_config(tolerances={"bch_interior_abs": 1e-30})
    assert run(tmp_path, "bch-check", cfg) == 1
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert doc["records"][0]["passed"] is False


def test_non_gating_failure_keeps_exit_zero(tmp_path, capsys):
    cfg = vc_config(half_extents=[2, 8])
    assert run(tmp_path, "verify-commutator", cfg) == 0
    doc = json.loads(capsys.readouterr().out)
    by_extent = {r["outputs"]["half_extent"]: r for r in doc["records"]}
    assert by_extent[2]["passed"] is False
    assert by_extent[2]["gates_exit"] is False
    assert by_extent[8]["passed"] is True
    assert by_extent[8]["gates_exit"] is True


# --- happy paths ------------------------------------------------------------


def test_verify_commutator_json_output(tmp_path):
    out = tmp_path / "result.json"
    code = run(tmp_path, "verify-commutator", vc_config(), "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["command"] == "verify-commutator"
    (record,) = doc["records"]
    assert len(record["comparisons"]) == 9
    assert record["outputs"]["sigma"] == 0.04
    assert len(record["input_digest"]) == 64
    int(record["input_digest"], 16)
    modesum = np.array(record["outputs"]["modesum_imag"])
    closed = np.array(record["outputs"]["closed_form_imag"])
    assert modesum.shape == (3, 3) and closed.shape == (3, 3)
    assert closed[2, 2] < 0 < closed[0, 0]
    assert record["outputs"]["max_rel_error_nonzero"] < 0.05
    # analytically-zero entries are absolute rows, the rest relative
    kinds = {c["name"]: c["kind"] for c in record["comparisons"]}
    assert kinds["entry[0,1]"] == "absolute"
    assert kinds["entry[0,0]"] == "relative"


def test_vc_default_sigma_is_rho_fraction(tmp_path, capsys):
    cfg = vc_config()
    del cfg["sigma"]
    cfg["tolerances"] = {"commutator_rel": 0.5}
    assert run(tmp_path, "verify-commutator", cfg) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["records"][0]["outputs"]["sigma"] == pytest.approx(
        0.2 * DEFAULTS["sigma_fraction"]
    )


def test_dipole_energy_closed_form_only(tmp_path, capsys):
    cfg = {"schema_version": 1, "dipoles": two_dipoles([0.0, 0.0, 1.0])}
    assert run(tmp_path, "dipole-energy", cfg) == 0
    doc = json.loads(capsys.readouterr().out)
    (record,) = doc["records"]
    assert record["comparisons"] == []
    report = record["outputs"]["transform_report"]
    assert report["self_energy"] is None
    assert report["pair_energies"]["1,0"] == pytest.approx(1 / (4 * np.pi))
    assert report["total_interaction"] == pytest.approx(1 / (4 * np.pi))


def test_dipole_energy_with_lattice_route(tmp_path, capsys):
    cfg = {
        "schema_version": 1,
        "dipoles": two_dipoles([0.0, 0.0, 0.2]),
        "lattice": {"half_extent": 12},
        "sigma": 0.04,
    }
    assert run(tmp_path, "dipole-energy", cfg) == 0
    doc = json.loads(capsys.readouterr().out)
    (record,) = doc["records"]
    (comp,) = record["comparisons"]
    assert comp["name"] == "pair_route[1,0]"
    assert comp["kind"] == "relative"
    assert comp["passed"] is True
    assert record["outputs"]["transform_report"]["self_energy"] < 0.0


def test_field_shift_closed_form_only(tmp_path, capsys):
    cfg = {
        "schema_version": 1,
        "dipoles": two_dipoles([0.0, 0.0, 0.2]),
        "field_points": [[0.0, 0.0, 0.4], [0.3, 0.0, 0.0]],
    }
    assert run(tmp_path, "field-shift", cfg) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["records"]) == 2
    for record in doc["records"]:
        assert record["comparisons"] == []
        assert record["outputs"]["commutator_route"] is None
        assert len(record["outputs"]["closed_form"]) == 3


def test_field_shift_with_lattice_route(tmp_path, capsys):
    cfg = {
        "schema_version": 1,
        "dipoles": [
            {"position": [0.0, 0.0, 0.0], "moment": [1.0, 0.0, 0.0]},
            {"position": [0.15, 0.0, 0.0], "moment": [0.0, 0.0, 1.0]},
        ],
        "field_points": [[0.0, 0.0, 0.2]],
        "lattice": {"half_extent": 8},
        "sigma": 0.04,
        "tolerances": {"field_shift_rel": 0.05},
    }
    assert run(tmp_path, "field-shift", cfg) == 0
    doc = json.loads(capsys.readouterr().out)
    (record,) = doc["records"]
    names = [c["name"] for c in record["comparisons"]]
    assert names == ["shift[0]", "shift[1]", "shift[2]"]
    assert all(c["kind"] == "absolute" for c in record["comparisons"])
    assert record["passed"] is True


def test_coulomb_path_reference_mode(tmp_path, capsys):
    cfg = {
        "schema_version": 1,
        "field_points": [[0.6, -0.8, 1.2]],
        "endpoint_factor": 50.0,
    }
    assert run(tmp_path, "coulomb-path", cfg) == 0
    doc = json.loads(capsys.readouterr().out)
    (record,) = doc["records"]
    names = [c["name"] for c in record["comparisons"]]
    assert names == [
        "recovery_max_dev",
        "quad_vs_endpoint_formula",
        "straight_vs_staircase_residual",
    ]
    assert record["passed"] is True
    assert record["outputs"]["charge"] == DEFAULTS["charge"]


def test_coulomb_path_explicit_paths(tmp_path, capsys):
    cfg = {
        "schema_version": 1,
        "field_points": [[0.6, -0.8, 1.2]],
        "charge_paths": [
            {"vertices": [[0, 0, 0], [-30.0, 40.0, -60.0]]},
            {"vertices": [[0, 0, 0], [-30.0, 0.0, 0.0], [-30.0, 40.0, -60.0]]},
        ],
    }
    assert run(tmp_path, "coulomb-path", cfg) == 0
    doc = json.loads(capsys.readouterr().out)
    labels = [r["label"] for r in doc["records"]]
    assert len(labels) == 3  # two path records plus the implied (0, 1) pair
    pair_record = doc["records"][-1]
    assert pair_record["outputs"]["path_pair"] == [0, 1]
    assert pair_record["outputs"]["residual"] < 1e-6


def test_bch_check_outputs(tmp_path, capsys):
    assert run(tmp_path, "bch-check", bch_config()) == 0
    doc = json.loads(capsys.readouterr().out)
    (record,) = doc["records"]
    assert record["label"] == "xi=0.3"
    central = record["outputs"]["central_commutator"]
    assert central["real"] == pytest.approx(-0.6)
    assert central["imag"] == 0.0
    (comp,) = record["comparisons"]
    assert comp["computed"] < TOLERANCES["bch_interior_abs"]


# --- output formats and plumbing --------------------------------------------


def test_format_flag_overrides_config(tmp_path, capsys):
    cfg = bch_config(output_format="csv")
    assert run(tmp_path, "bch-check", cfg) == 0
    assert capsys.readouterr().out.startswith("command,record,comparison,")
    assert run(tmp_path, "bch-check", cfg, "--format", "json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["command"] == "bch-check"


def test_csv_shape_and_numbers(tmp_path, capsys):
    assert run(tmp_path, "bch-check", bch_config(), "--format", "csv") == 0
    text = capsys.readouterr().out
    assert "\r" not in text
    lines = text.splitlines()
    assert lines[0] == (
        "command,record,comparison,kind,computed,reference,abs_error,"
        "rel_error,tolerance,passed"
    )
    assert len(lines) == 2
    fields = lines[1].split(",")
    assert fields[0] == "bch-check"
    assert fields[3] == "absolute"
    float(fields[4])  # 17g numbers round-trip through float()
    assert fields[7] == ""  # rel_error blank when the reference is zero
    assert fields[9] == "true"


def test_out_file_uses_lf_endings(tmp_path):
    out = tmp_path / "rows.csv"
    code = run(tmp_path, "bch-check", bch_config(), "--format", "csv", "--out", str(out))
    assert code == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    assert raw.endswith(b"\n")


def test_out_file_suppresses_stdout(tmp_path, capsys):
    out = tmp_path / "result.json"
    run(tmp_path, "bch-check", bch_config(), "--out", str(out))
    assert capsys.readouterr().out == ""
    assert out.exists()


def test_digest_tracks_config_content(tmp_path, capsys):
    cfg = bch_config()
    run(tmp_path, "bch-check", cfg)
    first = json.loads(capsys.readouterr().out)["records"][0]["input_digest"]
    # same content, different file name: same digest
    code = main(
        ["bch-check", "--config", write_config(tmp_path, cfg, name="other.json")]
    )
    assert code == 0
    second = json.loads(capsys.readouterr().out)["records"][0]["input_digest"]
    assert first == second
    run(tmp_path, "bch-check", bch_config(xi_values=[0.4]))
    third = json.loads(capsys.readouterr().out)["records"][0]["input_digest"]
    assert third != first


def test_parse_results_round_trip(tmp_path, capsys):
    assert run(tmp_path, "bch-check", bch_config()) == 0
    text = capsys.readouterr().out
    records = parse_results(text)
    (record,) = records
    assert record.command == "bch-check"
    assert record.label == "xi=0.3"
    assert record.passed is True
    assert record.comparisons[0].name == "interior_deviation"
    # re-rendering the parsed records reproduces the comparison rows
    doc_again = json.loads(render_json("bch-check", records))
    doc_orig = json.loads(text)
    assert doc_again["records"][0]["comparisons"] == doc_orig["records"][0]["comparisons"]


def test_parse_results_rejects_garbage():
    with pytest.raises(ConfigError):
        parse_results("{nope")
    with pytest.raises(ConfigError):
        parse_results(json.dumps({"records": []}))


def test_comparison_semantics():
    rel = Comparison(name="x", computed=1.01, reference=1.0, tolerance=0.02)
    assert rel.passed and rel.rel_error == pytest.approx(0.01)
    rel_fail = Comparison(name="x", computed=1.5, reference=1.0, tolerance=0.02)
    assert not rel_fail.passed
    abs_zero = Comparison(
        name="z", computed=1e-9, reference=0.0, tolerance=1e-8, kind="absolute"
    )
    assert abs_zero.passed and abs_zero.rel_error is None
