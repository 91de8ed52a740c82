import json

import numpy as np
import pytest

from stripedbox import baseline_energy, standard_geometry
from stripedbox.cli import EXIT_CONFIG, EXIT_OK, EXIT_VALIDATION, main
from stripedbox.config import (
    ConfigError,
    bundled_config_names,
    bundled_config_path,
    load_study_config,
    parse_study_config,
    resolve_config,
)

EXPECTED_BUNDLED = {
    "baseline",
    "table1_setI",
    "table1_setII",
    "table1_setIII",
    "table1_setIV",
    "table1_setV",
    "table1_setVI",
    "table1_setVII",
    "fig3",
    "fig4",
    "fig5",
    "fig7",
    "fig8_pre",
    "fig8_post",
    "fig10_moderate",
    "fig10_strong",
    "validate_setIV",
    "validate_fig3_lambda30",
}


def write_config(tmp_path, mapping, name="study.json"):
    path = tmp_path / name
    path.write_text(json.dumps(mapping), encoding="utf-8")
    return path


def test_bundled_configs_present_and_parse():
    assert set(bundled_config_names()) == EXPECTED_BUNDLED
    for name in EXPECTED_BUNDLED:
        config = load_study_config(bundled_config_path(name))
        assert config.mode in ("spectrum", "sweep", "density", "validate")


@pytest.mark.parametrize("name", sorted(EXPECTED_BUNDLED))
def test_config_round_trip(name):
    config = load_study_config(bundled_config_path(name))
    echoed = parse_study_config(config.to_mapping())
    assert echoed == config


def test_defaults_fill_missing_blocks():
    config = parse_study_config({"analysis": {"mode": "spectrum"}})
    assert config.geometry == standard_geometry()
    assert config.base_potentials.values == (0j, 0j, 0j, 0j)
    assert config.base_field.alpha == 0j
    assert config.basis.nx0 == 1 and config.basis.nmax == 50


@pytest.mark.parametrize(
    "mapping, fragment",
    [
        ({"analysis": {"mode": "spectrum"}, "bogus": {}}, "unknown key"),
        ({"analysis": {"mode": "spectrum"}, "geometry": {"a": 1, "c": 2}}, "unknown key"),
        ({"analysis": {"mode": "warp"}}, "unknown mode"),
        ({}, "analysis"),
        ({"analysis": {"mode": "spectrum"}, "potentials": {"v1": [1]}}, "re, im"),
        ({"analysis": {"mode": "spectrum"}, "potentials": {"v1": "j*lambda"}}, "template"),
        (
            {"analysis": {"mode": "spectrum"}, "potentials": {"v2": "i*lambda"}},
            "sweep mode",
        ),
        (
            {"analysis": {"mode": "sweep", "lambda_start": 0, "lambda_end": 1, "steps": 5}},
            "requires a lambda template",
        ),
        (
            {
                "analysis": {"mode": "sweep", "lambda_start": 5, "lambda_end": 1, "steps": 5},
                "potentials": {"v2": "i*lambda"},
            },
            "lambda_start",
        ),
        ({"analysis": {"mode": "density"}}, "level"),
        (
            {"analysis": {"mode": "density", "level": 99}, "basis": {"nmax": 20}},
            "level",
        ),
        (
            {"analysis": {"mode": "spectrum"}, "geometry": {"b1": 0.9}},
            "b1",
        ),
        (
            {"analysis": {"mode": "spectrum"}, "basis": {"nmax": 0}},
            "nmax",
        ),
    ],
)
def test_config_rejections(mapping, fragment):
    with pytest.raises(ConfigError) as err:
        parse_study_config(mapping)
    assert fragment.lower() in str(err.value).lower()


def test_resolve_config_by_path_and_name(tmp_path):
    path = write_config(tmp_path, {"analysis": {"mode": "spectrum"}})
    assert resolve_config(path).mode == "spectrum"
    assert resolve_config("baseline").mode == "spectrum"
    with pytest.raises(ConfigError):
        resolve_config(tmp_path / "missing.json")
    with pytest.raises(ConfigError):
        resolve_config("no_such_bundle")


def test_cli_spectrum_baseline(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["spectrum", "--config", "baseline", "--out-dir", str(out)]) == EXIT_OK
    lines = (out / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "index,re_energy_ry,im_energy_ry,residual"
    assert len(lines) == 51
    geom = standard_geometry()
    for n, line in enumerate(lines[1:6], start=1):
        fields = line.split(",")
        assert int(fields[0]) == n
        assert abs(float(fields[1]) - baseline_energy(geom, 1, n)) <= 1e-10
        assert float(fields[2]) == 0.0
    report = json.loads((out / "spectrum.json").read_text())
    assert report["schema_version"] == 1
    assert report["mode"] == "spectrum"
    assert report["config"]["basis"] == {"nx0": 1, "nmax": 50}
    assert len(report["eigenvalues"]) == 50


def test_cli_spectrum_runs_are_byte_identical(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["spectrum", "--config", "table1_setI", "--out-dir", str(out1)]) == EXIT_OK
    assert main(["spectrum", "--config", "table1_setI", "--out-dir", str(out2)]) == EXIT_OK
    assert (out1 / "spectrum.csv").read_bytes() == (out2 / "spectrum.csv").read_bytes()
    assert (out1 / "spectrum.json").read_bytes() == (out2 / "spectrum.json").read_bytes()


def test_cli_spectrum_reference_set(tmp_path):
    out = tmp_path / "out"
    assert main(["spectrum", "--config", "table1_setI", "--out-dir", str(out)]) == EXIT_OK
    rows = (out / "spectrum.csv").read_text().splitlines()[1:6]
    got = [float(r.split(",")[1]) for r in rows]
    np.testing.assert_allclose(got, [-72.61, -6.131, 18.88, 112.7, 134.9], atol=0.05)


def test_cli_nmax_override(tmp_path):
    out = tmp_path / "out"
    assert main(
        ["spectrum", "--config", "baseline", "--out-dir", str(out), "--nmax", "10"]
    ) == EXIT_OK
    assert len((out / "spectrum.csv").read_text().splitlines()) == 11
    report = json.loads((out / "spectrum.json").read_text())
    assert report["config"]["basis"]["nmax"] == 10


def test_cli_mode_mismatch_rejected(capsys):
    assert main(["sweep", "--config", "baseline", "--out-dir", "."]) == EXIT_CONFIG
    assert "mode" in capsys.readouterr().err


def test_cli_rejects_corrupt_geometry_before_solving(tmp_path, capsys):
    geom = standard_geometry()
    bad = write_config(
        tmp_path,
        {
            "geometry": {"a": geom.a, "b": geom.b, "b1": 0.75 * geom.b, "b3": 0.8 * geom.b},
            "analysis": {"mode": "spectrum"},
        },
    )
    assert main(["spectrum", "--config", str(bad), "--out-dir", str(tmp_path)]) == EXIT_CONFIG
    assert "b1" in capsys.readouterr().err


def test_cli_missing_config(capsys, tmp_path):
    assert main(
        ["spectrum", "--config", str(tmp_path / "nope.json"), "--out-dir", str(tmp_path)]
    ) == EXIT_CONFIG


def test_cli_two_step_hermitian_sweep(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "potentials": {"v1": "lambda", "v2": "-lambda", "v3": "-lambda", "v4": "lambda"},
            "basis": {"nx0": 1, "nmax": 20},
            "analysis": {"mode": "sweep", "lambda_start": 0.0, "lambda_end": 50.0, "steps": 2},
        },
    )
    out = tmp_path / "out"
    assert main(["sweep", "--config", str(cfg), "--out-dir", str(out)]) == EXIT_OK
    rows = (out / "sweep.csv").read_text().splitlines()[1:]
    assert rows and all(row.endswith(",unbroken") for row in rows)
    report = json.loads((out / "exceptional_points.json").read_text())
    assert report["exceptional_points"] == []
    assert report["crossovers"] == []
    assert (out / "sweep_re.svg").exists() and (out / "sweep_im.svg").exists()


def test_cli_sweep_inner_stripes_reports_threshold(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "potentials": {"v1": [0, 0], "v2": "i*lambda", "v3": "-i*lambda", "v4": [0, 0]},
            "basis": {"nx0": 1, "nmax": 50},
            "analysis": {
                "mode": "sweep",
                "lambda_start": 45.0,
                "lambda_end": 65.0,
                "steps": 11,
                "plot_branches": 2,
            },
        },
    )
    out = tmp_path / "out"
    assert main(["sweep", "--config", str(cfg), "--out-dir", str(out), "--threads", "2"]) == EXIT_OK
    report = json.loads((out / "exceptional_points.json").read_text())
    breaking = [ep for ep in report["exceptional_points"] if ep["kind"] == "breaking"]
    assert breaking
    assert abs(breaking[0]["lambda_c"] - 54.5) <= 0.5
    assert breaking[0]["branches"] == [1, 2]


def test_cli_bundled_always_broken_sweep(tmp_path):
    out = tmp_path / "out"
    assert main(["sweep", "--config", "fig7", "--out-dir", str(out), "--threads", "2"]) == EXIT_OK
    rows = (out / "sweep.csv").read_text().splitlines()[1:]
    assert rows and all(row.endswith(",broken") for row in rows)


def test_cli_density_outputs(tmp_path):
    out = tmp_path / "out"
    assert main(["density", "--config", "fig8_post", "--out-dir", str(out)]) == EXIT_OK
    rows = (out / "density.csv").read_text().splitlines()
    assert rows[0] == "x_bohr,y_bohr,density"
    data = np.array([[float(v) for v in row.split(",")] for row in rows[1:]])
    assert data.shape == (201 * 201, 3)
    geom = standard_geometry()
    on_boundary = (
        (data[:, 0] == 0)
        | (data[:, 1] == 0)
        | (np.isclose(data[:, 0], geom.a, rtol=1e-15))
        | (np.isclose(data[:, 1], geom.b, rtol=1e-15))
    )
    assert np.all(data[on_boundary, 2] == 0)

    # Post-breaking state: unequal lobes along y on the x = a/2 cut.
    mid_x = data[np.isclose(data[:, 0], geom.a / 2, atol=geom.a / 400)]
    ys = mid_x[:, 1]
    dens = mid_x[:, 2]
    low = dens[ys < geom.b / 2].max()
    high = dens[ys > geom.b / 2].max()
    assert max(low, high) / min(low, high) > 1.1
    assert (out / "density.svg").stat().st_size > 0


def test_cli_validate_passes_for_reference_set(tmp_path):
    out = tmp_path / "out"
    assert main(["validate", "--config", "validate_setIV", "--out-dir", str(out)]) == EXIT_OK
    report = json.loads((out / "validate.json").read_text())
    assert report["passed"] is True
    names = {c["name"] for c in report["checks"]}
    assert "closed_form_vs_quadrature" in names
    assert "matrix_vs_direct_matching" in names
    assert all(c["passed"] for c in report["checks"])


def test_cli_validate_pt_configuration(tmp_path):
    out = tmp_path / "out"
    assert main(
        ["validate", "--config", "validate_fig3_lambda30", "--out-dir", str(out)]
    ) == EXIT_OK
    report = json.loads((out / "validate.json").read_text())
    assert report["pt_symmetric_input"] is True
    closure = [c for c in report["checks"] if c["name"] == "conjugation_closure"]
    assert closure and closure[0]["passed"]


def test_cli_validate_fails_on_tight_tolerance(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "potentials": {
                "v1": [100, 0],
                "v2": [-100, 0],
                "v3": [100, 0],
                "v4": [100, 0],
            },
            "analysis": {"mode": "validate", "e_tol": 1e-9},
        },
    )
    out = tmp_path / "out"
    assert main(["validate", "--config", str(cfg), "--out-dir", str(out)]) == EXIT_VALIDATION
    report = json.loads((out / "validate.json").read_text())
    assert report["passed"] is False


def test_cli_rejects_bad_flags(capsys):
    assert main(["spectrum", "--config", "baseline", "--nmax", "-3"]) == EXIT_CONFIG
    assert main(["sweep", "--config", "fig3", "--threads", "0"]) == EXIT_CONFIG
