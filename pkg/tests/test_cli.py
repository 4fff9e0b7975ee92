import json

import pytest

from bisruin.cli import fmt4, main, read_csv, write_csv
from bisruin.config import load_config, model_to_json, parse_config
from bisruin.engine import ruin_table
from bisruin.errors import ConfigError
from bisruin.presets import TABLES


def write_config(tmp_path, model, name="model.json", **extra):
    path = tmp_path / name
    path.write_text(json.dumps({"model": model, **extra}))
    return path


def poisson(rate):
    return {"dist": "poisson", "rate": rate}


def csv_rows(path):
    return path.read_text().splitlines()


def test_fmt4_rounds_half_to_even():
    assert fmt4(0.12345) == "0.1234"
    assert fmt4(0.12355) == "0.1236"
    assert fmt4(0.79773) == "0.7977"


def test_compute_writes_csv(tmp_path, capsys):
    cfg = write_config(
        tmp_path, {"kind": "bivariate_poisson", "lambda1": 0.3, "lambda2": 1.4, "lambda": 0.15}
    )
    out = tmp_path / "psi.csv"
    assert main(["compute", "--config", str(cfg), "--out", str(out)]) == 0
    rows = csv_rows(out)
    assert rows[0] == "u,psi"
    assert len(rows) == 14
    u, v = rows[1].split(",")
    assert u == "0" and fmt4(float(v)) == "0.7921"
    text = capsys.readouterr().out
    for key in ("model class", "NetProfit_S0Pos", "E[X+Y]", "psi(0)", "delta", "correlation"):
        assert key in text
    assert b"\r\n" not in out.read_bytes()


def test_compute_swapped_marginals_row(tmp_path):
    cfg = write_config(tmp_path, {"kind": "clayton", "theta": 100, "x": poisson(1.4), "y": poisson(0.3)})
    out = tmp_path / "psi.csv"
    assert main(["compute", "--config", str(cfg), "--out", str(out)]) == 0
    u, v = csv_rows(out)[4].split(",")
    assert u == "3" and fmt4(float(v)) == "0.4859"


def test_compute_zero_claims(tmp_path):
    cfg = write_config(tmp_path, {"kind": "explicit", "matrix": [[1]]})
    out = tmp_path / "psi.csv"
    assert main(["compute", "--config", str(cfg), "--out", str(out)]) == 0
    assert read_csv(out) == [0.0] * 13


def test_compute_reports_undefined_correlation(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {"kind": "clayton", "theta": 100, "x": poisson(0.2), "y": {"dist": "shifted_zeta", "exponent": 2.3}},
    )
    assert main(["compute", "--config", str(cfg), "--out", str(tmp_path / "z.csv")]) == 0
    assert "correlation : undefined" in capsys.readouterr().out


def test_compute_svg_and_default_output(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = write_config(tmp_path, {"kind": "product", "x": poisson(0.3), "y": poisson(1.4)}, "indep.json")
    assert main(["compute", "--config", str(cfg), "--svg"]) == 0
    assert (tmp_path / "indep.csv").exists()
    svg = (tmp_path / "indep.svg").read_text()
    assert svg.startswith("<svg") and "psi(u)" in svg and "<polyline" in svg


def test_compute_output_section(tmp_path):
    cfg = write_config(
        tmp_path,
        {"kind": "product", "x": poisson(0.3), "y": poisson(1.4)},
        output={"path": str(tmp_path / "o.csv"), "format": "csv+svg"},
        u_max=5,
    )
    assert main(["compute", "--config", str(cfg)]) == 0
    assert len(read_csv(tmp_path / "o.csv")) == 6
    assert (tmp_path / "o.svg").exists()


@pytest.mark.parametrize(
    "body",
    [
        "{not json",
        json.dumps({"u_max": 3}),
        json.dumps({"model": {"kind": "copula"}}),
        json.dumps({"model": {"kind": "bivariate_poisson", "lambda1": 0.3, "lambda2": 1.4, "lambda": 0.5}}),
        json.dumps({"model": {"kind": "explicit", "matrix": [[1]]}, "N": 1}),
        json.dumps({"model": {"kind": "explicit", "matrix": [[1]]}, "precision_bits": 32}),
        json.dumps({"model": {"kind": "explicit", "matrix": [[0.5, 0.6]]}}),
    ],
)
def test_invalid_config_exits_2(tmp_path, body, capsys):
    path = tmp_path / "bad.json"
    path.write_text(body)
    assert main(["compute", "--config", str(path), "--out", str(tmp_path / "x.csv")]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_config_exits_2(tmp_path):
    assert main(["compute", "--config", str(tmp_path / "nope.json")]) == 2


def test_precision_failure_exits_3(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {"kind": "clayton", "theta": -0.9, "x": poisson(0.3), "y": poisson(1.4)},
        precision_bits=128,
    )
    assert main(["compute", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 3
    assert "precision" in capsys.readouterr().err


def test_csv_round_trip(tmp_path):
    table, _ = ruin_table(TABLES[2][0].model)
    path = write_csv(tmp_path / "t.csv", table.psi)
    back = read_csv(path)
    assert back == [float(f"{v:.10g}") for v in table.psi_float()]
    assert write_csv(tmp_path / "t2.csv", back).read_text() == path.read_text()


def test_config_round_trip():
    for settings in TABLES.values():
        for s in settings:
            cfg = parse_config({"model": model_to_json(s.model)})
            assert cfg.model == s.model
    with pytest.raises(ConfigError):
        parse_config([])


def test_load_config_defaults(tmp_path):
    cfg = load_config(write_config(tmp_path, {"kind": "explicit", "matrix": [["1/2", "1/2"]]}))
    assert (cfg.u_max, cfg.N, cfg.precision_bits, cfg.output_format) == (12, 20, 256, "csv")


@pytest.mark.parametrize("table", [2, 3, 4])
def test_reproduce_passes(table, capsys, tmp_path):
    svg = tmp_path / "chart.svg"
    assert main(["reproduce", "--table", str(table), "--svg", str(svg)]) == 0
    out = capsys.readouterr().out
    assert "all cells within tolerance" in out
    assert "delta[" in out
    assert svg.read_text().count("<polyline") == 3


def test_reproduce_first_table_reports_mismatch(capsys):
    # the printed columns for lambda=0.01 and 0.29 match lambda=0 and 0.299
    assert main(["reproduce", "--table", "1"]) == 1
    out = capsys.readouterr().out
    assert "outside tolerance" in out
    assert "lambda=0.15" not in out.split("outside tolerance")[1]


def test_reproduce_rejects_unknown_table(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["reproduce", "--table", "5"])
    assert exc.value.code == 2
    assert "invalid choice" in capsys.readouterr().err


def test_oracle_deterministic_and_exact_for_point_mass(tmp_path, capsys):
    cfg = write_config(tmp_path, {"kind": "explicit", "matrix": [[0], [0], [1]]}, u_max=4)
    args = ["oracle", "--config", str(cfg), "--pairs", "10", "--paths", "2000", "--seed", "3"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert "seed=3" in first and "generator=PCG64" in first
    rows = [line.split() for line in first.splitlines()[2:]]
    assert [r[1] for r in rows] == ["1.0000", "1.0000", "0.0000", "0.0000", "0.0000"]
    assert [r[1] for r in rows] == [r[2] for r in rows] == [r[3] for r in rows]


def test_oracle_engine_vs_dp(tmp_path, capsys):
    cfg = write_config(
        tmp_path, {"kind": "bivariate_poisson", "lambda1": 0.3, "lambda2": 1.4, "lambda": 0.01}
    )
    assert main(["oracle", "--config", str(cfg), "--pairs", "400", "--paths", "1000"]) == 0
    rows = [line.split() for line in capsys.readouterr().out.splitlines()[2:]]
    assert len(rows) == 13
    for r in rows:
        assert abs(float(r[1]) - float(r[2])) <= 2e-3
