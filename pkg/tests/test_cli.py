import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from painleve4 import EquationKind, InitialData, Params, Tolerances, TrajectoryStatus, integrate
from painleve4.cli import (
    CSV_HEADER,
    fmt_float,
    main,
    read_trajectory_csv,
    run_sweep,
    summary_json,
    write_trajectory_csv,
)

K = EquationKind


@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
@settings(max_examples=300)
def test_seventeen_digits_round_trip(x):
    assert float(fmt_float(x)) == x


class TestIntegrateCommand:
    def test_writes_csv_and_summary(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        summary = tmp_path / "s.json"
        code = main(
            [
                "integrate",
                "--eq", "xxxii",
                "--z0", "0", "--w0", "2", "--w1", "3",
                "--span", "4",
                "--out", str(out), "--summary", str(summary),
            ]
        )
        assert code == 0
        rows = read_trajectory_csv(out)
        assert rows
        worst = max(abs(r["w_re"] - (r["z_re"] ** 2 + 3 * r["z_re"] + 2)) for r in rows)
        assert worst < 1e-9
        assert all(r["z_im"] == 0.0 and r["w_im"] == 0.0 for r in rows)
        doc = json.loads(summary.read_text(encoding="utf-8"))
        assert doc["equation"] == "xxxii"
        assert doc["status"] == "completed"
        assert doc["convention"] == "Ince XXXI β² convention"
        assert doc["node_count"] == len(rows)
        assert doc["events"] == []
        for key in ("params", "field", "pole_estimate", "max_abs_c", "max_abs_res2"):
            assert key in doc

    def test_pole_run_exits_zero_with_estimate(self, tmp_path):
        code = main(
            [
                "integrate",
                "--eq", "xxix",
                "--z0", "0", "--w0", "1", "--w1", "1",
                "--span", "2",
                "--out", str(tmp_path / "t.csv"), "--summary", str(tmp_path / "s.json"),
            ]
        )
        assert code == 0
        doc = json.loads((tmp_path / "s.json").read_text(encoding="utf-8"))
        assert doc["status"] == "pole"
        assert abs(doc["pole_estimate"] - 1.0) < 1e-3

    def test_csv_round_trip_is_exact(self, tmp_path):
        t = integrate(K.PIV, Params(0.0, 1.0), InitialData.zero(0.0, +1, 0.0), 1.0)
        path = tmp_path / "t.csv"
        write_trajectory_csv(path, t)
        rows = read_trajectory_csv(path)
        assert len(rows) == len(t.nodes)
        for row, node in zip(rows, t.nodes):
            assert row["z_re"] == node.jet.z
            assert row["w_re"] == node.jet.w
            assert row["w1_re"] == node.jet.w1
            assert row["w2_re"] == node.jet.w2
            assert row["h"] == node.h
            assert row["err_est"] == node.err_est
            assert row["C_re"] == node.c
            assert row["res2_re"] == node.res2

    def test_rerun_is_bit_identical(self, tmp_path):
        args = [
            "integrate",
            "--eq", "piv", "--alpha", "0", "--beta", "1",
            "--zero-branch", "plus", "--w2", "0",
            "--z0", "0", "--span", "1",
        ]
        blobs = []
        for name in ("a", "b"):
            out = tmp_path / f"{name}.csv"
            summary = tmp_path / f"{name}.json"
            assert main(args + ["--out", str(out), "--summary", str(summary)]) == 0
            blobs.append((out.read_bytes(), summary.read_bytes()))
        assert blobs[0] == blobs[1]

    def test_complex_mode_columns(self, tmp_path):
        out = tmp_path / "c.csv"
        code = main(
            [
                "integrate",
                "--eq", "piv0",
                "--field", "complex", "--dir-re", "0", "--dir-im", "1",
                "--z0", "0", "--w0", "0.5", "--w1", "0",
                "--span", "0.5",
                "--out", str(out), "--summary", str(tmp_path / "c.json"),
            ]
        )
        assert code == 0
        rows = read_trajectory_csv(out)
        assert any(r["z_im"] != 0.0 for r in rows[1:])
        assert rows[0]["z_im"] == 0.0

    def test_header_schema(self, tmp_path):
        out = tmp_path / "t.csv"
        main(["integrate", "--eq", "xvii", "--w0", "1", "--w1", "2", "--span", "1",
              "--out", str(out), "--summary", str(tmp_path / "s.json")])
        first = out.read_text(encoding="utf-8").splitlines()[0]
        assert first == CSV_HEADER


class TestValidation:
    @pytest.mark.parametrize(
        "args,needle",
        [
            (["integrate", "--eq", "piv", "--span", "1"], "--w0"),
            (["integrate", "--eq", "piv", "--w0", "1"], "--span"),
            (["integrate", "--eq", "piv", "--w0", "0", "--span", "1"], "--w0"),
            (["integrate", "--eq", "piv", "--w0", "1", "--span", "1", "--rel", "1e-20"], "rel"),
            (["integrate", "--eq", "piv", "--w0", "1", "--span", "1", "--pole-cutoff", "10"], "pole-cutoff"),
            (["integrate", "--eq", "piv0", "--alpha", "1", "--w0", "1", "--span", "1"], "alpha"),
            (["integrate", "--eq", "piv", "--zero-branch", "plus", "--w0", "1", "--span", "1"], "--zero-branch"),
            (["zeros", "--eq", "piv", "--w0", "1", "--span", "1", "--field", "complex"], "--field"),
            (["integrate", "--eq", "piv", "--w0", "1", "--span", "1", "--field", "complex",
              "--dir-re", "2"], "--dir-re"),
            (["integrate", "--eq", "xxxii", "--zero-branch", "plus", "--span", "1"], "zero"),
        ],
    )
    def test_invalid_specs_exit_1_naming_the_field(self, args, needle, capsys, tmp_path):
        full = args + ["--out", str(tmp_path / "o"), "--summary", str(tmp_path / "s")]
        assert main(full) == 1
        err = capsys.readouterr().err
        assert needle in err

    def test_unknown_equation_exits_1(self, capsys):
        assert main(["integrate", "--eq", "bogus", "--w0", "1", "--span", "1"]) == 1

    def test_exit_code_2_on_step_underflow(self, tmp_path, monkeypatch):
        # force underflow through the library (the CLI pins h_min at 1e-12)
        import painleve4.cli as cli

        def tiny_h(**kwargs):
            kwargs.setdefault("h_init", 1e-3)
            return Tolerances(rel=kwargs["rel"], abs=kwargs["abs"], pole_cutoff=kwargs["pole_cutoff"],
                              h_init=1e-3, h_min=9e-4)

        monkeypatch.setattr(cli, "_build_tolerances", lambda ns: tiny_h(rel=ns.rel, abs=ns.abs, pole_cutoff=ns.pole_cutoff))
        code = main(["integrate", "--eq", "xxix", "--w0", "1", "--w1", "1", "--span", "2",
                     "--out", str(tmp_path / "t.csv"), "--summary", str(tmp_path / "s.json")])
        assert code == 2


class TestZerosCommand:
    def test_events_file(self, tmp_path):
        out = tmp_path / "events.json"
        code = main(
            [
                "zeros",
                "--eq", "xxxii",
                "--z0", "-2", "--w0", "3.75", "--w1", "-4",
                "--span", "4",
                "--out", str(out), "--summary", str(tmp_path / "s.json"),
            ]
        )
        assert code == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert doc["identically_zero"] is False
        assert len(doc["events"]) == 2
        a_values = sorted(e["a"] for e in doc["events"])
        assert abs(a_values[0] + 0.5) < 1e-8 and abs(a_values[1] - 0.5) < 1e-8
        slopes = sorted(e["slope"] for e in doc["events"])
        assert abs(slopes[0] + 1.0) < 1e-8 and abs(slopes[1] - 1.0) < 1e-8
        assert doc["curvature_report"] is None  # xxxii is not piv

    def test_zero_seed_event_and_summary(self, tmp_path):
        out = tmp_path / "events.json"
        summary = tmp_path / "s.json"
        code = main(
            [
                "zeros",
                "--eq", "piv", "--alpha", "0", "--beta", "1",
                "--zero-branch", "plus", "--w2", "0", "--z0", "0",
                "--span", "1",
                "--out", str(out), "--summary", str(summary),
            ]
        )
        assert code == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert len(doc["events"]) == 1
        assert doc["events"][0]["branch"] == "plus_beta"
        sdoc = json.loads(summary.read_text(encoding="utf-8"))
        assert len(sdoc["events"]) == 1

    def test_identically_zero_warning(self, tmp_path, caplog):
        out = tmp_path / "events.json"
        code = main(
            [
                "zeros",
                "--eq", "piv0", "--w2", "0", "--z0", "0", "--span", "1",
                "--out", str(out), "--summary", str(tmp_path / "s.json"),
            ]
        )
        assert code == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert doc["identically_zero"] is True
        assert doc["events"] == []

    def test_curvature_report_for_beta_zero(self, tmp_path):
        out = tmp_path / "events.json"
        code = main(
            [
                "zeros",
                "--eq", "piv0", "--w2", "1", "--z0", "0", "--span", "1",
                "--out", str(out), "--summary", str(tmp_path / "s.json"),
            ]
        )
        assert code == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        report = doc["curvature_report"]
        assert report["ok"] is True
        assert len(report["checks"]) == 1
        assert report["checks"][0]["curvature_ok"] is True


class TestVerifyCommand:
    def test_identities_pass(self, capsys):
        assert main(["verify", "--suite", "identities", "--count", "100", "--seed", "7"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 2

    def test_failure_exits_3(self, monkeypatch, capsys):
        import painleve4.cli as cli
        from painleve4.verify import PropertyResult

        monkeypatch.setattr(
            cli, "run_suite", lambda suite, seed, count: [PropertyResult("forced", False, 1.0, 0.5)]
        )
        assert main(["verify", "--suite", "identities"]) == 3
        assert "FAIL" in capsys.readouterr().out


class TestSweepCommand:
    def test_grid_row_count(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = main(
            [
                "sweep",
                "--eq", "piv",
                "--alpha-min", "-2", "--alpha-max", "2", "--alpha-steps", "3",
                "--beta-min", "-2", "--beta-max", "2", "--beta-steps", "3",
                "--w0", "0.5", "--z0", "-1", "--span", "2",
                "--out", str(out),
            ]
        )
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 1 + 9
        assert lines[0].startswith("alpha,beta,status")

    def test_empty_grid_exits_1(self, tmp_path, capsys):
        code = main(
            [
                "sweep",
                "--eq", "piv",
                "--alpha-steps", "0",
                "--w0", "0.5", "--span", "1",
                "--out", str(tmp_path / "s.csv"),
            ]
        )
        assert code == 1
        assert "alpha-steps" in capsys.readouterr().err

    def test_all_cells_failing_exits_1(self, tmp_path):
        # piv0 rejects nonzero alpha, so every cell errors out
        code = main(
            [
                "sweep",
                "--eq", "piv0",
                "--alpha-min", "1", "--alpha-max", "2", "--alpha-steps", "2",
                "--w0", "0.5", "--span", "1",
                "--out", str(tmp_path / "s.csv"),
            ]
        )
        assert code == 1

    def test_beta_zero_column_has_nonzero_curvature_events(self):
        # library-level sweep: the beta = 0 cells' events carry the flag
        cells = run_sweep(
            K.PIV,
            alphas=[0.0],
            betas=[-1.0, 0.0, 1.0],
            init=InitialData.zero(0.0, +1, 0.5),
            span=0.5,
            tol=Tolerances(),
        )
        assert len(cells) == 3
        assert all(c.error == "" for c in cells)
        beta_zero_cell = cells[1]
        assert beta_zero_cell.zero_count >= 1
        assert all(e.curvature_nonzero for e in beta_zero_cell.events)
        for cell in (cells[0], cells[2]):
            assert all(e.curvature_nonzero is None for e in cell.events)

    def test_deterministic_output(self, tmp_path):
        args = [
            "sweep",
            "--eq", "piv",
            "--alpha-min", "-1", "--alpha-max", "1", "--alpha-steps", "2",
            "--beta-min", "0", "--beta-max", "1", "--beta-steps", "2",
            "--w0", "0.4", "--z0", "-1", "--span", "2",
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


def test_log_level_env_mapping():
    import logging

    from painleve4.cli import log_level_from_env

    assert log_level_from_env("error") == logging.ERROR
    assert log_level_from_env("WARN") == logging.WARNING
    assert log_level_from_env("info") == logging.INFO
    assert log_level_from_env("debug") == logging.DEBUG
    assert log_level_from_env("nonsense") == logging.WARNING


def test_summary_json_shape_complex():
    import cmath

    d = cmath.exp(0.25j)
    t = integrate(
        K.PIV,
        Params(0.5, 0.25),
        InitialData.raw(0.0, 0.7, -0.1, 0.4, field=__import__("painleve4").ScalarField.COMPLEX, direction=d),
        0.5,
    )
    doc = summary_json(t)
    assert doc["field"] == "complex"
    assert isinstance(doc["max_abs_c"], float)
