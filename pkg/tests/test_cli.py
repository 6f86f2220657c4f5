import csv
import math
from pathlib import Path

import pytest

from afoutage.cli import CSV_HEADER, CurveRow, OutageCurve, SweepSpec, emit_csv, main, run_sweep

DATA = Path(__file__).parent / "data"


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestSweepSpec:
    def test_grid_inclusive(self):
        assert SweepSpec((2,), snr_start_db=0, snr_stop_db=30, snr_step_db=2).snr_grid() == list(range(0, 31, 2))

    def test_grid_has_no_drift(self):
        grid = SweepSpec((2,), snr_start_db=0, snr_stop_db=1, snr_step_db=0.1).snr_grid()
        assert grid == [i * 0.1 for i in range(11)]

    @pytest.mark.parametrize("kwargs", [
        dict(hops_list=()),
        dict(hops_list=(0, 2)),
        dict(hops_list=(2,), snr_step_db=0),
        dict(hops_list=(2,), snr_start_db=10, snr_stop_db=0),
        dict(hops_list=(2,), trials=0),
        dict(hops_list=(2,), gain_sq=-1.0),
        dict(hops_list=(2,), gain_sq="auto"),
        dict(hops_list=(3,), gain_sq="derived", power_offsets_db=(0.0, 1.0)),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SweepSpec(**kwargs)

    def test_figure_axis_convention(self):
        cfg = SweepSpec((3,), gain_sq=2.0).build_config(3, 20.0)
        assert cfg.tx_powers[0] == 100.0
        assert cfg.noise_vars == (1.0, 1.0, 1.0)

    def test_derived_config(self):
        spec = SweepSpec((2,), gain_sq="derived", power_offsets_db=(0.0, 10.0), noise_db=(0.0, 3.0))
        cfg = spec.build_config(2, 10.0)
        assert cfg.tx_powers == pytest.approx((10.0, 100.0))
        assert cfg.noise_vars[1] == pytest.approx(10 ** 0.3)


class TestRunSweep:
    def test_single_hop_row(self):
        curve = run_sweep(SweepSpec((1,), snr_start_db=10, snr_stop_db=10, trials=200_000, seed=1))
        (row,) = curve.rows
        p = 1 - math.exp(-0.1)
        assert row.theorem1 == pytest.approx(p, rel=1e-15)
        assert row.approx_clamped == pytest.approx(p, rel=1e-15)
        assert abs(row.mc_p - p) <= 4 * row.mc_ci

    def test_rows_and_ranges(self):
        spec = SweepSpec((4, 2, 3), gain_sq=2.0, snr_stop_db=10, trials=5000)
        curve = run_sweep(spec)
        assert len(curve.rows) == 3 * len(spec.snr_grid())
        assert [(r.n_hops, r.snr_db) for r in curve.rows] == sorted((r.n_hops, r.snr_db) for r in curve.rows)
        for r in curve.rows:
            for v in (r.mc_p, r.mc_ci, r.theorem1, r.approx_clamped):
                assert 0.0 <= v <= 1.0
            assert r.approx_raw >= 0.0

    def test_bound_below_mc_fig1(self):
        curve = run_sweep(SweepSpec((2, 3, 4), gain_sq=1.0, trials=100_000, seed=42))
        assert all(r.theorem1 <= r.mc_p + 4 * r.mc_ci for r in curve.rows)

    def test_parallel_matches_serial(self):
        spec = SweepSpec((2, 3), gain_sq=2.0, snr_stop_db=12, trials=20_000, seed=5)
        assert run_sweep(spec).rows == run_sweep(spec, workers=4).rows


class TestEmitCsv:
    def test_empty_curve(self, tmp_path):
        p = tmp_path / "e.csv"
        emit_csv(OutageCurve(), p)
        assert p.read_text() == ",".join(CSV_HEADER) + "\n"

    def test_single_row(self, tmp_path):
        p = tmp_path / "one.csv"
        emit_csv(OutageCurve([CurveRow(3, 12.0, 0.25, 0.001, 0.125, 1.0625, 1.0)]), p)
        lines = p.read_text().splitlines()
        assert lines[0] == "n_hops,snr_db,mc_p,mc_ci,theorem1,approx_raw,approx_clamped"
        assert lines[1] == "3,12,0.25,0.001,0.125,1.0625,1"

    def test_full_precision(self, tmp_path):
        p = tmp_path / "fp.csv"
        x = 0.1234567890123456789
        emit_csv(OutageCurve([CurveRow(2, 0.0, x, x, x, x, x)]), p)
        assert float(read_rows(p)[0]["theorem1"]) == x

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OSError, match="missing"):
            emit_csv(OutageCurve(), tmp_path / "missing" / "x.csv")


class TestMain:
    def test_writes_csv(self, tmp_path):
        out = tmp_path / "c.csv"
        assert main(["sweep", "--hops", "1,2", "--gain-sq", "2", "--snr", "0:4:2",
                     "--trials", "1000", "--out", str(out)]) == 0
        rows = read_rows(out)
        assert len(rows) == 6
        assert list(rows[0]) == list(CSV_HEADER)

    def test_byte_identical_reruns(self, tmp_path):
        args = ["sweep", "--hops", "2,3,4", "--gain-sq", "2", "--snr", "0:30:2", "--trials", "20000",
                "--seed", "42", "--refine"]
        a, b, c = (tmp_path / f"{k}.csv" for k in "abc")
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert main(args + ["--out", str(c), "--workers", "6"]) == 0
        assert a.read_bytes() == b.read_bytes() == c.read_bytes()

    def test_derived_mode(self, tmp_path):
        out = tmp_path / "d.csv"
        with pytest.warns(UserWarning):
            code = main(["sweep", "--hops", "3", "--gain-sq", "derived", "--powers", "0,3,3",
                         "--noise", "0,0,1", "--snr", "0:4:2", "--trials", "1000", "--out", str(out)])
        assert code == 0
        assert len(read_rows(out)) == 3

    def test_no_refine_flag(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        base = ["sweep", "--hops", "4", "--snr", "10:10:1", "--trials", "100"]
        main(base + ["--out", str(a)])
        main(base + ["--no-refine", "--out", str(b)])
        assert float(read_rows(a)[0]["approx_raw"]) < float(read_rows(b)[0]["approx_raw"])

    def test_validation_error_exit_code(self, tmp_path, capsys):
        assert main(["sweep", "--hops", "2", "--snr", "10:0:2", "--out", str(tmp_path / "x.csv")]) == 2
        assert "invalid configuration" in capsys.readouterr().err
        assert main(["sweep", "--hops", "2", "--powers", "0,1", "--out", str(tmp_path / "x.csv")]) == 2

    def test_accuracy_error_exit_code(self, tmp_path, capsys):
        # tiny gains push the effective threshold past the supported domain
        code = main(["sweep", "--hops", "6", "--gain-sq", "0.001", "--snr", "0:0:1", "--trials", "100",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 3
        assert "accuracy error" in capsys.readouterr().err

    def test_io_error_exit_code(self, tmp_path, capsys):
        code = main(["sweep", "--hops", "2", "--snr", "0:0:1", "--trials", "10",
                     "--out", str(tmp_path / "nope" / "x.csv")])
        assert code == 4
        assert "nope" in capsys.readouterr().err

    def test_bad_flag_syntax(self):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--snr", "0-30", "--out", "x.csv"])
        assert exc.value.code == 2


@pytest.mark.parametrize("name,gain", [("fig1_golden.csv", 1.0), ("fig3_golden.csv", 2.0)])
def test_golden_curves(name, gain):
    """Regenerated curves match the committed reference data."""
    golden = read_rows(DATA / name)
    curve = run_sweep(SweepSpec((2, 3, 4), gain_sq=gain, trials=20_000, seed=42, refine=True))
    assert len(curve.rows) == len(golden)
    for row, ref in zip(curve.rows, golden):
        assert row.n_hops == int(ref["n_hops"]) and row.snr_db == float(ref["snr_db"])
        assert row.mc_p == float(ref["mc_p"])
        for col in ("theorem1", "approx_raw", "approx_clamped"):
            assert getattr(row, col) == pytest.approx(float(ref[col]), rel=1e-12, abs=1e-15)
