from __future__ import annotations

import csv
import io
import json
import math

import pytest

from chofisher import cli
from chofisher.errors import BoundViolationError
from chofisher.reproduce import FIG_HEADER, FIG_RADII


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text, delimiter=","):
    return list(csv.DictReader(io.StringIO(text), delimiter=delimiter))


@pytest.mark.parametrize(
    "argv, expected",
    [
        (("--system", "cho", "--state", "1s", "--rc", "0.5"), 19.77453418),
        (("--system", "pisb", "--state", "1s", "--rc", "1"), 4.93480220),
        (("--system", "fho", "--state", "2p"), 4.5),
    ],
)
def test_energy_examples(capsys, argv, expected):
    code, out, err = run(capsys, "energy", *argv)
    assert code == 0
    (row,) = rows(out)
    assert float(row["energy"]) == pytest.approx(expected, rel=1e-8)
    assert "hartree" in err


@pytest.mark.parametrize(
    "argv, i_r, i_p",
    [
        (("--state", "1d", "--m", "2", "--rc", "0.1"), 7552.714578, None),
        (("--system", "fho", "--state", "1f", "--m", "3"), 6.0, 6.0),
        (("--state", "2p", "--m", "1", "--rc", "0.5"), 781.7758499, None),
    ],
)
def test_fisher_examples(capsys, argv, i_r, i_p):
    code, out, _ = run(capsys, "fisher", *argv)
    assert code == 0
    (row,) = rows(out)
    assert float(row["I_r"]) == pytest.approx(i_r, rel=1e-8)
    if i_p is not None:
        assert float(row["I_p"]) == pytest.approx(i_p, rel=1e-8)
    assert float(row["bound_low"]) <= float(row["I_t"]) * (1 + 1e-9)


def test_omega2_flag(capsys):
    _, out, _ = run(capsys, "energy", "--system", "fho", "--state", "1s", "--omega2", "4")
    assert float(rows(out)[0]["energy"]) == pytest.approx(3.0, rel=1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ("fisher", "--state", "1p", "--m", "2", "--rc", "1"),
        ("energy", "--state", "1x", "--rc", "1"),
        ("energy", "--state", "1s"),
        ("energy", "--system", "fho", "--state", "1s", "--rc", "2"),
        ("energy", "--state", "1s", "--rc", "1", "--omega", "1", "--omega2", "1"),
        ("energy", "--state", "1s", "--rc", "-1"),
        ("sweep", "--states", "1s", "--rc", "1", "--rc-range", "1:2:3"),
        ("sweep", "--states", "1s", "--rc-range", "1:2"),
        ("sweep", "--states", "1s", "--rc", "1", "--outputs", "nonsense"),
        ("fisher", "--state", "1s", "--rc", "1", "--quad-order", "8"),
        ("bogus",),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == cli.EXIT_USAGE


def test_solver_failure_exit_3(capsys):
    code, _, err = run(capsys, "fisher", "--state", "3d", "--rc", "2", "--pmax", "0.5")
    assert code == cli.EXIT_SOLVER
    assert "solver failure" in err


def test_invariant_violation_exit_4(capsys, monkeypatch):
    def broken(*args, **kwargs):
        raise BoundViolationError("forced")

    monkeypatch.setattr(cli, "state_row", broken)
    code, _, err = run(capsys, "fisher", "--state", "1s", "--rc", "1")
    assert code == cli.EXIT_INVARIANT
    assert "forced" in err


def test_io_failure_exit_5(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, _ = run(capsys, "reproduce", "--target", "table1", "--out", str(blocker))
    assert code == cli.EXIT_IO
    code, _, _ = run(capsys, "energy", "--state", "1s", "--rc", "1", "--out", str(tmp_path / "no" / "f.csv"))
    assert code == cli.EXIT_IO


def test_empty_sweep_writes_header_only(capsys):
    code, out, _ = run(capsys, "sweep", "--states", "", "--rc", "1")
    assert code == 0
    assert out.strip().split(",")[0] == "system"
    assert len(out.strip().splitlines()) == 1


def test_sweep_order_and_workers(capsys):
    argv = ("sweep", "--states", "1s,1p:1", "--rc", "0.5,inf", "--omega2", "1,4")
    _, serial, _ = run(capsys, *argv)
    _, parallel, _ = run(capsys, *argv, "--workers", "3")
    assert serial == parallel
    got = [(r["label"], r["m"], r["omega"], r["rc"], r["system"]) for r in rows(serial)]
    assert got == [
        ("1s", "0", "1", "0.5", "cho"), ("1s", "0", "1", "inf", "fho"),
        ("1s", "0", "2", "0.5", "cho"), ("1s", "0", "2", "inf", "fho"),
        ("1p", "1", "1", "0.5", "cho"), ("1p", "1", "1", "inf", "fho"),
        ("1p", "1", "2", "0.5", "cho"), ("1p", "1", "2", "inf", "fho"),
    ]


def test_sweep_rows_round_trip_through_fisher(capsys):
    _, out, _ = run(capsys, "sweep", "--states", "2p:1", "--rc-range", "0.3:3:4", "--omega", "1.7")
    for row in rows(out):
        _, single, _ = run(
            capsys, "fisher", "--system", row["system"], "--state", row["label"], "--m", row["m"],
            "--omega", row["omega"], "--rc", row["rc"],
        )
        (again,) = rows(single)
        for key in ("energy", "I_r", "I_p", "I_t", "bound_low", "bound_high"):
            assert again[key] == row[key]


def test_sweep_tsv_and_moments(capsys):
    _, out, _ = run(capsys, "sweep", "--states", "1s", "--rc", "1", "--format", "tsv", "--outputs", "moments")
    (row,) = rows(out, "\t")
    assert set(row) >= {"r2", "rm2", "p2", "pm2", "route_residual"}
    assert "energy" not in row


def test_config_file_precedence(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "c.ini"
    cfg.write_text("format = tsv  # comment\nquad-order = 96\n")
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    _, out, _ = run(capsys, "energy", "--state", "1s", "--rc", "1")
    assert "\t" in out
    _, out, _ = run(capsys, "energy", "--state", "1s", "--rc", "1", "--format", "csv")
    assert "\t" not in out and "," in out
    args = cli.build_parser().parse_args(["fisher", "--state", "1s", "--rc", "1"])
    assert cli.resolve_config(args).quad_order == 96
    cfg.write_text("colour = blue\n")
    code, _, _ = run(capsys, "energy", "--state", "1s", "--rc", "1")
    assert code == cli.EXIT_USAGE


def test_out_file(capsys, tmp_path):
    target = tmp_path / "e.csv"
    code, out, _ = run(capsys, "energy", "--state", "1s", "--rc", "1", "--out", str(target))
    assert code == 0 and out == ""
    assert float(rows(target.read_text())[0]["energy"]) > 0


def test_reproduce_table_is_deterministic(capsys, tmp_path):
    for sub in ("a", "b"):
        assert run(capsys, "reproduce", "--target", "table1", "--out", str(tmp_path / sub))[0] == 0
    first = (tmp_path / "a" / "table1.csv").read_bytes()
    assert first == (tmp_path / "b" / "table1.csv").read_bytes()
    meta = json.loads((tmp_path / "a" / "run.json").read_text())
    assert meta["files"] == ["table1.csv"]


@pytest.mark.slow
def test_reproduce_figure_outputs(capsys, tmp_path):
    assert run(capsys, "reproduce", "--target", "fig2", "--out", str(tmp_path), "--workers", "4")[0] == 0
    data = list(csv.reader((tmp_path / "fig2.csv").open()))
    assert tuple(data[0]) == FIG_HEADER
    radii = [float(r[3]) for r in data[1:] if r[1] == "0" and r[2] == "1"]
    assert radii[:-1] == list(FIG_RADII) and len(radii) == 41 and math.isinf(radii[-1])
    for name in ("fig2_I_r_m0.svg", "fig2_I_r_m1.svg", "fig2_I_p_m0.svg", "fig2_I_p_m1.svg"):
        text = (tmp_path / name).read_text()
        assert text.startswith("<svg") or text.startswith("<?xml")
        assert "polyline" in text or "path" in text
