import csv

import pytest

from pathfield.cli import main
from pathfield.paths import Scheme


def read_paths_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    grouped = {}
    for row in rows:
        grouped.setdefault(int(row["path_id"]), []).append(
            (float(row["x"]), float(row["y"])))
    return grouped


# -------------------------------------------------------------------- paths

def test_paths_bee_hive_loops(tmp_path):
    out = tmp_path / "out"
    rc = main(["paths", "--scheme", "bee_hive", "--m", "20", "--gamma", "0.05",
               "--seed", "7", "--out", str(out)])
    assert rc == 0
    grouped = read_paths_csv(out / "paths_bee_hive.csv")
    assert len(grouped) == 20
    for pts in grouped.values():
        assert pts[0] == pts[-1]
    assert (out / "trajectories.svg").exists()


def test_paths_scattered_single_point_records(tmp_path):
    out = tmp_path / "out"
    rc = main(["paths", "--scheme", "scattered", "--m", "100", "--out", str(out),
               "--no-svg"])
    assert rc == 0
    grouped = read_paths_csv(out / "paths_scattered.csv")
    assert len(grouped) == 100
    assert all(len(pts) == 1 for pts in grouped.values())
    assert not (out / "trajectories.svg").exists()


def test_paths_same_seed_identical_bytes(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    args = ["paths", "--scheme", "directed_inner", "--m", "15", "--seed", "3"]
    assert main(args + ["--out", str(out_a)]) == 0
    assert main(args + ["--out", str(out_b)]) == 0
    name = "paths_directed_inner.csv"
    assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
    assert (out_a / "trajectories.svg").read_bytes() == (out_b / "trajectories.svg").read_bytes()


@pytest.mark.filterwarnings("ignore:line point sampling")
def test_paths_all_schemes_panel_per_scheme(tmp_path):
    out = tmp_path / "out"
    rc = main(["paths", "--m", "5", "--p", "6", "--out", str(out)])
    assert rc == 0
    svg = (out / "trajectories.svg").read_text()
    for scheme in Scheme:
        assert (out / f"paths_{scheme.value}.csv").exists()
        assert f">{scheme.value}</text>" in svg


def test_paths_invalid_scheme_is_usage_error(tmp_path, capsys):
    rc = main(["paths", "--scheme", "zigzag", "--out", str(tmp_path)])
    assert rc == 2
    err = capsys.readouterr().err
    assert "zigzag" in err and "scattered" in err  # lists the valid names


# -------------------------------------------------------------------- sweep

def test_sweep_writes_csv_and_summary(tmp_path, capsys):
    out = tmp_path / "out"
    rc = main(["sweep", "--scheme", "scattered", "--b", "1", "--m", "1.5,2",
               "--iters", "2", "--out", str(out)])
    assert rc == 0
    captured = capsys.readouterr()
    assert "mean_cond" in captured.out
    lines = (out / "sweep.csv").read_text().strip().splitlines()
    assert lines[0] == "scheme,b,m,gamma,aware,mean_cond,std_cond,mean_rel_err,excluded"
    assert len(lines) == 3


def test_sweep_reproducible_byte_for_byte(tmp_path):
    args = ["sweep", "--scheme", "bee_hive,line_inner_avg", "--b", "1",
            "--m", "1.5", "--iters", "3", "--seed", "5"]
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(out_a)]) == 0
    assert main(args + ["--out", str(out_b)]) == 0
    assert (out_a / "sweep.csv").read_bytes() == (out_b / "sweep.csv").read_bytes()


def test_sweep_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("schemes = scattered\nb = 1\nm_multiples = 1.5\n"
                   "iterations = 5\nseed = 9\n")
    out_flag = tmp_path / "flag"
    out_direct = tmp_path / "direct"
    assert main(["sweep", "--config", str(cfg), "--iters", "2",
                 "--out", str(out_flag)]) == 0
    assert main(["sweep", "--scheme", "scattered", "--b", "1", "--m", "1.5",
                 "--iters", "2", "--seed", "9", "--out", str(out_direct)]) == 0
    assert (out_flag / "sweep.csv").read_bytes() == (out_direct / "sweep.csv").read_bytes()


def test_sweep_invalid_config_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("m_multiples = 0.5\n")
    rc = main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_sweep_unaware_for_unsupported_scheme_is_usage_error(tmp_path, capsys):
    rc = main(["sweep", "--scheme", "random_walk", "--unaware", "--b", "1",
               "--m", "1.5", "--iters", "1", "--out", str(tmp_path / "out")])
    assert rc == 2
    assert "unaware" in capsys.readouterr().err


# --------------------------------------------------------------------- rank

@pytest.fixture(scope="module")
def ranking_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("rank")
    rc = main(["sweep", "--scheme", "all", "--b", "1", "--m", "2", "--gamma", "0.1",
               "--iters", "2", "--no-reconstruct", "--out", str(out)])
    assert rc == 0
    return out / "sweep.csv"


def test_rank_prints_all_schemes(ranking_csv, capsys):
    rc = main(["rank", "--results", str(ranking_csv), "--m", "18", "--gamma", "0.1"])
    assert rc == 0
    out = capsys.readouterr().out
    for scheme in Scheme:
        assert scheme.value in out
    assert out.strip().splitlines()[1].startswith("1.")


def test_rank_missing_cell_is_runtime_error(ranking_csv, capsys):
    rc = main(["rank", "--results", str(ranking_csv), "--m", "999", "--gamma", "0.1"])
    assert rc == 3
    assert "no cell" in capsys.readouterr().err


# --------------------------------------------------------------------- plot

def test_plot_panel_per_scheme(ranking_csv, tmp_path):
    out = tmp_path / "plots"
    rc = main(["plot", "--results", str(ranking_csv), "--out", str(out)])
    assert rc == 0
    files = sorted(p.name for p in out.glob("cond_*.svg"))
    assert len(files) == len(Scheme)


def test_plot_single_cell_csv(tmp_path):
    out = tmp_path / "out"
    assert main(["sweep", "--scheme", "scattered", "--b", "1", "--m", "1.5",
                 "--iters", "1", "--out", str(out)]) == 0
    plots = tmp_path / "plots"
    assert main(["plot", "--results", str(out / "sweep.csv"), "--out", str(plots)]) == 0
    svg = (plots / "cond_scattered.svg").read_text()
    assert "<circle" in svg


def test_plot_empty_csv_errors_without_output(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("scheme,b,m,gamma,aware,mean_cond,std_cond,mean_rel_err,excluded\n")
    plots = tmp_path / "plots"
    rc = main(["plot", "--results", str(empty), "--out", str(plots)])
    assert rc == 3
    assert "no result rows" in capsys.readouterr().err
    assert not plots.exists() or not list(plots.glob("*.svg"))


def test_plot_malformed_csv_names_line(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("scheme,b,m,gamma,aware,mean_cond,std_cond,mean_rel_err,excluded\n"
                   "scattered,1,14,0.05,true,2.0,0.1,0.0,0\n"
                   "scattered,1,xx,0.05,true,2.0,0.1,0.0,0\n")
    rc = main(["plot", "--results", str(bad), "--out", str(tmp_path / "plots")])
    assert rc == 3
    assert "line 3" in capsys.readouterr().err


# ------------------------------------------------------------------- parser

def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 2


def test_missing_required_flag_exits_2():
    with pytest.raises(SystemExit) as excinfo:
        main(["rank", "--m", "10"])
    assert excinfo.value.code == 2
