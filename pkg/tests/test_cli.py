import numpy as np
import pytest

from cpslearn.cli import main
from helpers import random_dataset


@pytest.fixture
def dataset_file(tmp_path):
    rng = np.random.default_rng(101)
    ds = random_dataset(rng, n_vars=5, n_rows=80, max_card=3)
    lines = [",".join(ds.names)]
    for row in ds.rows:
        lines.append(",".join(str(int(x)) for x in row))
    path = tmp_path / "data.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def score_file(tmp_path, dataset_file):
    out = tmp_path / "scores.psf"
    rc = main(["score", "--data", str(dataset_file), "--max-indeg", "2",
               "--out", str(out)])
    assert rc == 0
    return out


class TestCount:
    def test_dags(self, capsys):
        assert main(["count", "--dags", "10"]) == 0
        assert capsys.readouterr().out.strip() == "4175098976430598143"

    def test_orders(self, capsys):
        assert main(["count", "--orders", "10"]) == 0
        assert capsys.readouterr().out.strip() == "35184372088832"

    def test_cps(self, capsys):
        assert main(["count", "--cps", "100,3"]) == 0
        assert capsys.readouterr().out.strip() == "16180000"

    def test_bad_cps_spec(self, capsys):
        assert main(["count", "--cps", "100"]) == 1

    def test_usage_error_exit_2(self):
        with pytest.raises(SystemExit) as ei:
            main(["count", "--bogus", "1"])
        assert ei.value.code == 2

    def test_unknown_subcommand_exit_2(self):
        with pytest.raises(SystemExit) as ei:
            main(["frobnicate"])
        assert ei.value.code == 2


class TestScoreAndStats:
    def test_score_writes_parseable_file(self, score_file, capsys):
        from cpslearn import read_scores
        t = read_scores(str(score_file))
        assert t.n_vars == 5
        assert main(["stats", "--scores", str(score_file), "--max-indeg", "2"]) == 0
        out = capsys.readouterr().out
        assert "retained CPSs:" in out and "rate vs all possible" in out

    def test_no_legal_filter_keeps_everything(self, tmp_path, dataset_file):
        from cpslearn import read_scores
        raw_out = tmp_path / "raw.psf"
        assert main(["score", "--data", str(dataset_file), "--max-indeg", "2",
                     "--out", str(raw_out), "--no-legal-filter"]) == 0
        t = read_scores(str(raw_out))
        assert t.total_cps() == 5 * (1 + 4 + 6)

    def test_missing_data_file_exit_1(self, tmp_path):
        assert main(["score", "--data", str(tmp_path / "nope.csv"),
                     "--out", str(tmp_path / "o.psf")]) == 1


class TestPrune:
    def test_percent_zero_byte_identity(self, tmp_path, score_file):
        out = tmp_path / "p0.psf"
        assert main(["prune", "--scores", str(score_file), "--percent", "0",
                     "--out", str(out)]) == 0
        assert out.read_bytes() == score_file.read_bytes()

    def test_percent_out_of_range_exit_1(self, tmp_path, score_file):
        assert main(["prune", "--scores", str(score_file), "--percent", "120",
                     "--out", str(tmp_path / "x.psf")]) == 1

    def test_prune_shrinks(self, tmp_path, score_file):
        from cpslearn import read_scores
        out = tmp_path / "p90.psf"
        assert main(["prune", "--scores", str(score_file), "--percent", "90",
                     "--out", str(out)]) == 0
        assert read_scores(str(out)).total_cps() <= \
               read_scores(str(score_file)).total_cps()


class TestLearn:
    def test_prints_score_without_out(self, capsys, score_file):
        assert main(["learn", "--scores", str(score_file),
                     "--strategy", "exact"]) == 0
        out = capsys.readouterr().out.strip()
        float(out)  # a bare score

    def test_single_variable_exact(self, tmp_path, capsys):
        f = tmp_path / "one.psf"
        f.write_text("1\nA 1\n-2.079442 0\n")
        assert main(["learn", "--scores", str(f), "--strategy", "exact"]) == 0
        assert capsys.readouterr().out.strip() == "-2.079442"

    def test_dag_file_format(self, tmp_path, score_file, capsys):
        out = tmp_path / "g.dag"
        assert main(["learn", "--scores", str(score_file), "--strategy", "greedy",
                     "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 6
        assert all(" <-" in ln or ln.startswith("# score ") for ln in lines)
        assert lines[-1].startswith("# score ")
        score_stdout = capsys.readouterr().out.strip()
        assert lines[-1] == f"# score {score_stdout}"

    def test_learn_deterministic_bytes(self, tmp_path, score_file, capsys):
        a, b = tmp_path / "a.dag", tmp_path / "b.dag"
        args = ["learn", "--scores", str(score_file), "--strategy", "order",
                "--seed", "11", "--restarts", "5"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()


class TestSweep:
    def test_writes_both_files(self, tmp_path, score_file, capsys):
        prefix = tmp_path / "rep"
        assert main(["sweep", "--scores", str(score_file), "--levels", "0,50,90",
                     "--strategy", "exact", "--out", str(prefix)]) == 0
        capsys.readouterr()
        csv = (tmp_path / "rep.csv").read_text()
        txt = (tmp_path / "rep.txt").read_text()
        assert csv.splitlines()[0] == "p,cps_graph,cps_per_node,score,delta,time_to_best_s"
        assert "Pruning" in txt

    def test_reproducible_with_virtual_clock(self, tmp_path, score_file, capsys):
        args = ["sweep", "--scores", str(score_file), "--levels", "0,40,80",
                "--strategy", "order", "--seed", "7", "--restarts", "4",
                "--virtual-clock"]
        p1, p2 = tmp_path / "r1", tmp_path / "r2"
        assert main(args + ["--out", str(p1)]) == 0
        assert main(args + ["--out", str(p2)]) == 0
        capsys.readouterr()
        assert (tmp_path / "r1.csv").read_bytes() == (tmp_path / "r2.csv").read_bytes()
        assert (tmp_path / "r1.txt").read_bytes() == (tmp_path / "r2.txt").read_bytes()

    def test_levels_without_zero_exit_1(self, tmp_path, score_file):
        assert main(["sweep", "--scores", str(score_file), "--levels", "10,50",
                     "--strategy", "exact", "--out", str(tmp_path / "r")]) == 1
