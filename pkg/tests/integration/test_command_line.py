"""Integration tests for main(): output, exit status and the result cache."""

import json

from src.main import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from src.reports.report_generator import CONJECTURE_BANNER, P2_COMPUTATION_BANNER


class TestCommands:
    """Test one invocation per command family."""

    def test_pseries_table(self, isolated_run, capsys):
        """Test the p-series table and a PASS exit."""
        assert main(["pseries", "--p", "3", "--max-degree", "16", "--no-cache"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert "0 | 0 | 3 | 0" in lines
        assert "2 | 4 | -8*v1 | v1" in lines

    def test_homology_json(self, isolated_run, capsys):
        """Test JSON output of a bigraded homology run."""
        argv = ["homology", "--p", "3", "--n", "1", "--max-degree", "8", "--bigraded",
                "--format", "json", "--no-cache"]
        assert main(argv) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["kind"] == "homology"
        assert document["window"] == [1, 7]

    def test_composite_prime_is_usage_error(self, isolated_run, capsys):
        """Test p=4 exits 2 with nothing on stdout."""
        assert main(["homology", "--p", "4", "--n", "1", "--no-cache"]) == EXIT_USAGE
        assert capsys.readouterr().out == ""

    def test_p2_without_probe(self, isolated_run):
        """Test p=2 without --conjecture-probe exits 2."""
        assert main(["homology", "--p", "2", "--n", "1", "--max-degree", "6", "--no-cache"]) == EXIT_USAGE

    def test_p2_homology_banner(self, isolated_run, capsys):
        """Test a p=2 homology run is labelled as a plain computation."""
        argv = ["homology", "--p", "2", "--n", "1", "--max-degree", "6", "--no-cache",
                "--conjecture-probe"]
        assert main(argv) == EXIT_OK
        assert capsys.readouterr().out.splitlines()[0] == P2_COMPUTATION_BANNER

    def test_p2_verify_csv_is_labelled(self, isolated_run, capsys):
        """Test p=2 CSV output keeps the conjecture banner and the valid degrees."""
        argv = ["verify", "main", "--p", "2", "--n", "2", "--max-degree", "6", "--no-cache",
                "--conjecture-probe", "--format", "csv"]
        assert main(argv) in (EXIT_OK, EXIT_FAIL)
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == CONJECTURE_BANNER
        assert "conjecture" in lines[0].lower()
        assert lines[1].startswith("# valid degrees ")
        assert lines[2].startswith("degree,")

    def test_p2_example(self, isolated_run, capsys):
        """Test the worked p=2 example prints its conclusion."""
        assert main(["p2-example"]) == EXIT_OK
        assert any(line.startswith("# conclusion:") for line in capsys.readouterr().out.splitlines())

    def test_stretch_negative_control(self, isolated_run):
        """Test n <= k products do not vanish and the run exits 1."""
        assert main(["stretch", "--p", "3", "--k", "1", "--n", "1"]) == EXIT_FAIL

    def test_stretch_vanishing(self, isolated_run):
        """Test n > k products vanish."""
        assert main(["stretch", "--p", "3", "--k", "1", "--n", "2", "--seed", "3"]) == EXIT_OK

    def test_inclusive_control_exits_1(self, isolated_run, capsys):
        """Test the widened L range fails from the command line."""
        argv = ["verify", "main", "--p", "3", "--n", "2", "--max-degree", "10",
                "--inclusive-l-range", "--no-cache"]
        assert main(argv) == EXIT_FAIL
        assert capsys.readouterr().out.splitlines()[-1] == "# verdict: FAIL"

    def test_vandermonde_without_k(self, isolated_run):
        """Test vandermonde needs --k or --deltas."""
        assert main(["vandermonde", "--p", "3"]) == EXIT_USAGE

    def test_vandermonde_window_too_small(self, isolated_run, capsys):
        """Test a window below degree k + 2 exits 2 with nothing on stdout."""
        assert main(["vandermonde", "--p", "3", "--k", "1", "--window", "1"]) == EXIT_USAGE
        assert capsys.readouterr().out == ""

    def test_negative_trials(self, isolated_run):
        """Test a negative trial count exits 2."""
        argv = ["stretch", "--p", "3", "--k", "1", "--n", "2", "--trials", "-3"]
        assert main(argv) == EXIT_USAGE

    def test_log_file_written(self, isolated_run):
        """Test a run leaves a log file under logs/."""
        main(["pseries", "--p", "3", "--max-degree", "8", "--no-cache"])
        assert list((isolated_run / "logs").glob("*.log"))


class TestCachedRuns:
    """Test runs through the result cache."""

    ARGV = ["homology", "--p", "3", "--n", "1", "--max-degree", "8"]

    def test_second_run_is_identical(self, isolated_run, capsys):
        """Test a cache hit reproduces the output byte for byte."""
        argv = self.ARGV + ["--cache-dir", str(isolated_run / "cache")]
        assert main(argv) == EXIT_OK
        first = capsys.readouterr().out
        assert (isolated_run / "cache" / "results.sqlite").exists()

        assert main(argv) == EXIT_OK
        assert capsys.readouterr().out == first
        log_text = (isolated_run / "logs" / "homology_run.log").read_text(encoding="utf-8")
        assert "served from cache" in log_text

        assert main(argv + ["--audit"]) == EXIT_OK
        assert capsys.readouterr().out == first

    def test_environment_cache_dir(self, isolated_run, monkeypatch):
        """Test BP_ENGINE_CACHE_DIR places the cache when no flag is given."""
        monkeypatch.setenv("BP_ENGINE_CACHE_DIR", str(isolated_run / "env-cache"))
        assert main(self.ARGV) == EXIT_OK
        assert (isolated_run / "env-cache" / "results.sqlite").exists()
