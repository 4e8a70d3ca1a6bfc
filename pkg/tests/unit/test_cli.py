"""Unit tests for the argument parser and RunConfig validation."""

import pytest

from src.main import EXIT_FAIL, EXIT_OK, RunConfig, _exit_status
from src.ui.cli import setup_parser
from src.utils.error_handler import ConjecturalPrimeError, UsageError
from src.utils.logging_factory import LoggingFactory

CONFIG = {
    "engine": {"default_max_degree": 20, "generator_scheme": "hazewinkel"},
    "cache": {"enabled": True, "directory": ".bp_cache", "filename": "results.sqlite"},
    "cohomology": {"random_trials": 25, "seed": 5, "vandermonde_det_max_size": 9},
    "output": {"default_format": "table"},
}


def run_config(*argv):
    return RunConfig.from_args(setup_parser().parse_args(list(argv)), CONFIG)


class TestParser:
    """Test subcommands and shared flags."""

    def test_verify_main(self):
        """Test nested verify targets and common flags."""
        args = setup_parser().parse_args(
            ["verify", "main", "--p", "3", "--n", "2", "--max-degree", "20", "--format", "json"]
        )
        assert (args.command, args.target) == ("verify", "main")
        assert (args.p, args.n, args.max_degree, args.format) == (3, 2, 20, "json")
        assert not args.inclusive_l_range

    def test_squeeze_needs_l(self):
        """Test argparse rejects a squeeze run without --l."""
        with pytest.raises(SystemExit) as excinfo:
            setup_parser().parse_args(["verify", "squeeze", "--p", "3", "--k", "2"])
        assert excinfo.value.code == 2

    def test_unknown_format(self):
        """Test format choices are enforced."""
        with pytest.raises(SystemExit):
            setup_parser().parse_args(["pseries", "--p", "3", "--format", "xml"])

    def test_deltas_list(self):
        """Test --deltas parses a comma-separated list."""
        args = setup_parser().parse_args(["vandermonde", "--p", "3", "--deltas", "1,2,2"])
        assert args.deltas == [1, 2, 2]

    def test_bad_deltas(self):
        """Test non-integer deltas are a usage error."""
        with pytest.raises(SystemExit):
            setup_parser().parse_args(["vandermonde", "--p", "3", "--deltas", "1,x"])


class TestRunConfig:
    """Test flag and config merging and validation."""

    def test_defaults_from_config(self):
        """Test unspecified values come from the config."""
        run = run_config("homology", "--p", "3", "--n", "1")
        assert run.command == "homology"
        assert run.max_degree == 20
        assert run.scheme == "hazewinkel"
        assert run.output_format == "table"
        assert run.use_cache

    def test_flags_override(self, tmp_path):
        """Test flags win over config values."""
        run = run_config(
            "homology", "--p", "3", "--n", "1", "--max-degree", "8", "--singular-model",
            "--no-cache", "--cache-dir", str(tmp_path),
        )
        assert run.max_degree == 8
        assert run.scheme == "singular"
        assert not run.use_cache
        assert run.cache_dir == str(tmp_path)

    def test_verify_command_name(self):
        """Test verify targets become verify-<target>."""
        assert run_config("verify", "tor", "--p", "3", "--k", "1").command == "verify-tor"

    def test_cohomology_seed_from_config(self):
        """Test stretch picks up trials and seed from the config."""
        run = run_config("stretch", "--p", "3", "--k", "2", "--n", "3")
        assert (run.trials, run.seed) == (25, 5)

    def test_composite_prime_rejected(self):
        """Test p must be prime."""
        with pytest.raises(UsageError):
            run_config("pseries", "--p", "4")

    def test_nonpositive_values_rejected(self):
        """Test degree bound and ranks must be positive."""
        with pytest.raises(UsageError):
            run_config("pseries", "--p", "3", "--max-degree", "0")
        with pytest.raises(UsageError):
            run_config("homology", "--p", "3", "--n", "0")

    def test_negative_trials_rejected(self):
        """Test --trials below zero is refused and zero is allowed."""
        with pytest.raises(UsageError):
            run_config("stretch", "--p", "3", "--k", "2", "--n", "3", "--trials", "-1")
        assert run_config("stretch", "--p", "3", "--k", "2", "--n", "3", "--trials", "0").trials == 0

    def test_vandermonde_needs_k_or_deltas(self):
        """Test vandermonde without --k or --deltas is refused."""
        with pytest.raises(UsageError):
            run_config("vandermonde", "--p", "3")

    def test_p2_needs_probe_flag(self):
        """Test p=2 requires --conjecture-probe."""
        with pytest.raises(ConjecturalPrimeError):
            run_config("homology", "--p", "2", "--n", "1")
        assert run_config("homology", "--p", "2", "--n", "1", "--conjecture-probe").p == 2

    def test_p2_example_needs_nothing(self):
        """Test the p=2 example takes no prime."""
        assert run_config("p2-example").command == "p2-example"

    def test_cache_inputs_include_degree_bound(self):
        """Test D is part of the cache inputs."""
        assert run_config("pseries", "--p", "3", "--max-degree", "12").cache_inputs()["max_degree"] == 12


class TestExitStatus:
    """Test verdict to exit status mapping."""

    def test_statuses(self):
        """Test FAIL exits 1 and everything else 0."""
        logger = LoggingFactory.get_logger("tests.exit_status")
        assert _exit_status({"verdict": "FAIL"}, logger) == EXIT_FAIL
        assert _exit_status({"verdict": "PASS"}, logger) == EXIT_OK
        assert _exit_status({"verdict": "VACUOUS"}, logger) == EXIT_OK
        assert _exit_status({"verdict": "INCONCLUSIVE"}, logger) == EXIT_OK
        assert _exit_status({}, logger) == EXIT_OK
