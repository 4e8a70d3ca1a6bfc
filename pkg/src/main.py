"""Main entry point for the BP homology engine.

Parses the command line, builds a RunConfig from flags and config.yaml,
computes (or fetches from the result cache) one document, renders it to
stdout and maps verdicts to the exit status: 0 for PASS (VACUOUS and
INCONCLUSIVE warn), 1 for FAIL or a failed invariant, 2 for usage errors.
"""

import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import sympy

from src.chains.complex import assemble_complex
from src.chains.homology import bigraded_homology, homology_table
from src.coefficients.pseries import compute_p_series
from src.cohomology.checks import (
    multi_factor_surjectivity,
    p2_counterexample,
    stretch_check,
    vandermonde_surjectivity,
)
from src.reports.report_generator import (
    ReportGenerator,
    homology_document,
    pseries_document,
)
from src.ui.cli import setup_parser
from src.utils.config_manager import ConfigError, ConfigManager
from src.utils.error_handler import ConjecturalPrimeError, EngineError, UsageError
from src.utils.logging_factory import LoggingFactory
from src.utils.result_cache import ResultCache, resolve_cache_dir
from src.verification.kunneth import verify_level, verify_theorem_main, verify_tor
from src.verification.probes import annihilator_probe, squeeze_evidence, verify_kernel_lemma
from src.verification.structure_table import MODE_CONJECTURE_PROBE

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

# Commands whose documents are worth storing
CACHED_COMMANDS = {
    "pseries",
    "homology",
    "verify-main",
    "verify-tor",
    "verify-level",
    "verify-kernel",
    "verify-squeeze",
    "verify-annihilator",
}


@dataclass
class RunConfig:
    """Everything one invocation needs, flags layered over config.yaml."""

    command: str
    p: Optional[int] = None
    n: Optional[int] = None
    k: Optional[int] = None
    l: Optional[int] = None
    max_degree: int = 20
    output_format: str = "table"
    cache_dir: str = ".bp_cache"
    cache_filename: str = "results.sqlite"
    use_cache: bool = True
    audit: bool = False
    bigraded: bool = False
    singular_model: bool = False
    conjecture_probe: bool = False
    inclusive_l_range: bool = False
    progress: bool = False
    scheme: str = "hazewinkel"
    window: Optional[int] = None
    deltas: Optional[List[int]] = None
    trials: int = 25
    seed: Optional[int] = None
    det_max_size: int = 9

    @classmethod
    def from_args(cls, args, config: Dict) -> "RunConfig":
        engine = config.get("engine", {}) or {}
        cache = config.get("cache", {}) or {}
        cohomology = config.get("cohomology", {}) or {}
        output = config.get("output", {}) or {}
        command = args.command if args.command != "verify" else f"verify-{args.target}"
        singular = getattr(args, "singular_model", False)
        max_degree = getattr(args, "max_degree", None)
        trials = getattr(args, "trials", None)
        seed = getattr(args, "seed", None)
        run = cls(
            command=command,
            p=getattr(args, "p", None),
            n=getattr(args, "n", None),
            k=getattr(args, "k", None),
            l=getattr(args, "l", None),
            max_degree=max_degree if max_degree is not None else engine.get("default_max_degree", 20),
            output_format=args.format or output.get("default_format", "table"),
            cache_dir=resolve_cache_dir(cache.get("directory"), args.cache_dir),
            cache_filename=cache.get("filename", "results.sqlite"),
            use_cache=cache.get("enabled", True) and not args.no_cache,
            audit=args.audit or bool(cache.get("audit", False)),
            bigraded=getattr(args, "bigraded", False),
            singular_model=singular,
            conjecture_probe=getattr(args, "conjecture_probe", False),
            inclusive_l_range=getattr(args, "inclusive_l_range", False),
            progress=args.progress or bool(engine.get("progress", False)),
            scheme="singular" if singular else engine.get("generator_scheme", "hazewinkel"),
            window=getattr(args, "window", None),
            deltas=getattr(args, "deltas", None),
            trials=trials if trials is not None else cohomology.get("random_trials", 25),
            seed=seed if seed is not None else cohomology.get("seed"),
            det_max_size=cohomology.get("vandermonde_det_max_size", 9),
        )
        run.validate()
        return run

    def validate(self):
        """Check the RunConfig invariants.

        Raises:
            UsageError: invalid prime, degree bound or rank
            ConjecturalPrimeError: p = 2 without --conjecture-probe
        """
        if self.command == "p2-example":
            return
        if self.p is None or not sympy.isprime(self.p):
            raise UsageError(f"--p must be a prime, got {self.p}")
        if self.max_degree < 1:
            raise UsageError(f"--max-degree must be at least 1, got {self.max_degree}")
        if self.n is not None and self.n < 1:
            raise UsageError(f"--n must be at least 1, got {self.n}")
        if self.k is not None and self.k < 1:
            raise UsageError(f"--k must be at least 1, got {self.k}")
        if self.trials is not None and self.trials < 0:
            raise UsageError(f"--trials must be non-negative, got {self.trials}")
        if self.command == "vandermonde" and self.k is None and not self.deltas:
            raise UsageError("vandermonde needs --k or --deltas")
        if self.p == 2 and not self.conjecture_probe:
            raise ConjecturalPrimeError(
                f"{self.command} is conjectural at p=2; rerun with --conjecture-probe "
                "(results will be labelled as a conjecture probe)"
            )

    def cache_inputs(self) -> Dict:
        return {
            "p": self.p,
            "n": self.n,
            "k": self.k,
            "l": self.l,
            "max_degree": self.max_degree,
            "bigraded": self.bigraded,
            "conjecture_probe": self.conjecture_probe,
            "inclusive_l_range": self.inclusive_l_range,
        }


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the BP homology engine.

    Returns:
        Process exit status.
    """
    parser = setup_parser()
    args = parser.parse_args(argv)

    try:
        config = ConfigManager.get_config()
    except ConfigError as e:
        sys.stderr.write(f"Failed to load configuration: {e}\n")
        return EXIT_USAGE

    logging_config = config.get("logging", {}) or {}
    command = args.command if args.command != "verify" else f"verify-{args.target}"
    LoggingFactory.configure(
        level=args.log_level or logging_config.get("level", "INFO"),
        log_dir=logging_config.get("log_dir", "logs"),
        mode=command,
        to_file=logging_config.get("to_file", True),
    )
    logger = LoggingFactory.get_logger(__name__)

    logger.info("=" * 70)
    logger.info("BP homology engine - %s", command)
    logger.info("=" * 70)

    try:
        run = RunConfig.from_args(args, config)
        document = _run_command(run, logger)
        text = ReportGenerator(config).render(document, run.output_format)
    except EngineError as e:
        logger.error("%s: %s", type(e).__name__, e.message)
        return EXIT_USAGE if e.usage_error else EXIT_FAIL

    sys.stdout.write(text)
    return _exit_status(document, logger)


def _run_command(run: RunConfig, logger) -> Dict:
    """Compute the document for run.command, through the cache when it applies."""
    handlers: Dict[str, Callable[[RunConfig], Dict]] = {
        "pseries": _command_pseries,
        "homology": _command_homology,
        "verify-main": _command_verify_main,
        "verify-tor": _command_verify_tor,
        "verify-level": _command_verify_level,
        "verify-kernel": _command_verify_kernel,
        "verify-squeeze": _command_verify_squeeze,
        "verify-annihilator": _command_verify_annihilator,
        "vandermonde": _command_vandermonde,
        "stretch": _command_stretch,
        "p2-example": _command_p2_example,
    }
    handler = handlers.get(run.command)
    if handler is None:
        raise UsageError(f"Unknown command: {run.command}")

    def compute() -> Dict:
        document = handler(run)
        if run.p == 2 and run.command != "p2-example":
            document["mode"] = MODE_CONJECTURE_PROBE
        return document

    if run.command not in CACHED_COMMANDS:
        return compute()
    cache = ResultCache(run.cache_dir, run.cache_filename, run.use_cache, run.audit)
    document = cache.fetch_or_compute(run.command, run.cache_inputs(), run.scheme, compute)
    if cache.last_hit:
        logger.info("Result for %s served from cache %s", run.command, cache.path)
    return document


def _exit_status(document: Dict, logger) -> int:
    verdict = document.get("verdict")
    if verdict == "FAIL":
        logger.error("Verdict: FAIL")
        return EXIT_FAIL
    if verdict in ("VACUOUS", "INCONCLUSIVE"):
        logger.warning("Verdict: %s (nothing failed, but the check did not fully decide)", verdict)
    elif verdict:
        logger.info("Verdict: %s", verdict)
    return EXIT_OK


def _pseries(run: RunConfig):
    return compute_p_series(run.p, run.max_degree, run.scheme)


def _command_pseries(run: RunConfig) -> Dict:
    return pseries_document(_pseries(run))


def _command_homology(run: RunConfig) -> Dict:
    cx = assemble_complex(run.p, run.n, run.max_degree, _pseries(run), progress=run.progress)
    table = homology_table(cx, progress=run.progress)
    if run.bigraded:
        bigraded_homology(cx, table, progress=run.progress)
    return homology_document(table, run.bigraded)


def _command_verify_main(run: RunConfig) -> Dict:
    return verify_theorem_main(
        run.p,
        run.n,
        run.max_degree,
        _pseries(run),
        conjecture_probe=run.conjecture_probe,
        inclusive_l_range=run.inclusive_l_range,
        progress=run.progress,
    ).to_dict()


def _command_verify_tor(run: RunConfig) -> Dict:
    return verify_tor(run.p, run.k, run.max_degree, _pseries(run), progress=run.progress).to_dict()


def _command_verify_level(run: RunConfig) -> Dict:
    return verify_level(
        run.p,
        run.n,
        run.max_degree,
        _pseries(run),
        conjecture_probe=run.conjecture_probe,
        progress=run.progress,
    ).to_dict()


def _command_verify_kernel(run: RunConfig) -> Dict:
    return verify_kernel_lemma(run.p, run.k, run.max_degree, _pseries(run)).to_dict()


def _command_verify_squeeze(run: RunConfig) -> Dict:
    return squeeze_evidence(run.p, run.k, run.l, run.max_degree, _pseries(run)).to_dict()


def _command_verify_annihilator(run: RunConfig) -> Dict:
    return annihilator_probe(run.p, run.n, run.max_degree, _pseries(run)).to_dict()


def _command_vandermonde(run: RunConfig) -> Dict:
    if run.deltas:
        return multi_factor_surjectivity(run.p, run.deltas, run.window, run.det_max_size).to_dict()
    return vandermonde_surjectivity(run.p, run.k, run.window, run.det_max_size).to_dict()


def _command_stretch(run: RunConfig) -> Dict:
    return stretch_check(run.p, run.k, run.n, run.trials, run.seed).to_dict()


def _command_p2_example(run: RunConfig) -> Dict:
    return p2_counterexample().to_dict()


if __name__ == "__main__":
    sys.exit(main())
