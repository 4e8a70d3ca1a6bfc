"""Command-line interface parser for the BP homology engine.

Defines the subcommands pseries, homology, verify (main, tor, level,
kernel, squeeze, annihilator), vandermonde, stretch and p2-example, and
the flags they share.
"""

import argparse

VERIFY_TARGETS = ["main", "tor", "level", "kernel", "squeeze", "annihilator"]


def _deltas(text: str):
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"--deltas expects comma-separated integers: {text}") from e


def _common_parent() -> argparse.ArgumentParser:
    """Flags accepted by every subcommand."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--format",
        choices=["table", "json", "csv"],
        default=None,
        help="Output format (default: output.default_format from config)",
    )
    parent.add_argument(
        "--cache-dir",
        default=None,
        help="Cache directory (overrides BP_ENGINE_CACHE_DIR and the config)",
    )
    parent.add_argument("--no-cache", action="store_true", help="Neither read nor write the cache")
    parent.add_argument(
        "--audit",
        action="store_true",
        help="On a cache hit, recompute and require byte-identical output",
    )
    parent.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=None,
        help="Logging level (default: logging.level from config)",
    )
    parent.add_argument(
        "--progress", action="store_true", help="Show per-degree progress bars on stderr"
    )
    return parent


def _degree_parent() -> argparse.ArgumentParser:
    """Flags of the commands that build p-series tables."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--p", type=int, required=True, help="Prime p")
    parent.add_argument(
        "--max-degree",
        type=int,
        default=None,
        help="Degree bound D (default: engine.default_max_degree from config)",
    )
    parent.add_argument(
        "--singular-model",
        action="store_true",
        help="Use a_0 = p, a_i = 0: the ordinary mod-p chain model",
    )
    parent.add_argument(
        "--conjecture-probe",
        action="store_true",
        help="Allow p=2 where the splitting is only conjectural; output is labelled as a probe",
    )
    return parent


def setup_parser():
    """Set up argument parser for CLI with all subcommands.

    Returns:
        ArgumentParser configured with all subcommands and flags.
    """
    parser = argparse.ArgumentParser(
        prog="python -m src.main",
        description="BP homology engine - exact BP-homology of elementary abelian p-groups",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Commands:
  pseries      - p-series coefficients a_i with property checks
  homology     - homology of the n-fold tensor chain complex
  verify       - dual-pipeline checks: main, tor, level, kernel, squeeze, annihilator
  vandermonde  - rank check of the dualized cohomology maps (odd p)
  stretch      - n-fold products of degree-one classes vanish when n > k
  p2-example   - the p=2 pullback computation

Exit codes: 0 pass (VACUOUS/INCONCLUSIVE warn), 1 FAIL, 2 usage error.

Examples:
  python -m src.main pseries --p 3 --max-degree 16
  python -m src.main homology --p 3 --n 1 --max-degree 20 --bigraded
  python -m src.main verify main --p 3 --n 2 --max-degree 20 --format json
  python -m src.main verify squeeze --p 3 --k 2 --l 1 --max-degree 20
  python -m src.main vandermonde --p 3 --k 2
  python -m src.main p2-example
        """,
    )
    common = _common_parent()
    degree = _degree_parent()
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("pseries", parents=[common, degree], help="p-series table")

    homology = commands.add_parser(
        "homology", parents=[common, degree], help="homology table of the n-fold complex"
    )
    homology.add_argument("--n", type=int, required=True, help="Number of tensor factors")
    homology.add_argument(
        "--bigraded", action="store_true", help="Split each degree by odd_count"
    )

    verify = commands.add_parser("verify", help="dual-pipeline verifications")
    targets = verify.add_subparsers(dest="target", required=True)
    for name in ("main", "level", "annihilator"):
        target = targets.add_parser(name, parents=[common, degree])
        target.add_argument("--n", type=int, required=True, help="Number of tensor factors")
        if name == "main":
            target.add_argument(
                "--inclusive-l-range",
                action="store_true",
                help="Negative control: let L_k generators run through m = p^k",
            )
    for name in ("tor", "kernel", "squeeze"):
        target = targets.add_parser(name, parents=[common, degree])
        target.add_argument("--k", type=int, required=True, help="Rank k of N^k")
        if name == "squeeze":
            target.add_argument("--l", type=int, required=True, help="Index l < k of v_l")

    vandermonde = commands.add_parser(
        "vandermonde", parents=[common], help="surjectivity of the dualized maps"
    )
    vandermonde.add_argument("--p", type=int, required=True, help="Odd prime p")
    vandermonde.add_argument("--k", type=int, default=None, help="Rank k")
    vandermonde.add_argument(
        "--deltas",
        type=_deltas,
        default=None,
        help="Comma-separated insertion points; checks each distinct delta",
    )
    vandermonde.add_argument(
        "--window", type=int, default=None, help="Top cohomological degree (default 2p^k + k)"
    )

    stretch = commands.add_parser(
        "stretch", parents=[common], help="vanishing of n-fold degree-one products"
    )
    stretch.add_argument("--p", type=int, required=True, help="Odd prime p")
    stretch.add_argument("--k", type=int, required=True, help="Rank k")
    stretch.add_argument("--n", type=int, required=True, help="Number of factors")
    stretch.add_argument("--trials", type=int, default=None, help="Random products to test")
    stretch.add_argument("--seed", type=int, default=None, help="Random seed")

    commands.add_parser("p2-example", parents=[common], help="the p=2 counterexample")

    return parser
