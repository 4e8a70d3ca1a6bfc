"""
Rendering of engine documents.

Every command produces a plain dict document (see the ``*_document``
builders below and VerificationReport.to_dict) which is rendered as:
- table: "#"-prefixed header lines, then "a | b | c" rows
- json: sorted keys, two-space indent
- csv: the banner and valid-degree "#" lines, then a pandas flattening of
  the document's rows with lists joined by spaces

Rendering is a pure function of the document, so equal documents give
byte-identical output whether they came from the cache or not.
"""

import json
from typing import Dict, List, Optional, Sequence

import pandas as pd

from src.chains.homology import HomologyTable
from src.coefficients.pseries import PSeriesTable, check_p_series_properties, describe_coefficients
from src.utils.error_handler import UsageError
from src.utils.logging_factory import LoggingFactory

FORMATS = ("table", "json", "csv")
CONJECTURE_BANNER = "# CONJECTURE PROBE (p=2): the splitting is not proved at p=2; this is not a verification"
P2_COMPUTATION_BANNER = "# p=2 run (--conjecture-probe): plain computation, no splitting is compared"


def homology_document(table: HomologyTable, bigraded: bool = False) -> Dict:
    document = {"kind": "homology", "scheme": table.scheme, "bigraded": bigraded}
    document.update(table.to_dict())
    document["window"] = list(table.window)
    return document


def pseries_document(table: PSeriesTable) -> Dict:
    checks = [c.to_dict() for c in check_p_series_properties(table)]
    verdicts = {c["verdict"] for c in checks}
    return {
        "kind": "pseries",
        "p": table.p,
        "degree_bound": table.degree_bound,
        "scheme": table.scheme,
        "window": [0, table.degree_bound],
        "rows": describe_coefficients(table),
        "checks": checks,
        "verdict": "FAIL" if "FAIL" in verdicts else "PASS",
    }


def _orders(p: int, exponents: Sequence[int]) -> str:
    """Invariant factors as p^e values; the zero group renders as 0."""
    if not exponents:
        return "0"
    return " ".join(str(p**e) for e in exponents)


def _joined(values: Sequence) -> str:
    return " ".join(str(v) for v in values)


def _cell(value):
    # None would turn integer columns into floats
    if value is None:
        return ""
    return _joined(value) if isinstance(value, list) else value


class ReportGenerator:
    """Render documents in one of FORMATS."""

    def __init__(self, config: Optional[Dict] = None):
        """
        Initialize report generator.

        Args:
            config: Configuration dict; ``output.default_format`` is used when
                render() is called without a format
        """
        self.config = config or {}
        self.logger = LoggingFactory.get_logger(__name__)

    def render(self, document: Dict, fmt: Optional[str] = None) -> str:
        """Text for a document, always ending in a newline.

        Raises:
            UsageError: for an unknown format
        """
        fmt = fmt or self.config.get("output", {}).get("default_format", "table")
        if fmt not in FORMATS:
            raise UsageError(f"unknown output format {fmt!r}, expected one of {FORMATS}")
        if fmt == "json":
            return json.dumps(document, sort_keys=True, indent=2) + "\n"
        if fmt == "csv":
            header = "".join(line + "\n" for line in self._header_comments(document))
            return header + self.to_dataframe(document).to_csv(index=False)
        return "\n".join(self._table_lines(document)) + "\n"

    def to_dataframe(self, document: Dict) -> pd.DataFrame:
        """Flat rows of a document: table rows, else report cells, else checks."""
        rows = document.get("rows") or document.get("cells") or document.get("checks") or []
        flat = [{key: _cell(value) for key, value in row.items()} for row in rows]
        frame = pd.DataFrame(flat)
        self.logger.debug("Flattened %s document into %d rows", document.get("kind"), len(frame))
        return frame

    def _table_lines(self, document: Dict) -> List[str]:
        lines = self._banner_lines(document)
        kind = document.get("kind")
        if kind == "homology":
            return lines + self._homology_lines(document)
        if kind == "pseries":
            return lines + self._pseries_lines(document)
        return lines + self._report_lines(document)

    @staticmethod
    def _banner_lines(document: Dict) -> List[str]:
        if document.get("mode") != "conjecture probe":
            return []
        if document.get("kind") in ("homology", "pseries"):
            return [P2_COMPUTATION_BANNER]
        return [CONJECTURE_BANNER]

    def _header_comments(self, document: Dict) -> List[str]:
        lines = self._banner_lines(document)
        if document.get("window"):
            low, high = document["window"]
            lines.append(f"# valid degrees {low}..{high}")
        return lines

    def _homology_lines(self, document: Dict) -> List[str]:
        p = document["p"]
        low, high = document["window"]
        lines = [
            f"# homology p={p} n={document['n']} degree_bound={document['degree_bound']} "
            f"scheme={document['scheme']}",
            f"# valid degrees {low}..{high}",
            "# degree | odd_count | invariants",
        ]
        for row in document["rows"]:
            odd_count = "-" if row["odd_count"] is None else str(row["odd_count"])
            lines.append(f"{row['degree']} | {odd_count} | {_orders(p, row['exponents'])}")
        return lines

    def _pseries_lines(self, document: Dict) -> List[str]:
        lines = [
            f"# pseries p={document['p']} degree_bound={document['degree_bound']} "
            f"scheme={document['scheme']}",
            f"# valid degrees {document['window'][0]}..{document['window'][1]}",
            "# i | degree | a_i | a_i mod p",
        ]
        for row in document["rows"]:
            lines.append(f"{row['i']} | {row['degree']} | {row['a']} | {row.get('mod_p', '')}")
        lines.extend(self._check_lines(document))
        lines.append(f"# verdict: {document['verdict']}")
        return lines

    def _report_lines(self, document: Dict) -> List[str]:
        parameters = document.get("parameters", {})
        shown = " ".join(
            f"{key}={value}" for key, value in sorted(parameters.items()) if key != "conclusion"
        )
        lines = [f"# {document['name']} ({document['mode']}) {shown}".rstrip()]
        low, high = document["window"]
        lines.append(f"# valid degrees {low}..{high}")
        p = parameters.get("p")
        exponents = document.get("values", "exponents") == "exponents"
        if document["cells"]:
            lines.append("# degree | bucket | lhs | rhs | verdict")
        for cell in document["cells"]:
            lhs, rhs = cell["lhs"], cell["rhs"]
            lhs_text = _orders(p, lhs) if exponents else _joined(lhs)
            rhs_text = _orders(p, rhs) if exponents else _joined(rhs)
            bucket = "-" if cell["bucket"] is None else str(cell["bucket"])
            line = f"{cell['degree']} | {bucket} | {lhs_text} | {rhs_text} | {cell['verdict']}"
            if cell.get("note"):
                line += f" | {cell['note']}"
            lines.append(line)
        lines.extend(self._check_lines(document))
        if "conclusion" in parameters:
            lines.append(f"# conclusion: {parameters['conclusion']}")
        lines.append(f"# verdict: {document['verdict']}")
        return lines

    @staticmethod
    def _check_lines(document: Dict) -> List[str]:
        lines = []
        for check in document.get("checks", []):
            detail = f" ({check['detail']})" if check.get("detail") else ""
            lines.append(f"# check {check['name']}: {check['verdict']}{detail}")
        return lines
