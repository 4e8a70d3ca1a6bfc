"""Rendering of homology tables, p-series tables and verification reports."""

from src.reports.report_generator import ReportGenerator

__all__ = ["ReportGenerator"]
