"""Exact linear algebra over Z_(p)."""
