"""Graded coefficient ring BP_* and the formal group law p-series."""
