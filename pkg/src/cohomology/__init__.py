"""Mod-p cohomology rings, pullbacks and the rank checks built on them."""
