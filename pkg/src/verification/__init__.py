"""Independent presentations and the structural checks run against the chain engine."""
