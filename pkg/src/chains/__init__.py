"""Chain-level model of BP-homology of elementary abelian p-groups."""
