"""Linear algebra, quivers, representations, roots and semi-invariants."""
