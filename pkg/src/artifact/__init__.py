"""Exact-arithmetic toolkit for finite metaplectic torus models.

Subpackages are intentionally flat: exactalg (numbers/matrices), localfield
(residue symbols), toruscover (finite quotient tori and their pairings),
heisenberg (covers and their representations), slope (root-datum slope
tests), kubota (congruence-subgroup symbols), cli (driver).
"""

__version__ = "0.1.0"
