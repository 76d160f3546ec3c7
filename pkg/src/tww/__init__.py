"""Twin-width toolkit for geometric graph classes.

Canonical vertex orders, rank divisions of 0/1 matrices, contraction
sequences, structural witnesses (bicliques, half-graphs, transversal
pairs, independent sets), and win-win parameter deciders for interval
graphs, rooted directed path graphs, segment scenes, terrains and
simple polygons.
"""

from tww.errors import BudgetExceededError, FormatError, GeometryError, ModelError

__all__ = [
    "BudgetExceededError",
    "FormatError",
    "GeometryError",
    "ModelError",
]
