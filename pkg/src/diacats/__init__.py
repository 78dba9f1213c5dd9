"""diacats: finite categories, diagrams in a site, nerves, Grothendieck
constructions, Cech covers, Bousfield-Kan homotopy (co)limits, localizer
closure, calculus-of-fractions localization, and an exact integer-homology
oracle for checking weak-equivalence claims on finite instances.
"""

from . import algtop, diagram, fincat, fixtures, fractions, homotopy
from . import jsonio, localizer, randgen, simplicial, site
from .errors import DiacatsError

__version__ = "0.1.0"

__all__ = [
    "algtop", "diagram", "fincat", "fixtures", "fractions", "homotopy",
    "jsonio", "localizer", "randgen", "simplicial", "site", "DiacatsError",
]
