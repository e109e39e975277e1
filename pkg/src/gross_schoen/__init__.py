"""Invariants around the height of the Gross-Schoen cycle.

Submodules:

* :mod:`.metric_graph` -- admissible measures, Green's functions and φ on metrized graphs
* :mod:`.discretization` -- floating-point oracle for the graph invariants
* :mod:`.spectral_phi` -- archimedean φ from spectral data
* :mod:`.hodge_linalg` -- symplectic exterior algebra of H, ∧³H and ∧³H/H
* :mod:`.cycle_cohomology` -- Künneth classes on X^n and the Gross-Schoen class
* :mod:`.height_formulas` -- Zhang's formula and Picard-class identities
* :mod:`.cli` -- command-line front end
"""

from .metric_graph import (
    MetrizedGraph,
    admissible_measure,
    effective_resistance,
    green_function,
    lambda_graph,
    phi_graph,
)
from .spectral_phi import SpectralDataset, SpectralDatum, phi_spectral
from .height_formulas import PicardClass, thmC_class, zhang_height

__version__ = "0.1.0"
