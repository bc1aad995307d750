"""Configuration equations, paradoxical decompositions and invariant sets
for finitely generated groups and semigroups, with exact certificates.
"""

__version__ = "0.1.0"

from .configuration import (  # noqa: E402
    ConfigurationPair,
    Exactness,
    WindowPolicy,
    assemble,
    cells,
    enumerate_configurations,
    refine_by_cells,
)
from .folner import (  # noqa: E402
    InvariantSetQuery,
    intersect_refine,
    replicate_sets,
    search_invariant_set,
    solution_from_invariant_set,
)
from .linsolve import decide, farkas, nonzero_solution, normalized_solution, rank, verify  # noqa: E402
from .paradox import (  # noqa: E402
    equidecomposable,
    search_decomposition,
    tarski_number,
    verify_decomposition,
)

__all__ = [
    "ConfigurationPair",
    "Exactness",
    "InvariantSetQuery",
    "WindowPolicy",
    "assemble",
    "cells",
    "decide",
    "enumerate_configurations",
    "equidecomposable",
    "farkas",
    "intersect_refine",
    "nonzero_solution",
    "normalized_solution",
    "rank",
    "refine_by_cells",
    "replicate_sets",
    "search_decomposition",
    "search_invariant_set",
    "solution_from_invariant_set",
    "tarski_number",
    "verify",
    "verify_decomposition",
]
