"""Ready-made scenarios: Mermin star and square, GHZ, and the iffy family."""

from .iffy import (
    IffyObservables,
    IffyParameters,
    iffy_classical_system,
    iffy_classical_variables,
    iffy_complex,
    iffy_conditional,
    iffy_state,
    projected_state,
)
from .mermin import (
    GHZ_CONTEXTS,
    GhzMbqc,
    ghz_input_group,
    ghz_mbqc,
    ghz_mbqc_spec,
    ghz_model,
    ghz_state,
    mermin_square,
    mermin_star,
    mermin_star_ghz,
    mermin_star_ghz_complex,
)

__all__ = [
    "GHZ_CONTEXTS",
    "GhzMbqc",
    "IffyObservables",
    "IffyParameters",
    "ghz_input_group",
    "ghz_mbqc",
    "ghz_mbqc_spec",
    "ghz_model",
    "ghz_state",
    "iffy_classical_system",
    "iffy_classical_variables",
    "iffy_complex",
    "iffy_conditional",
    "iffy_state",
    "mermin_square",
    "mermin_star",
    "mermin_star_ghz",
    "mermin_star_ghz_complex",
    "projected_state",
]
