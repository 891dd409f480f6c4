"""Exact counting and sampling for constrained determinantal measures.

The heavy lifting lives in the compiled extension ``cdpp._cdpp``; this
package re-exports its surface.
"""

from ._cdpp import (
    DPP,
    EngineError,
    count_perfect_matchings,
    count_spanning_trees,
    mixed_char_coeffs,
    mixed_discriminant,
    sample_spanning_tree,
    set_max_threads,
    validate_psd,
)

__all__ = [
    "DPP",
    "EngineError",
    "count_perfect_matchings",
    "count_spanning_trees",
    "mixed_char_coeffs",
    "mixed_discriminant",
    "sample_spanning_tree",
    "set_max_threads",
    "validate_psd",
]
