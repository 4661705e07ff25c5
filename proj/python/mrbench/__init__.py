"""Metamorphic testing workbench.

Campaigns, kill matrices, rubric scoring and LLM-assisted MR generation and
evaluation. Documents (inputs, reports, sheets) are plain dicts in the same
JSON shapes the ``mrbench`` CLI writes.
"""

import os as _os

_bundled = _os.path.join(_os.path.dirname(__file__), "data")
if "MRBENCH_DATA_DIR" not in _os.environ and _os.path.isfile(_os.path.join(_bundled, "catalog.json")):
    _os.environ["MRBENCH_DATA_DIR"] = _bundled

from ._mrbench import (  # noqa: E402
    MrbenchError,
    ParseError,
    PreconditionError,
    ReferenceError,
    TransportError,
    aggregate,
    data_dir,
    evaluate,
    evaluate_mr,
    executable_suts,
    generate_mrs,
    generate_source,
    load_catalog,
    mutation_matrix,
    run_campaign,
    score,
    validate_sheet,
    variants,
)

__all__ = [
    "MrbenchError",
    "ParseError",
    "PreconditionError",
    "ReferenceError",
    "TransportError",
    "aggregate",
    "data_dir",
    "evaluate",
    "evaluate_mr",
    "executable_suts",
    "generate_mrs",
    "generate_source",
    "load_catalog",
    "mutation_matrix",
    "run_campaign",
    "score",
    "validate_sheet",
    "variants",
]
