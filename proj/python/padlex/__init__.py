"""Exact p-adic scalars, prepared power rules, and certified Lipschitz extensions.

The heavy lifting lives in the compiled module; specs go in as JSON text and
come back as canonical JSON, reports, and extension artifacts.
"""

from ._padlex import (
    DivisionError,
    Scalar,
    SpecError,
    __version__,
    canonical,
    eval_task,
    nth_root,
    run,
)

__all__ = [
    "DivisionError",
    "Scalar",
    "SpecError",
    "__version__",
    "canonical",
    "eval_task",
    "nth_root",
    "run",
]
