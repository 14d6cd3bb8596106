"""specguard: partial behavioural specifications and safety tooling for ML classifiers.

The package covers the pieces needed to argue that a learned classifier is
acceptably safe inside a conventional safety lifecycle:

- speclang: a small typed expression language for conditions over inputs and
  predictions (parse, typecheck, evaluate).
- speccore: schemas, records, transformations, classifiers, and partial
  behavioural specifications with runtime and offline checks.
- monitor: trace monitoring with a fail-safe state machine.
- patterns: fault-tolerance architecture patterns (ensembles, simplex,
  gating, envelopes, input harvesting, simulation harnesses).
- dataset: data requirements, coverage, augmentation, uncertainty
  categorization, and deterministic splitting.
- process: method catalogs and scoring, a decision gate, failure diagnosis,
  and safety-case traceability checks.

The `specguard` console script exposes the same capabilities on files.
"""
__version__ = "0.1.0"

from .errors import (
    CatalogError,
    ClassifierError,
    CycleError,
    EvalError,
    FormatError,
    PatternConfigError,
    PatternError,
    SpecGuardError,
    SpecSyntaxError,
    TransformError,
    TypeCheckError,
)

__all__ = [
    "CatalogError",
    "ClassifierError",
    "CycleError",
    "EvalError",
    "FormatError",
    "PatternConfigError",
    "PatternError",
    "SpecGuardError",
    "SpecSyntaxError",
    "TransformError",
    "TypeCheckError",
    "__version__",
]
