"""Quantum computation with magnetic-flux anyons over finite groups.

Layers, bottom up:

- ``groups``     finite permutation group engine (classes, derived series,
                 simple perfect quotients, qudit parameters)
- ``words``      product-form programs as shared DAGs, evaluation, file formats
- ``synthesis``  the delta-function pipeline turning arbitrary tables
                 G^n -> G into programs, plus the optimized two-control
                 multiply-accumulate word
- ``reps``       explicit unitary representations for electric-charge probes
- ``system``     the physical layer: anyon line, braiding, fusion, probes
- ``register``   logical qudits, the {measure Z, measure X, Toffoli} gate set,
                 X-basis distillation, coset-mode generalization
- ``leakage``    leakage detection and correction back into the code space
- ``distill``    flux-ancilla distillation with electric probes
- ``oracle``     dense state-vector reference used to validate everything
- ``cli``        command-line front end
"""

from .groups import (
    CosetContext,
    FiniteGroup,
    GroupElement,
    GroupError,
    NoSuchParametersError,
    SolvableGroupError,
    Subgroup,
    alternating_group,
    compose,
    cyclic_group,
    derived_series,
    direct_product,
    find_qudit_params,
    is_perfect,
    is_simple,
    is_solvable,
    parse_cycles,
    parse_group_spec,
    simple_perfect_quotient,
    sl25,
    symmetric_group,
    trivial_context,
)

__all__ = [
    "CosetContext",
    "FiniteGroup",
    "GroupElement",
    "GroupError",
    "NoSuchParametersError",
    "SolvableGroupError",
    "Subgroup",
    "alternating_group",
    "compose",
    "cyclic_group",
    "derived_series",
    "direct_product",
    "find_qudit_params",
    "is_perfect",
    "is_simple",
    "is_solvable",
    "parse_cycles",
    "parse_group_spec",
    "simple_perfect_quotient",
    "sl25",
    "symmetric_group",
    "trivial_context",
]

__version__ = "0.1.0"
