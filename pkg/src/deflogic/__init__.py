"""Propositional default logic workbench.

Extensions under Reiter, justified, rational and constrained semantics;
translations between these semantics; faithfulness checks; QBF-driven
theory generators; counting via minimal processes.
"""

from .errors import (
    AlphabetError,
    ContractViolation,
    DefaultLogicError,
    EnumerationBound,
    InconsistentBackground,
    MalformedProcess,
    ParseError,
    RenamingCollision,
    UndeclaredAtom,
    UnsupportedConstruction,
)
from .faithful import (
    ExtensionCount,
    FaithfulReport,
    check_faithful,
    count_extensions,
    match_extensions,
    strongest_extensions,
)
from .formula import (
    FALSE,
    TRUE,
    And,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    atoms,
    conj,
    disj,
    evaluate,
    forget,
    rename,
    substitute_alphabet,
)
from .io import TheoryDocument, parse_formula, parse_qbf, parse_theory, render_theory
from .semantics import (
    Default,
    DefaultTheory,
    DoubleExtension,
    Extension,
    Semantics,
    double_extensions,
    extensions,
    is_applicable,
    is_closed,
    is_process,
    is_successful,
    minimal_ordering,
    selected_processes,
    selected_sets,
)
from .solver import entails, equivalent, find_model, is_consistent, var_equivalent
from .translate import (
    FreshVars,
    Qbf2,
    TranslationResult,
    add_known_extension,
    combine_with_selector,
    count_valid_assignments,
    expected_extension_count,
    gen_assignment,
    gen_one_or_two,
    gen_sigma2_rational,
    qbf_valid,
    t_cr,
    t_jc,
    t_rc,
    t_rj,
)

__all__ = [
    "AlphabetError",
    "And",
    "Const",
    "ContractViolation",
    "Default",
    "DefaultLogicError",
    "DefaultTheory",
    "DoubleExtension",
    "EnumerationBound",
    "Extension",
    "ExtensionCount",
    "FALSE",
    "FaithfulReport",
    "Formula",
    "FreshVars",
    "Iff",
    "Implies",
    "InconsistentBackground",
    "MalformedProcess",
    "Not",
    "Or",
    "ParseError",
    "Qbf2",
    "RenamingCollision",
    "Semantics",
    "TRUE",
    "TheoryDocument",
    "TranslationResult",
    "UndeclaredAtom",
    "UnsupportedConstruction",
    "Var",
    "add_known_extension",
    "atoms",
    "check_faithful",
    "combine_with_selector",
    "conj",
    "count_extensions",
    "count_valid_assignments",
    "disj",
    "double_extensions",
    "entails",
    "equivalent",
    "evaluate",
    "expected_extension_count",
    "extensions",
    "find_model",
    "forget",
    "gen_assignment",
    "gen_one_or_two",
    "gen_sigma2_rational",
    "is_applicable",
    "is_closed",
    "is_consistent",
    "is_process",
    "is_successful",
    "match_extensions",
    "minimal_ordering",
    "parse_formula",
    "parse_qbf",
    "parse_theory",
    "qbf_valid",
    "rename",
    "render_theory",
    "selected_processes",
    "selected_sets",
    "strongest_extensions",
    "substitute_alphabet",
    "t_cr",
    "t_jc",
    "t_rc",
    "t_rj",
    "var_equivalent",
]

__version__ = "0.1.0"
