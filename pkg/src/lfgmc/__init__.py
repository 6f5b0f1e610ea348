"""Model checking, grammar compilation and bounded parsing for
LFG-style composite structures (tree + feature graph + zoomin link)."""

from .errors import (
    FormulaSyntaxError,
    GrammarError,
    GrammarSyntaxError,
    LfgError,
    ModelFormatError,
    SignatureError,
    UnknownNodeError,
)
from .formula import (
    And,
    AtomLit,
    Bullet,
    CatLit,
    CSTRUCT,
    CStructConst,
    Down,
    FALSE,
    FalseF,
    Feat,
    Formula,
    FSTRUCT,
    FStructConst,
    Iff,
    Implies,
    Not,
    Or,
    PathEq,
    TRUE,
    TrueF,
    Up,
    WordLit,
    Zoomin,
    parse_formula,
    render_formula,
    validate_names,
)
from .grammar import (
    AnnotatedRule,
    AtomValueSchema,
    Grammar,
    LexEntry,
    PathEqSchema,
    RuleElement,
    SemForm,
    Theory,
    coherence_axioms,
    compile_grammar,
    compile_lexicon,
    compile_rule,
    completeness_axioms,
    parse_grammar,
)
from .model import (
    CStructure,
    FStructure,
    Model,
    Signature,
    ValidationReport,
    Violation,
    canonicalize,
    feature_image,
    model_from_json,
    model_from_text,
    model_to_json,
    model_to_text,
    node_key,
    tree_relatives,
    validate_model,
)
from .search import (
    CheckEntry,
    CheckReport,
    ParseOutcome,
    Rejection,
    SearchBounds,
    check_parse,
    parse_sentence,
)
from .semantics import eval_patheq, satisfies, valid

__version__ = "0.1.0"
