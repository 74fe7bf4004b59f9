"""Assembly index of strings.

The minimal number of binary concatenation steps needed to build a word
from single letters, with free reuse of intermediates, equals the size of
the smallest straight-line grammar generating it.  This package computes
that number exactly at desk scale, certifies bounds around it at any scale,
verifies witnesses, and cross-checks everything against a brute-force
oracle.
"""

from .approx import ApproxResult, approx_best, balanced_shared, repair_compress
from .bounds import (
    BoundsReport,
    CopyFactor,
    FreshFactor,
    bounds_report,
    log_lower,
    lz77_factorize,
    lz_factor_count,
    lz_lower,
    lz_reconstruct,
    trivial_upper,
)
from .convert import (
    DEFAULT_MAX_EXPANSION,
    expand_slp,
    plan_to_slp,
    reconstruct_product,
    slp_to_plan,
)
from .exact import (
    DecideResult,
    Decision,
    SearchStats,
    SolveResult,
    SolverConfig,
    asi_decide,
    asi_exact,
    enumerate_splits,
)
from .formats import (
    decode_witness,
    encode_witness,
    parse_plan,
    parse_slp,
    plan_from_obj,
    plan_to_obj,
    serialize_plan,
    serialize_slp,
    slp_from_obj,
    slp_to_obj,
    witness_encoding_size,
    witness_size_bits,
)
from .model import (
    Alphabet,
    AsmgramError,
    AssemblyPlan,
    AssemblyStep,
    BudgetExhausted,
    CyclicGrammar,
    DanglingReference,
    DuplicateRule,
    EmptyPlan,
    EmptyPlanNonEmptyTarget,
    ExpansionTooLarge,
    FormatError,
    Nonterminal,
    Operand,
    Prior,
    RuleRef,
    Slp,
    SlpRule,
    SymbolNotInAlphabet,
    Terminal,
    UndefinedNonterminal,
    Word,
    WordTooLong,
    plan_cost,
    slp_size,
)
from .oracle import (
    AuditResult,
    AuditRow,
    asi_oracle,
    asi_oracle_unpruned,
    oracle_audit,
    write_audit_csv,
)
from .verify import Verdict, verify_plan

__version__ = "0.1.0"
