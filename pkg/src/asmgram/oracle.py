"""Independent ground truth: exhaustive iterative-deepening search over the
raw assembly model for tiny words.

Unlike the production solver, the pool here is unrestricted: branches range
over all ordered pairs of available strings, including intermediates that
are not substrings of the target.  That makes this module the trusted
instrument that validates the solver's normalizations and every bound.
It stays single-threaded and returns values only; witnesses come from the
solver.

The default search applies exactly three safe prunes: products longer than
the target are discarded, states whose longest string cannot double up to
the target length in the remaining depth fail immediately, and failed
(pool, remaining-depth) states are memoized.  A fully unpruned twin exists
so the prunes themselves can be audited on the smallest words.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import product
from pathlib import Path

from .approx import balanced_shared, repair_compress
from .bounds import bounds_report, log_lower
from .exact import SolverConfig, asi_exact
from .model import Alphabet, SymbolNotInAlphabet, Word, WordTooLong
from .verify import verify_plan

DEFAULT_ORACLE_LIMIT = 10
DEFAULT_UNPRUNED_LIMIT = 6


def _check_word(word: Word, limit: int, alphabet: Alphabet | None) -> Alphabet:
    if word.n > limit:
        raise WordTooLong(f"|w| = {word.n} exceeds the oracle limit {limit}")
    alphabet = alphabet or Alphabet.for_word(word)
    for sym in word.symbols:
        if sym not in alphabet:
            raise SymbolNotInAlphabet(f"symbol {sym!r} is not in the alphabet")
    return alphabet


def asi_oracle(
    word: Word,
    limit: int = DEFAULT_ORACLE_LIMIT,
    alphabet: Alphabet | None = None,
) -> int:
    """Exact minimum step count by depth-bounded exhaustive search."""
    alphabet = _check_word(word, limit, alphabet)
    if word.n == 1:
        return 0
    target = word.symbols
    n = word.n
    letters = frozenset((s,) for s in alphabet.symbols)
    memo: dict = {}

    def dfs(pool: frozenset, maxlen: int, remaining: int) -> bool:
        if remaining == 0:
            return False
        key = (pool, remaining)
        if key in memo:
            return False
        products = {x + y for x in pool for y in pool}
        for z in sorted(products, key=lambda s: (-len(s), s)):
            if len(z) > n:
                continue
            if z == target:
                return True
            if z in pool:
                continue  # a no-op step is dominated by skipping it
            grown = max(maxlen, len(z))
            if grown << (remaining - 1) < n:
                continue
            if dfs(pool | {z}, grown, remaining - 1):
                return True
        memo[key] = True
        return False

    for depth in range(max(log_lower(word), 1), n):
        if dfs(letters, 1, depth):
            return depth
    return n - 1  # the letter-by-letter chain always lands here


def asi_oracle_unpruned(
    word: Word,
    limit: int = DEFAULT_UNPRUNED_LIMIT,
    alphabet: Alphabet | None = None,
) -> int:
    """The model taken literally: no length cap, no memo, no doubling
    prune, deepening from zero.  Exists to validate the pruned oracle."""
    alphabet = _check_word(word, limit, alphabet)
    if word.n == 1:
        return 0
    target = word.symbols
    letters = frozenset((s,) for s in alphabet.symbols)

    def dfs(pool: frozenset, remaining: int) -> bool:
        if remaining == 0:
            return False
        # identical products from different ordered pairs reach identical
        # states, so enumerating each distinct product once loses nothing
        products = {x + y for x in pool for y in pool}
        for z in sorted(products, key=lambda s: (-len(s), s)):
            if z == target:
                return True
            if dfs(pool | {z}, remaining - 1):
                return True
        return False

    for depth in range(word.n):
        if dfs(letters, depth):
            return depth
    return word.n - 1


AUDIT_CSV_COLUMNS = (
    "word",
    "n",
    "oracle",
    "exact",
    "log_lower",
    "lz_factors",
    "lz_lower",
    "approx_best",
    "trivial_upper",
)


@dataclass(frozen=True)
class AuditRow:
    word: str
    n: int
    oracle: int
    exact: int
    log_lower: int
    lz_factors: int
    lz_lower: int
    approx_best: int
    trivial_upper: int
    repair: int
    balanced: int


@dataclass
class AuditResult:
    rows: list[AuditRow]
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def _fresh_symbol(alphabet: Alphabet) -> str:
    for code in range(0x21, 0x3000):
        candidate = chr(code)
        if candidate not in alphabet:
            return candidate
    raise ValueError("no spare symbol found")


def oracle_audit(
    alphabet: Alphabet,
    max_n: int,
    config: SolverConfig | None = None,
    check_alphabet_invariance: bool = False,
    invariance_max_n: int = 5,
) -> AuditResult:
    """Cross-check oracle, solver, bounds, and compressors on every word up
    to ``max_n``; every broken invariant becomes a violation entry.

    With ``check_alphabet_invariance`` the oracle additionally re-solves
    short words over the alphabet plus one unused letter, which must not
    change any value (unused letters never help)."""
    rows: list[AuditRow] = []
    violations: list[str] = []
    enlarged = Alphabet(alphabet.symbols + (_fresh_symbol(alphabet),))

    for n in range(1, max_n + 1):
        for symbols in product(alphabet.symbols, repeat=n):
            word = Word(symbols)
            text = word.text
            oracle_value = asi_oracle(word, limit=max_n, alphabet=alphabet)
            result = asi_exact(word, config, alphabet=alphabet)
            report = bounds_report(word)
            repair_size = repair_compress(word).size
            balanced_size = balanced_shared(word).size
            best = min(repair_size, balanced_size)
            rows.append(
                AuditRow(
                    word=text,
                    n=n,
                    oracle=oracle_value,
                    exact=result.value,
                    log_lower=report.log_lower,
                    lz_factors=report.lz_factors,
                    lz_lower=report.lz_lower,
                    approx_best=best,
                    trivial_upper=report.trivial_upper,
                    repair=repair_size,
                    balanced=balanced_size,
                )
            )

            if result.value != oracle_value:
                violations.append(
                    f"{text}: solver value {result.value} != oracle {oracle_value}"
                )
            if not result.optimal:
                violations.append(f"{text}: solver did not certify optimality")
            verdict = verify_plan(result.plan, word, result.value)
            if not verdict.accepted:
                violations.append(f"{text}: solver witness rejected ({verdict.reason})")
            if report.best_lower > oracle_value:
                violations.append(
                    f"{text}: lower bound {report.best_lower} exceeds value {oracle_value}"
                )
            for name, size in (("repair", repair_size), ("balanced", balanced_size)):
                if size < oracle_value:
                    violations.append(
                        f"{text}: {name} size {size} below the optimum {oracle_value}"
                    )
                if size > report.trivial_upper and word.n > 1:
                    violations.append(
                        f"{text}: {name} size {size} above the trivial bound"
                    )
            if check_alphabet_invariance and n <= invariance_max_n:
                widened = asi_oracle(word, limit=max_n, alphabet=enlarged)
                if widened != oracle_value:
                    violations.append(
                        f"{text}: value changed to {widened} with an unused letter added"
                    )

    return AuditResult(rows, violations)


def write_audit_csv(result: AuditResult, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(AUDIT_CSV_COLUMNS)
        for row in result.rows:
            writer.writerow([getattr(row, column) for column in AUDIT_CSV_COLUMNS])
    return path
