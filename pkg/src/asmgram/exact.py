"""Exact assembly index: branch and bound over split-closed substring sets.

A plan with distinct intermediates is equivalent to a set of substrings of
the target, each of length >= 2 and split into two parts that are letters
or other members; the set's cardinality is the plan cost.  The search runs
iterative deepening on the budget, resolving the longest unsettled member
first and branching over its binary cuts.  Failures are memoized by the
canonical member sets together with the remaining allowance, and branches
are pruned with an admissible doubling argument on the longest unsettled
member.

Restricting intermediates to substrings of the target preserves the
optimum: every rule of a minimal grammar derives a substring of the word it
generates, and the plan view inherits that through the converters.  The
unrestricted brute-force oracle double-checks this on every audited word.

The search runs single-threaded; values are therefore trivially independent
of scheduling, and repeated solves return identical witnesses.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

from .approx import approx_best
from .bounds import bounds_report
from .convert import plan_to_slp
from .model import (
    Alphabet,
    AssemblyPlan,
    AssemblyStep,
    Prior,
    Slp,
    Terminal,
    Word,
    WordTooLong,
)

DEFAULT_MAX_EXACT_LEN = 30


@dataclass(frozen=True)
class SolverConfig:
    """Budgets for the exponential search; None means unbounded."""

    time_budget: float | None = None
    node_budget: int | None = None
    max_exact_len: int = DEFAULT_MAX_EXACT_LEN


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    memo_hits: int = 0
    elapsed: float = 0.0
    root_lower: int = 0
    root_upper: int = 0
    exhausted: bool = False

    def as_dict(self) -> dict:
        return {
            "nodes_expanded": self.nodes_expanded,
            "memo_hits": self.memo_hits,
            "elapsed": self.elapsed,
            "root_lower": self.root_lower,
            "root_upper": self.root_upper,
            "exhausted": self.exhausted,
        }


@dataclass(frozen=True)
class SolveResult:
    """Value plus verifying witnesses.  ``optimal`` is False only when a
    budget ran out, in which case ``value`` is the best certified upper
    bound; ``method`` names the witness origin."""

    value: int
    plan: AssemblyPlan
    slp: Slp
    optimal: bool
    method: str
    stats: SearchStats


class Decision(Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class DecideResult:
    answer: Decision
    stats: SearchStats


def enumerate_splits(s: Word) -> list[tuple[Word, Word]]:
    """All binary cuts of a string of length >= 2, left to right."""
    if s.n < 2:
        raise ValueError("cannot split a single letter")
    return [
        (Word(s.symbols[:i]), Word(s.symbols[i:])) for i in range(1, s.n)
    ]


class _Budget(Exception):
    pass


def _deficit(members: set[tuple[str, ...]], unresolved: set[tuple[str, ...]]) -> int:
    """Admissible count of members that must still be created: the longest
    unsettled member needs a part of at least half its length, and each new
    member at most doubles the longest length available below it."""
    worst = 0
    for u in unresolved:
        half = (len(u) + 1) // 2
        if half <= 1:
            continue
        base = 1
        for m in members:
            lm = len(m)
            if base < lm < len(u):
                base = lm
        need = 0
        while base < half:
            base <<= 1
            need += 1
        if need > worst:
            worst = need
    return worst


class _Search:
    """One depth-bounded pass.  The memo maps canonical states to the
    largest remaining allowance already known to fail, so entries carry over
    between deepening passes."""

    def __init__(
        self,
        target: tuple[str, ...],
        budget: int,
        stats: SearchStats,
        memo: dict,
        deadline: float | None,
        node_budget: int | None,
    ):
        self.target = target
        self.budget = budget
        self.stats = stats
        self.memo = memo
        self.deadline = deadline
        self.node_budget = node_budget
        self.splits: dict[tuple[str, ...], tuple[tuple[str, ...], tuple[str, ...]]] = {}

    def run(self) -> dict | None:
        root = {self.target}
        if self._dfs(root, set(root)):
            return dict(self.splits)
        return None

    def _tick(self) -> None:
        self.stats.nodes_expanded += 1
        if self.node_budget is not None and self.stats.nodes_expanded > self.node_budget:
            raise _Budget
        if self.deadline is not None and self.stats.nodes_expanded % 256 == 0:
            if time.monotonic() > self.deadline:
                raise _Budget

    def _dfs(self, members: set, unresolved: set) -> bool:
        if not unresolved:
            return True
        self._tick()

        key = (frozenset(members), frozenset(unresolved))
        allowance = self.budget - len(members)
        if self.memo.get(key, -1) >= allowance:
            self.stats.memo_hits += 1
            return False

        u = max(unresolved, key=lambda m: (len(m), m))
        rest = unresolved - {u}
        for cut in range(1, len(u)):
            parts = (u[:cut], u[cut:])
            new_parts = {p for p in parts if len(p) >= 2 and p not in members}
            if len(members) + len(new_parts) > self.budget:
                continue
            members_next = members | new_parts
            unresolved_next = rest | new_parts
            if len(members_next) + _deficit(members_next, unresolved_next) > self.budget:
                continue
            self.splits[u] = parts
            if self._dfs(members_next, unresolved_next):
                return True
            del self.splits[u]

        prior = self.memo.get(key, -1)
        if allowance > prior:
            self.memo[key] = allowance
        return False


def _plan_from_splits(
    target: tuple[str, ...],
    splits: dict,
    alphabet: Alphabet,
) -> AssemblyPlan:
    """Members ordered by length always form a valid plan (parts are
    strictly shorter than their whole)."""
    order = sorted(splits, key=lambda m: (len(m), m))
    index = {member: i + 1 for i, member in enumerate(order)}

    def operand(part: tuple[str, ...]) -> Terminal | Prior:
        if len(part) == 1:
            return Terminal(part[0])
        return Prior(index[part])

    steps = tuple(
        AssemblyStep(operand(splits[m][0]), operand(splits[m][1])) for m in order
    )
    return AssemblyPlan(alphabet, steps, declared_target=Word(target))


def _trivial_result(word: Word, alphabet: Alphabet, stats: SearchStats) -> SolveResult:
    plan = AssemblyPlan(alphabet, (), declared_target=word)
    return SolveResult(0, plan, plan_to_slp(plan), True, "trivial", stats)


def asi_exact(
    word: Word,
    config: SolverConfig | None = None,
    alphabet: Alphabet | None = None,
) -> SolveResult:
    """Certified minimum step count with a verifying witness.

    Exponential-time in the worst case (the problem is NP-hard), hence the
    length limit and the budgets; on budget exhaustion the best known upper
    bound is returned with ``optimal=False``.
    """
    config = config or SolverConfig()
    if word.n > config.max_exact_len:
        raise WordTooLong(
            f"|w| = {word.n} exceeds the exact-solve limit {config.max_exact_len}"
        )
    alphabet = alphabet or Alphabet.for_word(word)
    stats = SearchStats()
    started = time.monotonic()
    if word.n == 1:
        result = _trivial_result(word, alphabet, stats)
        stats.elapsed = time.monotonic() - started
        return result

    lower = bounds_report(word).best_lower
    approx = approx_best(word, alphabet=alphabet)
    stats.root_lower = lower
    stats.root_upper = approx.value

    deadline = started + config.time_budget if config.time_budget else None
    memo: dict = {}
    try:
        for budget in range(lower, approx.value):
            search = _Search(
                word.symbols, budget, stats, memo, deadline, config.node_budget
            )
            splits = search.run()
            if splits is not None:
                # first succeeding budget is tight: a smaller set would have
                # been found by an earlier pass (deepening started at the
                # certified lower bound)
                assert len(splits) == budget
                plan = _plan_from_splits(word.symbols, splits, alphabet)
                stats.elapsed = time.monotonic() - started
                return SolveResult(budget, plan, plan_to_slp(plan), True, "exact", stats)
        # every budget below the compressor bound failed, so that bound is optimal
        stats.elapsed = time.monotonic() - started
        return SolveResult(
            approx.value, approx.plan, approx.slp, True, approx.method, stats
        )
    except _Budget:
        stats.exhausted = True
        stats.elapsed = time.monotonic() - started
        return SolveResult(
            approx.value, approx.plan, approx.slp, False, approx.method, stats
        )


def asi_decide(
    word: Word,
    k: int,
    config: SolverConfig | None = None,
) -> DecideResult:
    """Is the assembly index at most k?

    Any n-symbol word assembles in n-1 steps, so k >= n-1 is YES with no
    search at all; lower bounds likewise settle NO cheaply.  Otherwise one
    depth-bounded pass at budget k decides, with UNKNOWN on budget
    exhaustion (distinguished from NO).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    config = config or SolverConfig()
    stats = SearchStats()
    started = time.monotonic()
    if k >= word.n - 1:
        stats.elapsed = time.monotonic() - started
        return DecideResult(Decision.YES, stats)

    lower = bounds_report(word).best_lower
    stats.root_lower = lower
    if lower > k:
        stats.elapsed = time.monotonic() - started
        return DecideResult(Decision.NO, stats)

    approx = approx_best(word)
    stats.root_upper = approx.value
    if approx.value <= k:
        stats.elapsed = time.monotonic() - started
        return DecideResult(Decision.YES, stats)

    deadline = started + config.time_budget if config.time_budget else None
    try:
        search = _Search(word.symbols, k, stats, {}, deadline, config.node_budget)
        found = search.run() is not None
        stats.elapsed = time.monotonic() - started
        return DecideResult(Decision.YES if found else Decision.NO, stats)
    except _Budget:
        stats.exhausted = True
        stats.elapsed = time.monotonic() - started
        return DecideResult(Decision.UNKNOWN, stats)
