"""Witness verification: rebuild every intermediate of a plan and check the
final product against the target within a step budget.

The verifier materializes intermediates in step order, so its work is at
most ``t * n`` symbol copies for a t-step plan and an n-symbol target.  Any
intermediate longer than the target is rejected immediately, before being
materialized: such a string can never shrink back into the target, and any
accepting plan has an equivalent witness without it, so rejection is safe
and keeps the cost bound tight.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    AssemblyPlan,
    EmptyPlanNonEmptyTarget,
    Terminal,
    Word,
)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification run.

    ``produced`` is the reconstructed final string, or None when
    reconstruction was aborted.  ``copies`` counts symbol copies performed,
    for the ``copies <= steps_used * len(target)`` cost contract.
    """

    accepted: bool
    produced: Word | None
    steps_used: int
    copies: int
    reason: str | None = None


def verify_plan(plan: AssemblyPlan, target: Word, k: int) -> Verdict:
    """Check that ``plan`` builds ``target`` in at most ``k`` steps.

    Malformed references are errors (DanglingReference, SymbolNotInAlphabet,
    EmptyPlanNonEmptyTarget), never false verdicts.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    plan.validate()
    t = plan.cost
    n = target.n

    if t == 0:
        # Letters live in the initial pool: a single-letter target needs no steps.
        if n > 1:
            raise EmptyPlanNonEmptyTarget(
                f"plan has no steps but the target has {n} symbols"
            )
        if target.symbols[0] in plan.alphabet:
            return Verdict(True, target, 0, 0)
        return Verdict(False, None, 0, 0, reason="target letter is not in the alphabet")

    strings: list[tuple[str, ...]] = []
    copies = 0
    for i, step in enumerate(plan.steps, 1):
        parts = []
        for operand in (step.left, step.right):
            if isinstance(operand, Terminal):
                parts.append((operand.symbol,))
            else:
                parts.append(strings[operand.step - 1])
        length = len(parts[0]) + len(parts[1])
        if length > n:
            return Verdict(
                False,
                None,
                t,
                copies,
                reason=f"step s{i} builds a string of length {length} > target length {n}",
            )
        strings.append(parts[0] + parts[1])
        copies += length

    produced = Word(strings[-1])
    if produced != target:
        return Verdict(False, produced, t, copies, reason="product differs from target")
    if t > k:
        return Verdict(False, produced, t, copies, reason=f"{t} steps exceed budget k={k}")
    return Verdict(True, produced, t, copies)
