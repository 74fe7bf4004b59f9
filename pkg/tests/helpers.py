"""Shared test fixtures: the golden three-step word, a bounded random plan
generator, and a brute-force reference for the pair-replacement compressor."""

from __future__ import annotations

from pathlib import Path
from random import Random

from asmgram import (
    Alphabet,
    AssemblyPlan,
    AssemblyStep,
    Prior,
    Terminal,
    Word,
)

DATA = Path(__file__).parent / "data"

GOLDEN_TEXT = "01010"


def golden_word() -> Word:
    return Word.from_text(GOLDEN_TEXT)


def golden_plan() -> AssemblyPlan:
    """s1 = 01, s2 = s1+0 = 010, s3 = s1+s2 = 01010."""
    alphabet = Alphabet.from_text("01")
    steps = (
        AssemblyStep(Terminal("0"), Terminal("1")),
        AssemblyStep(Prior(1), Terminal("0")),
        AssemblyStep(Prior(1), Prior(2)),
    )
    return AssemblyPlan(alphabet, steps, declared_target=golden_word())


def random_plan(
    rng: Random,
    max_steps: int = 50,
    max_sigma: int = 4,
    max_len: int = 4096,
) -> AssemblyPlan:
    """Valid random plan whose every intermediate stays within ``max_len``
    symbols, so expansion-based checks stay cheap."""
    sigma = rng.randint(1, max_sigma)
    alphabet = Alphabet(tuple("abcd"[:sigma]))
    t = rng.randint(1, max_steps)
    lengths: list[int] = []
    steps: list[AssemblyStep] = []
    for i in range(1, t + 1):
        operands: list = []
        lens: list[int] = []
        for slot in range(2):
            budget = max_len - (lens[0] if slot else 1)
            eligible = [j for j in range(1, i) if lengths[j - 1] <= budget]
            if eligible and rng.random() < 0.6:
                j = rng.choice(eligible)
                operands.append(Prior(j))
                lens.append(lengths[j - 1])
            else:
                operands.append(Terminal(rng.choice(alphabet.symbols)))
                lens.append(1)
        steps.append(AssemblyStep(operands[0], operands[1]))
        lengths.append(lens[0] + lens[1])
    return AssemblyPlan(alphabet, tuple(steps))


def covering_plan(plan: AssemblyPlan) -> AssemblyPlan:
    """Append a step joining the longest intermediate to the final one, so
    the product is at least as long as every intermediate and the verifier's
    oversize rejection cannot trigger against the plan's own product."""
    lengths: list[int] = []
    for step in plan.steps:
        total = 0
        for operand in (step.left, step.right):
            total += 1 if isinstance(operand, Terminal) else lengths[operand.step - 1]
        lengths.append(total)
    longest = max(range(len(lengths)), key=lambda i: lengths[i]) + 1
    extra = AssemblyStep(Prior(longest), Prior(len(plan.steps)))
    return AssemblyPlan(plan.alphabet, plan.steps + (extra,))


def repair_reference(seq: list[int], n_terminals: int) -> tuple[list[tuple[int, int]], list[int]]:
    """Rescan-per-round formulation of the pair replacement loop; the
    production implementation must produce identical rules and residue."""
    seq = list(seq)
    rules: list[tuple[int, int]] = []
    next_sym = n_terminals
    while len(seq) >= 2:
        counts: dict = {}
        first: dict = {}
        last: dict = {}
        for i in range(len(seq) - 1):
            p = (seq[i], seq[i + 1])
            if last.get(p, -2) <= i - 2:
                counts[p] = counts.get(p, 0) + 1
                last[p] = i
                first.setdefault(p, i)
        best = None
        for p, c in counts.items():
            if c >= 2:
                key = (-c, first[p])
                if best is None or key < best[0]:
                    best = (key, p)
        if best is None:
            break
        pair = best[1]
        rules.append(pair)
        out: list[int] = []
        i = 0
        while i < len(seq):
            if i + 1 < len(seq) and (seq[i], seq[i + 1]) == pair:
                out.append(next_sym)
                i += 2
            else:
                out.append(seq[i])
                i += 1
        seq = out
        next_sym += 1
    return rules, seq


def all_binary_words(max_n: int, min_n: int = 1):
    from itertools import product

    for n in range(min_n, max_n + 1):
        for symbols in product("01", repeat=n):
            yield Word(tuple(symbols))
