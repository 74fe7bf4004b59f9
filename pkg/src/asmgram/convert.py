"""Converters between assembly plans and straight-line grammars, plus
bounded expansion.

Step i of a plan and rule Ri of its grammar image mirror each other operand
for operand, so cost and size always agree in both directions.  Expansion
computes derived lengths first and refuses to materialize anything longer
than the cap: a straight-line grammar can encode words exponentially longer
than itself.
"""

from __future__ import annotations

import heapq

from .model import (
    AssemblyPlan,
    AssemblyStep,
    CyclicGrammar,
    DuplicateRule,
    EmptyPlan,
    ExpansionTooLarge,
    Nonterminal,
    Prior,
    Slp,
    SlpRule,
    Terminal,
    UndefinedNonterminal,
    Word,
)

DEFAULT_MAX_EXPANSION = 1 << 20


def plan_to_slp(plan: AssemblyPlan) -> Slp:
    """Turn each step Si into a rule Ri -> (same operands); start is the
    final step's rule.

    A zero-step plan has a grammar only in the degenerate one-letter case,
    where the declared target supplies the free alias rule.
    """
    plan.validate()
    if plan.cost == 0:
        target = plan.declared_target
        if target is None or target.n != 1:
            raise EmptyPlan("a plan with no steps and no one-letter target has no start rule")
        return Slp(plan.alphabet, (SlpRule("R1", (Terminal(target.symbols[0]),)),), "R1")

    def ref(operand) -> Terminal | Nonterminal:
        if isinstance(operand, Terminal):
            return operand
        return Nonterminal(f"R{operand.step}")

    rules = tuple(
        SlpRule(f"R{i}", (ref(step.left), ref(step.right)))
        for i, step in enumerate(plan.steps, 1)
    )
    return Slp(plan.alphabet, rules, f"R{plan.cost}")


def _rules_by_name(slp: Slp) -> dict[str, SlpRule]:
    by_name: dict[str, SlpRule] = {}
    for rule in slp.rules:
        if rule.lhs in by_name:
            raise DuplicateRule(f"nonterminal {rule.lhs} has more than one rule")
        by_name[rule.lhs] = rule
    return by_name


def _topo_rules(slp: Slp, start_last: bool = False) -> list[SlpRule]:
    """Rules in dependency order (referenced rules first), deterministically.

    Ready rules are emitted in definition order.  With ``start_last`` the
    start rule is withheld until the end, which is what the plan conversion
    needs so the final step is the product; a grammar whose start is itself
    referenced by another rule cannot satisfy that and is rejected.
    """
    by_name = _rules_by_name(slp)
    if slp.start not in by_name:
        raise UndefinedNonterminal(f"start symbol {slp.start} has no rule")

    order_index = {rule.lhs: i for i, rule in enumerate(slp.rules)}
    deps: dict[str, set[str]] = {}
    dependents: dict[str, list[str]] = {name: [] for name in by_name}
    for rule in slp.rules:
        rule_deps = set()
        for ref in rule.rhs:
            if isinstance(ref, Nonterminal):
                if ref.name not in by_name:
                    raise UndefinedNonterminal(
                        f"rule {rule.lhs} references undefined nonterminal {ref.name}"
                    )
                rule_deps.add(ref.name)
        deps[rule.lhs] = rule_deps
        for name in rule_deps:
            dependents[name].append(rule.lhs)

    ready = [order_index[name] for name, d in deps.items() if not d]
    heapq.heapify(ready)
    out: list[SlpRule] = []
    remaining = {name: len(d) for name, d in deps.items()}
    while ready:
        rule = slp.rules[heapq.heappop(ready)]
        out.append(rule)
        for dep_name in dependents[rule.lhs]:
            remaining[dep_name] -= 1
            if remaining[dep_name] == 0:
                heapq.heappush(ready, order_index[dep_name])
    if len(out) != len(slp.rules):
        raise CyclicGrammar("rule references form a cycle")

    if start_last:
        if dependents[slp.start]:
            raise ValueError(
                f"start symbol {slp.start} is referenced by another rule; "
                "it cannot be the final step of a plan"
            )
        out = [rule for rule in out if rule.lhs != slp.start]
        out.append(by_name[slp.start])
    return out


def slp_to_plan(slp: Slp) -> AssemblyPlan:
    """Expand rules in topological order into steps; cost equals size.

    Free alias rules produce no step; their terminal is inlined wherever
    the alias is referenced.  For the size-0 singleton grammar the result
    is an empty plan whose declared target is the aliased letter.
    """
    ordered = _topo_rules(slp, start_last=True)
    alias: dict[str, str] = {}
    step_of: dict[str, int] = {}
    steps: list[AssemblyStep] = []

    def operand(ref) -> Terminal | Prior:
        if isinstance(ref, Terminal):
            return ref
        if ref.name in alias:
            return Terminal(alias[ref.name])
        return Prior(step_of[ref.name])

    for rule in ordered:
        if not rule.is_binary:
            alias[rule.lhs] = rule.rhs[0].symbol
            continue
        steps.append(AssemblyStep(operand(rule.rhs[0]), operand(rule.rhs[1])))
        step_of[rule.lhs] = len(steps)

    target = None
    if not steps:
        # start resolves through aliases to a single letter
        target = Word((alias[slp.start],))
    plan = AssemblyPlan(slp.alphabet, tuple(steps), declared_target=target)
    plan.validate()
    return plan


def _expanded_lengths(slp: Slp, ordered: list[SlpRule]) -> dict[str, int]:
    lengths: dict[str, int] = {}
    for rule in ordered:
        total = 0
        for ref in rule.rhs:
            total += 1 if isinstance(ref, Terminal) else lengths[ref.name]
        lengths[rule.lhs] = total
    return lengths


def expand_slp(slp: Slp, max_len: int = DEFAULT_MAX_EXPANSION) -> Word:
    """Derive the unique word of the grammar, refusing lengths beyond
    ``max_len`` before any symbols are materialized."""
    if max_len < 1:
        raise ValueError("max_len must be positive")
    ordered = _topo_rules(slp)
    lengths = _expanded_lengths(slp, ordered)
    total = lengths[slp.start]
    if total > max_len:
        raise ExpansionTooLarge(f"derived word has length {total} > cap {max_len}")

    by_name = {rule.lhs: rule for rule in ordered}
    out: list[str] = []
    stack: list[Terminal | Nonterminal] = [Nonterminal(slp.start)]
    while stack:
        ref = stack.pop()
        if isinstance(ref, Terminal):
            out.append(ref.symbol)
        else:
            stack.extend(reversed(by_name[ref.name].rhs))
    return Word(tuple(out))


def reconstruct_product(plan: AssemblyPlan, max_len: int = DEFAULT_MAX_EXPANSION) -> Word:
    """Final string of a plan, computed directly from the steps (no grammar
    involved), with the same length cap as expansion."""
    plan.validate()
    if plan.cost == 0:
        if plan.declared_target is not None and plan.declared_target.n == 1:
            return plan.declared_target
        raise EmptyPlan("a plan with no steps produces nothing")

    lengths: list[int] = []
    for step in plan.steps:
        total = 0
        for operand in (step.left, step.right):
            total += 1 if isinstance(operand, Terminal) else lengths[operand.step - 1]
        lengths.append(total)
    if lengths[-1] > max_len:
        raise ExpansionTooLarge(f"product has length {lengths[-1]} > cap {max_len}")

    out: list[str] = []
    stack: list[Terminal | Prior] = [Prior(plan.cost)]
    while stack:
        operand = stack.pop()
        if isinstance(operand, Terminal):
            out.append(operand.symbol)
        else:
            step = plan.steps[operand.step - 1]
            stack.append(step.right)
            stack.append(step.left)
    return Word(tuple(out))
