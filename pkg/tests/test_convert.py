from random import Random

import pytest

from asmgram import (
    Alphabet,
    AssemblyPlan,
    AssemblyStep,
    CyclicGrammar,
    EmptyPlan,
    ExpansionTooLarge,
    Nonterminal,
    Slp,
    SlpRule,
    Terminal,
    UndefinedNonterminal,
    Word,
    expand_slp,
    plan_cost,
    plan_to_slp,
    reconstruct_product,
    slp_size,
    slp_to_plan,
    verify_plan,
)
from helpers import golden_plan, golden_word, random_plan


def doubling_slp(depth: int) -> Slp:
    rules = [SlpRule("R1", (Terminal("a"), Terminal("a")))]
    for i in range(2, depth + 1):
        prev = Nonterminal(f"R{i-1}")
        rules.append(SlpRule(f"R{i}", (prev, prev)))
    return Slp(Alphabet.from_text("a"), tuple(rules), f"R{depth}")


def test_golden_plan_to_slp_structure():
    slp = plan_to_slp(golden_plan())
    assert slp.start == "R3"
    assert slp_size(slp) == 3
    assert slp.rules[0] == SlpRule("R1", (Terminal("0"), Terminal("1")))
    assert slp.rules[1] == SlpRule("R2", (Nonterminal("R1"), Terminal("0")))
    assert slp.rules[2] == SlpRule("R3", (Nonterminal("R1"), Nonterminal("R2")))
    assert expand_slp(slp) == golden_word()


def test_single_step_plan():
    plan = AssemblyPlan(
        Alphabet.from_text("a"),
        (AssemblyStep(Terminal("a"), Terminal("a")),),
    )
    slp = plan_to_slp(plan)
    assert slp_size(slp) == 1
    assert expand_slp(slp) == Word.from_text("aa")


def test_empty_plan_with_letter_target_becomes_alias_grammar():
    plan = AssemblyPlan(Alphabet.from_text("a"), (), declared_target=Word.from_text("a"))
    slp = plan_to_slp(plan)
    assert slp_size(slp) == 0
    assert expand_slp(slp) == Word.from_text("a")


def test_empty_plan_without_target_has_no_grammar():
    with pytest.raises(EmptyPlan):
        plan_to_slp(AssemblyPlan(Alphabet.from_text("a"), ()))


def test_slp_to_plan_golden():
    plan = slp_to_plan(plan_to_slp(golden_plan()))
    assert plan_cost(plan) == 3
    assert verify_plan(plan, golden_word(), 3).accepted


def test_slp_to_plan_simple_rule():
    slp = Slp(
        Alphabet.from_text("ab"),
        (SlpRule("R1", (Terminal("a"), Terminal("b"))),),
        "R1",
    )
    plan = slp_to_plan(slp)
    assert plan.steps == (AssemblyStep(Terminal("a"), Terminal("b")),)


def test_rules_in_reverse_order_are_normalized():
    ab = Alphabet.from_text("01")
    scrambled = Slp(
        ab,
        (
            SlpRule("R3", (Nonterminal("R1"), Nonterminal("R2"))),
            SlpRule("R2", (Nonterminal("R1"), Terminal("0"))),
            SlpRule("R1", (Terminal("0"), Terminal("1"))),
        ),
        "R3",
    )
    plan = slp_to_plan(scrambled)
    assert plan_cost(plan) == 3
    assert verify_plan(plan, golden_word(), 3).accepted


def test_alias_rules_are_inlined_and_free():
    ab = Alphabet.from_text("a")
    slp = Slp(
        ab,
        (
            SlpRule("A", (Terminal("a"),)),
            SlpRule("R", (Nonterminal("A"), Nonterminal("A"))),
        ),
        "R",
    )
    plan = slp_to_plan(slp)
    assert plan_cost(plan) == 1
    assert reconstruct_product(plan) == Word.from_text("aa")


def test_singleton_grammar_roundtrip():
    slp = Slp(Alphabet.from_text("a"), (SlpRule("R1", (Terminal("a"),)),), "R1")
    plan = slp_to_plan(slp)
    assert plan_cost(plan) == 0
    assert plan.declared_target == Word.from_text("a")


def test_cyclic_grammar_detected():
    ab = Alphabet.from_text("a")
    slp = Slp(
        ab,
        (
            SlpRule("R1", (Nonterminal("R2"), Terminal("a"))),
            SlpRule("R2", (Nonterminal("R1"), Terminal("a"))),
        ),
        "R1",
    )
    with pytest.raises(CyclicGrammar):
        slp_to_plan(slp)
    with pytest.raises(CyclicGrammar):
        expand_slp(slp)


def test_undefined_nonterminal_detected():
    slp = Slp(
        Alphabet.from_text("a"),
        (SlpRule("R1", (Nonterminal("R9"), Terminal("a"))),),
        "R1",
    )
    with pytest.raises(UndefinedNonterminal):
        slp_to_plan(slp)
    missing_start = Slp(
        Alphabet.from_text("a"),
        (SlpRule("R1", (Terminal("a"), Terminal("a"))),),
        "R9",
    )
    with pytest.raises(UndefinedNonterminal):
        expand_slp(missing_start)


def test_grammar_with_rule_referencing_start_is_rejected_for_plans():
    ab = Alphabet.from_text("a")
    slp = Slp(
        ab,
        (
            SlpRule("S", (Terminal("a"), Terminal("a"))),
            SlpRule("junk", (Nonterminal("S"), Terminal("a"))),
        ),
        "S",
    )
    with pytest.raises(ValueError):
        slp_to_plan(slp)


def test_expand_doubling_chain():
    assert expand_slp(doubling_slp(3)) == Word.from_text("aaaaaaaa")


def test_expansion_cap_enforced_before_materializing():
    with pytest.raises(ExpansionTooLarge):
        expand_slp(doubling_slp(40), max_len=1 << 20)


def test_roundtrip_properties_on_random_plans():
    rng = Random(7)
    for _ in range(150):
        plan = random_plan(rng, max_steps=30, max_len=512)
        slp = plan_to_slp(plan)
        assert slp_size(slp) == plan_cost(plan)
        assert expand_slp(slp) == reconstruct_product(plan)
        back = slp_to_plan(slp)
        assert plan_cost(back) == plan_cost(plan)
        assert reconstruct_product(back) == reconstruct_product(plan)
        # a second conversion pass is byte-stable
        assert plan_to_slp(back) == plan_to_slp(slp_to_plan(plan_to_slp(back)))
