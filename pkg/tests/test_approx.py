from itertools import product
from random import Random

from asmgram import (
    Word,
    approx_best,
    asi_oracle,
    balanced_shared,
    expand_slp,
    repair_compress,
    slp_to_plan,
    trivial_upper,
    verify_plan,
)
from asmgram.approx import _repair_rules
from helpers import repair_reference


def test_repair_examples():
    assert repair_compress(Word.from_text("abab")).size == 2
    assert repair_compress(Word.from_text("01010")).size == 3
    assert repair_compress(Word.from_text("x")).size == 0


def test_repair_run_counting_is_non_overlapping():
    # "aaa" holds a single countable pair, so nothing is replaced
    assert repair_compress(Word.from_text("aaa")).size == 2
    # "aaaa" holds two, which compresses to the doubling chain
    assert repair_compress(Word.from_text("aaaa")).size == 2


def test_balanced_examples():
    assert balanced_shared(Word.from_text("a" * 8)).size == 3
    assert balanced_shared(Word.from_text("abcd")).size == 3
    assert balanced_shared(Word.from_text("abab")).size == 2
    assert balanced_shared(Word.from_text("a")).size == 0


def test_balanced_matches_log_on_unary_powers():
    for k in range(0, 8):
        assert balanced_shared(Word.from_text("a" * (1 << k))).size == k


def test_approx_best_examples():
    assert approx_best(Word.from_text("01010")).value == 3
    result = approx_best(Word.from_text("a" * 16))
    assert result.value == 4  # the doubling chain; repair ties and wins the tiebreak
    assert balanced_shared(Word.from_text("a" * 16)).size == 4


def test_approx_best_plan_and_grammar_agree():
    result = approx_best(Word.from_text("ababab"))
    assert result.slp.size == result.value
    assert result.plan.cost == result.value
    word = Word.from_text("ababab")
    assert expand_slp(result.slp) == word
    assert verify_plan(result.plan, word, result.value).accepted


def test_backends_expand_to_the_word_and_respect_trivial_bound():
    rng = Random(5)
    for _ in range(60):
        n = rng.randint(1, 40)
        word = Word(tuple(rng.choice("ab") for _ in range(n)))
        for backend in (repair_compress, balanced_shared):
            slp = backend(word)
            assert expand_slp(slp) == word
            assert slp.size <= trivial_upper(word)  # 0 <= 0 covers the one-letter word
            plan = slp_to_plan(slp)
            assert verify_plan(plan, word, slp.size).accepted


def test_backends_never_beat_the_oracle_exhaustively():
    for n in range(1, 7):
        for symbols in product("01", repeat=n):
            word = Word(tuple(symbols))
            oracle_value = asi_oracle(word)
            assert repair_compress(word).size >= oracle_value
            assert balanced_shared(word).size >= oracle_value


def test_incremental_repair_matches_rescan_reference():
    rng = Random(21)
    for _ in range(300):
        sigma = rng.randint(1, 4)
        length = rng.randint(1, 60)
        seq = [rng.randrange(sigma) for _ in range(length)]
        assert _repair_rules(list(seq), sigma) == repair_reference(seq, sigma)


def test_incremental_repair_matches_reference_on_runs():
    cases = ["a" * 9, "aabaa", "aaabaaab", "abababab", "aabbaabb", "abcabcabc"]
    for text in cases:
        sigma = len(set(text))
        ids = {c: i for i, c in enumerate(dict.fromkeys(text))}
        seq = [ids[c] for c in text]
        assert _repair_rules(list(seq), sigma) == repair_reference(seq, sigma)
