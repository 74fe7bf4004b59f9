"""Polynomial-time upper bounds: grammar compressors whose output converts
to valid assembly plans.

Exact minimization is intractable at scale, so these backends only ever
certify upper bounds; nothing here claims optimality.

``repair_compress``: while some adjacent pair occurs at least twice
(non-overlapping count), replace the most frequent pair with a fresh
nonterminal, then binarize the remaining sequence left to right.  Ties are
broken towards the leftmost-occurring pair, and equal-symbol runs count
greedily left to right ("aaa" holds one countable "aa"), which makes the
output deterministic.  The implementation keeps pair occurrences in a
linked list with a lazily validated heap so large inputs stay near-linear;
its output is identical to the obvious rescan-per-round formulation.

``balanced_shared``: balanced binary split tree with identical substrings
hash-consed to a single rule.
"""

from __future__ import annotations

import heapq
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .convert import slp_to_plan
from .model import (
    Alphabet,
    AssemblyPlan,
    Nonterminal,
    Slp,
    SlpRule,
    Terminal,
    Word,
)


class _PairTable:
    """Occurrences of adjacent symbol pairs over a doubly linked sequence.

    Positions are indices into the original sequence and never renumber, so
    numeric order is sequence order.  Equal-symbol runs are handled through
    chains of adjacent occurrences: a run of m equal symbols yields
    floor(m/2) countable pairs.
    """

    def __init__(self, seq: list[int]):
        m = len(seq)
        self.sym = list(seq)
        self.nxt = [i + 1 if i + 1 < m else -1 for i in range(m)]
        self.prv = [i - 1 for i in range(m)]
        self.alive = [True] * m
        self.occ: dict[tuple[int, int], dict[int, None]] = {}
        for i in range(m - 1):
            self.occ.setdefault((seq[i], seq[i + 1]), {})[i] = None

    def effective_count(self, pair: tuple[int, int]) -> tuple[int, int]:
        """(non-overlapping count, leftmost position); (0, -1) if absent."""
        occs = self.occ.get(pair)
        if not occs:
            return 0, -1
        count = 0
        for i in occs:
            if self.prv[i] in occs:
                continue  # not a chain head
            chain = 1
            j = self.nxt[i]
            while j in occs:
                chain += 1
                j = self.nxt[j]
            count += (chain + 1) // 2
        return count, min(occs)

    def _remove_occ(self, pair: tuple[int, int], pos: int) -> None:
        occs = self.occ.get(pair)
        if occs is not None:
            occs.pop(pos, None)
            if not occs:
                del self.occ[pair]

    def _add_occ(self, pair: tuple[int, int], pos: int) -> None:
        self.occ.setdefault(pair, {})[pos] = None

    def replace_all(self, pair: tuple[int, int], new_sym: int) -> set[tuple[int, int]]:
        """Replace occurrences of ``pair`` greedily left to right with
        ``new_sym``; returns the pairs whose occurrence sets gained entries."""
        a, b = pair
        touched: set[tuple[int, int]] = set()
        live = self.occ.get(pair, {})
        for i in sorted(live):
            if i not in live:
                continue  # consumed by an overlapping replacement
            j = self.nxt[i]
            if j == -1 or not self.alive[i] or self.sym[i] != a or self.sym[j] != b:
                continue
            h = self.prv[i]
            k = self.nxt[j]
            self._remove_occ(pair, i)
            if h != -1:
                self._remove_occ((self.sym[h], a), h)
            if k != -1:
                self._remove_occ((b, self.sym[k]), j)
            self.sym[i] = new_sym
            self.alive[j] = False
            self.nxt[i] = k
            if k != -1:
                self.prv[k] = i
            if h != -1:
                self._add_occ((self.sym[h], new_sym), h)
                touched.add((self.sym[h], new_sym))
            if k != -1:
                self._add_occ((new_sym, self.sym[k]), i)
                touched.add((new_sym, self.sym[k]))
        return touched

    def remaining(self) -> list[int]:
        out = []
        i = 0  # position 0 is never a replacement's right element, so it stays alive
        while i != -1:
            out.append(self.sym[i])
            i = self.nxt[i]
        return out


def _repair_rules(seq: list[int], n_terminals: int) -> tuple[list[tuple[int, int]], list[int]]:
    """Run the replacement loop over an int sequence.

    Returns the pair rules in creation order (nonterminal ids start at
    ``n_terminals``) and the surviving sequence.
    """
    if len(seq) < 2:
        return [], list(seq)
    table = _PairTable(seq)
    # Heap entries are (-count, leftmost, pair) and may be stale; counts of
    # existing pairs only ever decrease (new adjacencies always involve the
    # fresh symbol), so popping and re-validating converges.
    heap = []
    for pair in table.occ:
        count, first = table.effective_count(pair)
        if count >= 2:
            heap.append((-count, first, pair))
    heapq.heapify(heap)

    rules: list[tuple[int, int]] = []
    next_sym = n_terminals
    while heap:
        neg, first, pair = heapq.heappop(heap)
        count, now_first = table.effective_count(pair)
        if count < 2:
            continue
        if (-count, now_first) != (neg, first):
            heapq.heappush(heap, (-count, now_first, pair))
            continue
        rules.append(pair)
        touched = table.replace_all(pair, next_sym)
        next_sym += 1
        for t in touched:
            t_count, t_first = table.effective_count(t)
            if t_count >= 2:
                heapq.heappush(heap, (-t_count, t_first, t))
    return rules, table.remaining()


def repair_compress(word: Word, alphabet: Alphabet | None = None) -> Slp:
    """Most-frequent-pair replacement, then left-to-right binarization."""
    alphabet = alphabet or Alphabet.for_word(word)
    ids = {sym: i for i, sym in enumerate(alphabet.symbols)}
    seq = [ids[s] for s in word.symbols]
    sigma = len(alphabet)
    pair_rules, remaining = _repair_rules(seq, sigma)

    def ref(symbol: int) -> Terminal | Nonterminal:
        if symbol < sigma:
            return Terminal(alphabet.symbols[symbol])
        return Nonterminal(f"R{symbol - sigma + 1}")

    rules = [
        SlpRule(f"R{i}", (ref(a), ref(b))) for i, (a, b) in enumerate(pair_rules, 1)
    ]
    if len(remaining) == 1:
        top = ref(remaining[0])
        if isinstance(top, Terminal):
            rules.append(SlpRule("R1", (top,)))  # one-letter word, size 0
            start = "R1"
        else:
            start = top.name
    else:
        acc = ref(remaining[0])
        name = ""
        for item in remaining[1:]:
            name = f"R{len(rules) + 1}"
            rules.append(SlpRule(name, (acc, ref(item))))
            acc = Nonterminal(name)
        start = name
    return Slp(alphabet, tuple(rules), start)


def balanced_shared(word: Word, alphabet: Alphabet | None = None) -> Slp:
    """Balanced binary decomposition with identical substrings merged into
    one rule; never larger than n-1, exactly log2(n) on unary powers of two."""
    alphabet = alphabet or Alphabet.for_word(word)
    memo: dict[tuple[str, ...], Nonterminal] = {}
    rules: list[SlpRule] = []

    def build(seg: tuple[str, ...]) -> Terminal | Nonterminal:
        if len(seg) == 1:
            return Terminal(seg[0])
        hit = memo.get(seg)
        if hit is not None:
            return hit
        mid = (len(seg) + 1) // 2
        left = build(seg[:mid])
        right = build(seg[mid:])
        name = f"R{len(rules) + 1}"
        rules.append(SlpRule(name, (left, right)))
        ref = Nonterminal(name)
        memo[seg] = ref
        return ref

    top = build(word.symbols)
    if isinstance(top, Terminal):
        rules.append(SlpRule("R1", (top,)))
        return Slp(alphabet, tuple(rules), "R1")
    return Slp(alphabet, tuple(rules), top.name)


BACKENDS: tuple[tuple[str, object], ...] = (
    ("repair", repair_compress),
    ("balanced", balanced_shared),
)


@dataclass(frozen=True)
class ApproxResult:
    """Certified upper bound: value = size of the returned grammar."""

    value: int
    slp: Slp
    plan: AssemblyPlan
    method: str


def _worker_count() -> int:
    raw = os.environ.get("ASMGRAM_THREADS", "")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def approx_best(
    word: Word,
    methods: tuple[str, ...] | None = None,
    alphabet: Alphabet | None = None,
) -> ApproxResult:
    """Run the chosen backends and return the smallest grammar; ties go to
    the earlier backend, so the result is deterministic."""
    alphabet = alphabet or Alphabet.for_word(word)
    chosen = [(name, fn) for name, fn in BACKENDS if methods is None or name in methods]
    if not chosen:
        raise ValueError(f"no known method in {methods!r}")

    workers = min(_worker_count(), len(chosen))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            grammars = list(pool.map(lambda nf: nf[1](word, alphabet), chosen))
    else:
        grammars = [fn(word, alphabet) for _, fn in chosen]

    best_name, best_slp = chosen[0][0], grammars[0]
    for (name, _), slp in zip(chosen[1:], grammars[1:]):
        if slp.size < best_slp.size:
            best_name, best_slp = name, slp
    return ApproxResult(best_slp.size, best_slp, slp_to_plan(best_slp), best_name)
