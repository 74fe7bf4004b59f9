"""Domain model: alphabets, words, assembly plans, and straight-line grammars.

An assembly plan builds a target word from single letters using binary
concatenation steps; every intermediate may be reused any number of times,
and the cost of a plan is its step count.  A straight-line program (SLP) is
the grammar view of the same object: a context-free grammar in which every
nonterminal has exactly one rule and which derives exactly one word.  Its
size is the number of binary (concatenation) rules; pure terminal aliases
cost nothing.  The converters in :mod:`asmgram.convert` translate between
the two views without changing the cost.

All types here are immutable values; operations over them are pure
functions, so everything is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass


class AsmgramError(Exception):
    """Base class for all toolkit errors."""


class DanglingReference(AsmgramError):
    """A step operand points at the current or a later step."""


class EmptyPlanNonEmptyTarget(AsmgramError):
    """A zero-step plan was checked against a target longer than one letter."""


class SymbolNotInAlphabet(AsmgramError):
    """A terminal operand uses a symbol outside the declared alphabet."""


class EmptyPlan(AsmgramError):
    """No start rule is derivable from a plan with no steps and no target."""


class DuplicateRule(AsmgramError):
    """A nonterminal has more than one rule."""


class CyclicGrammar(AsmgramError):
    """The rule reference graph contains a cycle."""


class UndefinedNonterminal(AsmgramError):
    """A rule or the start symbol references a nonterminal with no rule."""


class ExpansionTooLarge(AsmgramError):
    """The derived word would exceed the expansion length cap."""


class WordTooLong(AsmgramError):
    """The input word exceeds the configured limit of the chosen solver."""


class BudgetExhausted(AsmgramError):
    """A search ran out of its time or node budget."""


class FormatError(AsmgramError):
    """A text, JSON, or binary artifact failed to parse."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Alphabet:
    """Finite, ordered set of distinct terminal symbols.

    A symbol is an opaque non-empty token, normally a single Unicode scalar.
    """

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        seen = set()
        for sym in self.symbols:
            if not isinstance(sym, str) or not sym:
                raise ValueError(f"bad alphabet symbol: {sym!r}")
            if sym in seen:
                raise ValueError(f"duplicate alphabet symbol: {sym!r}")
            seen.add(sym)

    @classmethod
    def from_text(cls, text: str) -> "Alphabet":
        """One Unicode scalar per symbol, in the given order."""
        return cls(tuple(text))

    @classmethod
    def for_word(cls, word: "Word") -> "Alphabet":
        """Distinct symbols of ``word`` in order of first appearance."""
        return cls(tuple(dict.fromkeys(word.symbols)))

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self.symbols

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)


@dataclass(frozen=True)
class Word:
    """Non-empty sequence of terminal symbols.

    Words compare by exact symbol sequence; no case folding or Unicode
    normalization is applied.
    """

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("word must be non-empty")
        for sym in self.symbols:
            if not isinstance(sym, str) or not sym:
                raise ValueError(f"bad word symbol: {sym!r}")

    @classmethod
    def from_text(cls, text: str) -> "Word":
        """One Unicode scalar per symbol."""
        return cls(tuple(text))

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def text(self) -> str:
        """Compact display form; space-joined if any symbol is multi-scalar."""
        if all(len(s) == 1 for s in self.symbols):
            return "".join(self.symbols)
        return " ".join(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Terminal:
    """Operand naming a single letter from the alphabet (always free)."""

    symbol: str


@dataclass(frozen=True)
class Prior:
    """Operand naming an earlier step by its 1-based index."""

    step: int


Operand = Terminal | Prior


@dataclass(frozen=True)
class AssemblyStep:
    """One binary concatenation: the step's product is left + right."""

    left: Operand
    right: Operand


@dataclass(frozen=True)
class AssemblyPlan:
    """Ordered concatenation steps over an alphabet, optionally with a
    declared target word.

    Construction is permissive so that malformed witnesses can be built and
    fed to the verifier; :meth:`validate` (or any consuming operation)
    raises the structural errors.
    """

    alphabet: Alphabet
    steps: tuple[AssemblyStep, ...]
    declared_target: Word | None = None

    @property
    def cost(self) -> int:
        return len(self.steps)

    def validate(self) -> None:
        """Raise if any operand reference is malformed."""
        for i, step in enumerate(self.steps, 1):
            for operand in (step.left, step.right):
                if isinstance(operand, Terminal):
                    if operand.symbol not in self.alphabet:
                        raise SymbolNotInAlphabet(
                            f"step s{i}: symbol {operand.symbol!r} is not in the alphabet"
                        )
                elif isinstance(operand, Prior):
                    if not 1 <= operand.step < i:
                        raise DanglingReference(
                            f"step s{i}: reference to step {operand.step} is not strictly earlier"
                        )
                else:
                    raise TypeError(f"step s{i}: bad operand {operand!r}")


def plan_cost(plan: AssemblyPlan) -> int:
    """Number of assembly steps in the plan."""
    return plan.cost


@dataclass(frozen=True)
class Nonterminal:
    """Right-hand-side reference to another rule by name."""

    name: str


RuleRef = Terminal | Nonterminal


@dataclass(frozen=True)
class SlpRule:
    """Single production of a nonterminal.

    A two-element right-hand side is a binary concatenation rule (cost 1).
    A one-element right-hand side must be a terminal and is a free alias,
    permitted so the one-letter word has a grammar of size 0.
    """

    lhs: str
    rhs: tuple[RuleRef, ...]

    def __post_init__(self):
        if len(self.rhs) not in (1, 2):
            raise ValueError(f"rule {self.lhs}: rhs must have 1 or 2 references")
        if len(self.rhs) == 1 and not isinstance(self.rhs[0], Terminal):
            raise ValueError(f"rule {self.lhs}: a unary rule must alias a terminal")

    @property
    def is_binary(self) -> bool:
        return len(self.rhs) == 2


@dataclass(frozen=True)
class Slp:
    """Straight-line program: one rule per nonterminal, acyclic references,
    and a start symbol deriving exactly one word.

    Size counts only binary rules.  As with plans, construction is
    permissive; consuming operations validate.
    """

    alphabet: Alphabet
    rules: tuple[SlpRule, ...]
    start: str

    @property
    def size(self) -> int:
        return sum(1 for rule in self.rules if rule.is_binary)


def slp_size(slp: Slp) -> int:
    """Number of binary concatenation rules (terminal aliases are free)."""
    return slp.size
