"""Cheap certified bounds on the assembly index of a word.

Upper bound: building left to right one letter at a time needs n-1 steps.
Lower bounds: each binary step at most doubles the longest available string
(so at least ceil(log2 n) steps), and the greedy left-to-right LZ77 phrase
count minus one.  The LZ bound holds because any plan with b steps induces
a left-to-right parsing of the word into at most b+1 phrases, each a fresh
letter or a copy of an earlier occurrence, and the greedy factorization is
the coarsest such parsing.  The -1 offset keeps the bound conservative
across factorization conventions; the raw factor count is reported
separately.

Factorization is computed by direct longest-previous-prefix scanning
(quadratic).  That is deliberate: inputs are desk-scale and the simple scan
doubles as a reference if a faster index is ever added.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Word


def trivial_upper(word: Word) -> int:
    """n-1 steps always suffice; a single letter is already in the pool."""
    return max(word.n - 1, 0)


def log_lower(word: Word) -> int:
    """ceil(log2 n): one concatenation at most doubles the longest string."""
    return (word.n - 1).bit_length()


@dataclass(frozen=True)
class FreshFactor:
    """A single letter with no earlier occurrence."""

    symbol: str


@dataclass(frozen=True)
class CopyFactor:
    """A copy of ``length`` symbols starting at earlier position ``src``
    (0-based); the source may overlap the factor itself."""

    src: int
    length: int


LzFactor = FreshFactor | CopyFactor


def lz77_factorize(word: Word) -> list[LzFactor]:
    """Greedy leftmost factorization with self-referential overlap allowed.

    At each position the factor is the longest prefix of the remainder that
    also starts at some strictly earlier position; if there is none, the
    factor is the single fresh letter.
    """
    s = word.symbols
    n = len(s)
    factors: list[LzFactor] = []
    i = 0
    while i < n:
        best_len = 0
        best_src = -1
        for j in range(i):
            length = 0
            while i + length < n and s[j + length] == s[i + length]:
                length += 1
            if length > best_len:
                best_len = length
                best_src = j
        if best_len == 0:
            factors.append(FreshFactor(s[i]))
            i += 1
        else:
            factors.append(CopyFactor(best_src, best_len))
            i += best_len
    return factors


def lz_reconstruct(factors: list[LzFactor]) -> Word:
    """Decode factors left to right (copies may overlap their source)."""
    out: list[str] = []
    for factor in factors:
        if isinstance(factor, FreshFactor):
            out.append(factor.symbol)
        else:
            for k in range(factor.length):
                out.append(out[factor.src + k])
    return Word(tuple(out))


def lz_factor_count(word: Word) -> int:
    return len(lz77_factorize(word))


def lz_lower(word: Word) -> int:
    """Phrase count minus one, a certified lower bound on the assembly
    index (see module docstring for why the offset is safe)."""
    return max(lz_factor_count(word) - 1, 0)


@dataclass(frozen=True)
class BoundsReport:
    """Lower/upper sandwich on the assembly index with the provenance of
    each component."""

    n: int
    trivial_upper: int
    log_lower: int
    lz_factors: int
    lz_lower: int
    best_lower: int
    best_upper: int

    def __post_init__(self):
        if self.best_lower > self.best_upper:
            raise ValueError(
                f"bound sandwich inverted: lower {self.best_lower} > upper {self.best_upper}"
            )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "trivial_upper": self.trivial_upper,
            "log_lower": self.log_lower,
            "lz_factors": self.lz_factors,
            "lz_lower": self.lz_lower,
            "best_lower": self.best_lower,
            "best_upper": self.best_upper,
        }


def bounds_report(word: Word, include_approx: bool = False) -> BoundsReport:
    """Assemble all bounds; with ``include_approx`` the upper bound also
    takes the cheapest compressor backend into account."""
    upper = trivial_upper(word)
    if include_approx:
        from .approx import approx_best  # local import: approx builds on this module's consumers

        upper = min(upper, approx_best(word).value)
    factors = lz_factor_count(word)
    lz = max(factors - 1, 0)
    log = log_lower(word)
    return BoundsReport(
        n=word.n,
        trivial_upper=trivial_upper(word),
        log_lower=log,
        lz_factors=factors,
        lz_lower=lz,
        best_lower=max(log, lz),
        best_upper=upper,
    )
