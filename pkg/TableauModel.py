import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Grid = Tuple[Tuple[int, ...], ...]


# --- Errors ---

class TableauInputError(ValueError):
    """Raised for malformed tableaux, words, or arguments."""


class TableauParseError(TableauInputError):
    """Raised by the text reader; carries the 1-based line and column of the fault."""

    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class BudgetRefusal(RuntimeError):
    """Raised when an operation would exceed a configured budget.

    Args:
        budget: Name of the budget setting that was exceeded.
        requested: Size the operation would need.
        limit: Configured limit.
        progress: Optional partial progress record (census shards completed, etc.).
    """

    def __init__(self, budget: str, requested, limit, progress: Optional[dict] = None):
        super().__init__(f"budget '{budget}' exceeded: requested {requested}, limit {limit}")
        self.budget = budget
        self.requested = requested
        self.limit = limit
        self.progress = progress or {}


class ConsistencyError(RuntimeError):
    """Raised when an identity that must hold exactly does not (signals a bug)."""


def require_budget(budget: str, requested, limit) -> None:
    if limit is not None and requested > limit:
        logger.error("Refusing: %s requested %s, limit %s", budget, requested, limit)
        raise BudgetRefusal(budget, requested, limit)


def exact_div(numerator: int, denominator: int, what: str) -> int:
    quotient, remainder = divmod(numerator, denominator)
    if remainder or denominator <= 0:
        logger.error("Inexact division for %s: %d / %d", what, numerator, denominator)
        raise ConsistencyError(f"{what}: {numerator} is not divisible by {denominator}")
    return quotient


# --- Compositions ---

@dataclass(frozen=True)
class Composition:
    """A finite sequence of naturals; zero parts allowed, length is semantic."""
    parts: Tuple[int, ...]

    def __post_init__(self):
        if len(self.parts) < 1:
            raise TableauInputError("a composition has at least one part")
        if any(p < 0 for p in self.parts):
            raise TableauInputError(f"negative part in composition {self.parts}")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def positive_length(self) -> int:
        """Number of non-zero parts (distinct letters of the underlying word)."""
        return sum(1 for p in self.parts if p)

    def is_partition(self) -> bool:
        return all(a >= b for a, b in zip(self.parts, self.parts[1:]))

    def stripped(self) -> "Composition":
        return Composition(tuple(p for p in self.parts if p) or (0,))

    def sorted_partition(self) -> "Composition":
        return Composition(tuple(sorted(self.parts, reverse=True)))

    def __str__(self) -> str:
        return "".join(str(p) for p in self.parts) if max(self.parts) < 10 else ",".join(map(str, self.parts))


# A Partition is a Composition whose parts are non-increasing.
Partition = Composition


def composition_key(parts: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sort key realizing the composition order: shorter first, then inverse lexicographic."""
    return (len(parts), tuple(-p for p in parts))


def _sign(a, b) -> int:
    return (a > b) - (a < b)


def cmp_composition(first: Composition, second: Composition) -> int:
    """Compare two compositions under the composition order; returns -1, 0 or 1."""
    return _sign(composition_key(first.parts), composition_key(second.parts))


# --- Words ---

def validate_word(word: Sequence[int], s: int) -> Word:
    word = tuple(word)
    for position, letter in enumerate(word, start=1):
        if not isinstance(letter, int) or not 1 <= letter <= s:
            logger.error("Letter %r at position %d outside 1..%d", letter, position, s)
            raise TableauInputError(f"letter {letter!r} at position {position} is outside 1..{s}")
    return word


def parikh_counts(word: Sequence[int], s: int) -> Tuple[int, ...]:
    counts = [0] * s
    for letter in word:
        counts[letter - 1] += 1
    return tuple(counts)


def parikh_word(word: Sequence[int], s: int) -> Composition:
    """Parikh composition (|w|_1, ..., |w|_s) of a word over 1..s."""
    return Composition(parikh_counts(validate_word(word, s), s))


def word_key(word: Word, s: int):
    return (composition_key(parikh_counts(word, s)), word)


def cmp_word(first: Sequence[int], second: Sequence[int], s: int) -> int:
    """Compare two equal-length words under the Parikh composition order."""
    first = validate_word(first, s)
    second = validate_word(second, s)
    if len(first) != len(second):
        raise TableauInputError(f"words of different lengths {len(first)} and {len(second)}")
    return _sign(word_key(first, s), word_key(second, s))


def word_pattern(word: Sequence[int]) -> Tuple[int, ...]:
    """First-occurrence relabeling; two words share a pattern iff a letter bijection maps one onto the other."""
    seen: Dict[int, int] = {}
    return tuple(seen.setdefault(letter, len(seen)) for letter in word)


# --- Tableaux ---

@dataclass(frozen=True)
class Tableau:
    """A square n x n tableau over the alphabet 1..s, stored row-major.

    The constructor trusts its input; use ``Tableau.from_rows`` for validation.
    Entry (i, j) of the 1-based external contract is ``rows[i-1][j-1]``.
    """
    n: int
    s: int
    rows: Grid

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], s: Optional[int] = None) -> "Tableau":
        grid = tuple(tuple(row) for row in rows)
        n = len(grid)
        if n < 1:
            raise TableauInputError("a tableau has at least one row")
        for index, row in enumerate(grid, start=1):
            if len(row) != n:
                logger.error("Row %d has %d entries, expected %d", index, len(row), n)
                raise TableauInputError(f"row {index} has {len(row)} entries, expected {n}")
        if s is None:
            s = max(2, max(max(row) for row in grid))
        if s < 1:
            raise TableauInputError(f"alphabet size must be positive, got {s}")
        for i, row in enumerate(grid, start=1):
            for j, letter in enumerate(row, start=1):
                if not isinstance(letter, int) or not 1 <= letter <= s:
                    logger.error("Entry (%d,%d)=%r outside 1..%d", i, j, letter, s)
                    raise TableauInputError(f"entry ({i},{j})={letter!r} is outside 1..{s}")
        return cls(n, s, grid)

    @classmethod
    def constant(cls, n: int, s: int, letter: int = 1) -> "Tableau":
        return cls.from_rows([[letter] * n for _ in range(n)], s)

    def entry(self, i: int, j: int) -> int:
        return self.rows[i - 1][j - 1]

    @property
    def columns(self) -> Grid:
        return tuple(zip(*self.rows))

    @property
    def row_words(self) -> frozenset:
        return frozenset(self.rows)

    @property
    def column_words(self) -> frozenset:
        return frozenset(self.columns)

    def row_multiplicities(self) -> Tuple[int, ...]:
        return tuple(sorted(Counter(self.rows).values(), reverse=True))

    def column_multiplicities(self) -> Tuple[int, ...]:
        return tuple(sorted(Counter(self.columns).values(), reverse=True))

    def letter_count(self, letter: int) -> int:
        return sum(row.count(letter) for row in self.rows)

    def with_alphabet(self, s: int) -> "Tableau":
        """The same grid read over a different alphabet size."""
        if s == self.s:
            return self
        return Tableau.from_rows(self.rows, s)

    def __str__(self) -> str:
        return "/".join("".join(map(str, row)) if self.s <= 9 else ",".join(map(str, row)) for row in self.rows)


def _check_same_shape(first: Tableau, second: Tableau) -> None:
    if first.n != second.n or first.s != second.s:
        logger.error("Shape mismatch: (%d,%d) vs (%d,%d)", first.n, first.s, second.n, second.s)
        raise TableauInputError(
            f"tableaux of different shapes (n={first.n}, s={first.s}) and (n={second.n}, s={second.s})")


def columns_key(columns: Sequence[Word], s: int):
    return tuple(word_key(column, s) for column in columns)


def tableau_key(tableau: Tableau):
    """Sort key of the tableau order: column-words left to right under the word order."""
    return columns_key(tableau.columns, tableau.s)


def cmp_tableau(first: Tableau, second: Tableau) -> int:
    _check_same_shape(first, second)
    return _sign(tableau_key(first), tableau_key(second))


# --- Parikh vectors and the class invariant ---

@dataclass(frozen=True)
class ParikhVector:
    columns: Tuple[Composition, ...]

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.columns) + ")"


@dataclass(frozen=True)
class InvariantKey:
    """Sorted vector of zero-stripped column partitions; constant on equivalence classes."""
    partitions: Tuple[Tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.partitions)

    def padded(self, s: int) -> Tuple[Tuple[int, ...], ...]:
        """Partitions padded with zeros to length s (the reduced-form column compositions)."""
        return tuple(p + (0,) * (s - len(p)) for p in self.partitions)

    def __str__(self) -> str:
        return "(" + ",".join("".join(map(str, p)) for p in self.partitions) + ")"


def parikh_tableau(tableau: Tableau) -> ParikhVector:
    return ParikhVector(tuple(Composition(parikh_counts(c, tableau.s)) for c in tableau.columns))


def column_partition(column: Word, s: int) -> Tuple[int, ...]:
    return tuple(p for p in sorted(parikh_counts(column, s), reverse=True) if p)


def invariant_from_columns(columns: Sequence[Word], s: int) -> InvariantKey:
    return InvariantKey(tuple(sorted((column_partition(c, s) for c in columns), key=composition_key)))


def class_invariant(tableau: Tableau) -> InvariantKey:
    return invariant_from_columns(tableau.columns, tableau.s)


def falling_factorial(s: int, k: int) -> int:
    """s!/(s-k)!, zero when k > s."""
    result = 1
    for i in range(k):
        result *= s - i
    return result if k <= s else 0
