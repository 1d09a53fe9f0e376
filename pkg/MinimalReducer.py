import logging
from collections import Counter
from itertools import groupby, permutations, product
from operator import itemgetter
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from TableauModel import (
    InvariantKey, Tableau, Word, composition_key, parikh_counts, require_budget,
)

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

Blocks = Tuple[Tuple[int, ...], ...]


def _sorted_counts_key(column: Word, s: int):
    counts = sorted(Counter(column).values(), reverse=True)
    return composition_key(tuple(counts) + (0,) * (s - len(counts)))


def _column_candidates(column: Word, blocks: Blocks) -> Iterator[Tuple[Word, Blocks]]:
    """Images of ``column`` under the letter relabelings that minimize its Parikh composition.

    Rows inside a block are interchangeable, so each block receives its values
    in ascending order; blocks are then split by value.
    """
    by_count: Dict[int, List[int]] = {}
    for letter, count in Counter(column).items():
        by_count.setdefault(count, []).append(letter)
    groups = [sorted(by_count[count]) for count in sorted(by_count, reverse=True)]
    for arrangement in product(*(permutations(group) for group in groups)):
        mapping = {}
        for group in arrangement:
            for letter in group:
                mapping[letter] = len(mapping) + 1
        word: List[int] = []
        split: List[Tuple[int, ...]] = []
        for block in blocks:
            valued = sorted((mapping[column[r]], r) for r in block)
            word.extend(value for value, _ in valued)
            for _, members in groupby(valued, key=itemgetter(0)):
                split.append(tuple(r for _, r in members))
        yield tuple(word), tuple(split)


def minimal_columns(columns: Sequence[Word], n_rows: int, s: int,
                    reference: Optional[Sequence[Word]] = None) -> Optional[Tuple[Word, ...]]:
    """Column sequence of the minimum of an n_rows x len(columns) grid under its group.

    The search keeps every partial labeling that ties for the minimum so far:
    a state is the multiset of unused columns with the ordered row blocks
    (rows not yet distinguished by the chosen columns).

    Args:
        columns: Column words of the grid.
        n_rows: Number of rows.
        s: Alphabet size.
        reference: If given, stop and return None as soon as the minimum is
            found to be strictly smaller than this column sequence.
    """
    start = (tuple(sorted(columns)), (tuple(range(n_rows)),))
    states: Set[Tuple[Tuple[Word, ...], Blocks]] = {start}
    result: List[Word] = []
    for step in range(len(columns)):
        best_key = None
        best_word: Optional[Word] = None
        following: Set[Tuple[Tuple[Word, ...], Blocks]] = set()
        for remaining, blocks in states:
            for index, column in enumerate(remaining):
                if index and remaining[index - 1] == column:
                    continue
                key = _sorted_counts_key(column, s)
                if best_key is not None and key > best_key:
                    continue
                rest = remaining[:index] + remaining[index + 1:]
                for word, split in _column_candidates(column, blocks):
                    if best_key is None or key < best_key or word < best_word:
                        best_key, best_word = key, word
                        following = {(rest, split)}
                    elif word == best_word:
                        following.add((rest, split))
        if reference is not None:
            ref_key = (_sorted_counts_key(reference[step], s), reference[step])
            if (best_key, best_word) < ref_key:
                return None
        result.append(best_word)
        states = following
    return tuple(result)


def is_reduced(tableau: Tableau) -> bool:
    """True iff every column's Parikh composition is already a partition (zeros trailing)
    and the column partitions are non-decreasing in the composition order."""
    previous = None
    for column in tableau.columns:
        counts = parikh_counts(column, tableau.s)
        if any(a < b for a, b in zip(counts, counts[1:])):
            return False
        key = composition_key(tuple(p for p in counts if p))
        if previous is not None and key < previous:
            return False
        previous = key
    return True


class MinimalReducer:
    """Canonical forms: the minimum of each equivalence class, and key-major generation
    of every canonical tableau with a given class invariant.

    Args:
        canonical_n: Largest n accepted by ``minimal_reduced``.
    """

    def __init__(self, canonical_n: int = 5):
        self.canonical_n = canonical_n
        logger.debug("Initialized MinimalReducer with canonical_n=%d", canonical_n)

    def minimal_reduced(self, tableau: Tableau) -> Tableau:
        require_budget("canonical_n", tableau.n, self.canonical_n)
        columns = minimal_columns(tableau.columns, tableau.n, tableau.s)
        return Tableau(tableau.n, tableau.s, tuple(zip(*columns)))

    def is_minimal_reduced(self, tableau: Tableau) -> bool:
        require_budget("canonical_n", tableau.n, self.canonical_n)
        return minimal_columns(tableau.columns, tableau.n, tableau.s, reference=tableau.columns) is not None

    def is_reduced(self, tableau: Tableau) -> bool:
        return is_reduced(tableau)

    def representatives_for_key(self, key: InvariantKey, s: int) -> Iterator[Tableau]:
        """Every minimal reduced tableau over s letters whose class invariant is ``key``.

        Columns are placed left to right with their compositions fixed by the key.
        A new column is non-decreasing inside each block of rows that agree on all
        earlier columns, is lexicographically at least its predecessor when both
        share a partition, and the prefix must be its own minimum.
        """
        n = key.n
        require_budget("canonical_n", n, self.canonical_n)
        compositions = key.padded(s)
        yield from self._extend((), (tuple(range(n)),), compositions, n, s)

    def _extend(self, columns: Tuple[Word, ...], blocks: Blocks,
                compositions: Tuple[Tuple[int, ...], ...], n: int, s: int) -> Iterator[Tableau]:
        k = len(columns)
        if k == n:
            yield Tableau(n, s, tuple(zip(*columns)))
            return
        counts = list(compositions[k])
        same_as_previous = k > 0 and compositions[k] == compositions[k - 1]
        for word in self._block_words(blocks, counts, n):
            if same_as_previous and word < columns[-1]:
                continue
            prefix = columns + (word,)
            if minimal_columns(prefix, n, s, reference=prefix) is None:
                continue
            yield from self._extend(prefix, _refine(blocks, word), compositions, n, s)

    @staticmethod
    def _block_words(blocks: Blocks, counts: List[int], n: int) -> Iterator[Word]:
        """Words with letter counts ``counts``, non-decreasing inside each row block."""
        word = [0] * n

        def fill(block_index: int) -> Iterator[Word]:
            if block_index == len(blocks):
                yield tuple(word)
                return
            block = blocks[block_index]
            yield from place(block_index, block, 0, 1)

        def place(block_index: int, block: Tuple[int, ...], position: int, lowest: int) -> Iterator[Word]:
            if position == len(block):
                yield from fill(block_index + 1)
                return
            for letter in range(lowest, len(counts) + 1):
                if counts[letter - 1]:
                    counts[letter - 1] -= 1
                    word[block[position]] = letter
                    yield from place(block_index, block, position + 1, letter)
                    counts[letter - 1] += 1

        yield from fill(0)


def _refine(blocks: Blocks, word: Word) -> Blocks:
    refined = []
    for block in blocks:
        for _, members in groupby(block, key=lambda r: word[r]):
            refined.append(tuple(members))
    return tuple(refined)
