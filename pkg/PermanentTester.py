import logging
from typing import Dict, FrozenSet, Optional, Sequence, Set, Tuple

import networkx as nx
from networkx.algorithms import bipartite

from TableauModel import (
    ConsistencyError, Grid, Tableau, TableauInputError, Word, require_budget, validate_word,
)

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)


def _matching_graph(rows: Grid, word: Word) -> Tuple[nx.Graph, list]:
    """Bipartite graph (columns x rows) with an edge iff row i carries word[j] in column j."""
    n = len(rows)
    columns = [("c", j) for j in range(n)]
    graph = nx.Graph()
    graph.add_nodes_from(columns, bipartite=0)
    graph.add_nodes_from((("r", i) for i in range(n)), bipartite=1)
    graph.add_edges_from((("c", j), ("r", i))
                         for j in range(n) for i in range(n) if rows[i][j] == word[j])
    return graph, columns


def _perfect_matching(rows: Grid, word: Word) -> Optional[Dict]:
    n = len(rows)
    # a column with no row carrying its letter has no matching partner
    for j in range(n):
        if all(rows[i][j] != word[j] for i in range(n)):
            return None
    graph, columns = _matching_graph(rows, word)
    matching = bipartite.hopcroft_karp_matching(graph, top_nodes=columns)
    if all(column in matching for column in columns):
        return matching
    return None


def diagonal_words(rows: Grid) -> Set[Word]:
    """All words a_{pi(1)}^1 ... a_{pi(n)}^n, built column by column over used-row masks."""
    n = len(rows)
    layer: Dict[int, Set[Word]] = {0: {()}}
    for j in range(n):
        following: Dict[int, Set[Word]] = {}
        for mask, prefixes in layer.items():
            for i in range(n):
                bit = 1 << i
                if mask & bit:
                    continue
                letter = rows[i][j]
                target = following.setdefault(mask | bit, set())
                target.update(prefix + (letter,) for prefix in prefixes)
        layer = following
    return layer[(1 << n) - 1]


class PermanentTester:
    """Permanent membership, enumeration, and the Cantorian predicates.

    Membership is decided by a perfect bipartite matching (Hopcroft-Karp), so it
    scales polynomially in n. Enumeration of the full permanent is bounded by
    ``brute_force_n``.

    Args:
        brute_force_n: Largest n for which ``enumerate_permanent`` materializes the set.
    """

    def __init__(self, brute_force_n: int = 8):
        self.brute_force_n = brute_force_n
        logger.debug("Initialized PermanentTester with brute_force_n=%d", brute_force_n)

    def _checked_word(self, tableau: Tableau, word: Sequence[int]) -> Word:
        if len(word) != tableau.n:
            logger.error("Word length %d does not match n=%d", len(word), tableau.n)
            raise TableauInputError(f"word of length {len(word)} queried against a {tableau.n}x{tableau.n} tableau")
        return validate_word(word, tableau.s)

    def contains(self, tableau: Tableau, word: Sequence[int]) -> bool:
        """True iff ``word`` is a diagonal word of ``tableau``."""
        return _perfect_matching(tableau.rows, self._checked_word(tableau, word)) is not None

    def witness(self, tableau: Tableau, word: Sequence[int]) -> Optional[Tuple[int, ...]]:
        """The permutation realizing ``word``, as 1-based row indices per column, or None."""
        matching = _perfect_matching(tableau.rows, self._checked_word(tableau, word))
        if matching is None:
            return None
        return tuple(matching[("c", j)][1] + 1 for j in range(tableau.n))

    def enumerate(self, tableau: Tableau) -> Set[Word]:
        """The exact permanent of ``tableau`` as a set of words.

        Raises:
            BudgetRefusal: If n exceeds ``brute_force_n``.
        """
        require_budget("brute_force_n", tableau.n, self.brute_force_n)
        return diagonal_words(tableau.rows)

    def is_cantorian(self, tableau: Tableau) -> bool:
        return not any(_perfect_matching(tableau.rows, row) is not None for row in tableau.row_words)

    def is_bicantorian(self, tableau: Tableau) -> bool:
        if not self.is_cantorian(tableau):
            return False
        return not any(_perfect_matching(tableau.rows, column) is not None for column in tableau.column_words)

    def cantorian_witness(self, tableau: Tableau) -> Optional[Dict]:
        """First row-word (in row order) lying in the permanent, with its realizing permutation."""
        for index, row in enumerate(tableau.rows, start=1):
            permutation = self.witness(tableau, row)
            if permutation is not None:
                return {"kind": "row", "index": index, "word": row, "permutation": permutation}
        return None

    def bicantorian_witness(self, tableau: Tableau) -> Optional[Dict]:
        found = self.cantorian_witness(tableau)
        if found is not None:
            return found
        for index, column in enumerate(tableau.columns, start=1):
            permutation = self.witness(tableau, column)
            if permutation is not None:
                return {"kind": "column", "index": index, "word": column, "permutation": permutation}
        return None

    def condition_one_witness(self, tableau: Tableau) -> Optional[Dict]:
        """A letter occurring at least n^2-n+1 times forces its constant word into rows and permanent.

        Returns:
            dict with the letter, its count and the word a^n, or None when no letter is that frequent.

        Raises:
            ConsistencyError: If the forced word is missing from rows or permanent (cannot happen).
        """
        n = tableau.n
        threshold = n * n - n + 1
        for letter in range(1, tableau.s + 1):
            count = tableau.letter_count(letter)
            if count >= threshold:
                word = (letter,) * n
                if word not in tableau.row_words or not self.contains(tableau, word):
                    logger.error("Letter %d occurs %d times but %s is not forced", letter, count, word)
                    raise ConsistencyError(f"frequent letter {letter} does not force {word}")
                return {"letter": letter, "count": count, "word": word}
        return None


_default_tester = PermanentTester()


def permanent_contains(tableau: Tableau, word: Sequence[int]) -> bool:
    return _default_tester.contains(tableau, word)


def permanent_witness(tableau: Tableau, word: Sequence[int]) -> Optional[Tuple[int, ...]]:
    return _default_tester.witness(tableau, word)


def enumerate_permanent(tableau: Tableau) -> Set[Word]:
    return _default_tester.enumerate(tableau)


def is_cantorian(tableau: Tableau) -> bool:
    return _default_tester.is_cantorian(tableau)


def is_bicantorian(tableau: Tableau) -> bool:
    return _default_tester.is_bicantorian(tableau)


def condition_one_witness(tableau: Tableau) -> Optional[Dict]:
    return _default_tester.condition_one_witness(tableau)


def is_bicantorian_grid(rows: Grid, permanent: Optional[FrozenSet[Word]] = None) -> bool:
    """Bi-Cantorian test on a raw grid through the enumerated permanent (hot loops)."""
    if permanent is None:
        permanent = diagonal_words(rows)
    if any(row in permanent for row in rows):
        return False
    return not any(column in permanent for column in zip(*rows))
