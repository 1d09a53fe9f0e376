import logging
from collections import deque
from itertools import permutations, product
from typing import Iterator, List, Set, Tuple

from TableauModel import Tableau, require_budget

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

Flat = Tuple[int, ...]


class BruteForceOracle:
    """Slow, independent reference implementations used for cross-validation.

    Nothing here reuses the matching, orbit-counting or canonical-form code:
    permanents come from listing every permutation and classes from a
    breadth-first closure under adjacent transpositions, on row-major tuples.

    Args:
        max_cells: Largest s^(n^2) accepted by the exhaustive enumerations.
        closure_n: Largest n accepted by the class closure.
        closure_s: Largest s accepted by the class closure.
        closure_max: Largest closure size before refusing.
    """

    def __init__(self, max_cells: int = 2 ** 26, closure_n: int = 3, closure_s: int = 3,
                 closure_max: int = 10 ** 7):
        self.max_cells = max_cells
        self.closure_n = closure_n
        self.closure_s = closure_s
        self.closure_max = closure_max
        logger.debug("Initialized BruteForceOracle with max_cells=%d", max_cells)

    # --- Exhaustive enumeration ---

    def oracle_all_tableaux(self, n: int, s: int) -> Iterator[Tableau]:
        """Every n x n tableau over s letters once, in row-major odometer order."""
        require_budget("oracle_max_cells", s ** (n * n), self.max_cells)
        for flat in product(range(1, s + 1), repeat=n * n):
            yield Tableau(n, s, tuple(flat[i * n:(i + 1) * n] for i in range(n)))

    @staticmethod
    def permanent_words(tableau: Tableau) -> Set[Tuple[int, ...]]:
        n = tableau.n
        return {tuple(tableau.rows[pi[j]][j] for j in range(n)) for pi in permutations(range(n))}

    def oracle_is_cantorian(self, tableau: Tableau) -> bool:
        diagonal = self.permanent_words(tableau)
        return all(row not in diagonal for row in tableau.rows)

    def oracle_is_bicantorian(self, tableau: Tableau) -> bool:
        diagonal = self.permanent_words(tableau)
        n = tableau.n
        columns = [tuple(tableau.rows[i][j] for i in range(n)) for j in range(n)]
        return all(word not in diagonal for word in list(tableau.rows) + columns)

    def oracle_count_cantorian(self, n: int, s: int) -> int:
        return sum(1 for t in self.oracle_all_tableaux(n, s) if self.oracle_is_cantorian(t))

    def oracle_count_bicantorian(self, n: int, s: int) -> int:
        return sum(1 for t in self.oracle_all_tableaux(n, s) if self.oracle_is_bicantorian(t))

    # --- Class closure ---

    @staticmethod
    def _neighbours(flat: Flat, n: int, s: int) -> Iterator[Flat]:
        cells = list(flat)
        for i in range(n - 1):
            swapped = cells[:]
            swapped[i * n:(i + 1) * n], swapped[(i + 1) * n:(i + 2) * n] = \
                cells[(i + 1) * n:(i + 2) * n], cells[i * n:(i + 1) * n]
            yield tuple(swapped)
        for j in range(n - 1):
            swapped = cells[:]
            for i in range(n):
                swapped[i * n + j], swapped[i * n + j + 1] = cells[i * n + j + 1], cells[i * n + j]
            yield tuple(swapped)
        for j in range(n):
            for a in range(1, s):
                swapped = cells[:]
                for i in range(n):
                    if cells[i * n + j] == a:
                        swapped[i * n + j] = a + 1
                    elif cells[i * n + j] == a + 1:
                        swapped[i * n + j] = a
                yield tuple(swapped)

    def oracle_class_closure(self, tableau: Tableau) -> Set[Tableau]:
        n, s = tableau.n, tableau.s
        require_budget("oracle_closure_n", n, self.closure_n)
        require_budget("oracle_closure_s", s, self.closure_s)
        start = tuple(letter for row in tableau.rows for letter in row)
        seen = {start}
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for following in self._neighbours(current, n, s):
                if following not in seen:
                    seen.add(following)
                    if len(seen) > self.closure_max:
                        require_budget("oracle_closure_max", len(seen), self.closure_max)
                    queue.append(following)
        return {Tableau(n, s, tuple(flat[i * n:(i + 1) * n] for i in range(n))) for flat in seen}

    def class_cardinality_oracle(self, tableau: Tableau) -> int:
        return len(self.oracle_class_closure(tableau))

    def oracle_minimal_reduced(self, tableau: Tableau) -> Tableau:
        """Minimum of the closure, comparing columns by letter counts then lexicographically."""
        s = tableau.s

        def column_order(candidate: Tableau):
            n = candidate.n
            key = []
            for j in range(n):
                column = tuple(candidate.rows[i][j] for i in range(n))
                counts = [column.count(letter) for letter in range(1, s + 1)]
                key.append((len(counts), [-c for c in counts], column))
            return key

        return min(self.oracle_class_closure(tableau), key=column_order)

    def oracle_class_partition(self, n: int, s: int) -> List[Set[Tableau]]:
        """Split the Cantorian tableaux of (n, s) into classes by repeated closure."""
        remaining = {t for t in self.oracle_all_tableaux(n, s) if self.oracle_is_cantorian(t)}
        classes = []
        while remaining:
            seed = min(remaining, key=lambda t: t.rows)
            closure = self.oracle_class_closure(seed)
            classes.append(closure)
            remaining -= closure
        return classes
