import logging
from itertools import permutations, product
from typing import Dict, List, Optional, Set

from networkx.utils import UnionFind
from tqdm import tqdm

from PermanentTester import is_bicantorian_grid
from TableauModel import Grid, Tableau, require_budget, tableau_key

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)


class BiCantorianClassifier:
    """Classes of bi-Cantorian tableaux under the bi-Cantorian equivalence.

    Two bi-Cantorian tableaux are joined when one is obtained from the other by
    a row/column permutation pair (sigma, tau) whose image is again bi-Cantorian
    (this contains the simultaneous permutations sigma = tau), or by one global
    alphabet bijection. Classes are the connected components, found with a
    union-find structure.

    Args:
        bclasses_max: Largest number of tableaux s^(n^2) that may be enumerated.
        progress: Show a tqdm progress bar while scanning tableaux.
    """

    def __init__(self, bclasses_max: int = 2 ** 20, progress: bool = False):
        self.bclasses_max = bclasses_max
        self.progress = progress
        logger.debug("Initialized BiCantorianClassifier with bclasses_max=%d", bclasses_max)

    def bicantorian_set(self, n: int, s: int) -> Set[Grid]:
        require_budget("bclasses_max", s ** (n * n), self.bclasses_max)
        members = set()
        cells = product(range(1, s + 1), repeat=n * n)
        for flat in tqdm(cells, total=s ** (n * n), desc=f"bi-cantorian({n},{s})", disable=not self.progress):
            grid = tuple(flat[i * n:(i + 1) * n] for i in range(n))
            if is_bicantorian_grid(grid):
                members.add(grid)
        return members

    def classes(self, n: int, s: int) -> List[List[Tableau]]:
        """Every class, members sorted by the tableau order, classes sorted by their minimum."""
        members = self.bicantorian_set(n, s)
        components = UnionFind(members)
        orders = list(permutations(range(n)))
        swaps = [tuple(b + 1 if b == a else b - 1 if b == a + 1 else b for b in range(1, s + 1))
                 for a in range(1, s)]
        for grid in members:
            for sigma in orders:
                arranged = [grid[i] for i in sigma]
                for tau in orders:
                    image = tuple(tuple(row[j] for j in tau) for row in arranged)
                    if image in members:
                        components.union(grid, image)
            for swap in swaps:
                image = tuple(tuple(swap[letter - 1] for letter in row) for row in grid)
                if image in members:
                    components.union(grid, image)
        grouped: Dict[Grid, List[Tableau]] = {}
        for grid in members:
            grouped.setdefault(components[grid], []).append(Tableau(n, s, grid))
        result = [sorted(group, key=tableau_key) for group in grouped.values()]
        result.sort(key=lambda group: tableau_key(group[0]))
        logger.info("Bi-Cantorian classes (%d,%d): %d classes over %d tableaux", n, s, len(result), len(members))
        return result

    def bicantorian_classes(self, n: int, s: int) -> List[Tableau]:
        """The minimum of each class."""
        return [group[0] for group in self.classes(n, s)]

    def class_count(self, n: int, s: int) -> int:
        return len(self.classes(n, s))

    @staticmethod
    def distinct_letters(tableau: Tableau) -> int:
        return len({letter for row in tableau.rows for letter in row})

    def summary(self, n: int, s: int, expected: Optional[int] = None) -> Dict:
        groups = self.classes(n, s)
        record = {
            "n": n,
            "s": s,
            "classes": len(groups),
            "tableaux": sum(len(group) for group in groups),
            "representatives": [[list(row) for row in group[0].rows] for group in groups],
            "sizes": [len(group) for group in groups],
        }
        if expected is not None:
            record["expected"] = expected
            record["status"] = "match" if expected == len(groups) else "interpretation-mismatch"
        return record
