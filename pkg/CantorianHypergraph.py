import logging
from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import comb, factorial
from typing import Any, Dict, FrozenSet, List, Tuple

from PermanentTester import diagonal_words, is_bicantorian, is_cantorian
from TableauModel import ConsistencyError, Tableau, TableauInputError, Word, class_invariant, require_budget

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

Vertex = Tuple[int, int]

COUNTEREXAMPLE_TABLEAUX = (
    ((1, 1, 1), (1, 2, 2), (1, 3, 3)),
    ((1, 1, 1), (1, 2, 2), (2, 3, 3)),
    ((1, 1, 1), (2, 2, 2), (3, 3, 3)),
)


def _clause(holds: bool, failure: str) -> None:
    if not holds:
        logger.error("Counterexample clause failed: %s", failure)
        raise AssertionError(failure)


@dataclass(frozen=True)
class ColoredHypergraph:
    """Vertices v_ij colored by a tableau, with row blocks and diagonal blocks.

    Diagonal blocks are kept as vertex sets for structural checks; the colorings
    of both block families are the ordered color sequences along the column index.
    """
    n: int
    coloring: Dict[Vertex, int]
    row_blocks: Tuple[Tuple[Vertex, ...], ...]
    diagonal_blocks: Tuple[Tuple[Vertex, ...], ...]
    chi_L: FrozenSet[Word]
    chi_P: FrozenSet[Word]

    def __hash__(self):
        return hash((self.n, self.chi_L, self.chi_P))

    @property
    def vertices(self) -> List[Vertex]:
        return sorted(self.coloring)

    def is_uniform(self) -> bool:
        return all(len(block) == self.n for block in self.row_blocks + self.diagonal_blocks)

    def degrees(self) -> Dict[Vertex, int]:
        degree = {vertex: 0 for vertex in self.coloring}
        for block in self.row_blocks + self.diagonal_blocks:
            for vertex in block:
                degree[vertex] += 1
        return degree

    def is_regular(self) -> bool:
        return set(self.degrees().values()) == {factorial(self.n - 1) + 1}

    def to_record(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "vertices": [{"row": i, "column": j, "color": self.coloring[(i, j)]} for i, j in self.vertices],
            "row_blocks": [[list(v) for v in block] for block in self.row_blocks],
            "diagonal_block_count": len(self.diagonal_blocks),
            "chi_L": sorted(list(w) for w in self.chi_L),
            "chi_P": sorted(list(w) for w in self.chi_P),
        }


@dataclass(frozen=True)
class CycleColoring:
    """Colors of v1..v4 clockwise on the 4-cycle."""
    colors: Tuple[int, int, int, int]

    def is_proper(self) -> bool:
        c = self.colors
        return all(c[k] != c[(k + 1) % 4] for k in range(4))


class CantorianHypergraph:
    """Hypergraph view of tableaux and the 2x2 / 4-cycle correspondence.

    Args:
        hypergraph_n: Largest n for which the n! diagonal blocks are built.
    """

    def __init__(self, hypergraph_n: int = 7):
        self.hypergraph_n = hypergraph_n
        logger.debug("Initialized CantorianHypergraph with hypergraph_n=%d", hypergraph_n)

    def build_hypergraph(self, tableau: Tableau) -> ColoredHypergraph:
        n = tableau.n
        require_budget("hypergraph_n", n, self.hypergraph_n)
        coloring = {(i, j): tableau.rows[i - 1][j - 1] for i in range(1, n + 1) for j in range(1, n + 1)}
        row_blocks = tuple(tuple((i, j) for j in range(1, n + 1)) for i in range(1, n + 1))
        diagonal_blocks = tuple(tuple((pi[j - 1] + 1, j) for j in range(1, n + 1))
                                for pi in permutations(range(n)))
        return ColoredHypergraph(
            n=n,
            coloring=coloring,
            row_blocks=row_blocks,
            diagonal_blocks=diagonal_blocks,
            chi_L=frozenset(tableau.rows),
            chi_P=frozenset(diagonal_words(tableau.rows)),
        )

    @staticmethod
    def is_intersecting(hypergraph: ColoredHypergraph) -> bool:
        return not hypergraph.chi_L.isdisjoint(hypergraph.chi_P)

    @staticmethod
    def coloring_isomorphic(first: ColoredHypergraph, second: ColoredHypergraph) -> bool:
        """Part-preserving isomorphism of colorings: equal counts of row colorings,
        diagonal colorings and their common sequences."""
        if first.n != second.n:
            return False
        return (len(first.chi_L) == len(second.chi_L)
                and len(first.chi_P) == len(second.chi_P)
                and len(first.chi_L & first.chi_P) == len(second.chi_L & second.chi_P))

    def converse_counterexample_check(self) -> Dict[str, Any]:
        """Three pairwise inequivalent Cantorian tableaux with isomorphic colored hypergraphs.

        Raises:
            AssertionError: Naming the first clause that fails.
        """
        tableaux = [Tableau.from_rows(rows, 3) for rows in COUNTEREXAMPLE_TABLEAUX]
        graphs = [self.build_hypergraph(t) for t in tableaux]
        invariants = [class_invariant(t) for t in tableaux]
        _clause(len(set(invariants)) == 3, "class invariants are not pairwise distinct")
        for tableau, graph in zip(tableaux, graphs):
            _clause(is_cantorian(tableau), f"{tableau} is not Cantorian")
            _clause(len(graph.chi_L) == 3, f"{tableau} does not have 3 distinct row blocks")
            _clause(len(graph.chi_P) == 6, f"{tableau} does not have 6 distinct diagonal colorings")
            _clause(not (graph.chi_L & graph.chi_P), f"{tableau} has a row coloring on a diagonal")
        for a, b in combinations(range(3), 2):
            _clause(self.coloring_isomorphic(graphs[a], graphs[b]),
                    f"hypergraphs of {tableaux[a]} and {tableaux[b]} are not isomorphic")
        return {
            "tableaux": [[list(row) for row in t.rows] for t in tableaux],
            "invariants": [str(k) for k in invariants],
            "chi_L_sizes": [len(g.chi_L) for g in graphs],
            "chi_P_sizes": [len(g.chi_P) for g in graphs],
            "pairwise_isomorphic": True,
        }

    # --- 2x2 tableaux and 4-cycle colorings ---

    @staticmethod
    def psi_bijection(tableau: Tableau) -> CycleColoring:
        """Send a bi-Cantorian 2x2 tableau to the coloring (a11, a12, a22, a21) of the 4-cycle."""
        if tableau.n != 2 or not is_bicantorian(tableau):
            logger.error("psi needs a bi-Cantorian 2x2 tableau, got %s", tableau)
            raise TableauInputError("psi is defined on bi-Cantorian 2x2 tableaux")
        (a11, a12), (a21, a22) = tableau.rows
        return CycleColoring((a11, a12, a22, a21))

    @staticmethod
    def psi_inverse(coloring: CycleColoring, s: int) -> Tableau:
        if not coloring.is_proper() or any(not 1 <= c <= s for c in coloring.colors):
            logger.error("psi inverse needs a proper coloring over 1..%d, got %s", s, coloring.colors)
            raise TableauInputError("psi inverse is defined on proper 4-cycle colorings")
        v1, v2, v3, v4 = coloring.colors
        return Tableau(2, s, ((v1, v2), (v4, v3)))

    @staticmethod
    def proper_cycle_colorings(s: int) -> List[CycleColoring]:
        return [CycleColoring(colors) for colors in product(range(1, s + 1), repeat=4)
                if CycleColoring(colors).is_proper()]

    @staticmethod
    def count_K(s: int) -> int:
        """Proper s-colorings of the 4-cycle, by number of colors used."""
        if s < 1:
            raise TableauInputError(f"s must be positive, got {s}")
        by_binomials = 2 * comb(s, 2) + 12 * comb(s, 3) + 24 * comb(s, 4)
        polynomial = s * (s - 1) * (s * s - 3 * s + 3)
        if by_binomials != polynomial:
            raise ConsistencyError(f"4-cycle counts disagree at s={s}")
        return polynomial
