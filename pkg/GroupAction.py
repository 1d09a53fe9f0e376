import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations, product
from math import factorial, prod
from typing import Any, Dict, Iterator, List, Optional, Sequence, Set, Tuple

from TableauModel import (
    ConsistencyError, Grid, InvariantKey, Tableau, TableauInputError, Word, class_invariant, exact_div,
    falling_factorial, require_budget, word_pattern,
)

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)


def _is_permutation(images: Sequence[int], size: int) -> bool:
    return len(images) == size and sorted(images) == list(range(size))


@dataclass(frozen=True)
class GroupElement:
    """An element (sigma, tau, beta) of the group acting on n x n tableaux over s letters.

    Permutations are stored 0-based as image tuples: row i moves to row
    ``row_perm[i]``, column j moves to column ``col_perm[j]``, and letter a in
    column j becomes ``col_bijections[j][a - 1]``.
    """
    row_perm: Tuple[int, ...]
    col_perm: Tuple[int, ...]
    col_bijections: Tuple[Tuple[int, ...], ...]

    @classmethod
    def identity(cls, n: int, s: int) -> "GroupElement":
        letters = tuple(range(1, s + 1))
        return cls(tuple(range(n)), tuple(range(n)), (letters,) * n)

    @classmethod
    def from_one_based(cls, row_perm: Sequence[int], col_perm: Sequence[int],
                       col_bijections: Sequence[Sequence[int]]) -> "GroupElement":
        element = cls(tuple(p - 1 for p in row_perm), tuple(p - 1 for p in col_perm),
                      tuple(tuple(b) for b in col_bijections))
        element.validate(len(element.row_perm), len(col_bijections[0]) if col_bijections else 0)
        return element

    @classmethod
    def rows_only(cls, row_perm: Sequence[int], s: int) -> "GroupElement":
        n = len(row_perm)
        return cls(tuple(row_perm), tuple(range(n)), (tuple(range(1, s + 1)),) * n)

    @classmethod
    def letters_only(cls, col_bijections: Sequence[Sequence[int]]) -> "GroupElement":
        n = len(col_bijections)
        return cls(tuple(range(n)), tuple(range(n)), tuple(tuple(b) for b in col_bijections))

    @classmethod
    def random(cls, n: int, s: int, rng: random.Random) -> "GroupElement":
        rows, cols = list(range(n)), list(range(n))
        rng.shuffle(rows)
        rng.shuffle(cols)
        bijections = []
        for _ in range(n):
            letters = list(range(1, s + 1))
            rng.shuffle(letters)
            bijections.append(tuple(letters))
        return cls(tuple(rows), tuple(cols), tuple(bijections))

    def validate(self, n: int, s: int) -> None:
        if not _is_permutation(self.row_perm, n) or not _is_permutation(self.col_perm, n):
            logger.error("Invalid row/column permutation for n=%d: %s %s", n, self.row_perm, self.col_perm)
            raise TableauInputError(f"row and column permutations must be permutations of 1..{n}")
        if len(self.col_bijections) != n:
            raise TableauInputError(f"expected {n} column bijections, got {len(self.col_bijections)}")
        for j, beta in enumerate(self.col_bijections, start=1):
            if not _is_permutation([b - 1 for b in beta], s):
                raise TableauInputError(f"bijection of column {j} is not a permutation of 1..{s}")

    def then(self, other: "GroupElement") -> "GroupElement":
        """The element acting as ``self`` followed by ``other``."""
        n = len(self.row_perm)
        return GroupElement(
            tuple(other.row_perm[self.row_perm[i]] for i in range(n)),
            tuple(other.col_perm[self.col_perm[j]] for j in range(n)),
            tuple(tuple(other.col_bijections[self.col_perm[j]][b - 1] for b in self.col_bijections[j])
                  for j in range(n)),
        )


def apply(tableau: Tableau, element: GroupElement) -> Tableau:
    """Apply each column bijection, then move rows by sigma and columns by tau."""
    n = tableau.n
    element.validate(n, tableau.s)
    result = [[0] * n for _ in range(n)]
    for i, row in enumerate(tableau.rows):
        target = result[element.row_perm[i]]
        for j, letter in enumerate(row):
            target[element.col_perm[j]] = element.col_bijections[j][letter - 1]
    return Tableau(n, tableau.s, tuple(tuple(row) for row in result))


# --- Orbits and stabilizers on raw grids ---

def phi_grids(rows: Grid) -> Set[Grid]:
    """Orbit of a grid under independent row and column permutations."""
    orbit = set()
    for arrangement in set(permutations(rows)):
        for column_order in set(permutations(zip(*arrangement))):
            orbit.add(tuple(zip(*column_order)))
    return orbit


def psi_column_images(column: Word, s: int) -> List[Word]:
    """Distinct images of one column word under the letter bijections of 1..s."""
    letters = sorted(set(column))
    images = []
    for chosen in permutations(range(1, s + 1), len(letters)):
        mapping = dict(zip(letters, chosen))
        images.append(tuple(mapping[a] for a in column))
    return images


def psi_grids(rows: Grid, s: int) -> Iterator[Grid]:
    """Orbit of a grid under per-column letter bijections; every member exactly once."""
    choices = [psi_column_images(column, s) for column in zip(*rows)]
    for columns in product(*choices):
        yield tuple(zip(*columns))


def psi_orbit_size(rows: Grid, s: int) -> int:
    return prod(falling_factorial(s, len(set(column))) for column in zip(*rows))


def phi_stabilizer_order(rows: Grid) -> int:
    """Number of pairs (sigma, tau) fixing the grid.

    For each row permutation sigma, the tau completing it are counted in closed
    form: prod(g_j!) when sigma preserves the multiset of column words, else none.
    """
    target = Counter(zip(*rows))
    completions = prod(factorial(m) for m in target.values())
    matching_sigmas = sum(1 for order in permutations(rows) if Counter(zip(*order)) == target)
    return matching_sigmas * completions


def pattern_stabilizer_order(rows: Grid) -> int:
    """Pairs (sigma, tau) with sigma T tau^-1 in the letter-bijection orbit of T.

    Dividing by the row/column stabilizer gives the size of the intersection of
    both orbits without materializing them.
    """
    target = Counter(word_pattern(column) for column in zip(*rows))
    completions = prod(factorial(m) for m in target.values())
    matching_sigmas = sum(1 for order in permutations(rows)
                          if Counter(word_pattern(column) for column in zip(*order)) == target)
    return matching_sigmas * completions


# --- Class reports ---

@dataclass(frozen=True)
class ClassReport:
    """Orbit-stabilizer data of one equivalence class.

    ``cardinality = orbit_phi_size * orbit_psi_size / theta``; every quantity
    except ``orbit_psi_size`` and ``cardinality`` is independent of the alphabet
    size, so ``cardinality_at`` re-evaluates the class at any s.
    """
    representative: Optional[Tableau]
    invariant: InvariantKey
    row_multiplicities: Tuple[int, ...]
    col_multiplicities: Tuple[int, ...]
    eta: int
    theta: int
    orbit_phi_size: int
    orbit_psi_size: int
    cardinality: int
    s: int
    positive_lengths: Tuple[int, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.invariant.n

    def cardinality_at(self, s: int) -> int:
        psi = prod(falling_factorial(s, k) for k in self.positive_lengths)
        return exact_div(self.orbit_phi_size * psi, self.theta, "class cardinality")

    def at_alphabet(self, s: int) -> "ClassReport":
        """The same class read over s letters (the representative is unchanged)."""
        psi = prod(falling_factorial(s, k) for k in self.positive_lengths)
        representative = self.representative.with_alphabet(s) if self.representative else None
        return ClassReport(representative, self.invariant, self.row_multiplicities,
                           self.col_multiplicities, self.eta, self.theta, self.orbit_phi_size, psi,
                           exact_div(self.orbit_phi_size * psi, self.theta, "class cardinality"),
                           s, self.positive_lengths)

    def class_polynomial_factors(self) -> Dict[str, Any]:
        """Numerator (n!)^2 prod s!/(s-l)! over denominator (prod f! prod g! + eta) * theta."""
        n = self.n
        base = prod(factorial(m) for m in self.row_multiplicities) * \
            prod(factorial(m) for m in self.col_multiplicities)
        return {
            "n_factorial_squared": factorial(n) ** 2,
            "positive_lengths": list(self.positive_lengths),
            "stabilizer": base + self.eta,
            "theta": self.theta,
            "denominator": (base + self.eta) * self.theta,
        }

    def to_record(self) -> Dict[str, Any]:
        return {
            "representative": [list(row) for row in self.representative.rows] if self.representative else None,
            "invariant": [list(p) for p in self.invariant.partitions],
            "f": list(self.row_multiplicities),
            "g": list(self.col_multiplicities),
            "eta": self.eta,
            "theta": self.theta,
            "orbit_phi_size": str(self.orbit_phi_size),
            "orbit_psi_size": str(self.orbit_psi_size),
            "cardinality": str(self.cardinality),
            "s": self.s,
        }


class GroupAction:
    """Orbits, stabilizer counts and class cardinalities under row/column permutations
    and per-column alphabet bijections.

    Args:
        phi_orbit_n: Largest n for row/column orbit materialization and eta.
        psi_orbit_max: Largest letter-bijection orbit that may be materialized.
        reducer: Optional canonicalizer used to attach a minimal reduced representative.
    """

    def __init__(self, phi_orbit_n: int = 6, psi_orbit_max: int = 10 ** 7, reducer=None):
        self.phi_orbit_n = phi_orbit_n
        self.psi_orbit_max = psi_orbit_max
        self.reducer = reducer
        logger.debug("Initialized GroupAction with phi_orbit_n=%d, psi_orbit_max=%d", phi_orbit_n, psi_orbit_max)

    def orbit_phi(self, tableau: Tableau) -> Set[Tableau]:
        require_budget("phi_orbit_n", tableau.n, self.phi_orbit_n)
        return {Tableau(tableau.n, tableau.s, grid) for grid in phi_grids(tableau.rows)}

    def orbit_phi_size(self, tableau: Tableau) -> int:
        require_budget("phi_orbit_n", tableau.n, self.phi_orbit_n)
        return exact_div(factorial(tableau.n) ** 2, phi_stabilizer_order(tableau.rows), "row/column orbit")

    def orbit_psi_size(self, tableau: Tableau) -> int:
        return psi_orbit_size(tableau.rows, tableau.s)

    def orbit_psi(self, tableau: Tableau) -> Set[Tableau]:
        require_budget("psi_orbit_max", self.orbit_psi_size(tableau), self.psi_orbit_max)
        return {Tableau(tableau.n, tableau.s, grid) for grid in psi_grids(tableau.rows, tableau.s)}

    def eta(self, tableau: Tableau) -> int:
        """Pairs (sigma, tau) fixing T whose sigma alone does not fix T."""
        require_budget("phi_orbit_n", tableau.n, self.phi_orbit_n)
        rows_fixing = prod(factorial(m) for m in tableau.row_multiplicities())
        cols_fixing = prod(factorial(m) for m in tableau.column_multiplicities())
        return phi_stabilizer_order(tableau.rows) - rows_fixing * cols_fixing

    def theta(self, tableau: Tableau) -> int:
        """Size of the intersection of both orbits, by materializing them."""
        phi_size = self.orbit_phi_size(tableau)
        psi_size = self.orbit_psi_size(tableau)
        require_budget("psi_orbit_max", psi_size, self.psi_orbit_max)
        phi = phi_grids(tableau.rows)
        if psi_size <= phi_size:
            return sum(1 for grid in psi_grids(tableau.rows, tableau.s) if grid in phi)
        psi = set(psi_grids(tableau.rows, tableau.s))
        return len(phi & psi)

    def theta_by_stabilizer(self, tableau: Tableau) -> int:
        require_budget("phi_orbit_n", tableau.n, self.phi_orbit_n)
        return exact_div(pattern_stabilizer_order(tableau.rows), phi_stabilizer_order(tableau.rows), "theta")

    def class_cardinality(self, tableau: Tableau, theta_method: str = "stabilizer",
                          representative: Optional[Tableau] = None) -> ClassReport:
        """Assemble the class report of ``tableau``.

        Args:
            tableau: Any member of the class.
            theta_method: "stabilizer" (no orbit materialization) or "orbits".
            representative: Known minimal reduced form; computed when a reducer is set and n allows it.

        Raises:
            BudgetRefusal: If a bound is exceeded.
            ConsistencyError: If an orbit-stabilizer division is inexact.
        """
        if theta_method not in ("stabilizer", "orbits"):
            raise TableauInputError(f"unknown theta method '{theta_method}'")
        n, s = tableau.n, tableau.s
        eta = self.eta(tableau)
        theta = self.theta(tableau) if theta_method == "orbits" else self.theta_by_stabilizer(tableau)
        phi_size = self.orbit_phi_size(tableau)
        psi_size = self.orbit_psi_size(tableau)
        cardinality = exact_div(phi_size * psi_size, theta, "class cardinality")
        if cardinality > factorial(n) ** 2 * factorial(s) ** n:
            logger.error("Class of %s exceeds the group order", tableau)
            raise ConsistencyError(f"class cardinality {cardinality} exceeds the group order")
        if representative is None and self.reducer is not None and n <= self.reducer.canonical_n:
            representative = self.reducer.minimal_reduced(tableau)
        return ClassReport(
            representative=representative,
            invariant=class_invariant(tableau),
            row_multiplicities=tableau.row_multiplicities(),
            col_multiplicities=tableau.column_multiplicities(),
            eta=eta,
            theta=theta,
            orbit_phi_size=phi_size,
            orbit_psi_size=psi_size,
            cardinality=cardinality,
            s=s,
            positive_lengths=tuple(len(set(column)) for column in tableau.columns),
        )
