import logging
import random
from itertools import product

import pytest

from TableauModel import (
    Composition, ConsistencyError, InvariantKey, Tableau, TableauInputError, class_invariant,
    cmp_composition, cmp_tableau, cmp_word, exact_div, falling_factorial, parikh_tableau,
    parikh_word, word_pattern,
)

logging.basicConfig(
    level=logging.DEBUG,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

T1 = [[1, 1, 3], [1, 1, 2], [2, 3, 1]]
T2 = [[2, 1, 1, 2], [3, 1, 2, 1], [2, 1, 1, 1], [2, 1, 2, 1]]

# Five equivalent 3x3 tableaux, listed from largest to smallest.
DECREASING = [
    [[2, 3, 1], [2, 2, 2], [2, 3, 1]],
    [[1, 1, 1], [1, 3, 2], [1, 1, 1]],
    [[1, 1, 1], [1, 2, 3], [1, 1, 1]],
    [[1, 1, 1], [1, 1, 1], [1, 2, 3]],
    [[1, 1, 1], [1, 1, 1], [1, 2, 2]],
]


class TestCompositions:
    def test_parikh_word(self):
        assert parikh_word([1, 2, 3, 2, 3], 3).parts == (1, 2, 2)
        assert parikh_word([2, 2, 3, 3], 3).parts == (0, 2, 2)
        assert parikh_word([1, 1, 1, 1], 2).parts == (4, 0)

    def test_composition_chain(self):
        chain = [(5,), (4, 1), (3, 2), (2, 3), (1, 4), (3, 1, 1)]
        for smaller, larger in zip(chain, chain[1:]):
            assert cmp_composition(Composition(smaller), Composition(larger)) == -1
            assert cmp_composition(Composition(larger), Composition(smaller)) == 1
        assert cmp_composition(Composition((2, 1)), Composition((2, 1))) == 0

    def test_composition_properties(self):
        c = Composition((0, 3, 1, 0))
        assert c.weight == 4
        assert c.length == 4
        assert c.positive_length == 2
        assert not c.is_partition()
        assert c.stripped().parts == (3, 1)
        assert c.sorted_partition().parts == (3, 1, 0, 0)
        assert str(c) == "0310"

    def test_negative_part_rejected(self):
        with pytest.raises(TableauInputError):
            Composition((1, -1))


class TestWords:
    def test_word_order(self):
        assert cmp_word([3, 2, 1, 2, 1], [1, 2, 3, 2, 3], 3) == -1
        assert cmp_word([1, 2, 3, 2, 3], [2, 1, 2, 3, 3], 3) == -1
        assert cmp_word([1, 1, 2], [1, 2, 1], 3) == -1
        assert cmp_word([1, 2, 1], [1, 2, 1], 3) == 0

    def test_letter_outside_alphabet(self):
        with pytest.raises(TableauInputError):
            cmp_word([1, 4], [1, 1], 3)

    def test_length_mismatch(self):
        with pytest.raises(TableauInputError):
            cmp_word([1, 2], [1, 2, 1], 2)

    def test_pattern(self):
        assert word_pattern([3, 1, 3, 2]) == (0, 1, 0, 2)
        assert word_pattern([1, 2, 1, 3]) == word_pattern([2, 3, 2, 1])


class TestTableau:
    def test_from_rows_validates(self):
        with pytest.raises(TableauInputError):
            Tableau.from_rows([[1, 2], [1]])
        with pytest.raises(TableauInputError):
            Tableau.from_rows([[1, 3], [1, 1]], 2)
        with pytest.raises(TableauInputError):
            Tableau.from_rows([])

    def test_alphabet_inferred(self):
        assert Tableau.from_rows([[1, 1], [1, 1]]).s == 2
        assert Tableau.from_rows(T1).s == 3

    def test_entry_and_columns(self):
        t = Tableau.from_rows(T1)
        assert t.entry(3, 1) == 2
        assert t.columns[2] == (3, 2, 1)
        assert t.letter_count(1) == 5
        assert str(t) == "113/112/231"

    def test_multiplicities(self):
        t = Tableau.from_rows([[1, 1, 1], [1, 1, 1], [2, 2, 2]])
        assert t.row_multiplicities() == (2, 1)
        assert t.column_multiplicities() == (3,)

    def test_tableau_order_examples(self):
        tableaux = [Tableau.from_rows(rows, 3) for rows in DECREASING]
        for larger, smaller in zip(tableaux, tableaux[1:]):
            assert cmp_tableau(larger, smaller) == 1
            assert cmp_tableau(smaller, larger) == -1

    def test_tableau_order_same_parikh(self):
        first = Tableau.from_rows([[1, 1], [2, 2]])
        second = Tableau.from_rows([[1, 2], [2, 1]])
        assert cmp_tableau(first, second) == -1

    def test_shape_mismatch(self):
        with pytest.raises(TableauInputError):
            cmp_tableau(Tableau.constant(2, 2), Tableau.constant(2, 3))


class TestInvariants:
    def test_parikh_tableau(self):
        assert str(parikh_tableau(Tableau.from_rows(T1))) == "(210,201,111)"
        assert str(parikh_tableau(Tableau.from_rows(T2))) == "(031,400,220,310)"

    def test_class_invariant(self):
        key = class_invariant(Tableau.from_rows(T1))
        assert key == InvariantKey(((2, 1), (2, 1), (1, 1, 1)))
        assert key.padded(4) == ((2, 1, 0, 0), (2, 1, 0, 0), (1, 1, 1, 0))
        assert str(key) == "(21,21,111)"

    def test_class_invariant_ignores_letter_names(self):
        first = Tableau.from_rows([[1, 2], [1, 1]], 3)
        second = Tableau.from_rows([[3, 3], [1, 3]], 3)
        assert class_invariant(first) == class_invariant(second)

    def test_falling_factorial(self):
        assert falling_factorial(3, 2) == 6
        assert falling_factorial(4, 0) == 1
        assert falling_factorial(2, 3) == 0

    def test_exact_div(self):
        assert exact_div(12, 4, "test") == 3
        with pytest.raises(ConsistencyError):
            exact_div(7, 2, "test")


def check_total_order(items, compare):
    for a, b in product(items, repeat=2):
        assert compare(a, b) == -compare(b, a)
        assert (compare(a, b) == 0) == (a == b)
    for a, b, c in product(items, repeat=3):
        if compare(a, b) <= 0 and compare(b, c) <= 0:
            assert compare(a, c) <= 0


class TestOrderProperties:
    def test_composition_order(self):
        rng = random.Random(3)
        items = [Composition(tuple(rng.randint(0, 4) for _ in range(rng.randint(1, 4)))) for _ in range(30)]
        check_total_order(items, cmp_composition)

    def test_word_order(self):
        rng = random.Random(5)
        items = [tuple(rng.randint(1, 3) for _ in range(4)) for _ in range(30)]
        check_total_order(items, lambda a, b: cmp_word(a, b, 3))

    def test_tableau_order(self):
        rng = random.Random(13)
        items = [Tableau.from_rows([[rng.randint(1, 3) for _ in range(3)] for _ in range(3)], 3)
                 for _ in range(20)]
        items += [Tableau.from_rows(rows, 3) for rows in DECREASING]
        check_total_order(items, cmp_tableau)


def run_tests():
    """Run the tableau model tests and log a summary."""
    result = pytest.main([__file__, "-q"])
    if result == 0:
        logger.info("Tableau model tests PASSED")
    else:
        logger.error("Tableau model tests FAILED")
    return result == 0


if __name__ == "__main__":
    run_tests()
