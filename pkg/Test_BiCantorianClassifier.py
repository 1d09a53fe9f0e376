import logging

import pytest

from BiCantorianClassifier import BiCantorianClassifier
from CensusEngine import CensusEngine
from TableauModel import BudgetRefusal

logging.basicConfig(
    level=logging.DEBUG,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)


class TestClasses:
    def test_two_by_two(self):
        classifier = BiCantorianClassifier()
        assert classifier.class_count(2, 2) == 1
        assert classifier.class_count(2, 3) == 2
        assert classifier.class_count(2, 4) == 3

    def test_representatives_by_letters_used(self):
        classifier = BiCantorianClassifier()
        representatives = classifier.bicantorian_classes(2, 4)
        assert sorted(classifier.distinct_letters(t) for t in representatives) == [2, 3, 4]
        assert representatives[0].rows == ((1, 2), (2, 1))

    def test_three_by_two(self):
        classifier = BiCantorianClassifier()
        groups = classifier.classes(3, 2)
        assert len(groups) == 1
        assert len(groups[0]) == 6

    def test_classes_partition_the_set(self):
        classifier = BiCantorianClassifier()
        groups = classifier.classes(2, 5)
        members = [t for group in groups for t in group]
        assert len(members) == len(set(members)) == CensusEngine().count_bicantorian(2, 5).total_bicantorian

    def test_summary(self):
        summary = BiCantorianClassifier().summary(2, 4, expected=3)
        assert summary["status"] == "match"
        assert summary["tableaux"] == 84
        assert sum(summary["sizes"]) == 84
        assert BiCantorianClassifier().summary(2, 4, expected=2)["status"] == "interpretation-mismatch"

    def test_budget(self):
        with pytest.raises(BudgetRefusal):
            BiCantorianClassifier(bclasses_max=100).classes(3, 2)

    @pytest.mark.slow
    def test_three_by_three(self):
        groups = BiCantorianClassifier().classes(3, 3)
        assert sum(len(group) for group in groups) == 2202


def run_tests():
    """Run the bi-Cantorian classifier tests and log a summary."""
    result = pytest.main([__file__, "-q"])
    if result == 0:
        logger.info("Bi-Cantorian classifier tests PASSED")
    else:
        logger.error("Bi-Cantorian classifier tests FAILED")
    return result == 0


if __name__ == "__main__":
    run_tests()
