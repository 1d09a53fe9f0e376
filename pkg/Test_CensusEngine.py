import logging

import pytest

from BruteForceOracle import BruteForceOracle
from CensusEngine import (
    CensusEngine, closed_form_C, factor_bicantorian_total, factor_cantorian_total, integer_partitions,
    prune_key,
)
from TableauModel import BudgetRefusal, InvariantKey, TableauInputError

logging.basicConfig(
    level=logging.DEBUG,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

BICANTORIAN_TWO = {2: 2, 3: 18, 4: 84, 5: 260, 6: 630}


class TestKeys:
    def test_integer_partitions(self):
        assert list(integer_partitions(4, 4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
        assert list(integer_partitions(4, 2)) == [(4,), (3, 1), (2, 2)]

    def test_candidate_keys(self):
        engine = CensusEngine()
        assert len(list(engine.candidate_invariant_keys(3, 2, prune=False))) == 4
        assert list(engine.candidate_invariant_keys(3, 2)) == [InvariantKey(((2, 1), (2, 1), (2, 1)))]
        assert len(list(engine.candidate_invariant_keys(3, 3, prune=False))) == 10
        assert len(list(engine.candidate_invariant_keys(3, 3))) == 6

    def test_prune_rules(self):
        assert not prune_key(InvariantKey(((3,), (2, 1), (2, 1))), 3, 3)
        assert prune_key(InvariantKey(((3,), (2, 1), (1, 1, 1))), 3, 3)
        # exactly n + 1 minority letters
        assert not prune_key(InvariantKey(((3, 1), (3, 1), (3, 1), (2, 2))), 4, 2)
        assert prune_key(InvariantKey(((3, 1), (3, 1), (2, 2), (2, 2))), 4, 2)

    def test_bad_shape(self):
        with pytest.raises(TableauInputError):
            list(CensusEngine().candidate_invariant_keys(1, 2))


class TestCensus:
    def test_two_by_two(self):
        engine = CensusEngine()
        for s in range(2, 7):
            result = engine.census(2, s)
            assert result.representative_count == 1
            assert result.tested_count == 1
            assert result.total_cantorian == s ** 2 * (s - 1) ** 2

    def test_three_by_two(self):
        result = CensusEngine().census(3, 2)
        assert (result.representative_count, result.tested_count) == (1, 3)
        assert result.total_cantorian == 24
        assert (result.keys_examined, result.keys_kept) == (4, 1)
        assert result.factored_total() == "3·2^3"

    def test_three_by_three(self):
        result = CensusEngine().census(3, 3)
        assert result.representative_count == 5
        assert result.total_cantorian == 5076
        assert sorted(r.cardinality for r in result.per_class) == [216, 324, 648, 1944, 1944]
        assert result.factored_total() == "47·2^2·3^3"

    def test_reuse_small_alphabet(self):
        engine = CensusEngine()
        lifted = engine.census(3, 4)
        direct = CensusEngine().census(3, 4, reuse_small_alphabet=False)
        assert lifted.total_cantorian == direct.total_cantorian == 119232
        assert lifted.representative_count == direct.representative_count

    def test_representatives_carry_over_one_more_letter(self):
        engine = CensusEngine()
        for n in (2, 3):
            small = {report.representative.rows for report in engine.census(n, n).per_class}
            direct = engine.census(n, n + 1, reuse_small_alphabet=False)
            assert {report.representative.rows for report in direct.per_class} == small

    def test_agrees_with_exhaustive_count(self):
        engine = CensusEngine()
        oracle = BruteForceOracle()
        for n, s in ((2, 2), (2, 3), (3, 2), (3, 3)):
            assert engine.count_cantorian(n, s) == oracle.oracle_count_cantorian(n, s)

    def test_closed_forms(self):
        engine = CensusEngine()
        for s in range(2, 7):
            assert engine.count_cantorian(2, s) == closed_form_C(2, s)
            assert engine.count_cantorian(3, s) == closed_form_C(3, s)
        assert closed_form_C(4, 2) == 1744
        assert closed_form_C(4, 3) == 8111664
        with pytest.raises(TableauInputError):
            closed_form_C(5, 2)

    def test_workers_do_not_change_the_result(self):
        sequential = CensusEngine(workers=1).census(3, 3)
        parallel = CensusEngine(workers=2).census(3, 3)
        assert sequential.to_record() == parallel.to_record()

    def test_time_budget(self):
        engine = CensusEngine({"time_budget": 1e-9})
        with pytest.raises(BudgetRefusal) as info:
            engine.census(3, 3)
        assert info.value.progress["keys_done"] == 1
        assert info.value.progress["keys_total"] == 6

    def test_time_budget_with_workers(self):
        engine = CensusEngine({"time_budget": 1e-9}, workers=2)
        with pytest.raises(BudgetRefusal) as info:
            engine.census(4, 3)
        assert info.value.budget == "time_budget"
        assert info.value.progress["keys_done"] < info.value.progress["keys_total"]

    def test_canonical_budget(self):
        with pytest.raises(BudgetRefusal):
            CensusEngine({"canonical_n": 2}).census(3, 2)

    def test_factoring(self):
        assert factor_cantorian_total(5076, 3, 3) == "47·2^2·3^3"
        assert factor_cantorian_total(25, 3, 3) == "25"
        assert factor_bicantorian_total(18, 3) == "2·3·3"

    @pytest.mark.slow
    def test_larger_tables(self):
        engine = CensusEngine()
        result = engine.census(4, 2)
        assert (result.representative_count, result.total_cantorian) == (6, 1744)
        result = engine.census(5, 2)
        assert (result.representative_count, result.total_cantorian) == (11, 88480)
        result = engine.census(4, 3)
        assert result.representative_count == 56
        assert result.total_cantorian == 8111664

    @pytest.mark.slow
    def test_five_by_three_against_sampling(self):
        engine = CensusEngine()
        result = engine.census(5, 3)
        assert (result.representative_count, result.tested_count) == (1875, 12691)
        assert result.total_cantorian == 82368213120
        estimate, error = engine.estimate_cantorian_total(5, 3, 10000, seed=53)
        assert abs(result.total_cantorian - estimate) <= 4 * error
        # the published total, 16304200·2^2·3^5, lies far outside the sample
        assert abs(16304200 * 2 ** 2 * 3 ** 5 - estimate) > 10 * error

    def test_sampling_small_shapes(self):
        engine = CensusEngine()
        estimate, error = engine.estimate_cantorian_total(3, 3, 3000, seed=31)
        assert abs(5076 - estimate) <= 4 * error
        with pytest.raises(TableauInputError):
            engine.estimate_cantorian_total(3, 3, 0)


class TestTwoLetterCounts:
    def test_c_n_p(self):
        engine = CensusEngine()
        assert [engine.count_c_n_p(3, p) for p in range(10)] == [0, 0, 0, 3, 9, 9, 3, 0, 0, 0]
        assert [engine.count_c_n_p(2, p) for p in range(5)] == [0, 0, 4, 0, 0]

    def test_c_n_p_sums_to_total(self):
        engine = CensusEngine()
        assert sum(engine.count_c_n_p(3, p) for p in range(10)) == engine.count_cantorian(3, 2)

    def test_c_n_p_range(self):
        with pytest.raises(TableauInputError):
            CensusEngine().count_c_n_p(3, 10)

    @pytest.mark.slow
    def test_c_n_p_four(self):
        engine = CensusEngine()
        values = [engine.count_c_n_p(4, p) for p in range(17)]
        assert values == values[::-1]
        assert values[4] == 4 and values[5] == 0
        assert sum(values) == 1744


class TestBicantorian:
    def test_two_by_two(self):
        engine = CensusEngine()
        for s, expected in BICANTORIAN_TWO.items():
            assert engine.count_bicantorian(2, s).total_bicantorian == expected

    def test_three(self):
        engine = CensusEngine()
        assert engine.count_bicantorian(3, 2).total_bicantorian == 6
        assert engine.count_bicantorian(3, 3).total_bicantorian == 2202

    def test_agrees_with_exhaustive_count(self):
        engine = CensusEngine()
        oracle = BruteForceOracle()
        for n, s in ((2, 3), (3, 2), (3, 3)):
            assert engine.count_bicantorian(n, s).total_bicantorian == oracle.oracle_count_bicantorian(n, s)

    def test_ratios(self):
        engine = CensusEngine()
        assert engine.ratio_b_over_c(2, 2)[1] == "0.500"
        assert engine.ratio_b_over_c(3, 2)[1] == "0.250"

    @pytest.mark.slow
    def test_ratios_larger(self):
        engine = CensusEngine()
        assert engine.count_bicantorian(4, 2).total_bicantorian == 182
        assert engine.ratio_b_over_c(4, 2)[1] == "0.104"
        assert engine.count_bicantorian(5, 2).total_bicantorian == 4010
        assert engine.ratio_b_over_c(5, 2)[1] == "0.045"
        assert engine.count_bicantorian(4, 3).total_bicantorian == 2417238


def run_tests():
    """Run the census tests and log a summary."""
    result = pytest.main([__file__, "-q"])
    if result == 0:
        logger.info("Census tests PASSED")
    else:
        logger.error("Census tests FAILED")
    return result == 0


if __name__ == "__main__":
    run_tests()
