import logging
import threading
from typing import Any, Dict, Optional, Sequence

from AcceptanceVerifier import AcceptanceVerifier
from BiCantorianClassifier import BiCantorianClassifier
from BruteForceOracle import BruteForceOracle
from CantorianHypergraph import CantorianHypergraph
from CensusEngine import DEFAULT_BUDGETS, CensusEngine
from GroupAction import GroupAction
from MinimalReducer import MinimalReducer
from PermanentTester import PermanentTester
from TableauFormat import TableauFormat
from TableauModel import Tableau, class_invariant, parikh_tableau

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

# Class counts under the bi-Cantorian equivalence reported with the tables.
PUBLISHED_BCLASS_COUNTS = {(3, 2): 1, (3, 3): 32, (3, 4): 173}


def published_bclass_count(n: int, s: int) -> Optional[int]:
    if n == 2 and s >= 4:
        return 3
    return PUBLISHED_BCLASS_COUNTS.get((n, s))


class CantorController:
    """High-level controller wiring the components together for the command line.

    Every command returns the ``results`` part of a report as a plain dict; the
    caller wraps it with the schema header and renders it.

    Attributes:
        tester (PermanentTester): Permanent membership and Cantorian predicates.
        reducer (MinimalReducer): Canonical forms.
        action (GroupAction): Orbits and class cardinalities.
        census_engine (CensusEngine): Census, totals and bi-Cantorian counts.
        classifier (BiCantorianClassifier): Classes under the bi-Cantorian equivalence.
        hypergraph (CantorianHypergraph): Hypergraph view and the 4-cycle correspondence.
        oracle (BruteForceOracle): Independent reference implementations.
    """

    def __init__(self, budgets: Optional[Dict[str, Any]] = None, workers: Optional[int] = None,
                 progress: bool = False):
        self.budgets = dict(DEFAULT_BUDGETS)
        self.budgets.update(budgets or {})
        self.tester = PermanentTester(self.budgets["brute_force_n"])
        self.reducer = MinimalReducer(self.budgets["canonical_n"])
        self.action = GroupAction(self.budgets["phi_orbit_n"], self.budgets["psi_orbit_max"], self.reducer)
        self.census_engine = CensusEngine(self.budgets, workers, progress)
        self.classifier = BiCantorianClassifier(self.budgets["bclasses_max"], progress)
        self.hypergraph = CantorianHypergraph(self.budgets["hypergraph_n"])
        self.oracle = BruteForceOracle(self.budgets["oracle_max_cells"], self.budgets["oracle_closure_n"],
                                       self.budgets["oracle_closure_s"], self.budgets["oracle_closure_max"])
        self.lock = threading.Lock()  # census results are cached inside the engine
        logger.debug("Initialized CantorController")

    # --- Single tableau commands ---

    def check(self, tableau: Tableau, witness: bool = False) -> Dict[str, Any]:
        cantorian = self.tester.is_cantorian(tableau)
        results = {
            "tableau": [list(row) for row in tableau.rows],
            "n": tableau.n,
            "s": tableau.s,
            "cantorian": cantorian,
            "bicantorian": cantorian and self.tester.is_bicantorian(tableau),
        }
        if witness:
            found = self.tester.bicantorian_witness(tableau)
            if found is not None:
                found = dict(found, word=list(found["word"]), permutation=list(found["permutation"]))
            results["witness"] = found
            condition = self.tester.condition_one_witness(tableau)
            if condition is not None:
                condition = dict(condition, word=list(condition["word"]))
            results["condition_one"] = condition
        return results

    def permanent(self, tableau: Tableau, word: Optional[Sequence[int]] = None) -> Dict[str, Any]:
        if word is None:
            words = sorted(self.tester.enumerate(tableau))
            return {"n": tableau.n, "s": tableau.s, "permanent": [list(w) for w in words], "size": len(words)}
        permutation = self.tester.witness(tableau, word)
        return {
            "n": tableau.n,
            "s": tableau.s,
            "word": list(word),
            "contains": permutation is not None,
            "permutation": list(permutation) if permutation else None,
        }

    def reduce(self, tableau: Tableau) -> Dict[str, Any]:
        minimal = self.reducer.minimal_reduced(tableau)
        return {
            "input": [list(row) for row in tableau.rows],
            "input_is_reduced": self.reducer.is_reduced(tableau),
            "parikh": str(parikh_tableau(tableau)),
            "invariant": str(class_invariant(tableau)),
            "minimal_reduced": [list(row) for row in minimal.rows],
            "minimal_reduced_text": TableauFormat.format(minimal),
        }

    def classify(self, tableau: Tableau, theta_method: str = "stabilizer") -> Dict[str, Any]:
        report = self.action.class_cardinality(tableau, theta_method=theta_method)
        record = report.to_record()
        record["invariant_text"] = str(report.invariant)
        record["polynomial"] = report.class_polynomial_factors()
        return record

    def hypergraph_export(self, tableau: Tableau) -> Dict[str, Any]:
        graph = self.hypergraph.build_hypergraph(tableau)
        record = graph.to_record()
        record["uniform"] = graph.is_uniform()
        record["regular"] = graph.is_regular()
        record["intersecting"] = self.hypergraph.is_intersecting(graph)
        return record

    # --- Enumeration commands ---

    def census(self, n: int, s: int, bicantorian: bool = False) -> Dict[str, Any]:
        with self.lock:
            result = self.census_engine.census(n, s)
            record = result.to_record()
            if bicantorian:
                record["bicantorian"] = self.census_engine.count_bicantorian(n, s).to_record()
            return record

    def bicensus(self, n: int, s: int) -> Dict[str, Any]:
        with self.lock:
            bi = self.census_engine.count_bicantorian(n, s)
            record = bi.to_record()
            ratio, decimal = self.census_engine.ratio_b_over_c(n, s, bi.total_bicantorian)
            record["ratio_b_over_c"] = f"{ratio.numerator}/{ratio.denominator}"
            record["ratio_decimal"] = decimal
            return record

    def bclasses(self, n: int, s: int) -> Dict[str, Any]:
        return self.classifier.summary(n, s, published_bclass_count(n, s))

    def tables(self, full: bool = False) -> Dict[str, Any]:
        """Census and bi-Cantorian tables with the B/C ratio row over two letters."""
        census_shapes = [(2, s) for s in range(2, 7)] + [(3, 2), (3, 3), (3, 4)]
        bicantorian_shapes = [(2, s) for s in range(2, 7)] + [(3, 2), (3, 3)]
        ratio_sizes = [2, 3]
        if full:
            census_shapes += [(4, 2), (4, 3), (5, 2)]
            bicantorian_shapes += [(4, 2), (5, 2), (4, 3)]
            ratio_sizes += [4, 5]
        with self.lock:
            census = []
            for n, s in census_shapes:
                result = self.census_engine.census(n, s)
                census.append({"n": n, "s": s, "classes": result.representative_count,
                               "tested": result.tested_count, "total": str(result.total_cantorian),
                               "total_factored": result.factored_total()})
            bicantorian = []
            for n, s in bicantorian_shapes:
                bi = self.census_engine.count_bicantorian(n, s)
                bicantorian.append({"n": n, "s": s, "total": str(bi.total_bicantorian),
                                    "total_factored": bi.factored_total(),
                                    "bclasses_published": published_bclass_count(n, s)})
            ratios = [{"n": n, "ratio": self.census_engine.ratio_b_over_c(n, 2)[1]} for n in ratio_sizes]
        return {"census": census, "bicantorian": bicantorian, "ratios": ratios}

    def verify(self, level: str = "quick") -> Dict[str, Any]:
        return AcceptanceVerifier(self).run(level)
