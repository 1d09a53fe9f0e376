import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor, TimeoutError as FutureTimeout, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import factorial, sqrt
from typing import Any, Dict, Iterator, List, Optional, Tuple

from tqdm import tqdm

from GroupAction import ClassReport, GroupAction, pattern_stabilizer_order, psi_grids, psi_orbit_size
from MinimalReducer import MinimalReducer
from PermanentTester import PermanentTester, diagonal_words
from TableauModel import (
    BudgetRefusal, ConsistencyError, InvariantKey, Tableau, TableauInputError, composition_key, exact_div,
    require_budget,
)

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

DEFAULT_BUDGETS: Dict[str, Any] = {
    "brute_force_n": 8,
    "phi_orbit_n": 6,
    "psi_orbit_max": 10 ** 7,
    "canonical_n": 5,
    "oracle_closure_n": 3,
    "oracle_closure_s": 3,
    "oracle_closure_max": 10 ** 7,
    "oracle_max_cells": 2 ** 26,
    "hypergraph_n": 7,
    "bclasses_max": 2 ** 20,
    "time_budget": None,
    "workers": None,
}


def integer_partitions(n: int, max_parts: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of n into at most ``max_parts`` parts, parts non-increasing."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, max_parts - 1, first):
            yield (first,) + rest


def prune_key(key: InvariantKey, n: int, s: int) -> bool:
    """True when the key may still hold a Cantorian class.

    A letter realizing n^2-n+1 cells forces its constant word into rows and
    permanent; reduced forms put every column's largest part on letter 1.
    Over two letters, Cantorian tableaux have at least n occurrences of each
    letter, and none have exactly n+1 (n >= 4) or n+2 (n >= 5).
    """
    if sum(p[0] for p in key.partitions) >= n * n - n + 1:
        return False
    if s == 2:
        minority = sum(p[1] for p in key.partitions if len(p) > 1)
        if minority < n:
            return False
        if minority == n + 1 and n >= 4:
            return False
        if minority == n + 2 and n >= 5:
            return False
    return True


def closed_form_C(n: int, s: int) -> int:
    """Closed polynomial for the number of Cantorian n x n tableaux over s letters, n in {2, 3, 4}."""
    if s < 2:
        raise TableauInputError(f"closed form needs s >= 2, got {s}")
    if n == 2:
        return s ** 2 * (s - 1) ** 2
    if n == 3:
        return s ** 3 * (s - 1) ** 2 * (s ** 4 + 2 * s ** 3 - 15 * s ** 2 + 16 * s - 1)
    if n == 4:
        return s ** 4 * (s - 1) ** 2 * (
            s ** 10 + 2 * s ** 9 + 3 * s ** 8 - 92 * s ** 7 - 43 * s ** 6 + 1014 * s ** 5
            - 449 * s ** 4 - 5680 * s ** 3 + 12045 * s ** 2 - 9406 * s + 2629)
    logger.error("No closed form for n=%d", n)
    raise TableauInputError(f"closed form is known for n in {{2, 3, 4}}, got n={n}")


def factor_cantorian_total(total: int, n: int, s: int) -> str:
    """Render k·(s-1)^2·s^n when exact (the (s-1)^2 factor is dropped at s=2), else the decimal."""
    unit = s ** n * (s - 1) ** 2
    if total == 0 or total % unit:
        return str(total)
    k = total // unit
    if s == 2:
        return f"{k}·{s}^{n}"
    return f"{k}·{s - 1}^2·{s}^{n}"


def factor_bicantorian_total(total: int, s: int) -> str:
    """Render (s-1)·s·k when exact, else the decimal."""
    unit = s * (s - 1)
    if total == 0 or total % unit:
        return str(total)
    return f"{s - 1}·{s}·{total // unit}"


@dataclass(frozen=True)
class CensusResult:
    n: int
    s: int
    representative_count: int
    tested_count: int
    total_cantorian: int
    per_class: Tuple[ClassReport, ...]
    keys_examined: int = 0
    keys_kept: int = 0

    def __post_init__(self):
        if self.representative_count != len(self.per_class):
            raise ConsistencyError("representative_count must equal the number of class reports")
        if self.total_cantorian != sum(report.cardinality for report in self.per_class):
            raise ConsistencyError("total_cantorian must equal the sum of class cardinalities")

    def factored_total(self) -> str:
        return factor_cantorian_total(self.total_cantorian, self.n, self.s)

    def to_record(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "s": self.s,
            "classes": self.representative_count,
            "tested": self.tested_count,
            "total": str(self.total_cantorian),
            "total_factored": self.factored_total(),
            "keys_examined": self.keys_examined,
            "keys_kept": self.keys_kept,
            "per_class": [report.to_record() for report in self.per_class],
        }


@dataclass(frozen=True)
class BiCensusResult:
    n: int
    s: int
    total_bicantorian: int
    class_count_b: Optional[int] = None
    per_class: Tuple[int, ...] = field(default=())

    def factored_total(self) -> str:
        return factor_bicantorian_total(self.total_bicantorian, self.s)

    def to_record(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "s": self.s,
            "total": str(self.total_bicantorian),
            "total_factored": self.factored_total(),
            "class_count_b": self.class_count_b,
            "per_class": [str(count) for count in self.per_class],
        }


def _census_shard(task: Tuple[int, InvariantKey, int, Dict[str, Any]]) -> Tuple[int, int, List[ClassReport]]:
    """Worker unit: every canonical tableau of one invariant key, filtered and measured."""
    index, key, s, budgets = task
    reducer = MinimalReducer(budgets["canonical_n"])
    tester = PermanentTester(budgets["brute_force_n"])
    action = GroupAction(budgets["phi_orbit_n"], budgets["psi_orbit_max"])
    tested = 0
    reports = []
    for tableau in reducer.representatives_for_key(key, s):
        tested += 1
        if tester.is_cantorian(tableau):
            reports.append(action.class_cardinality(tableau, representative=tableau))
    return index, tested, reports


def bicantorian_members_in_class(representative: Tableau) -> int:
    """Number of bi-Cantorian tableaux in the (Cantorian) class of ``representative``.

    Counts, for each letter-bijection image X, the relative positions rho of rows
    and columns that keep every column word out of Perm(X); the permanent is
    invariant under row permutations, so only rho matters and each occurs n! times.
    """
    n, s = representative.n, representative.s
    arrangements = list(permutations(range(n)))
    weight = 0
    for grid in psi_grids(representative.rows, s):
        permanent = diagonal_words(grid)
        columns = set(zip(*grid))
        weight += sum(1 for rho in arrangements
                      if not any(tuple(column[r] for r in rho) in permanent for column in columns))
    return exact_div(factorial(n) * weight, pattern_stabilizer_order(representative.rows), "bi-Cantorian members")


class CensusEngine:
    """Key-major census of Cantorian classes, totals, closed forms and bi-Cantorian counts.

    Args:
        budgets: Budget settings; missing keys fall back to ``DEFAULT_BUDGETS``.
        workers: Worker processes for census shards (1 runs in-process).
        progress: Show a tqdm progress bar over invariant keys.
    """

    def __init__(self, budgets: Optional[Dict[str, Any]] = None, workers: Optional[int] = None,
                 progress: bool = False):
        self.budgets = dict(DEFAULT_BUDGETS)
        self.budgets.update(budgets or {})
        self.workers = workers or self.budgets.get("workers") or 1
        self.progress = progress
        self.reducer = MinimalReducer(self.budgets["canonical_n"])
        self.action = GroupAction(self.budgets["phi_orbit_n"], self.budgets["psi_orbit_max"], self.reducer)
        self._cache: Dict[Tuple[int, int], CensusResult] = {}
        self._bi_cache: Dict[Tuple[int, int], BiCensusResult] = {}
        logger.debug("Initialized CensusEngine with workers=%d", self.workers)

    # --- Keys and representatives ---

    def candidate_invariant_keys(self, n: int, s: int, prune: bool = True) -> Iterator[InvariantKey]:
        if n < 2 or s < 2:
            logger.error("Census needs n >= 2 and s >= 2, got n=%d, s=%d", n, s)
            raise TableauInputError(f"census needs n >= 2 and s >= 2, got n={n}, s={s}")
        partitions = sorted(integer_partitions(n, min(n, s)), key=composition_key)
        for combination in combinations_with_replacement(partitions, n):
            key = InvariantKey(tuple(combination))
            if not prune or prune_key(key, n, s):
                yield key

    def prune_key(self, key: InvariantKey, n: int, s: int) -> bool:
        return prune_key(key, n, s)

    def representatives_for_key(self, key: InvariantKey, s: int) -> Iterator[Tableau]:
        return self.reducer.representatives_for_key(key, s)

    # --- Census ---

    def census(self, n: int, s: int, reuse_small_alphabet: bool = True) -> CensusResult:
        """Cantorian classes of n x n tableaux over s letters.

        With ``reuse_small_alphabet`` and s > n the representatives at s = n are reused
        (no tableau of n columns needs more than n letters) and every class is
        re-evaluated at alphabet size s.

        Raises:
            BudgetRefusal: If a bound or the time budget is exceeded; carries partial progress.
        """
        if reuse_small_alphabet and s > n:
            base = self.census(n, n)
            reports = tuple(report.at_alphabet(s) for report in base.per_class)
            return CensusResult(n, s, len(reports), base.tested_count,
                                sum(report.cardinality for report in reports), reports,
                                base.keys_examined, base.keys_kept)
        cached = self._cache.get((n, s))
        if cached is not None:
            return cached
        require_budget("canonical_n", n, self.budgets["canonical_n"])
        examined = sum(1 for _ in self.candidate_invariant_keys(n, s, prune=False))
        keys = list(self.candidate_invariant_keys(n, s))
        logger.info("Census (%d,%d): %d of %d invariant keys kept", n, s, len(keys), examined)
        tasks = [(index, key, s, self.budgets) for index, key in enumerate(keys)]
        shards = self._run_shards(tasks, n, s)
        tested = sum(shard[1] for shard in shards)
        reports = tuple(report for shard in shards for report in shard[2])
        result = CensusResult(n, s, len(reports), tested, sum(r.cardinality for r in reports),
                              reports, examined, len(keys))
        if result.total_cantorian > (s ** n - s) ** n:
            logger.error("Census (%d,%d) total %d exceeds (s^n-s)^n", n, s, result.total_cantorian)
            raise ConsistencyError(f"Cantorian total {result.total_cantorian} exceeds (s^n-s)^n")
        self._cache[(n, s)] = result
        logger.info("Census (%d,%d): %d classes / %d tested, total %d", n, s,
                    result.representative_count, tested, result.total_cantorian)
        return result

    def _run_shards(self, tasks, n: int, s: int) -> List[Tuple[int, int, List[ClassReport]]]:
        limit = self.budgets.get("time_budget")
        started = time.monotonic()
        done: Dict[int, Tuple[int, int, List[ClassReport]]] = {}
        bar = tqdm(total=len(tasks), desc=f"census({n},{s})", disable=not self.progress)

        def refuse():
            elapsed = time.monotonic() - started
            progress = {"keys_done": len(done), "keys_total": len(tasks),
                        "tested": sum(shard[1] for shard in done.values()),
                        "classes": sum(len(shard[2]) for shard in done.values())}
            logger.error("Census (%d,%d) exceeded time budget after %d of %d keys", n, s, len(done), len(tasks))
            return BudgetRefusal("time_budget", round(elapsed, 3), limit, progress)

        try:
            if self.workers <= 1:
                for task in tasks:
                    shard = _census_shard(task)
                    done[shard[0]] = shard
                    bar.update(1)
                    if limit is not None and len(done) < len(tasks) and time.monotonic() - started > limit:
                        raise refuse()
            else:
                with ProcessPoolExecutor(max_workers=self.workers) as pool:
                    futures = [pool.submit(_census_shard, task) for task in tasks]
                    try:
                        for future in as_completed(futures, timeout=limit):
                            shard = future.result()
                            done[shard[0]] = shard
                            bar.update(1)
                    except FutureTimeout:
                        for future in futures:
                            future.cancel()
                        pool.shutdown(wait=False, cancel_futures=True)
                        raise refuse()
        finally:
            bar.close()
        return [done[index] for index in sorted(done)]

    def count_cantorian(self, n: int, s: int) -> int:
        return self.census(n, s).total_cantorian

    def estimate_cantorian_total(self, n: int, s: int, samples: int, seed: int = 0) -> Tuple[float, float]:
        """Estimate the Cantorian total from uniformly random tableaux.

        Returns:
            Tuple[float, float]: The estimate and its standard error, both in tableaux.
        """
        if samples < 1:
            logger.error("Sampling needs at least one tableau, got %d", samples)
            raise TableauInputError(f"sample size must be positive, got {samples}")
        rng = random.Random(seed)
        tester = PermanentTester(self.budgets["brute_force_n"])
        hits = 0
        for _ in range(samples):
            rows = tuple(tuple(rng.randint(1, s) for _ in range(n)) for _ in range(n))
            if tester.is_cantorian(Tableau(n, s, rows)):
                hits += 1
        fraction = hits / samples
        size = s ** (n * n)
        logger.info("Sampled (%d,%d): %d of %d tableaux Cantorian", n, s, hits, samples)
        return fraction * size, sqrt(fraction * (1 - fraction) / samples) * size

    closed_form_C = staticmethod(closed_form_C)

    # --- Two-letter refinements ---

    def count_c_n_p(self, n: int, p: int) -> int:
        """Cantorian n x n tableaux over two letters with exactly p occurrences of letter 2."""
        if p < 0 or p > n * n:
            raise TableauInputError(f"p must lie in 0..{n * n}, got {p}")
        q = min(p, n * n - p)  # swapping both letters globally maps p to n^2 - p
        if q < n:
            return 0
        if q == n and n >= 3:
            return n
        if q == n + 1 and n >= 4:
            return 0
        if q == n + 2 and n >= 5:
            return 0
        total = 0
        for report in self.census(n, 2).per_class:
            rows = report.representative.rows
            hits = sum(1 for grid in psi_grids(rows, 2) if sum(row.count(2) for row in grid) == p)
            total += exact_div(factorial(n) ** 2 * hits, pattern_stabilizer_order(rows), "c(n,p) members")
        return total

    # --- Bi-Cantorian ---

    def count_bicantorian(self, n: int, s: int) -> BiCensusResult:
        """Exact number of bi-Cantorian tableaux, expanded class by class."""
        cached = self._bi_cache.get((n, s))
        if cached is not None:
            return cached
        per_class = []
        for report in self.census(n, s).per_class:
            representative = report.representative
            require_budget("psi_orbit_max", psi_orbit_size(representative.rows, s), self.budgets["psi_orbit_max"])
            per_class.append(bicantorian_members_in_class(representative))
        total = sum(per_class)
        if total > self.count_cantorian(n, s):
            logger.error("Bi-Cantorian total %d exceeds Cantorian total at (%d,%d)", total, n, s)
            raise ConsistencyError(f"bi-Cantorian total {total} exceeds the Cantorian total")
        logger.info("Bi-Cantorian (%d,%d): %d", n, s, total)
        result = BiCensusResult(n, s, total, None, tuple(per_class))
        self._bi_cache[(n, s)] = result
        return result

    def ratio_b_over_c(self, n: int, s: int, bicantorian_total: Optional[int] = None) -> Tuple[Fraction, str]:
        if bicantorian_total is None:
            bicantorian_total = self.count_bicantorian(n, s).total_bicantorian
        ratio = Fraction(bicantorian_total, self.count_cantorian(n, s))
        return ratio, f"{float(ratio):.3f}"
