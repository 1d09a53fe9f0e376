import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from CantorController import CantorController
from Distributor import Distributor
from TableauFormat import TableauFormat
from TableauModel import BudgetRefusal, ConsistencyError, Tableau, TableauInputError

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_CONSISTENCY = 0, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs: parsed flags merged over the budget settings."""
    subcommand: str
    output_format: str = "plain"
    workers: int = 1
    budgets: Dict[str, Any] = field(default_factory=dict)
    arguments: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.workers < 1:
            raise TableauInputError(f"worker count must be at least 1, got {self.workers}")
        for name, value in self.budgets.items():
            if value is not None and name != "workers" and value <= 0:
                raise TableauInputError(f"budget '{name}' must be positive, got {value}")

    @classmethod
    def from_args(cls, args: argparse.Namespace, budgets: Dict[str, Any]) -> "RunConfig":
        budgets = dict(budgets)
        if args.max_orbit is not None:
            budgets["psi_orbit_max"] = args.max_orbit
        if args.max_cells is not None:
            budgets["oracle_max_cells"] = budgets["bclasses_max"] = args.max_cells
        if args.time_budget is not None:
            budgets["time_budget"] = args.time_budget
        workers = args.workers if args.workers is not None else budgets.get("workers") or os.cpu_count() or 1
        arguments = {key: value for key, value in vars(args).items()
                     if key not in ("command", "format", "workers", "max_orbit", "max_cells",
                                    "time_budget", "verbose", "config")}
        return cls(args.command, args.format, workers, budgets, arguments)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cantorian", description="Cantorian tableaux enumeration toolkit")
    parser.add_argument("--format", choices=("plain", "structured"), default="plain")
    parser.add_argument("--workers", type=int, default=None, help="census worker processes")
    parser.add_argument("--max-orbit", type=int, default=None, help="largest orbit that may be materialized")
    parser.add_argument("--max-cells", type=int, default=None, help="largest s^(n^2) exhaustive enumeration")
    parser.add_argument("--time-budget", type=float, default=None, help="census time budget in seconds")
    parser.add_argument("--config", default=None, help="settings file (overrides CANTORIAN_CONFIG)")
    parser.add_argument("--verbose", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    def tableau_command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("input", help="tableau file, or an inline tableau such as 12/21")
        sub.add_argument("--alphabet", type=int, default=None, help="alphabet size for headerless input")
        return sub

    check = tableau_command("check", "Cantorian and bi-Cantorian verdicts")
    check.add_argument("--witness", action="store_true", help="show the word and permutation found")
    permanent = tableau_command("permanent", "permanent membership or enumeration")
    permanent.add_argument("--word", default=None, help="word to test, e.g. 121; omit to list the permanent")
    tableau_command("reduce", "minimal reduced representative")
    classify = tableau_command("classify", "class cardinality report")
    classify.add_argument("--theta", choices=("stabilizer", "orbits"), default="stabilizer")
    tableau_command("hypergraph", "colored hypergraph export")
    for name, help_text in (("census", "Cantorian census"), ("bicensus", "bi-Cantorian totals"),
                            ("bclasses", "classes under the bi-Cantorian equivalence")):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("n", type=int)
        sub.add_argument("s", type=int)
        if name == "census":
            sub.add_argument("--bicantorian", action="store_true", help="also count bi-Cantorian tableaux")
    tables = commands.add_parser("tables", help="census, bi-Cantorian and ratio tables")
    tables.add_argument("--full", action="store_true", help="include n = 4, 5")
    verify = commands.add_parser("verify", help="acceptance checks")
    verify.add_argument("level", nargs="?", choices=("quick", "full"), default="quick")
    return parser


def load_tableau(source: str, alphabet: Optional[int]) -> Tableau:
    if os.path.exists(source):
        return TableauFormat.read(source, alphabet)
    if "/" in source or source.isdigit():
        return TableauFormat.parse_inline(source, alphabet)
    raise TableauInputError(f"no such tableau file: {source}")


def parse_word(text: str) -> List[int]:
    parts = text.split(",") if "," in text else list(text)
    try:
        return [int(part) for part in parts]
    except ValueError:
        raise TableauInputError(f"'{text}' is not a word of letters")


def execute(controller: CantorController, config: RunConfig) -> Dict[str, Any]:
    args = config.arguments
    command = config.subcommand
    if command in ("check", "permanent", "reduce", "classify", "hypergraph"):
        tableau = load_tableau(args["input"], args.get("alphabet"))
        if command == "check":
            return controller.check(tableau, args["witness"])
        if command == "permanent":
            word = parse_word(args["word"]) if args["word"] else None
            return controller.permanent(tableau, word)
        if command == "reduce":
            return controller.reduce(tableau)
        if command == "classify":
            return controller.classify(tableau, args["theta"])
        return controller.hypergraph_export(tableau)
    if command == "census":
        return controller.census(args["n"], args["s"], args["bicantorian"])
    if command == "bicensus":
        return controller.bicensus(args["n"], args["s"])
    if command == "bclasses":
        return controller.bclasses(args["n"], args["s"])
    if command == "tables":
        return controller.tables(args["full"])
    return controller.verify(args["level"])


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def render_plain(command: str, results: Dict[str, Any]) -> str:
    """Human-readable rendering; structured output carries the full record."""
    lines = []
    if command == "check":
        lines.append(f"cantorian: {_yes(results['cantorian'])}, bi-cantorian: {_yes(results['bicantorian'])}")
        witness = results.get("witness")
        if witness:
            word = "".join(map(str, witness["word"]))
            lines.append(f"witness: {witness['kind']} {witness['index']} w={word}, "
                         f"rows per column {witness['permutation']}")
        if results.get("condition_one"):
            lines.append(f"letter {results['condition_one']['letter']} occurs "
                         f"{results['condition_one']['count']} times")
    elif command == "permanent":
        if "permanent" in results:
            lines.append(" ".join("".join(map(str, w)) for w in results["permanent"]))
        else:
            lines.append(f"contains: {_yes(results['contains'])}")
            if results["permutation"]:
                lines.append(f"rows per column: {results['permutation']}")
    elif command == "reduce":
        lines.append(f"invariant: {results['invariant']}")
        lines.append(results["minimal_reduced_text"].rstrip("\n"))
    elif command == "classify":
        lines.append(f"invariant: {results['invariant_text']}")
        lines.append(f"f={results['f']} g={results['g']} eta={results['eta']} theta={results['theta']}")
        lines.append(f"|O_phi|={results['orbit_phi_size']} |O_psi|={results['orbit_psi_size']}")
        lines.append(f"cardinality: {results['cardinality']}")
        if results["representative"]:
            lines.append("representative: " + "/".join("".join(map(str, r)) for r in results["representative"]))
    elif command == "hypergraph":
        lines.append(f"n={results['n']} row blocks={len(results['row_blocks'])} "
                     f"diagonal blocks={results['diagonal_block_count']}")
        lines.append(f"uniform: {_yes(results['uniform'])}, regular: {_yes(results['regular'])}, "
                     f"intersecting: {_yes(results['intersecting'])}")
        lines.append(f"|chi(L)|={len(results['chi_L'])} |chi(P)|={len(results['chi_P'])}")
    elif command == "census":
        lines.append(f"{results['classes']}/{results['tested']}, total {results['total']} "
                     f"({results['total_factored']})")
        if "bicantorian" in results:
            bi = results["bicantorian"]
            lines.append(f"bi-cantorian {bi['total']} ({bi['total_factored']})")
    elif command == "bicensus":
        lines.append(f"{results['total']} ({results['total_factored']}), "
                     f"B/C = {results['ratio_decimal']}")
    elif command == "bclasses":
        line = f"{results['classes']} classes over {results['tableaux']} bi-cantorian tableaux"
        if "expected" in results:
            line += f" (expected {results['expected']}: {results['status']})"
        lines.append(line)
    elif command == "tables":
        lines.append(f"{'n':>2} {'s':>2} {'classes':>8} {'tested':>7}  total")
        for row in results["census"]:
            lines.append(f"{row['n']:>2} {row['s']:>2} {row['classes']:>8} {row['tested']:>7}  "
                         f"{row['total_factored']}")
        lines.append("")
        lines.append(f"{'n':>2} {'s':>2}  bi-cantorian")
        for row in results["bicantorian"]:
            lines.append(f"{row['n']:>2} {row['s']:>2}  {row['total_factored']}")
        lines.append("")
        lines.append("B/C over two letters: " + ", ".join(f"n={row['n']} {row['ratio']}"
                                                      for row in results["ratios"]))
    elif command == "verify":
        for criterion in results["criteria"]:
            lines.append(f"[{criterion['status']}] {criterion['name']}")
            lines.extend(f"    {check}" for check in criterion["checks"])
        lines.append("all criteria passed" if results["passed"] else
                     "failing: " + ", ".join(results["failing"]))
    return "\n".join(lines)


def render(config: RunConfig, results: Dict[str, Any]) -> str:
    if config.output_format == "structured":
        inputs = {key: value for key, value in config.arguments.items()}
        report = {"schema_version": SCHEMA_VERSION, "command": config.subcommand,
                  "inputs": inputs, "results": results}
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)
    return render_plain(config.subcommand, results)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        distributor = Distributor()
        config = RunConfig.from_args(args, distributor.budgets(args.config))
        progress = config.output_format == "plain" and sys.stderr.isatty()
        controller = CantorController(config.budgets, config.workers, progress)
        results = execute(controller, config)
    except BudgetRefusal as e:
        logger.error("Refused: %s", e)
        print(f"refused: {e}" + (f" (progress: {e.progress})" if e.progress else ""), file=sys.stderr)
        return EXIT_BUDGET
    except ConsistencyError as e:
        logger.error("Internal consistency failure: %s", e)
        print(f"internal consistency failure: {e}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except TableauInputError as e:
        logger.error("Input error: %s", e)
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(render(config, results))
    if config.subcommand == "verify" and not results["passed"]:
        return EXIT_CONSISTENCY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
