"""
Командная строка: approx, exact, reduce, gen, dfvs, verify, sample.

Результаты печатаются в stdout строками 'ключ значение', логи и
предупреждения идут в stderr. Коды выхода: 0 - успех, 1 - неверный ввод
или использование, 2 - превышен лимит размера.
"""
import argparse
import random
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

# Добавляем корневую директорию в Python path
sys.path.insert(0, str(Path(__file__).parent))

# ВАЖНО: настраиваем логирование ДО всех импортов
from config.logging import get_logger, setup_logging
# JSON-файл включается в main() по проверенным настройкам
setup_logging(json_logging=False)

from pydantic import ValidationError  # noqa: E402

from config.messages import CLI_MESSAGES  # noqa: E402
from config.typed_settings import Settings  # noqa: E402
from hybridization.agreement_forest import ForestChecker, is_acyclic  # noqa: E402
from hybridization.corpus import random_tree_pair  # noqa: E402
from hybridization.dfvs_core import DfvsSolverFactory  # noqa: E402
from hybridization.dfvs_to_hybrid import default_params, generate_trees, make_params  # noqa: E402
from hybridization.errors import InvalidInputError, SizeLimitExceededError  # noqa: E402
from hybridization.hybrid_to_dfvs import approximate_hybridization  # noqa: E402
from hybridization.io_formats import (  # noqa: E402
    parse_digraph,
    parse_forest,
    parse_network,
    parse_tree,
    write_network,
    write_result,
    write_tree,
)
from hybridization.network import displays  # noqa: E402
from hybridization.oracles import brute_force_maaf  # noqa: E402
from hybridization.tree_reduction import reduce_pair  # noqa: E402
from models.generation_models import GenerationResult  # noqa: E402
from models.tree_models import PhyloTree  # noqa: E402

logger = get_logger("hybridization.cli")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInputError(f"Cannot read '{path}': {e.strerror}") from e


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise InvalidInputError(f"Cannot write '{path}': {e.strerror}") from e
    print(CLI_MESSAGES["written"].format(path=path), file=sys.stderr)


def _read_tree(path: str) -> PhyloTree:
    return parse_tree(_read(path))


def _out(values: Dict[str, object]) -> None:
    sys.stdout.write(write_result(values))


# ----------------------------------------------------------------------
# Подкоманды
# ----------------------------------------------------------------------

def cmd_approx(args: argparse.Namespace, settings: Settings) -> int:
    t1, t2 = _read_tree(args.t1), _read_tree(args.t2)
    result = approximate_hybridization(
        t1,
        t2,
        solver=args.dfvs or settings.solver.solver,
        exact_h=args.exact_h,
        threads=args.threads,
        max_vertices=settings.solver.exact_dfvs_max_vertices,
    )

    # Повторная проверка перед печатью
    checker = ForestChecker(t1, t2)
    checker.check(result.forest)
    if not is_acyclic(checker.inheritance_graph(result.forest, validate=False)):
        logger.error("Pipeline returned a cyclic forest")
        return 1
    retics = len(result.network.reticulations())
    limit = settings.solver.display_max_reticulations
    if retics <= limit:
        if not (displays(result.network, t1) and displays(result.network, t2)):
            logger.error("Constructed network does not display both input trees")
            return 1
    else:
        print(
            CLI_MESSAGES["display_check_skipped"].format(reticulations=retics, limit=limit),
            file=sys.stderr,
        )

    _out({
        "hybridization_number": result.hybridization_number,
        "forest_size": result.forest.size,
        "fvs_weight": result.fvs_weight,
        "components": result.forest,
    })
    if args.network:
        _write(args.network, write_network(result.network) + "\n")
    if args.report:
        report = result.report.model_copy(update={"instance": f"{args.t1} {args.t2}"})
        _write(args.report, write_result(report.to_lines()))
    return 0


def cmd_exact(args: argparse.Namespace, settings: Settings) -> int:
    t1, t2 = _read_tree(args.t1), _read_tree(args.t2)
    max_leaves = args.max_leaves or settings.solver.brute_force_max_leaves
    h, forest = brute_force_maaf(t1, t2, max_leaves=max_leaves, threads=args.threads)
    _out({"hybridization_number": h, "forest_size": forest.size, "components": forest})
    return 0


def cmd_reduce(args: argparse.Namespace, settings: Settings) -> int:
    inst = reduce_pair(_read_tree(args.t1), _read_tree(args.t2))
    lines = [f"s {write_tree(inst.s)}", f"s_prime {write_tree(inst.s_prime)}"]
    for chain in inst.chains:
        lines.append(
            f"chain {chain.a} {chain.b} weight {chain.weight} original {','.join(chain.original)}"
        )
    for label, taxa in sorted(inst.subtree_map.items()):
        lines.append(f"subtree {label} taxa {','.join(sorted(taxa))}")
    print("\n".join(lines))
    return 0


def _provenance(result: GenerationResult) -> str:
    return "".join(
        f"{chain.name} {chain.kind.value} {chain.source} {','.join(chain.labels)}\n"
        for chain in result.chains
    )


def cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    d = parse_digraph(_read(args.digraph))
    c = args.c
    if c is None and (args.ell is None or args.big_l is None):
        c = settings.solver.approximation_factor
    params, _ = make_params(d, c=c, ell=args.ell, big_l=args.big_l)

    # Явные ℓ/L сверяются с формулой и без --c
    formula = default_params(d, args.c if args.c is not None else settings.solver.approximation_factor)
    if params.ell < formula.ell or params.big_l < formula.big_l:
        print(CLI_MESSAGES["params_below_formula"].format(
            ell=params.ell, big_l=params.big_l, formula_ell=formula.ell, formula_big_l=formula.big_l,
        ), file=sys.stderr)
    if not params.big_l_dominates:
        print(CLI_MESSAGES["big_l_not_above_ell"].format(ell=params.ell, big_l=params.big_l), file=sys.stderr)

    result = generate_trees(d, params)
    prefix = args.out_prefix
    _write(f"{prefix}.t1.nwk", write_tree(result.t1) + "\n")
    _write(f"{prefix}.t2.nwk", write_tree(result.t2) + "\n")
    _write(f"{prefix}.provenance.txt", _provenance(result))
    _out({"leaves": result.leaf_count, "ell": params.ell, "big_l": params.big_l, "chains": len(result.chains)})
    return 0


def cmd_dfvs(args: argparse.Namespace, settings: Settings) -> int:
    g = parse_digraph(_read(args.digraph))
    if args.greedy:
        solver = DfvsSolverFactory.create("greedy")
    else:
        solver = DfvsSolverFactory.create(
            "exact", max_vertices=settings.solver.exact_dfvs_max_vertices, threads=args.threads
        )
    fvs = solver.solve(g)
    order = {v: i for i, v in enumerate(g.vertices)}
    _out({"fvs": ",".join(sorted(fvs, key=order.__getitem__)), "weight": g.weight_of(fvs)})
    return 0


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    if args.network:
        if not args.tree:
            raise InvalidInputError("verify --network needs at least one --tree")
        network = parse_network(_read(args.network))
        ok = all(displays(network, _read_tree(path)) for path in args.tree)
        _out({"displays": "true" if ok else "false"})
        return 0 if ok else 1

    if not (args.forest and args.t1 and args.t2):
        raise InvalidInputError("verify needs --network with --tree, or --forest with --t1 and --t2")
    forest = parse_forest(_read(args.forest))
    checker = ForestChecker(_read_tree(args.t1), _read_tree(args.t2))
    ok = checker.is_acyclic_forest(forest)
    _out({"acyclic_agreement_forest": "true" if ok else "false"})
    return 0 if ok else 1


def cmd_sample(args: argparse.Namespace, settings: Settings) -> int:
    if args.leaves < 1:
        raise InvalidInputError(f"--leaves must be positive, got {args.leaves}")
    seed = args.seed if args.seed is not None else settings.solver.seed
    t1, t2 = random_tree_pair(args.leaves, random.Random(seed), moves=args.moves)
    _write(f"{args.out_prefix}.t1.nwk", write_tree(t1) + "\n")
    _write(f"{args.out_prefix}.t2.nwk", write_tree(t2) + "\n")
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace, Settings], int]] = {
    "approx": cmd_approx,
    "exact": cmd_exact,
    "reduce": cmd_reduce,
    "gen": cmd_gen,
    "dfvs": cmd_dfvs,
    "verify": cmd_verify,
    "sample": cmd_sample,
}


# ----------------------------------------------------------------------
# Разбор аргументов
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridization",
        description="Approximate the hybridization number of two rooted binary trees via DFVS",
    )
    parser.add_argument("--threads", type=int, default=None, help="worker processes for exact solvers")
    parser.add_argument("--seed", type=int, default=None, help="seed for random sampling")
    parser.add_argument(
        "--log-level", type=str.upper, default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    approx = sub.add_parser("approx", help="approximate h(T, T') through the auxiliary DFVS instance")
    approx.add_argument("t1")
    approx.add_argument("t2")
    approx.add_argument("--dfvs", choices=DfvsSolverFactory.available(), default=None)
    approx.add_argument("--network", help="write the hybridization network (eNewick)")
    approx.add_argument("--report", help="write the run report")
    approx.add_argument("--exact-h", type=int, default=None, help="known h(T, T') for bound checks")

    exact = sub.add_parser("exact", help="exact h(T, T') by brute force over agreement forests")
    exact.add_argument("t1")
    exact.add_argument("t2")
    exact.add_argument("--max-leaves", type=int, default=None)

    reduce = sub.add_parser("reduce", help="subtree and chain reductions")
    reduce.add_argument("t1")
    reduce.add_argument("t2")

    gen = sub.add_parser("gen", help="tree pair from a digraph")
    gen.add_argument("--digraph", required=True)
    gen.add_argument("--c", type=str, default=None, help="approximation factor c > 1 (may be a fraction)")
    gen.add_argument("--ell", type=int, default=None)
    gen.add_argument("--big-l", type=int, default=None)
    gen.add_argument("--out-prefix", required=True)

    dfvs = sub.add_parser("dfvs", help="minimum weight directed feedback vertex set")
    dfvs.add_argument("digraph")
    mode = dfvs.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--greedy", action="store_true")

    verify = sub.add_parser("verify", help="check a network or a forest")
    verify.add_argument("--network")
    verify.add_argument("--tree", action="append", default=[])
    verify.add_argument("--forest")
    verify.add_argument("--t1")
    verify.add_argument("--t2")

    sample = sub.add_parser("sample", help="write a seeded random tree pair")
    sample.add_argument("--leaves", type=int, required=True)
    sample.add_argument("--moves", type=int, default=None, help="SPR moves; an independent tree if omitted")
    sample.add_argument("--out-prefix", required=True)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse: 0 для --help, иначе ошибка использования
        return 0 if e.code == 0 else 1

    try:
        settings = Settings()
        try:
            settings.validate_consistency()
        except ValueError as e:
            raise InvalidInputError(str(e)) from e
        setup_logging(
            args.log_level or settings.logging.log_level,
            json_logging=settings.logging.json_logging,
            json_log_file=settings.logging.json_log_file,
        )
        if args.threads is None:
            args.threads = settings.solver.threads
        if args.threads < 1:
            raise InvalidInputError(f"--threads must be positive, got {args.threads}")
        return COMMANDS[args.command](args, settings)
    except SizeLimitExceededError as e:
        print(CLI_MESSAGES["size_limit"].format(error=e), file=sys.stderr)
        return 2
    except (InvalidInputError, ValidationError) as e:
        print(CLI_MESSAGES["invalid_input"].format(error=e), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
