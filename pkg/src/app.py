"""
Command-line entry point for counter-fitting.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from src.config import LOG_LEVELS, Hyperparams, config
from src.dictionary.builder import sweep_t, write_dictionary
from src.errors import (
    CorrelationError,
    CounterFitError,
    DataFileError,
    EvaluationError,
    GeometryError,
    InputValidationError,
)
from src.evaluation.ablation import (
    BASELINE,
    ConstraintSource,
    Relation,
    ablation_run,
    write_ablation_csv,
)
from src.evaluation.error_analysis import error_analysis, format_error_report
from src.evaluation.simlex import evaluate_simlex, load_simlex
from src.lexicon.constraints import (
    ConstraintSet,
    build_constraint_set,
    load_pair_file,
    write_pair_file,
)
from src.lexicon.ontology import Ontology, ontology_antonyms, parse_ontology
from src.lexicon.ppdb import extract_ppdb_pairs
from src.optimizer.sgd import counter_fit, write_cost_trace
from src.vectors.store import VectorStore, load_vectors, load_word_list, nearest_neighbors, save_vectors

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

HYPERPARAM_FLAGS = ("delta", "gamma", "rho", "k1", "k2", "k3", "epochs", "learning_rate")


class UsageError(Exception):
    """Bad command line."""


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors instead of exiting with status 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def configure_logging(level: Optional[str] = None) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.runtime.log_file:
        handlers.append(logging.FileHandler(config.runtime.log_file))
    logging.basicConfig(
        level=(level or config.runtime.log_level).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def _common_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="key = value (or YAML) hyperparameter file")
    parent.add_argument("--seed", type=int, help="RNG seed for SGD shuffling")
    parent.add_argument("--threads", type=int, help="worker threads (default: single-threaded, deterministic)")
    parent.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, help="DEBUG, INFO, WARNING or ERROR")
    return parent


def _hyperparam_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("hyperparameters")
    group.add_argument("--delta", type=float, help="ideal minimum antonym distance (1.0)")
    group.add_argument("--gamma", type=float, help="ideal maximum synonym distance (0.0)")
    group.add_argument("--rho", type=float, help="neighbourhood radius (0.2)")
    group.add_argument("--k1", type=float, help="antonym repel weight (1.0)")
    group.add_argument("--k2", type=float, help="synonym attract weight (1.0)")
    group.add_argument("--k3", type=float, help="vector space preservation weight (1.0)")
    group.add_argument("--epochs", type=int, help="SGD epochs (20)")
    group.add_argument("--learning-rate", type=float, help="SGD step size (0.1)")
    return parent


def _vector_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--vectors", required=True, help="text vector file")
    parent.add_argument("--vocab", help="vocabulary filter file, one word per line")
    return parent


def _constraint_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--synonyms", action="append", default=[], help="synonym pair file (repeatable)")
    parent.add_argument("--antonyms", action="append", default=[], help="antonym pair file (repeatable)")
    return parent


def build_parser() -> CommandParser:
    parser = CommandParser(prog="counter-fit", description="Counter-fit word vectors to linguistic constraints.")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    common = _common_options()
    hyper = _hyperparam_options()
    vectors = _vector_options()
    constraints = _constraint_options()

    p = subparsers.add_parser(
        "counterfit", parents=[common, hyper, vectors, constraints],
        help="counter-fit vectors and write V' plus the cost trace",
    )
    p.add_argument("--ontology", help="also inject same-slot antonyms from this ontology")
    p.add_argument("--out", required=True, help="output vector file")
    p.add_argument("--trace", help="cost trace CSV (default: <out>.cost.csv)")
    p.set_defaults(handler=cmd_counterfit)

    p = subparsers.add_parser("eval-simlex", parents=[common, vectors], help="Spearman rho on SimLex-999")
    p.add_argument("--simlex", required=True, help="SimLex-999 tab-separated file")
    p.set_defaults(handler=cmd_eval_simlex)

    p = subparsers.add_parser("neighbors", parents=[common, vectors], help="nearest neighbours of a word")
    p.add_argument("--word", required=True)
    p.add_argument("--k", type=int, default=5)
    p.set_defaults(handler=cmd_neighbors)

    p = subparsers.add_parser(
        "make-dict", parents=[common, hyper, vectors, constraints],
        help="inject an ontology and write semantic dictionaries",
    )
    p.add_argument("--ontology", required=True, help="JSON ontology file")
    p.add_argument("--t", type=float, action="append", required=True, help="dictionary radius (repeatable)")
    p.add_argument("--out-dir", default=".", help="directory for dictionary_t<t>.json files")
    p.add_argument("--skip-counterfit", action="store_true", help="build dictionaries from the input vectors")
    p.add_argument("--save-vectors", help="also write the counter-fitted vectors here")
    p.set_defaults(handler=cmd_make_dict)

    p = subparsers.add_parser(
        "ablate", parents=[common, hyper, vectors],
        help="SimLex rho for combinations of constraint sources",
    )
    p.add_argument("--simlex", required=True)
    p.add_argument("--synonyms", action="append", default=[], metavar="NAME=PATH", help="named synonym source")
    p.add_argument("--antonyms", action="append", default=[], metavar="NAME=PATH", help="named antonym source")
    p.add_argument("--combination", action="append", metavar="NAME[,NAME...]",
                   help=f"source combination to run ('{BASELINE}' for none); default: all")
    p.add_argument("--out", help="CSV output (default: stdout)")
    p.set_defaults(handler=cmd_ablate)

    p = subparsers.add_parser(
        "analyse-errors", parents=[common, constraints],
        help="false synonyms/antonyms before and after counter-fitting",
    )
    p.add_argument("--before", required=True, help="original vector file")
    p.add_argument("--after", required=True, help="counter-fitted vector file")
    p.add_argument("--vocab", help="vocabulary filter file, one word per line")
    p.add_argument("--simlex", required=True)
    p.set_defaults(handler=cmd_analyse_errors)

    p = subparsers.add_parser("extract-ppdb", parents=[common], help="pair files from a PPDB 2.0 release")
    p.add_argument("--ppdb", required=True, help="PPDB 2.0 file (plain or .gz)")
    p.add_argument("--synonyms-out", required=True)
    p.add_argument("--antonyms-out", required=True)
    p.set_defaults(handler=cmd_extract_ppdb)

    return parser


def _hyperparams(args: argparse.Namespace) -> Hyperparams:
    overrides = {name: getattr(args, name, None) for name in HYPERPARAM_FLAGS}
    overrides["seed"] = args.seed
    return config.get_hyperparams(args.config, overrides)


def _threads(args: argparse.Namespace) -> int:
    threads = args.threads if args.threads is not None else config.runtime.threads
    if threads < 1:
        raise InputValidationError(f"--threads must be at least 1, got {threads}")
    return threads


def _load_store(path: str, vocab_path: Optional[str]) -> VectorStore:
    vocab_filter = load_word_list(vocab_path) if vocab_path else None
    return load_vectors(path, vocab_filter)


def _load_constraints(
    store: VectorStore,
    synonym_paths: Sequence[str],
    antonym_paths: Sequence[str],
    ontology: Optional[Ontology] = None,
) -> ConstraintSet:
    synonym_sources = [load_pair_file(path, store).pairs for path in synonym_paths]
    antonym_sources = [load_pair_file(path, store).pairs for path in antonym_paths]
    if ontology is not None:
        antonym_sources.append(ontology_antonyms(ontology, store).pairs)
    return build_constraint_set(synonym_sources, antonym_sources)


def cmd_counterfit(args: argparse.Namespace) -> None:
    hp = _hyperparams(args)
    threads = _threads(args)
    ontology = parse_ontology(args.ontology) if args.ontology else None
    store = _load_store(args.vectors, args.vocab)
    constraints = _load_constraints(store, args.synonyms, args.antonyms, ontology)

    result = counter_fit(store, constraints, hp, threads=threads)
    save_vectors(result.vectors, args.out)
    write_cost_trace(result.trace, args.trace or Path(args.out).with_suffix(".cost.csv"))


def cmd_eval_simlex(args: argparse.Namespace) -> None:
    store = _load_store(args.vectors, args.vocab)
    data = load_simlex(args.simlex)
    score = evaluate_simlex(store, data)
    print(f"spearman_rho\t{score.rho:.4f}")
    print(f"coverage\t{score.covered}/{data.size}")


def cmd_neighbors(args: argparse.Namespace) -> None:
    store = _load_store(args.vectors, args.vocab)
    ranking = nearest_neighbors(store, args.word, args.k)
    for word, similarity in ranking.words(store):
        print(f"{word}\t{similarity:.6f}")


def cmd_make_dict(args: argparse.Namespace) -> None:
    hp = _hyperparams(args)
    threads = _threads(args)
    for t in args.t:
        if not 0.0 < t < 2.0:
            raise InputValidationError(f"--t must be in (0, 2), got {t}")
    ontology = parse_ontology(args.ontology)
    store = _load_store(args.vectors, args.vocab)

    if args.skip_counterfit:
        vectors = store
    else:
        constraints = _load_constraints(store, args.synonyms, args.antonyms, ontology)
        vectors = counter_fit(store, constraints, hp, threads=threads).vectors
        if args.save_vectors:
            save_vectors(vectors, args.save_vectors)

    for dictionary in sweep_t(vectors, ontology, args.t).values():
        print(write_dictionary(dictionary, args.out_dir))


def _named_sources(entries: Sequence[str], relation: Relation, store: VectorStore,
                   sources: Dict[str, ConstraintSource]) -> None:
    for entry in entries:
        name, sep, path = entry.partition("=")
        name = name.strip()
        if not sep or not name or not path:
            raise InputValidationError(f"Expected NAME=PATH, got {entry!r}")
        if name in sources or name == BASELINE:
            raise InputValidationError(f"Duplicate or reserved source name {name!r}")
        sources[name] = ConstraintSource(name, relation, load_pair_file(path, store).pairs)


def _parse_combination(text: str) -> Tuple[str, ...]:
    names = tuple(name.strip() for name in text.split(",") if name.strip())
    return () if names in ((), (BASELINE,)) else names


def cmd_ablate(args: argparse.Namespace) -> None:
    hp = _hyperparams(args)
    threads = _threads(args)
    combinations = [_parse_combination(c) for c in args.combination] if args.combination else None
    store = _load_store(args.vectors, args.vocab)
    data = load_simlex(args.simlex)

    sources: Dict[str, ConstraintSource] = {}
    _named_sources(args.synonyms, Relation.SYNONYM, store, sources)
    _named_sources(args.antonyms, Relation.ANTONYM, store, sources)

    rows = ablation_run(store, sources, data, hp, combinations, threads=threads)
    write_ablation_csv(rows, args.out or sys.stdout)


def cmd_analyse_errors(args: argparse.Namespace) -> None:
    before = _load_store(args.before, args.vocab)
    after = _load_store(args.after, args.vocab)
    data = load_simlex(args.simlex)
    constraints = _load_constraints(before, args.synonyms, args.antonyms)
    report = error_analysis(before, after, data, constraints)
    print(format_error_report(report))


def cmd_extract_ppdb(args: argparse.Namespace) -> None:
    pairs = extract_ppdb_pairs(args.ppdb)
    synonyms = write_pair_file(pairs.synonyms, args.synonyms_out)
    antonyms = write_pair_file(pairs.antonyms, args.antonyms_out)
    print(f"synonyms\t{synonyms}")
    print(f"antonyms\t{antonyms}")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse `argv` and dispatch to a subcommand.

    Returns:
        0 on success, 1 on validation errors, 2 on I/O and data-file errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_VALIDATION
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    try:
        configure_logging(args.log_level)
    except InputValidationError as e:
        print(e, file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"Cannot open log file: {e}", file=sys.stderr)
        return EXIT_IO
    logger.info(f"Running {args.command}")

    try:
        args.handler(args)
    except (InputValidationError, GeometryError, CorrelationError, EvaluationError) as e:
        logger.error(str(e))
        return EXIT_VALIDATION
    except DataFileError as e:
        logger.error(str(e))
        return EXIT_IO
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO
    except CounterFitError as e:
        logger.error(str(e))
        return EXIT_VALIDATION
    return EXIT_OK


def main():
    """Run the command line."""
    sys.exit(run())


if __name__ == "__main__":
    main()
