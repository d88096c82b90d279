"""
Constraint-source ablation driver.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import pandas as pd

from src.config import Hyperparams
from src.errors import InputValidationError, VectorIOError
from src.evaluation.simlex import SimLexDataset, evaluate_simlex
from src.lexicon.constraints import Pair, build_constraint_set
from src.optimizer.neighbourhoods import NeighborhoodIndex, compute_neighborhoods
from src.optimizer.sgd import counter_fit
from src.vectors.store import VectorStore

# Configure logging
logger = logging.getLogger(__name__)

BASELINE = "baseline"


class Relation(str, Enum):
    SYNONYM = "synonym"
    ANTONYM = "antonym"


@dataclass(frozen=True)
class ConstraintSource:
    """A named set of pairs of one relation, e.g. PPDB+ synonyms."""
    name: str
    relation: Relation
    pairs: FrozenSet[Pair]


@dataclass(frozen=True)
class AblationRow:
    combination: Tuple[str, ...]
    rho: float
    covered: int
    synonym_pairs: int
    antonym_pairs: int

    @property
    def label(self) -> str:
        return " and ".join(self.combination) if self.combination else BASELINE


def default_combinations(names: Sequence[str]) -> List[Tuple[str, ...]]:
    """The baseline followed by every non-empty subset, smallest first."""
    combinations: List[Tuple[str, ...]] = [()]
    for size in range(1, len(names) + 1):
        combinations.extend(itertools.combinations(names, size))
    return combinations


def ablation_run(
    store: VectorStore,
    sources: Dict[str, ConstraintSource],
    data: SimLexDataset,
    hp: Hyperparams,
    combinations: Optional[List[Tuple[str, ...]]] = None,
    threads: int = 1,
) -> List[AblationRow]:
    """
    Counter-fit with each combination of sources and score it on SimLex.

    The empty combination is the baseline: the unmodified input vectors.
    """
    if combinations is None:
        combinations = default_combinations(list(sources))
    for combination in combinations:
        unknown = [name for name in combination if name not in sources]
        if unknown:
            raise InputValidationError(f"Unknown constraint source(s): {', '.join(unknown)}")

    # Neighbourhoods depend only on the input space, so share one index.
    neighborhoods: Optional[NeighborhoodIndex] = None
    if any(combinations):
        neighborhoods = compute_neighborhoods(store, hp.rho, threads=threads)

    def run(combination: Tuple[str, ...]) -> AblationRow:
        chosen = [sources[name] for name in combination]
        constraints = build_constraint_set(
            [s.pairs for s in chosen if s.relation == Relation.SYNONYM],
            [s.pairs for s in chosen if s.relation == Relation.ANTONYM],
        )
        if combination:
            vectors = counter_fit(store, constraints, hp, neighborhoods=neighborhoods).vectors
        else:
            vectors = store
        score = evaluate_simlex(vectors, data)
        row = AblationRow(
            combination=tuple(combination),
            rho=score.rho,
            covered=score.covered,
            synonym_pairs=len(constraints.synonyms),
            antonym_pairs=len(constraints.antonyms),
        )
        logger.info(f"Ablation {row.label}: rho={row.rho:.4f}")
        return row

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(run, combinations))
    return [run(combination) for combination in combinations]


def write_ablation_csv(rows: List[AblationRow], path: Union[str, Path]) -> None:
    frame = pd.DataFrame(
        [(r.label, r.rho, r.covered, r.synonym_pairs, r.antonym_pairs) for r in rows],
        columns=["constraints", "rho", "covered", "synonym_pairs", "antonym_pairs"],
    )
    try:
        frame.to_csv(path, index=False)
    except OSError as e:
        raise VectorIOError(str(path), e) from e
    logger.info(f"Wrote ablation table ({len(rows)} rows) to {path}")
