"""
SimLex-999 evaluation module.
"""
import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, NamedTuple, Sequence, Set, Tuple, Union

import numpy as np
import pandas as pd
from scipy.stats import spearmanr

from src.errors import (
    CorrelationError,
    EvaluationError,
    FormatError,
    InputValidationError,
    VectorIOError,
)
from src.vectors.store import VectorStore

# Configure logging
logger = logging.getLogger(__name__)

SIMLEX_SIZE = 999
REQUIRED_COLUMNS = ("word1", "word2", "SimLex999")


@dataclass(frozen=True)
class SimLexDataset:
    """Word pairs with gold similarity scores in [0, 10]."""
    pairs: List[Tuple[str, str, float]]

    @property
    def size(self) -> int:
        return len(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


class SimLexScore(NamedTuple):
    rho: float
    covered: int


def load_simlex(path: Union[str, Path]) -> SimLexDataset:
    """
    Load the tab-separated SimLex-999 distribution file.

    Words keep their case. Duplicate unordered pairs keep their first row.
    """
    path = str(path)
    try:
        frame = pd.read_csv(
            path,
            sep="\t",
            dtype=str,
            keep_default_na=False,
            quoting=csv.QUOTE_NONE,
        )
    except OSError as e:
        raise VectorIOError(path, e) from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise FormatError(f"{path}: cannot parse SimLex file ({e})") from e
    except UnicodeDecodeError as e:
        raise FormatError(f"{path}: invalid UTF-8 ({e.reason} at byte {e.start})") from None

    missing = [column for column in REQUIRED_COLUMNS if column not in frame.columns]
    if missing:
        raise FormatError(f"{path}: missing column(s) {', '.join(missing)}")

    pairs = []
    seen: Set[Tuple[str, str]] = set()
    duplicates = 0
    for row_number, (w1, w2, raw) in enumerate(
        zip(frame["word1"], frame["word2"], frame["SimLex999"]), start=2
    ):
        try:
            score = float(raw)
        except ValueError:
            raise FormatError(f"{path}:{row_number}: non-numeric SimLex999 score {raw!r}") from None
        if not np.isfinite(score):
            raise FormatError(f"{path}:{row_number}: non-finite SimLex999 score")
        key = (w1, w2) if w1 <= w2 else (w2, w1)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        pairs.append((w1, w2, score))

    if duplicates:
        logger.warning(f"Ignored {duplicates} duplicate word pairs in {path}")
    if len(pairs) != SIMLEX_SIZE:
        logger.warning(f"{path} has {len(pairs)} pairs, expected {SIMLEX_SIZE}; evaluating the subset")
    logger.info(f"Loaded {len(pairs)} SimLex pairs from {path}")
    return SimLexDataset(pairs)


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    Spearman's rank correlation, ties taking their average rank.
    """
    if len(xs) != len(ys):
        raise InputValidationError(f"Length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) == 0:
        raise InputValidationError("Spearman correlation of empty lists")

    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if np.ptp(xs) == 0.0 or np.ptp(ys) == 0.0:
        raise CorrelationError("Spearman correlation undefined: zero rank variance")
    rho = spearmanr(xs, ys)[0]
    if np.isnan(rho):
        raise CorrelationError("Spearman correlation undefined")
    return float(np.clip(rho, -1.0, 1.0))


def covered_pairs(store: VectorStore, data: SimLexDataset) -> List[Tuple[int, int, float]]:
    """(id1, id2, gold) for every pair with both words in the vocabulary."""
    return [
        (store.index(w1), store.index(w2), gold)
        for w1, w2, gold in data.pairs
        if w1 in store and w2 in store
    ]


def model_similarities(store: VectorStore, pairs: List[Tuple[int, int, float]]) -> np.ndarray:
    unit = store.unit_matrix()
    first = np.array([p[0] for p in pairs], dtype=np.int64)
    second = np.array([p[1] for p in pairs], dtype=np.int64)
    return np.einsum("ij,ij->i", unit[first], unit[second])


def evaluate_simlex(store: VectorStore, data: SimLexDataset) -> SimLexScore:
    """
    Spearman rho between cosine similarities and gold scores.

    Pairs with an out-of-vocabulary word are excluded; `covered` is the
    number of pairs scored.
    """
    pairs = covered_pairs(store, data)
    if not pairs:
        raise EvaluationError("No SimLex pair is covered by the vocabulary")

    rho = spearman(model_similarities(store, pairs), [p[2] for p in pairs])
    logger.info(f"SimLex: rho={rho:.4f} over {len(pairs)}/{data.size} covered pairs")
    return SimLexScore(rho, len(pairs))
