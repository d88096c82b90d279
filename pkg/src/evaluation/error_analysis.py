"""
False-synonym / false-antonym error analysis over SimLex rankings.
"""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.stats import rankdata

from src.errors import EvaluationError
from src.evaluation.simlex import SimLexDataset, covered_pairs, model_similarities
from src.lexicon.constraints import ConstraintSet
from src.vectors.store import VectorStore

# Configure logging
logger = logging.getLogger(__name__)

TOP = 200
MIN_GAP = 500
FIXED_WITHIN = 100


@dataclass(frozen=True)
class PairError:
    word1: str
    word2: str
    gold_rank: int
    rank_before: int
    rank_after: int
    fixed: bool
    in_constraints: bool


@dataclass(frozen=True)
class ErrorReport:
    false_synonyms: List[PairError] = field(default_factory=list)
    false_antonyms: List[PairError] = field(default_factory=list)
    total_pairs: int = 0


def _ranks(scores) -> np.ndarray:
    # Rank 1 is the most similar pair; ties keep dataset order.
    return rankdata(-np.asarray(scores, dtype=np.float64), method="ordinal").astype(int)


def error_analysis(
    before: VectorStore,
    after: VectorStore,
    data: SimLexDataset,
    constraints: ConstraintSet,
    top: int = TOP,
    min_gap: int = MIN_GAP,
    fixed_within: int = FIXED_WITHIN,
) -> ErrorReport:
    """
    Find the pairs `before` ranks far from their gold rank and check whether `after` fixes them.

    A false synonym is predicted in the top `top` pairs with a gold rank at
    least `min_gap` positions lower; a false antonym is the mirror image at
    the bottom. A pair counts as fixed when its rank under `after` is within
    `fixed_within` of the gold rank. All comparisons are inclusive.
    `constraints` must index the vocabulary of `before`.
    """
    pairs_before = covered_pairs(before, data)
    pairs_after = covered_pairs(after, data)
    words_before = [(before.word(i), before.word(j)) for i, j, _ in pairs_before]
    words_after = [(after.word(i), after.word(j)) for i, j, _ in pairs_after]
    if words_before != words_after:
        raise EvaluationError(
            f"Stores cover different SimLex pairs ({len(words_before)} vs {len(words_after)})"
        )
    if not pairs_before:
        raise EvaluationError("No SimLex pair is covered by the vocabulary")

    n = len(pairs_before)
    gold = _ranks([p[2] for p in pairs_before])
    predicted_before = _ranks(model_similarities(before, pairs_before))
    predicted_after = _ranks(model_similarities(after, pairs_after))

    false_synonyms, false_antonyms = [], []
    for k, (i, j, _) in enumerate(pairs_before):
        rank, gold_rank, rank_after = int(predicted_before[k]), int(gold[k]), int(predicted_after[k])
        is_false_synonym = rank <= top and gold_rank - rank >= min_gap
        is_false_antonym = rank >= n - top + 1 and rank - gold_rank >= min_gap
        if not (is_false_synonym or is_false_antonym):
            continue
        entry = PairError(
            word1=before.word(i),
            word2=before.word(j),
            gold_rank=gold_rank,
            rank_before=rank,
            rank_after=rank_after,
            fixed=abs(rank_after - gold_rank) <= fixed_within,
            in_constraints=constraints.contains(i, j),
        )
        (false_synonyms if is_false_synonym else false_antonyms).append(entry)

    report = ErrorReport(false_synonyms, false_antonyms, n)
    fixed = sum(e.fixed for e in false_synonyms + false_antonyms)
    logger.info(
        f"Error analysis: {len(false_synonyms)} false synonyms, {len(false_antonyms)} false antonyms, "
        f"{fixed} fixed"
    )
    return report


def _marker(entry: PairError) -> str:
    if not entry.fixed:
        return ""
    return "✓" if entry.in_constraints else "✓✓"


def format_error_report(report: ErrorReport) -> str:
    """
    Render the report as a text table.

    ✓ marks a fixed pair that is itself a constraint, ✓✓ a fixed pair that is not.
    """
    header = f"{'pair':<28}{'before':>8}{'gold':>8}{'after':>8}  fixed"
    lines = []
    for title, entries in (("False synonyms", report.false_synonyms), ("False antonyms", report.false_antonyms)):
        lines.append(f"{title} ({len(entries)})")
        lines.append(header)
        for e in entries:
            pair = f"{e.word1}, {e.word2}"
            lines.append(f"{pair:<28}{e.rank_before:>8}{e.gold_rank:>8}{e.rank_after:>8}  {_marker(e)}")
        lines.append("")
    return "\n".join(lines)
