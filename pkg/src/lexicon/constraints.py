"""
Linguistic constraint ingestion module.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, Iterable, List, NamedTuple, Set, Tuple, Union

import numpy as np

from src.errors import InputValidationError, ParseError, VectorIOError
from src.vectors.store import VectorStore, decoded_lines

# Configure logging
logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


class PairSet(NamedTuple):
    """Canonical word-id pairs plus the number of inputs that could not be used."""
    pairs: FrozenSet[Pair]
    dropped: int


def canonical_pair(i: int, j: int) -> Pair:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class ConstraintSet:
    """
    Synonym pairs S and antonym pairs A over vocabulary ids.

    Pairs are unordered and stored smaller id first.
    """
    synonyms: FrozenSet[Pair] = frozenset()
    antonyms: FrozenSet[Pair] = frozenset()
    conflicts: int = field(default=0, compare=False)

    def validate_against(self, store: VectorStore) -> None:
        """Raise if any id does not index into `store`."""
        for relation, pairs in (("synonym", self.synonyms), ("antonym", self.antonyms)):
            for i, j in pairs:
                if not (0 <= i < j < store.size):
                    raise InputValidationError(
                        f"Invalid {relation} pair ({i}, {j}) for vocabulary of {store.size}"
                    )

    def contains(self, i: int, j: int) -> bool:
        pair = canonical_pair(i, j)
        return pair in self.synonyms or pair in self.antonyms

    def synonym_array(self) -> np.ndarray:
        return _sorted_pair_array(self.synonyms)

    def antonym_array(self) -> np.ndarray:
        return _sorted_pair_array(self.antonyms)


def _sorted_pair_array(pairs: Iterable[Pair]) -> np.ndarray:
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    return np.array(sorted(pairs), dtype=np.int64)


def load_pair_file(path: Union[str, Path], store: VectorStore) -> PairSet:
    """
    Read a two-token-per-line constraint file.

    Args:
        path: Pair file; `#` lines and blank lines are ignored
        store: Vector store whose vocabulary the pairs must belong to

    Returns:
        PairSet with the canonical in-vocabulary pairs and the count of
        lines dropped because a word was out of vocabulary
    """
    path = str(path)
    pairs: Set[Pair] = set()
    dropped = 0
    self_pairs = 0

    try:
        with open(path, "rb") as f:
            for line_number, line in decoded_lines(f, path):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                tokens = stripped.split()
                if len(tokens) != 2:
                    raise ParseError(path, line_number, f"expected 2 tokens, found {len(tokens)}")
                first, second = tokens
                if first not in store or second not in store:
                    dropped += 1
                    continue
                i, j = store.index(first), store.index(second)
                if i == j:
                    self_pairs += 1
                    continue
                pairs.add(canonical_pair(i, j))
    except OSError as e:
        raise VectorIOError(path, e) from e

    logger.info(
        f"Loaded {len(pairs)} pairs from {path} "
        f"({dropped} out-of-vocabulary lines dropped, {self_pairs} self-pairs ignored)"
    )
    return PairSet(frozenset(pairs), dropped)


def _union(sources: Iterable[Iterable[Pair]], relation: str) -> Set[Pair]:
    union: Set[Pair] = set()
    for source in sources:
        for i, j in source:
            if i < 0 or j < 0:
                raise InputValidationError(f"Negative word id in {relation} pair ({i}, {j})")
            if i == j:
                continue
            union.add(canonical_pair(int(i), int(j)))
    return union


def build_constraint_set(
    synonym_sources: List[Iterable[Pair]],
    antonym_sources: List[Iterable[Pair]],
) -> ConstraintSet:
    """
    Union constraint sources per relation.

    A pair present in both relations is kept as an antonym only.
    """
    synonyms = _union(synonym_sources, "synonym")
    antonyms = _union(antonym_sources, "antonym")

    conflicts = synonyms & antonyms
    if conflicts:
        logger.warning(f"{len(conflicts)} pairs are both synonyms and antonyms; keeping them as antonyms")
        synonyms -= conflicts

    logger.info(f"Constraint set: {len(synonyms)} synonym pairs, {len(antonyms)} antonym pairs")
    return ConstraintSet(frozenset(synonyms), frozenset(antonyms), len(conflicts))


def write_pair_file(pairs: Iterable[Tuple[str, str]], path: Union[str, Path]) -> int:
    """Write word pairs in the pair-file format; returns the number written."""
    path = str(path)
    count = 0
    try:
        with open(path, "w", encoding="utf-8") as f:
            for first, second in pairs:
                f.write(f"{first} {second}\n")
                count += 1
    except OSError as e:
        raise VectorIOError(path, e) from e
    logger.info(f"Wrote {count} pairs to {path}")
    return count
