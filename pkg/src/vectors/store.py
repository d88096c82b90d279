"""
Word vector store module.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union

import numpy as np

from src.errors import (
    EmptyVocabularyError,
    GeometryError,
    InputValidationError,
    ParseError,
    UnknownWordError,
    VectorIOError,
)

# Configure logging
logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-6


class VectorStore:
    """
    Indexed vocabulary plus a dense N x dim embedding matrix.

    Readers may share a store freely. Anything that writes to `matrix`
    (normalization, optimizer updates) needs exclusive access.
    """

    def __init__(self, vocab: List[str], matrix: np.ndarray, normalized: bool = False):
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise InputValidationError(f"Embedding matrix must be 2-d, got shape {matrix.shape}")
        if matrix.shape[0] != len(vocab):
            raise InputValidationError(
                f"Vocabulary has {len(vocab)} words but matrix has {matrix.shape[0]} rows"
            )
        if not np.all(np.isfinite(matrix)):
            raise InputValidationError("Embedding matrix contains non-finite components")

        self.vocab = list(vocab)
        self.word_to_id: Dict[str, int] = {}
        for i, word in enumerate(self.vocab):
            if word in self.word_to_id:
                raise InputValidationError(f"Duplicate word in vocabulary: {word!r}")
            self.word_to_id[word] = i
        self.matrix = matrix
        self.normalized = normalized
        if normalized and matrix.shape[0]:
            norms = np.linalg.norm(matrix, axis=1)
            if np.any(np.abs(norms - 1.0) > NORM_TOLERANCE):
                raise InputValidationError("Store flagged as normalized has rows that are not unit-norm")

    @property
    def size(self) -> int:
        return len(self.vocab)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.vocab)

    def __contains__(self, word: str) -> bool:
        return word in self.word_to_id

    def index(self, word: str) -> int:
        """Word id of `word`."""
        try:
            return self.word_to_id[word]
        except KeyError:
            raise UnknownWordError(word) from None

    def word(self, i: int) -> str:
        return self.vocab[i]

    def check_id(self, i: int) -> None:
        if not 0 <= i < self.size:
            raise InputValidationError(f"Word id {i} out of range for vocabulary of {self.size}")

    def same_vocab(self, other: "VectorStore") -> bool:
        return self.dim == other.dim and self.vocab == other.vocab

    def copy(self) -> "VectorStore":
        clone = VectorStore.__new__(VectorStore)
        clone.vocab = list(self.vocab)
        clone.word_to_id = dict(self.word_to_id)
        clone.matrix = self.matrix.copy()
        clone.normalized = self.normalized
        return clone

    def normalize(self) -> "VectorStore":
        """Scale every row to unit Euclidean norm, in place."""
        norms = np.linalg.norm(self.matrix, axis=1)
        zero = np.flatnonzero(norms == 0.0)
        if zero.size:
            raise GeometryError(f"Cannot normalize zero-norm row for word {self.vocab[zero[0]]!r}")
        self.matrix /= norms[:, np.newaxis]
        self.normalized = True
        return self

    def unit_matrix(self) -> np.ndarray:
        """The matrix with unit rows; the stored array itself when already normalized."""
        if self.normalized:
            return self.matrix
        return self.copy().normalize().matrix


@dataclass(frozen=True)
class NeighborRanking:
    """Top-k neighbours of a query word, most similar first."""
    query: int
    entries: List[Tuple[int, float]]

    def words(self, store: VectorStore) -> List[Tuple[str, float]]:
        return [(store.word(j), sim) for j, sim in self.entries]


def decoded_lines(handle: BinaryIO, path: str) -> Iterator[Tuple[int, str]]:
    """
    Yield (line_number, text) for a binary handle, decoding each line as UTF-8.

    Invalid bytes raise ParseError with the exact line number.
    """
    for line_number, raw in enumerate(handle, start=1):
        try:
            yield line_number, raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(path, line_number, f"invalid UTF-8 ({e.reason} at byte {e.start})") from None


def load_word_list(path: Union[str, Path]) -> Set[str]:
    """Read a vocabulary filter file, one word per line."""
    path = str(path)
    try:
        with open(path, "rb") as f:
            words = {line.strip() for _, line in decoded_lines(f, path)}
    except OSError as e:
        raise VectorIOError(path, e) from e
    words.discard("")
    logger.info(f"Read {len(words)} words from {path}")
    return words


def load_vectors(path: Union[str, Path], vocab_filter: Optional[Iterable[str]] = None) -> VectorStore:
    """
    Load a whitespace-separated text vector file.

    Args:
        path: File with one `word c1 ... cdim` line per word
        vocab_filter: Optional set of words to keep

    Returns:
        Unit-normalized VectorStore in first-occurrence order
    """
    path = str(path)
    keep = set(vocab_filter) if vocab_filter is not None else None

    words: List[str] = []
    rows: List[np.ndarray] = []
    seen: Set[str] = set()
    dim = None
    duplicates = 0
    zero_rows = 0
    skipped = 0

    logger.info(f"Loading vectors from {path}")
    try:
        with open(path, "rb") as f:
            for line_number, line in decoded_lines(f, path):
                line = line.rstrip("\r\n").rstrip(" ")
                if not line:
                    continue
                parts = line.split(" ")
                word, components = parts[0], parts[1:]
                # Lines outside the filter are skipped unchecked
                if keep is not None and word not in keep:
                    skipped += 1
                    continue
                if dim is None:
                    dim = len(components)
                    if dim == 0:
                        raise ParseError(path, line_number, "line has no vector components")
                elif len(components) != dim:
                    raise ParseError(
                        path, line_number,
                        f"expected {dim} components, found {len(components)}",
                    )

                if word in seen:
                    duplicates += 1
                    continue

                try:
                    row = np.array(components, dtype=np.float64)
                except ValueError as e:
                    raise ParseError(path, line_number, f"non-numeric component ({e})") from None
                if not np.all(np.isfinite(row)):
                    raise ParseError(path, line_number, "non-finite component")
                seen.add(word)
                if not np.any(row):
                    zero_rows += 1
                    continue
                words.append(word)
                rows.append(row)
    except OSError as e:
        raise VectorIOError(path, e) from e

    if skipped:
        logger.debug(f"Skipped {skipped} lines outside the vocabulary filter in {path}")
    if duplicates:
        logger.warning(f"{duplicates} duplicate words in {path}; kept first occurrences")
    if zero_rows:
        logger.warning(f"Dropped {zero_rows} zero-norm vectors from {path}")
    if not words:
        raise EmptyVocabularyError(f"Empty vocabulary after loading {path}")

    store = VectorStore(words, np.vstack(rows)).normalize()
    logger.info(f"Loaded {store.size} vectors of dimension {store.dim}")
    return store


def save_vectors(store: VectorStore, path: Union[str, Path]) -> None:
    """Write a store in the text format read by load_vectors."""
    if store.size == 0:
        raise InputValidationError("Refusing to write an empty vector store")

    path = str(path)
    try:
        with open(path, "w", encoding="utf-8") as f:
            for word, row in zip(store.vocab, store.matrix):
                f.write(word + " " + " ".join(f"{x:.8g}" for x in row) + "\n")
    except OSError as e:
        raise VectorIOError(path, e) from e
    logger.info(f"Wrote {store.size} vectors to {path}")


def cosine(store: VectorStore, i: int, j: int) -> float:
    a = store.matrix[i]
    b = store.matrix[j]
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise GeometryError(f"Cosine undefined for zero-norm row ({i}, {j})")
    return float(np.clip(np.dot(a, b) / (norm_a * norm_b), -1.0, 1.0))


def distance(store: VectorStore, i: int, j: int) -> float:
    """Cosine distance 1 - cos(v_i, v_j), in [0, 2]."""
    store.check_id(i)
    store.check_id(j)
    if i == j:
        if not np.any(store.matrix[i]):
            raise GeometryError(f"Cosine undefined for zero-norm row {i}")
        return 0.0
    return 1.0 - cosine(store, i, j)


def nearest_neighbors(store: VectorStore, word: str, k: int) -> NeighborRanking:
    """
    Top-k neighbours of `word` by cosine similarity.

    Ties are broken by ascending word id; the query itself is excluded.
    """
    query = store.index(word)
    if not 1 <= k < store.size:
        raise InputValidationError(f"k must be in [1, {store.size - 1}], got {k}")

    unit = store.unit_matrix()
    sims = unit @ unit[query]
    sims[query] = -np.inf

    # Everything at or above the k-th best similarity is a candidate, so
    # ties straddling the cut are ordered by id before truncating.
    kth = np.partition(sims, -k)[-k]
    candidates = np.flatnonzero(sims >= kth)
    order = np.lexsort((candidates, -sims[candidates]))
    top = candidates[order][:k]
    return NeighborRanking(query=query, entries=[(int(j), float(sims[j])) for j in top])
