"""
Original-space neighbourhoods used by the vector space preservation term.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Set, Tuple

import numpy as np

from src.config import config
from src.errors import InputValidationError
from src.vectors.store import VectorStore

# Configure logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NeighborhoodIndex:
    """
    N(i) for every word id i, stored row-compressed.

    Neighbours of i are `indices[indptr[i]:indptr[i + 1]]` in ascending id
    order; `distances` holds the matching original-space distances.
    """
    indptr: np.ndarray
    indices: np.ndarray
    distances: np.ndarray
    rho: float

    @property
    def size(self) -> int:
        return len(self.indptr) - 1

    def __len__(self) -> int:
        """Number of ordered (i, j) neighbour pairs."""
        return len(self.indices)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def neighbor_set(self, i: int) -> Set[int]:
        return set(self.neighbors(i).tolist())

    def pairs(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Ordered pairs as (rows, cols, original distances)."""
        rows = np.repeat(np.arange(self.size, dtype=np.int64), np.diff(self.indptr))
        return rows, self.indices, self.distances

    def without_pairs(self, pairs: Iterable[Tuple[int, int]]) -> "NeighborhoodIndex":
        """Copy with the given unordered pairs removed in both directions."""
        excluded = set()
        for i, j in pairs:
            excluded.add((i, j))
            excluded.add((j, i))
        if not excluded:
            return self
        rows, cols, dists = self.pairs()
        keep = np.array(
            [(r, c) not in excluded for r, c in zip(rows.tolist(), cols.tolist())],
            dtype=bool,
        )
        removed = len(keep) - int(keep.sum())
        if removed:
            logger.info(f"Removed {removed} constrained pairs from the neighbourhoods")
        return NeighborhoodIndex.from_pairs(self.size, rows[keep], cols[keep], dists[keep], self.rho)

    @classmethod
    def from_pairs(
        cls,
        size: int,
        rows: np.ndarray,
        cols: np.ndarray,
        distances: np.ndarray,
        rho: float,
    ) -> "NeighborhoodIndex":
        order = np.lexsort((cols, rows))
        rows, cols, distances = rows[order], cols[order], distances[order]
        counts = np.bincount(rows, minlength=size)
        indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
        return cls(indptr=indptr, indices=cols.astype(np.int64), distances=distances.astype(np.float64), rho=rho)


def compute_neighborhoods(
    store: VectorStore,
    rho: float,
    block_size: Optional[int] = None,
    threads: int = 1,
) -> NeighborhoodIndex:
    """
    Exact threshold neighbourhoods: j in N(i) iff j != i and 1 - cos(v_i, v_j) <= rho.

    Cosines are computed block-pair by block-pair over the upper triangle
    of the all-pairs matrix, then mirrored, so the relation is symmetric.
    """
    if not 0.0 < rho < 2.0:
        raise InputValidationError(f"rho must be in (0, 2), got {rho}")

    unit = store.unit_matrix()
    n = store.size
    block = block_size or config.runtime.block_size

    def scan(start: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        stop = min(start + block, n)
        rows, cols, dists = [], [], []
        for other in range(start, n, block):
            other_stop = min(other + block, n)
            dist = 1.0 - unit[start:stop] @ unit[other:other_stop].T
            hit_r, hit_c = np.nonzero(dist <= rho)
            gi = hit_r + start
            gj = hit_c + other
            upper = gj > gi
            rows.append(gi[upper])
            cols.append(gj[upper])
            dists.append(dist[hit_r[upper], hit_c[upper]])
        return np.concatenate(rows), np.concatenate(cols), np.concatenate(dists)

    starts = list(range(0, n, block))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            parts = list(executor.map(scan, starts))
    else:
        parts = [scan(start) for start in starts]

    if parts:
        upper_rows = np.concatenate([p[0] for p in parts]).astype(np.int64)
        upper_cols = np.concatenate([p[1] for p in parts]).astype(np.int64)
        upper_dists = np.clip(np.concatenate([p[2] for p in parts]), 0.0, 2.0)
    else:
        upper_rows = upper_cols = np.empty(0, dtype=np.int64)
        upper_dists = np.empty(0, dtype=np.float64)

    index = NeighborhoodIndex.from_pairs(
        n,
        np.concatenate((upper_rows, upper_cols)),
        np.concatenate((upper_cols, upper_rows)),
        np.concatenate((upper_dists, upper_dists)),
        rho,
    )
    logger.info(f"Computed neighbourhoods at rho={rho}: {len(index)} ordered pairs over {n} words")
    return index
