"""
Stochastic gradient descent loop producing counter-fitted vectors.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, NamedTuple, Optional, Union

import numpy as np
import pandas as pd

from src.config import Hyperparams
from src.errors import VectorIOError
from src.lexicon.constraints import ConstraintSet
from src.optimizer.neighbourhoods import NeighborhoodIndex, compute_neighborhoods
from src.optimizer.objective import TERM_CODES, CostBreakdown, Term, cost, hinge_gradient, row_distance
from src.vectors.store import VectorStore

# Configure logging
logger = logging.getLogger(__name__)


class CounterFitResult(NamedTuple):
    vectors: VectorStore
    # trace[0] is the starting cost, trace[e] the cost after epoch e
    trace: List[CostBreakdown]


@dataclass(frozen=True)
class _Items:
    """One entry per hinge summand visited in an epoch."""
    codes: List[int]
    us: List[int]
    ws: List[int]
    references: List[float]
    weights: List[float]

    def __len__(self) -> int:
        return len(self.codes)


def _build_items(
    original: np.ndarray, constraints: ConstraintSet, nbhd: NeighborhoodIndex, hp: Hyperparams
) -> _Items:
    codes, us, ws, references, weights = [], [], [], [], []

    def add(term: Term, pairs, refs, weight: float) -> None:
        if weight == 0.0 or len(pairs) == 0:
            return
        codes.extend([TERM_CODES[term]] * len(pairs))
        us.extend(pairs[:, 0].tolist())
        ws.extend(pairs[:, 1].tolist())
        references.extend(refs)
        weights.extend([weight] * len(pairs))

    antonyms = constraints.antonym_array()
    add(Term.AR, antonyms, [hp.delta] * len(antonyms), hp.k1)
    synonyms = constraints.synonym_array()
    add(Term.SA, synonyms, [hp.gamma] * len(synonyms), hp.k2)
    rows, cols, _ = nbhd.pairs()
    # Reference distances use the gradient code's arithmetic so every VSP
    # hinge sits exactly at its kink before the first update.
    if hp.k3:
        vsp_refs = [row_distance(original[i], original[j]) for i, j in zip(rows.tolist(), cols.tolist())]
        add(Term.VSP, np.column_stack((rows, cols)), vsp_refs, hp.k3)

    logger.info(
        f"SGD items per epoch: {len(antonyms) if hp.k1 else 0} AR, "
        f"{len(synonyms) if hp.k2 else 0} SA, {len(rows) if hp.k3 else 0} VSP"
    )
    return _Items(codes, us, ws, references, weights)


def _run_items(matrix: np.ndarray, items: _Items, order: List[int], learning_rate: float) -> None:
    """Apply one immediate update per visited summand and re-normalize the two touched rows."""
    for k in order:
        u = items.us[k]
        w = items.ws[k]
        grads = hinge_gradient(items.codes[k], matrix[u], matrix[w], items.references[k], items.weights[k])
        if grads is None:
            continue
        grad_u, grad_w = grads
        matrix[u] -= learning_rate * grad_u
        matrix[w] -= learning_rate * grad_w
        matrix[u] /= np.sqrt(matrix[u] @ matrix[u])
        matrix[w] /= np.sqrt(matrix[w] @ matrix[w])


def counter_fit(
    store: VectorStore,
    constraints: ConstraintSet,
    hp: Hyperparams,
    threads: int = 1,
    neighborhoods: Optional[NeighborhoodIndex] = None,
) -> CounterFitResult:
    """
    Counter-fit `store` to the synonym and antonym constraints.

    Each epoch visits every AR, SA and VSP summand once in a seeded
    shuffled order. Neighbourhood pairs that are antonym constraints are
    left out of VSP. With threads > 1 the epoch's order is split across
    workers that update rows without locking, which gives up bit-for-bit
    reproducibility.

    Args:
        store: Original vectors V (left unmodified)
        constraints: Synonym and antonym pairs over the store's ids
        hp: Hyperparameters
        threads: Worker count for neighbourhoods and SGD
        neighborhoods: Precomputed N(i) for `store` at hp.rho

    Returns:
        CounterFitResult with V' and the cost trace
    """
    constraints.validate_against(store)
    original = store if store.normalized else store.copy().normalize()

    if neighborhoods is None:
        neighborhoods = compute_neighborhoods(original, hp.rho, threads=threads)
    neighborhoods = neighborhoods.without_pairs(constraints.antonyms)

    fitted = original.copy()
    trace = [cost(original, fitted, constraints, neighborhoods, hp)]
    _log_cost(0, hp.epochs, trace[0])

    items = _build_items(original.matrix, constraints, neighborhoods, hp)
    rng = np.random.default_rng(hp.seed)

    for epoch in range(1, hp.epochs + 1):
        order = rng.permutation(len(items))
        if threads > 1 and len(items) > threads:
            chunks = [chunk.tolist() for chunk in np.array_split(order, threads)]
            with ThreadPoolExecutor(max_workers=threads) as executor:
                list(executor.map(lambda chunk: _run_items(fitted.matrix, items, chunk, hp.learning_rate), chunks))
        else:
            _run_items(fitted.matrix, items, order.tolist(), hp.learning_rate)

        trace.append(cost(original, fitted, constraints, neighborhoods, hp))
        _log_cost(epoch, hp.epochs, trace[-1])

    return CounterFitResult(fitted, trace)


def _log_cost(epoch: int, epochs: int, breakdown: CostBreakdown) -> None:
    logger.info(
        f"Epoch {epoch}/{epochs}: AR={breakdown.ar:.4f} SA={breakdown.sa:.4f} "
        f"VSP={breakdown.vsp:.4f} total={breakdown.total:.4f}"
    )


def write_cost_trace(trace: List[CostBreakdown], path: Union[str, Path]) -> None:
    """Write the trace as `epoch,ar,sa,vsp,total` CSV."""
    frame = pd.DataFrame(
        [(epoch, c.ar, c.sa, c.vsp, c.total) for epoch, c in enumerate(trace)],
        columns=["epoch", "ar", "sa", "vsp", "total"],
    )
    try:
        frame.to_csv(path, index=False)
    except OSError as e:
        raise VectorIOError(str(path), e) from e
    logger.info(f"Wrote cost trace ({len(trace)} rows) to {path}")
