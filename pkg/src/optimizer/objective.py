"""
Counter-fitting objective: antonym repel (AR), synonym attract (SA) and
vector space preservation (VSP) hinge terms, and their gradients.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.config import Hyperparams
from src.errors import InputValidationError
from src.lexicon.constraints import ConstraintSet
from src.optimizer.neighbourhoods import NeighborhoodIndex
from src.vectors.store import VectorStore

# Configure logging
logger = logging.getLogger(__name__)


class Term(str, Enum):
    AR = "ar"
    SA = "sa"
    VSP = "vsp"


# Integer codes used in the SGD item arrays
TERM_CODES = {Term.AR: 0, Term.SA: 1, Term.VSP: 2}


@dataclass(frozen=True)
class CostBreakdown:
    """Unweighted term sums and their weighted total."""
    ar: float
    sa: float
    vsp: float
    total: float

    @classmethod
    def combine(cls, ar: float, sa: float, vsp: float, hp: Hyperparams) -> "CostBreakdown":
        return cls(ar=ar, sa=sa, vsp=vsp, total=hp.k1 * ar + hp.k2 * sa + hp.k3 * vsp)


def hinge(x: float) -> float:
    """tau(x) = max(0, x)."""
    return max(0.0, x)


def term_weight(term: Term, hp: Hyperparams) -> float:
    return {Term.AR: hp.k1, Term.SA: hp.k2, Term.VSP: hp.k3}[term]


def pair_distances(matrix: np.ndarray, us: np.ndarray, ws: np.ndarray) -> np.ndarray:
    """Cosine distances between rows us[k] and ws[k]."""
    if len(us) == 0:
        return np.empty(0, dtype=np.float64)
    a = matrix[us]
    b = matrix[ws]
    cos = np.einsum("ij,ij->i", a, b) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
    return 1.0 - np.clip(cos, -1.0, 1.0)


def cost(
    storeV: VectorStore,
    storeVp: VectorStore,
    constraints: ConstraintSet,
    nbhd: NeighborhoodIndex,
    hp: Hyperparams,
) -> CostBreakdown:
    """
    Evaluate C(V, V') = k1 AR(V') + k2 SA(V') + k3 VSP(V, V').

    N(i) comes from `nbhd`; the original distances d(v_i, v_j) are taken
    from `storeV` with the same arithmetic as the transformed ones, so an
    untouched space has VSP exactly 0.
    """
    if not storeV.same_vocab(storeVp):
        raise InputValidationError("Original and transformed stores do not share vocabulary and dimension")
    if nbhd.size != storeV.size:
        raise InputValidationError(
            f"Neighbourhood index covers {nbhd.size} words, store has {storeV.size}"
        )
    constraints.validate_against(storeVp)

    matrix = storeVp.matrix

    antonyms = constraints.antonym_array()
    ar = float(np.maximum(0.0, hp.delta - pair_distances(matrix, antonyms[:, 0], antonyms[:, 1])).sum())

    synonyms = constraints.synonym_array()
    sa = float(np.maximum(0.0, pair_distances(matrix, synonyms[:, 0], synonyms[:, 1]) - hp.gamma).sum())

    rows, cols, _ = nbhd.pairs()
    original = pair_distances(storeV.matrix, rows, cols)
    vsp = float(np.maximum(0.0, pair_distances(matrix, rows, cols) - original).sum())

    return CostBreakdown.combine(ar, sa, vsp, hp)


def _cosine_parts(a: np.ndarray, b: np.ndarray) -> Tuple[float, float, float]:
    norm_a = np.sqrt(a @ a)
    norm_b = np.sqrt(b @ b)
    return norm_a, norm_b, (a @ b) / (norm_a * norm_b)


def row_distance(a: np.ndarray, b: np.ndarray) -> float:
    """d(a, b) computed exactly as the gradient code computes it."""
    return float(1.0 - _cosine_parts(a, b)[2])


def hinge_gradient(
    code: int,
    a: np.ndarray,
    b: np.ndarray,
    reference: float,
    weight: float,
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """
    Gradient of one weighted hinge summand, or None when the hinge is inactive.

    AR: weight * tau(reference - d), SA and VSP: weight * tau(d - reference).
    The subgradient at the kink is zero.
    """
    norm_a, norm_b, cos = _cosine_parts(a, b)
    d = 1.0 - cos

    if code == 0:
        if reference - d <= 0.0:
            return None
        sign = -weight
    else:
        if d - reference <= 0.0:
            return None
        sign = weight

    grad_a = -(b / (norm_a * norm_b) - cos * a / (norm_a * norm_a))
    grad_b = -(a / (norm_a * norm_b) - cos * b / (norm_b * norm_b))
    return sign * grad_a, sign * grad_b


def pair_gradient(
    term: Term,
    store: VectorStore,
    u: int,
    w: int,
    reference_distance: float,
    hp: Hyperparams,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Subgradients of a term's weighted hinge summand with respect to rows u and w.

    Args:
        term: Which objective term the pair belongs to
        store: Current (transformed) vectors
        u, w: Word ids of the pair
        reference_distance: delta for AR, gamma for SA, original d(v_u, v_w) for VSP
        hp: Hyperparameters supplying the term weight

    Returns:
        (gradient for u, gradient for w); zero vectors when the hinge is inactive
    """
    term = Term(term)
    store.check_id(u)
    store.check_id(w)
    zeros = np.zeros(store.dim)
    if u == w:
        return zeros, zeros.copy()

    grads = hinge_gradient(
        TERM_CODES[term], store.matrix[u], store.matrix[w], reference_distance, term_weight(term, hp)
    )
    if grads is None:
        return zeros, zeros.copy()
    return grads
