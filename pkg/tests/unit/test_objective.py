"""
Unit tests for the counter-fitting cost and its gradients.
"""
import os
import sys
import unittest

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from src.config import Hyperparams
from src.errors import InputValidationError
from src.lexicon.constraints import ConstraintSet, build_constraint_set
from src.optimizer.neighbourhoods import compute_neighborhoods
from src.optimizer.objective import CostBreakdown, Term, cost, hinge, pair_gradient
from src.vectors.store import VectorStore, distance
from tests.helpers import clustered_store, random_store


def disjoint_pairs(n, count, rng):
    """`2 * count` distinct ids split into synonym and antonym pairs."""
    ids = rng.permutation(n)[: 4 * count]
    pairs = [(int(ids[2 * k]), int(ids[2 * k + 1])) for k in range(2 * count)]
    return pairs[:count], pairs[count:]


def summand(term, a, b, reference, weight):
    d = 1.0 - (a @ b) / (np.linalg.norm(a) * np.linalg.norm(b))
    if term == Term.AR:
        return weight * max(0.0, reference - d)
    return weight * max(0.0, d - reference)


class TestHinge(unittest.TestCase):

    def test_values(self):
        assert hinge(-1.0) == 0.0
        assert hinge(0.0) == 0.0
        assert hinge(0.25) == 0.25


class TestCost(unittest.TestCase):
    """The cost against an explicit per-pair sum."""

    def test_unchanged_space_costs_nothing(self):
        """V' = V with no constraints gives zero for every term."""
        store = clustered_store(60, 8, clusters=5, noise=0.4)
        nbhd = compute_neighborhoods(store, 0.2)
        assert len(nbhd) > 0
        result = cost(store, store.copy(), ConstraintSet(), nbhd, Hyperparams())
        assert result == CostBreakdown(0.0, 0.0, 0.0, 0.0)

    def test_orthogonal_antonyms(self):
        """Antonyms already at distance delta cost nothing."""
        store = VectorStore(["a", "b"], np.eye(2)).normalize()
        nbhd = compute_neighborhoods(store, 0.2)
        constraints = ConstraintSet(antonyms=frozenset({(0, 1)}))
        assert cost(store, store, constraints, nbhd, Hyperparams()).ar == 0.0

    def test_matches_pairwise_sum(self):
        rng = np.random.default_rng(7)
        original = clustered_store(30, 5, clusters=4, noise=0.5, seed=7)
        moved = VectorStore(original.vocab, original.matrix + 0.3 * rng.normal(size=(30, 5))).normalize()
        synonyms, antonyms = disjoint_pairs(30, 5, rng)
        constraints = build_constraint_set([synonyms], [antonyms])
        hp = Hyperparams(k1=0.5, k2=2.0, k3=1.5, rho=0.5)
        nbhd = compute_neighborhoods(original, hp.rho)

        ar = sum(hinge(hp.delta - distance(moved, u, w)) for u, w in constraints.antonyms)
        sa = sum(hinge(distance(moved, u, w) - hp.gamma) for u, w in constraints.synonyms)
        vsp = 0.0
        for i in range(original.size):
            for j in nbhd.neighbors(i).tolist():
                vsp += hinge(distance(moved, i, j) - distance(original, i, j))

        result = cost(original, moved, constraints, nbhd, hp)
        assert result.ar == pytest.approx(ar, abs=1e-9)
        assert result.sa == pytest.approx(sa, abs=1e-9)
        assert result.vsp == pytest.approx(vsp, abs=1e-9)
        assert result.total == pytest.approx(0.5 * ar + 2.0 * sa + 1.5 * vsp, abs=1e-9)
        assert result.ar >= 0.0 and result.sa >= 0.0 and result.vsp >= 0.0

    def test_vocabulary_mismatch(self):
        first = random_store(4, 3)
        second = random_store(4, 3, prefix="x")
        nbhd = compute_neighborhoods(first, 0.2)
        with pytest.raises(InputValidationError):
            cost(first, second, ConstraintSet(), nbhd, Hyperparams())

    def test_constraint_out_of_range(self):
        store = random_store(4, 3)
        nbhd = compute_neighborhoods(store, 0.2)
        with pytest.raises(InputValidationError):
            cost(store, store, ConstraintSet(synonyms=frozenset({(0, 9)})), nbhd, Hyperparams())


class TestPairGradient(unittest.TestCase):
    """Analytic subgradients of single hinge summands."""

    def test_inactive_antonym(self):
        """Antonyms further apart than delta get no update."""
        store = VectorStore(["a", "b"], np.array([[1.0, 0.0], [-1.0, 0.1]])).normalize()
        grad_u, grad_w = pair_gradient(Term.AR, store, 0, 1, 1.0, Hyperparams())
        assert not np.any(grad_u) and not np.any(grad_w)

    def test_same_word(self):
        store = random_store(3, 4)
        grad_u, grad_w = pair_gradient(Term.SA, store, 1, 1, 0.0, Hyperparams())
        assert not np.any(grad_u) and not np.any(grad_w)

    def test_synonym_step_reduces_distance(self):
        store = VectorStore(["a", "b"], np.array([[1.0, 0.0, 0.0], [0.2, 1.0, 0.3]])).normalize()
        before = distance(store, 0, 1)
        grad_u, grad_w = pair_gradient(Term.SA, store, 0, 1, 0.0, Hyperparams())
        store.matrix[0] -= 1e-3 * grad_u
        store.matrix[1] -= 1e-3 * grad_w
        assert distance(store, 0, 1) < before

    def test_antonym_step_increases_distance(self):
        store = VectorStore(["a", "b"], np.array([[1.0, 0.0, 0.0], [0.9, 0.3, 0.0]])).normalize()
        before = distance(store, 0, 1)
        grad_u, grad_w = pair_gradient(Term.AR, store, 0, 1, 1.0, Hyperparams())
        store.matrix[0] -= 1e-3 * grad_u
        store.matrix[1] -= 1e-3 * grad_w
        assert distance(store, 0, 1) > before

    def test_finite_differences(self):
        """Analytic gradients agree with central differences on active pairs."""
        rng = np.random.default_rng(11)
        hp = Hyperparams(delta=2.0, gamma=0.0, k1=1.0, k2=0.7, k3=1.3)
        weights = {Term.AR: hp.k1, Term.SA: hp.k2, Term.VSP: hp.k3}
        terms = [Term.AR, Term.SA, Term.VSP]
        step = 1e-5
        checked = 0

        while checked < 1000:
            term = terms[checked % 3]
            a = rng.normal(size=5) * rng.uniform(0.5, 2.0)
            b = rng.normal(size=5) * rng.uniform(0.5, 2.0)
            d = 1.0 - (a @ b) / (np.linalg.norm(a) * np.linalg.norm(b))
            if term == Term.AR:
                reference = hp.delta
                margin = reference - d
            elif term == Term.SA:
                reference = hp.gamma
                margin = d - reference
            else:
                reference = 0.5 * d
                margin = d - reference
            if margin < 1e-3 or d > 1.98:
                continue

            store = VectorStore(["u", "w"], np.vstack([a, b]))
            grad_u, grad_w = pair_gradient(term, store, 0, 1, reference, hp)
            analytic = np.concatenate([grad_u, grad_w])

            numeric = np.zeros(10)
            for k in range(10):
                plus = np.concatenate([a, b])
                minus = plus.copy()
                plus[k] += step
                minus[k] -= step
                numeric[k] = (
                    summand(term, plus[:5], plus[5:], reference, weights[term])
                    - summand(term, minus[:5], minus[5:], reference, weights[term])
                ) / (2 * step)

            error = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(numeric), 1e-12)
            assert error < 1e-4, f"{term.value} pair {checked}: relative error {error}"
            checked += 1


if __name__ == "__main__":
    unittest.main()
