"""
Shared builders for the test suite.
"""
import os
from typing import List, Sequence, Tuple

import numpy as np

from src.vectors.store import VectorStore


def write_vector_file(path: str, words: Sequence[str], matrix: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for word, row in zip(words, matrix):
            f.write(word + " " + " ".join(repr(float(x)) for x in row) + "\n")


def write_lines(path: str, lines: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def write_simlex(path: str, rows: Sequence[Tuple[str, str, float]]) -> None:
    lines = ["word1\tword2\tPOS\tSimLex999\tconc(w1)"]
    lines += [f"{w1}\t{w2}\tA\t{score}\t1.0" for w1, w2, score in rows]
    write_lines(path, lines)


def random_store(n: int, dim: int, seed: int = 0, prefix: str = "w") -> VectorStore:
    rng = np.random.default_rng(seed)
    return VectorStore([f"{prefix}{i}" for i in range(n)], rng.normal(size=(n, dim))).normalize()


def clustered_store(n: int, dim: int, clusters: int, noise: float, seed: int = 0) -> VectorStore:
    """Points scattered around a few centres, so small-radius neighbourhoods are non-empty."""
    rng = np.random.default_rng(seed)
    centres = rng.normal(size=(clusters, dim))
    centres /= np.linalg.norm(centres, axis=1, keepdims=True)
    members = centres[rng.integers(0, clusters, size=n)] + noise * rng.normal(size=(n, dim)) / np.sqrt(dim)
    return VectorStore([f"w{i}" for i in range(n)], members).normalize()


def unit_at(angle: float, dim: int) -> np.ndarray:
    row = np.zeros(dim)
    row[0] = np.cos(angle)
    row[1] = np.sin(angle)
    return row


PRICE_WORDS = ["cheap", "expensive", "cheapest", "pricey"]


def price_store(dim: int = 20, fillers: int = 46, seed: int = 0) -> VectorStore:
    """
    Two same-slot values at cosine 0.95 in a plane, each with a private
    neighbour at cosine 0.9 on the far side, plus filler words orthogonal
    to that plane.
    """
    sibling = np.arccos(0.95)
    near = np.arccos(0.9)
    rows: List[np.ndarray] = [
        unit_at(0.0, dim),
        unit_at(sibling, dim),
        unit_at(-near, dim),
        unit_at(sibling + near, dim),
    ]
    rng = np.random.default_rng(seed)
    for _ in range(fillers):
        row = np.zeros(dim)
        row[2:] = rng.normal(size=dim - 2)
        rows.append(row)
    words = PRICE_WORDS + [f"filler{i}" for i in range(fillers)]
    return VectorStore(words, np.vstack(rows)).normalize()


def file_digest(path: str) -> bytes:
    import hashlib
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).digest()


def project_root() -> str:
    return os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
