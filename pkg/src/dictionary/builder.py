"""
Semantic dictionary generation module.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, NamedTuple, Sequence, Tuple, Union

import numpy as np

from src.errors import InputValidationError, VectorIOError
from src.lexicon.ontology import Ontology, is_single_token
from src.vectors.store import VectorStore

# Configure logging
logger = logging.getLogger(__name__)


class Rephrasing(NamedTuple):
    word: str
    word_id: int
    distance: float


@dataclass(frozen=True)
class SemanticDictionary:
    """Rephrasings within radius t of each (slot, value), closest first."""
    t: float
    entries: Dict[Tuple[str, str], List[Rephrasing]] = field(default_factory=dict)

    def rephrasings(self, slot: str, value: str) -> List[str]:
        return [r.word for r in self.entries[(slot, value)]]

    def to_json(self) -> Dict[str, Dict[str, List[str]]]:
        result: Dict[str, Dict[str, List[str]]] = {}
        for (slot, value), items in self.entries.items():
            result.setdefault(slot, {})[value] = [r.word for r in items]
        return result

    def distances_json(self) -> Dict[str, Dict[str, List[List]]]:
        result: Dict[str, Dict[str, List[List]]] = {}
        for (slot, value), items in self.entries.items():
            result.setdefault(slot, {})[value] = [[r.word, r.distance] for r in items]
        return result


def _check_radius(t: float) -> None:
    if not 0.0 < t < 2.0:
        raise InputValidationError(f"t must be in (0, 2), got {t}")


def sweep_t(store: VectorStore, ontology: Ontology, t_values: Sequence[float]) -> Dict[float, SemanticDictionary]:
    """
    One semantic dictionary per radius in `t_values`.

    Distances are computed once per value; each dictionary keeps the prefix
    of the sorted candidate list that falls within its radius.
    """
    if not t_values:
        raise InputValidationError("At least one t value is required")
    for t in t_values:
        _check_radius(t)
    radii = sorted(set(float(t) for t in t_values))
    t_max = radii[-1]

    unit = store.unit_matrix()
    entries: Dict[float, Dict[Tuple[str, str], List[Rephrasing]]] = {t: {} for t in radii}
    skipped = 0

    for slot in ontology.slots:
        for value in slot.values:
            key = (slot.name, value)
            if not is_single_token(value) or value not in store:
                skipped += 1
                for t in radii:
                    entries[t][key] = []
                continue

            value_id = store.index(value)
            dist = np.clip(1.0 - unit @ unit[value_id], 0.0, 2.0)
            candidates = np.flatnonzero(dist <= t_max)
            candidates = candidates[candidates != value_id]
            order = np.lexsort((candidates, dist[candidates]))
            ranked = candidates[order]
            ranked_dist = dist[ranked]
            for t in radii:
                cut = int(np.searchsorted(ranked_dist, t, side="right"))
                entries[t][key] = [
                    Rephrasing(store.word(j), int(j), float(d))
                    for j, d in zip(ranked[:cut], ranked_dist[:cut])
                ]

    if skipped:
        logger.warning(f"{skipped} ontology values are multi-token or out of vocabulary; their entries are empty")
    dictionaries = {t: SemanticDictionary(t, entries[t]) for t in radii}
    for t, dictionary in dictionaries.items():
        total = sum(len(v) for v in dictionary.entries.values())
        logger.info(f"Dictionary t={t:g}: {total} rephrasings for {len(dictionary.entries)} values")
    return dictionaries


def build_dictionary(store: VectorStore, ontology: Ontology, t: float) -> SemanticDictionary:
    """All vocabulary words within distance t of each single-token slot value."""
    _check_radius(t)
    return sweep_t(store, ontology, [t])[float(t)]


def dictionary_filename(t: float) -> str:
    """File name for radius t; distinct radii always get distinct names."""
    return f"dictionary_t{float(t)!r}.json"


def write_dictionary(dictionary: SemanticDictionary, out_dir: Union[str, Path]) -> Path:
    """
    Write `dictionary_t<t>.json` (slot -> value -> rephrasings) and a
    parallel `.distances.json` debug file; returns the main file's path.
    """
    out_dir = Path(out_dir)
    path = out_dir / dictionary_filename(dictionary.t)
    debug_path = path.with_suffix(".distances.json")
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(dictionary.to_json(), f, ensure_ascii=False, indent=2, sort_keys=True)
            f.write("\n")
        with open(debug_path, "w", encoding="utf-8") as f:
            json.dump(dictionary.distances_json(), f, ensure_ascii=False, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise VectorIOError(str(path), e) from e
    logger.info(f"Wrote dictionary for t={dictionary.t:g} to {path}")
    return path
