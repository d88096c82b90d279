"""
Dialogue domain ontology module.
"""
import itertools
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Set, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.errors import FormatError, OntologyError, VectorIOError
from src.lexicon.constraints import Pair, PairSet, canonical_pair
from src.vectors.store import VectorStore

# Configure logging
logger = logging.getLogger(__name__)


class Slot(BaseModel):
    """A slot and its finite list of values."""
    name: str
    values: List[str] = Field(min_length=1)

    @field_validator("values")
    @classmethod
    def values_unique(cls, values: List[str]) -> List[str]:
        seen: Set[str] = set()
        for value in values:
            if not value.strip():
                raise ValueError("empty value")
            if value in seen:
                raise ValueError(f"duplicate value {value!r}")
            seen.add(value)
        return values


class Ontology(BaseModel):
    """Slots and per-slot values of a dialogue domain."""
    slots: List[Slot]

    @model_validator(mode="after")
    def slot_names_unique(self) -> "Ontology":
        names = [slot.name for slot in self.slots]
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise ValueError(f"duplicate slot {duplicates[0]!r}")
        return self

    @classmethod
    def from_mapping(cls, slots: Dict[str, Any]) -> "Ontology":
        try:
            return cls(slots=[{"name": name, "values": values} for name, values in slots.items()])
        except ValidationError as e:
            raise OntologyError(_describe(e)) from e


def _describe(error: ValidationError) -> str:
    parts = []
    for detail in error.errors():
        location = ".".join(str(p) for p in detail["loc"])
        message = detail["msg"]
        parts.append(f"{location}: {message}" if location else message)
    return "Invalid ontology: " + "; ".join(parts)


def is_single_token(value: str) -> bool:
    return len(value.split()) == 1


def _reject_duplicate_keys(items: List[Tuple[str, Any]]) -> Dict[str, Any]:
    result: Dict[str, Any] = {}
    for key, value in items:
        if key in result:
            raise OntologyError(f"Invalid ontology: duplicate slot {key!r}")
        result[key] = value
    return result


def parse_ontology(path: Union[str, Path]) -> Ontology:
    """
    Parse a JSON ontology of the form {"slots": {"slot": ["value", ...]}}.
    """
    path = str(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f, object_pairs_hook=_reject_duplicate_keys)
    except OSError as e:
        raise VectorIOError(path, e) from e
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e})") from e
    except UnicodeDecodeError as e:
        raise FormatError(f"{path}: invalid UTF-8 ({e.reason} at byte {e.start})") from None

    if not isinstance(raw, dict) or not isinstance(raw.get("slots"), dict):
        raise FormatError(f"{path}: expected an object with a 'slots' mapping")

    ontology = Ontology.from_mapping(raw["slots"])
    logger.info(f"Parsed ontology with {len(ontology.slots)} slots from {path}")
    return ontology


def ontology_antonyms(ontology: Ontology, store: VectorStore) -> PairSet:
    """
    Antonymy constraints between all values of each slot.

    Only single-token, in-vocabulary values take part; pairs across slots
    are never generated. `dropped` counts the skipped values.
    """
    pairs: Set[Pair] = set()
    skipped = 0
    for slot in ontology.slots:
        ids = []
        for value in slot.values:
            if not is_single_token(value) or value not in store:
                skipped += 1
                continue
            ids.append(store.index(value))
        for i, j in itertools.combinations(ids, 2):
            pairs.add(canonical_pair(i, j))

    if skipped:
        logger.warning(f"Skipped {skipped} multi-token or out-of-vocabulary ontology values")
    logger.info(f"Generated {len(pairs)} ontology antonym pairs")
    return PairSet(frozenset(pairs), skipped)
