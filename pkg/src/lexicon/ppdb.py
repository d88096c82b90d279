"""
PPDB 2.0 extraction helper.

PPDB releases are multi-gigabyte files of ` ||| `-separated fields whose
last field is the entailment relation. Equivalence rows become synonym
pairs and Exclusion rows antonym pairs; only single-token phrases are
kept.
"""
import gzip
import logging
from pathlib import Path
from typing import List, NamedTuple, Set, Tuple, Union

from src.errors import ParseError, VectorIOError
from src.vectors.store import decoded_lines

# Configure logging
logger = logging.getLogger(__name__)

FIELD_SEPARATOR = " ||| "
SYNONYM_RELATION = "Equivalence"
ANTONYM_RELATION = "Exclusion"


class PPDBPairs(NamedTuple):
    synonyms: List[Tuple[str, str]]
    antonyms: List[Tuple[str, str]]


def _open(path: str):
    if path.endswith(".gz"):
        return gzip.open(path, "rb")
    return open(path, "rb")


def extract_ppdb_pairs(path: Union[str, Path]) -> PPDBPairs:
    """
    Pull Equivalence and Exclusion word pairs out of a PPDB 2.0 file.

    Returns:
        Sorted, deduplicated (word, word) pairs in canonical string order
    """
    path = str(path)
    synonyms: Set[Tuple[str, str]] = set()
    antonyms: Set[Tuple[str, str]] = set()
    rows = 0

    try:
        with _open(path) as f:
            for line_number, line in decoded_lines(f, path):
                line = line.rstrip("\r\n")
                if not line:
                    continue
                fields = line.split(FIELD_SEPARATOR)
                if len(fields) < 4:
                    raise ParseError(path, line_number, f"expected at least 4 fields, found {len(fields)}")
                rows += 1
                phrase, paraphrase, relation = fields[1].strip(), fields[2].strip(), fields[-1].strip()
                if relation not in (SYNONYM_RELATION, ANTONYM_RELATION):
                    continue
                if len(phrase.split()) != 1 or len(paraphrase.split()) != 1 or phrase == paraphrase:
                    continue
                pair = (phrase, paraphrase) if phrase < paraphrase else (paraphrase, phrase)
                if relation == SYNONYM_RELATION:
                    synonyms.add(pair)
                else:
                    antonyms.add(pair)
    except OSError as e:
        raise VectorIOError(path, e) from e

    logger.info(
        f"Read {rows} PPDB rows from {path}: "
        f"{len(synonyms)} Equivalence and {len(antonyms)} Exclusion single-token pairs"
    )
    return PPDBPairs(sorted(synonyms), sorted(antonyms))
