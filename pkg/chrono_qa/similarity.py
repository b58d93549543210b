"""
Similarity between predicate names, and between question words and predicate
names. Predicate names are split into content tokens; with word embeddings a
predicate is represented by the mean of its token vectors and compared by
cosine, without embeddings token sets are compared by Jaccard overlap.
"""

import logging
import re
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from nltk.stem.porter import PorterStemmer

from .constants import (DEFAULT_RELATIONS_PATH, PREDICATE_STOP_TOKENS,
                        PREFIX_MATCH_MIN)
from .errors import ConfigurationError, DataError
from .utils import read_records

logger = logging.getLogger(__name__)

Embeddings = Dict[str, np.ndarray]
RelationWords = Mapping[str, str]

CAMEL_PART = re.compile(r"[A-Z]?[a-z]+|[A-Z]+(?![a-z])|\d+")

_stemmer = PorterStemmer()


def split_predicate_name(name: str) -> List[str]:
    """Split a dotted, camel-cased predicate name into lower-cased parts,
    keeping stop tokens."""
    parts = []
    for segment in name.split("."):
        parts.extend(p.lower() for p in CAMEL_PART.findall(segment))
    return parts


def tokenize_predicate(name: str) -> List[str]:
    """Content tokens of a predicate name, in order and without repeats.

    ``footballPlayer.team.joinedOnDate`` gives
    ``["football", "player", "team", "joined"]``.
    """
    tokens = [t for t in split_predicate_name(name)
              if t not in PREDICATE_STOP_TOKENS]
    return list(dict.fromkeys(tokens))


@lru_cache(maxsize=4096)
def stem(word: str) -> str:
    return _stemmer.stem(word.lower())


def _stems_match(a: str, b: str) -> bool:
    if a == b:
        return True
    if min(len(a), len(b)) < PREFIX_MATCH_MIN:
        return False
    return a.startswith(b) or b.startswith(a)


def _mean_vector(tokens: Sequence[str],
                 embeddings: Embeddings) -> Optional[np.ndarray]:
    vectors = [embeddings[t] for t in tokens if t in embeddings]
    if not vectors:
        return None
    return np.mean(vectors, axis=0)


def _cosine(v1: Optional[np.ndarray],
            v2: Optional[np.ndarray]) -> Optional[float]:
    if v1 is None or v2 is None:
        return None
    norm = float(np.linalg.norm(v1) * np.linalg.norm(v2))
    if norm == 0.0:
        return None
    return float(np.clip(np.dot(v1, v2) / norm, -1.0, 1.0))


def _jaccard(tokens1: Sequence[str], tokens2: Sequence[str]) -> float:
    set1, set2 = set(tokens1), set(tokens2)
    union = set1 | set2
    if not union:
        return 0.0
    return len(set1 & set2) / len(union)


def predicate_similarity(p1: str,
                         p2: str,
                         embeddings: Optional[Embeddings] = None) -> float:
    """Similarity of two predicate names in [-1, 1].

    Args:
        p1 (str): First predicate name.
        p2 (str): Second predicate name.
        embeddings (dict): Optional token vectors. Unknown tokens are
            skipped; if a predicate has no known token at all, the Jaccard
            overlap is used instead.

    Returns:
        float: Cosine similarity of the mean token vectors, or the Jaccard
            overlap of the token sets (in [0, 1]) without embeddings.
    """
    tokens1, tokens2 = tokenize_predicate(p1), tokenize_predicate(p2)
    if embeddings:
        score = _cosine(_mean_vector(tokens1, embeddings),
                        _mean_vector(tokens2, embeddings))
        if score is not None:
            return score
    return _jaccard(tokens1, tokens2)


def shared_token_count(p1: str, p2: str) -> int:
    return len(set(tokenize_predicate(p1)) & set(tokenize_predicate(p2)))


def question_predicate_score(words: Sequence[str],
                             predicate: str,
                             embeddings: Optional[Embeddings] = None
                             ) -> Tuple[float, int]:
    """Score how well a predicate matches the content words of a question.

    Words and predicate tokens are compared by their Porter stems, a stem
    also matching when it is a prefix of the other (``play`` ~ ``player``).

    Returns:
        Tuple[float, int]: The score (cosine of mean vectors with embeddings,
            stem-overlap Jaccard otherwise) and the number of matched words.
    """
    question_stems = list(dict.fromkeys(stem(w) for w in words))
    predicate_tokens = tokenize_predicate(predicate)
    predicate_stems = list(dict.fromkeys(stem(t) for t in predicate_tokens))
    matched = sum(1 for q in question_stems
                  if any(_stems_match(q, p) for p in predicate_stems))
    union = len(question_stems) + len(predicate_stems) - matched
    score = matched / union if union else 0.0
    if embeddings:
        cosine = _cosine(_mean_vector([w.lower() for w in words], embeddings),
                         _mean_vector(predicate_tokens, embeddings))
        if cosine is not None:
            score = cosine
    return score, matched


def load_embeddings(path: Union[str, Path]) -> Embeddings:
    """Load word vectors from a text file with one ``token v1 ... vd`` line
    per word. All vectors must share one dimension."""
    embeddings: Embeddings = {}
    issues = []
    dimension = None
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            fields = line.split()
            if not fields:
                continue
            token, values = fields[0], fields[1:]
            try:
                vector = np.array([float(v) for v in values], dtype=float)
            except ValueError:
                issues.append((line_number, f"non-numeric vector for {token!r}"))
                continue
            if dimension is None:
                dimension = len(vector)
            if len(vector) == 0 or len(vector) != dimension:
                issues.append((line_number,
                               f"expected {dimension} values for {token!r}, "
                               f"got {len(vector)}"))
                continue
            embeddings[token.lower()] = vector
    if issues:
        raise DataError(str(path), issues)
    logger.info("Loaded %d word vectors of dimension %s from %s",
                len(embeddings), dimension, path)
    return embeddings


def load_relation_words(path: Union[str, Path] = DEFAULT_RELATIONS_PATH
                        ) -> Dict[str, str]:
    """Load the table of question words naming a relation by a word its
    predicate does not contain ("husband" for ``marriage.spouse``).

    Raises:
        ConfigurationError: If the file is missing or a line is malformed.
    """
    try:
        records = read_records(path)
    except OSError as e:
        raise ConfigurationError(f"cannot read relation words {path}: "
                                 f"{e}") from e
    table = {}
    for line_number, fields in records:
        if len(fields) != 2 or not all(f.strip() for f in fields):
            raise ConfigurationError(f"{path}:{line_number}: expected "
                                     f"'word<TAB>predicate token' entry")
        table[fields[0].strip().lower()] = fields[1].strip().lower()
    return table


def bridge_words(words: Sequence[str],
                 relation_words: Optional[RelationWords]) -> List[str]:
    """Replace question words listed in the relation table by the predicate
    token they stand for."""
    if not relation_words:
        return list(words)
    return [relation_words.get(w.lower(), w) for w in words]
