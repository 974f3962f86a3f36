"""
Metric primitives for both subtasks.
"""
import logging
from typing import Hashable, List, Sequence

import numpy as np
from sacrebleu.metrics import BLEU
from sklearn.metrics import adjusted_rand_score, f1_score

from src.errors import MetricInputError
from src.evaluation.embedding_backends import BaseEmbeddingBackend

logger = logging.getLogger(__name__)

# Lowercased whitespace tokens, up to 4-grams, zero match counts floored to one.
# Texts shorter than four tokens are scored on the orders they have, so a
# text compared with itself scores 1.0 at any length.
_BLEU_FLOOR = 1.0
_BLEU = BLEU(
    tokenize="none",
    lowercase=True,
    smooth_method="floor",
    smooth_value=_BLEU_FLOOR,
    effective_order=True,
)


def _check_lengths(gold: Sequence, pred: Sequence):
    if len(gold) != len(pred):
        raise MetricInputError(f"Label lists differ in length: {len(gold)} gold, {len(pred)} predicted")
    if not gold:
        raise MetricInputError("Label lists must not be empty")


def adjusted_rand_index(gold: Sequence[Hashable], pred: Sequence[Hashable]) -> float:
    """
    Pair-counting Adjusted Rand Index.

    Identical degenerate partitions (one cluster or all singletons on both sides) score 1.0.

    Args:
        gold: Gold cluster labels.
        pred: Predicted cluster labels, same order.

    Returns:
        ARI in [-1, 1].
    """
    _check_lengths(gold, pred)
    return float(adjusted_rand_score(list(gold), list(pred)))


def macro_f1(gold: Sequence[Hashable], pred: Sequence[Hashable]) -> float:
    """
    Unweighted mean of per-class F1 over the classes present in gold.
    """
    _check_lengths(gold, pred)
    labels = sorted(set(gold), key=str)
    return float(f1_score(list(gold), list(pred), labels=labels, average="macro", zero_division=0))


def bleu(candidate: str, reference: str) -> float:
    """
    Sentence-level BLEU in [0, 1].

    Args:
        candidate: Predicted text; empty scores 0.0.
        reference: Gold text, must be non-empty.

    Returns:
        The BLEU score.
    """
    if not reference or not reference.split():
        raise MetricInputError("BLEU reference must not be empty")
    if not candidate or not candidate.split():
        return 0.0

    result = _BLEU.sentence_score(" ".join(candidate.split()), [" ".join(reference.split())])
    score = result.score / 100.0
    if score == 0.0:
        # sacrebleu returns 0 before smoothing when no order matches at all
        score = _floor_smoothed(result.counts, result.totals, result.sys_len, result.ref_len)
    return min(1.0, max(0.0, score))


def _floor_smoothed(counts: Sequence[int], totals: Sequence[int], sys_len: int, ref_len: int) -> float:
    """
    Geometric mean of n-gram precisions with zero counts floored to one,
    over the leading orders the candidate has, times the brevity penalty.
    """
    orders = 0
    for total in totals:
        if total == 0:
            break
        orders += 1
    if orders == 0 or sys_len == 0:
        return 0.0

    matched = np.maximum(np.asarray(counts[:orders], dtype=float), _BLEU_FLOOR)
    precisions = matched / np.asarray(totals[:orders], dtype=float)
    brevity = 1.0 if sys_len >= ref_len else float(np.exp(1.0 - ref_len / sys_len))
    return brevity * float(np.exp(np.log(precisions).mean()))


def greedy_alignment(candidate_vectors: np.ndarray, reference_vectors: np.ndarray) -> List[float]:
    """
    Precision, recall and F1 of greedy max-cosine token alignment.
    """
    def _normalize(vectors: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(vectors, axis=1, keepdims=True)
        return vectors / np.where(norms == 0, 1.0, norms)

    similarity = _normalize(candidate_vectors) @ _normalize(reference_vectors).T
    precision = float(similarity.max(axis=1).mean())
    recall = float(similarity.max(axis=0).mean())
    if precision + recall <= 0:
        return [precision, recall, 0.0]
    return [precision, recall, 2 * precision * recall / (precision + recall)]


def semantic_similarity(candidate: str, reference: str, backend: BaseEmbeddingBackend) -> float:
    """
    BERTScore F1 without baseline rescaling, clipped to [0, 1].

    Args:
        candidate: Predicted text.
        reference: Gold text.
        backend: Token embedding backend.

    Returns:
        The similarity.
    """
    if not candidate or not candidate.strip() or not reference or not reference.strip():
        raise MetricInputError("Both texts must be non-empty for semantic similarity")

    candidate_vectors = backend.embed(candidate)
    reference_vectors = backend.embed(reference)
    if not np.all(np.isfinite(candidate_vectors)) or not np.all(np.isfinite(reference_vectors)):
        raise MetricInputError(f"{backend.backend_type} produced non-finite vectors")

    _, _, f1 = greedy_alignment(candidate_vectors, reference_vectors)
    return min(1.0, max(0.0, f1))
