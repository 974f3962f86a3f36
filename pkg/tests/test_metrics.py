import math
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from src.errors import MetricInputError
from src.evaluation.embedding_backends import BagOfWordsBackend, BaseEmbeddingBackend
from src.evaluation.metrics import adjusted_rand_index, bleu, greedy_alignment, macro_f1, semantic_similarity


def brute_force_ari(gold, pred):
    """Pair-counting ARI over explicit index pairs, exact arithmetic."""
    n = len(gold)
    pairs = list(combinations(range(n), 2))
    same_gold = sum(1 for i, j in pairs if gold[i] == gold[j])
    same_pred = sum(1 for i, j in pairs if pred[i] == pred[j])
    same_both = sum(1 for i, j in pairs if gold[i] == gold[j] and pred[i] == pred[j])

    expected = Fraction(same_gold * same_pred, len(pairs))
    maximum = Fraction(same_gold + same_pred, 2)
    if maximum == expected:
        return 1.0
    return float((same_both - expected) / (maximum - expected))


def test_ari_matches_brute_force():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(2, 30)
        gold = [rng.randint(0, rng.randint(0, 5)) for _ in range(n)]
        pred = [f"p{rng.randint(0, rng.randint(0, 5))}" for _ in range(n)]

        assert adjusted_rand_index(gold, pred) == pytest.approx(brute_force_ari(gold, pred), abs=1e-12)


def test_ari_known_values():
    assert adjusted_rand_index(["a", "a", "b", "b"], ["x", "y", "x", "y"]) == pytest.approx(-0.5)
    assert adjusted_rand_index(["a", "a", "b"], ["z", "z", "y"]) == 1.0
    assert adjusted_rand_index(["a", "a", "a"], ["q", "q", "q"]) == 1.0
    assert adjusted_rand_index(["a", "b", "c"], ["q", "r", "s"]) == 1.0


def test_ari_is_symmetric_and_ignores_label_names():
    rng = random.Random(8)
    gold = [rng.randint(0, 3) for _ in range(30)]
    pred = [rng.randint(0, 4) for _ in range(30)]
    renamed = [f"novel:{label}" for label in pred]

    assert adjusted_rand_index(gold, pred) == pytest.approx(adjusted_rand_index(pred, gold))
    assert adjusted_rand_index(gold, pred) == pytest.approx(adjusted_rand_index(gold, renamed))


def test_ari_of_random_labelings_is_near_zero():
    rng = np.random.default_rng(0)
    values = [
        adjusted_rand_index(rng.integers(0, 4, 60).tolist(), rng.integers(0, 4, 60).tolist())
        for _ in range(300)
    ]

    assert abs(float(np.mean(values))) < 0.02


def test_ari_length_mismatch():
    with pytest.raises(MetricInputError):
        adjusted_rand_index(["a"], ["a", "b"])
    with pytest.raises(MetricInputError):
        adjusted_rand_index([], [])


def test_macro_f1_averages_gold_classes_only():
    # Class c is never predicted; x is not a gold class
    assert macro_f1(["a", "b", "c"], ["a", "b", "x"]) == pytest.approx(2 / 3)
    assert macro_f1(["a", "a", "b"], ["a", "a", "b"]) == pytest.approx(1.0)
    assert macro_f1(["A", "A", "B"], ["A", "B", "B"]) == pytest.approx(2 / 3)
    assert macro_f1(["A", "B"], ["B", "A"]) == 0.0


def test_bleu_identical_texts():
    assert bleu("a b", "a b") == pytest.approx(1.0)
    assert bleu("a tree growing in the forest", "A tree growing in the forest") == pytest.approx(1.0)


def test_bleu_disjoint_texts_are_low():
    candidate = " ".join(f"c{i}" for i in range(30))
    reference = " ".join(f"r{i}" for i in range(30))

    assert 0.0 < bleu(candidate, reference) < 0.05


def test_bleu_without_any_match_uses_floored_precisions():
    # Five tokens each: precisions 1/5, 1/4, 1/3, 1/2 after flooring
    assert bleu("a tall green tree growing", "money kept in the bank") == pytest.approx((1 / 120) ** 0.25)
    # Shorter candidate: only two orders and a brevity penalty
    expected = math.exp(1 - 4 / 2) * (1 / 2 * 1 / 1) ** 0.5
    assert bleu("x y", "p q r s") == pytest.approx(expected)


def test_bleu_empty_inputs():
    assert bleu("", "a reference text") == 0.0
    assert bleu("   ", "a reference text") == 0.0
    with pytest.raises(MetricInputError):
        bleu("a candidate", "")


def test_bleu_partial_overlap_is_between_bounds():
    score = bleu("a tree in the park", "a tree in the forest")

    assert 0.0 < score < 1.0


def test_bag_of_words_similarity():
    backend = BagOfWordsBackend()

    assert semantic_similarity("cat sits", "cat sleeps", backend) == pytest.approx(0.5)
    assert semantic_similarity("a b", "a c", backend) == pytest.approx(0.5)
    assert semantic_similarity("Moon rises", "moon rises", backend) == pytest.approx(1.0)
    assert semantic_similarity("x y", "z", backend) == pytest.approx(0.0)


def test_similarity_is_symmetric():
    backend = BagOfWordsBackend()
    first = "a satellite orbiting a planet"
    second = "the natural satellite of the earth"

    assert semantic_similarity(first, second, backend) == pytest.approx(semantic_similarity(second, first, backend))


def test_similarity_rejects_empty_text():
    with pytest.raises(MetricInputError):
        semantic_similarity("", "text", BagOfWordsBackend())


def test_similarity_rejects_non_finite_vectors():
    class BrokenBackend(BaseEmbeddingBackend):
        dimension = 2

        def embed(self, text):
            return np.array([[np.nan, 1.0]])

    with pytest.raises(MetricInputError, match="non-finite"):
        semantic_similarity("a", "b", BrokenBackend())


def test_greedy_alignment_precision_and_recall():
    candidate = np.array([[1.0, 0.0], [0.0, 1.0]])
    reference = np.array([[1.0, 0.0]])

    precision, recall, f1 = greedy_alignment(candidate, reference)

    assert precision == pytest.approx(0.5)
    assert recall == pytest.approx(1.0)
    assert f1 == pytest.approx(2 / 3)


def test_bag_of_words_vocabulary_under_concurrent_scoring():
    backend = BagOfWordsBackend()
    texts = [" ".join(f"t{(i * 7 + k) % 500}" for k in range(40)) for i in range(200)]

    with ThreadPoolExecutor(max_workers=8) as pool:
        scores = list(pool.map(lambda text: semantic_similarity(text, text, backend), texts))

    assert scores == pytest.approx([1.0] * len(texts))
    assert sorted(backend.vocabulary.values()) == list(range(len(backend.vocabulary)))
    assert set(backend.vocabulary) == {token for text in texts for token in text.split()}
