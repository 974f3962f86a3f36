"""
Training pair construction: gold positives and same-word hard negatives.
"""
import logging
from collections import defaultdict
from typing import List, Dict, Tuple

import numpy as np
from sklearn.model_selection import train_test_split

from src.errors import TrainingDataError
from src.models.scoring import LabeledPair, PairDataset
from src.models.sense import DatasetSplit, UsageExample

logger = logging.getLogger(__name__)


def _pair_sort_key(pair: LabeledPair) -> Tuple:
    return (pair.word, pair.example_text, pair.gloss, pair.label, pair.source_usage_id, pair.source_sense_id)


def positive_pairs(split: DatasetSplit) -> List[LabeledPair]:
    """
    One label-1 pair per annotated usage, regardless of period.

    Args:
        split: A loaded split.

    Returns:
        Positive pairs in usage order.
    """
    senses = split.sense_index()
    pairs = []
    skipped = 0

    for usage in split.usages:
        if usage.sense_id is None:
            continue
        sense = senses.get((usage.word, usage.sense_id))
        if sense is None or sense.gloss is None:
            skipped += 1
            continue
        pairs.append(LabeledPair(
            word=usage.word,
            example_text=usage.example_text,
            gloss=sense.gloss,
            label=1,
            source_usage_id=usage.usage_id,
            source_sense_id=sense.sense_id,
        ))

    if skipped:
        logger.warning(f"Skipped {skipped} annotated usages whose sense has no gloss")
    return pairs


def negative_pairs(split: DatasetSplit) -> List[LabeledPair]:
    """
    Pair every gloss with the usages of the other senses of the same word.

    Words with fewer than two distinct sense IDs contribute nothing; unannotated
    usages are never used.

    Args:
        split: A loaded split.

    Returns:
        Label-0 pairs grouped by word.
    """
    usages_by_sense: Dict[str, Dict[str, List[UsageExample]]] = defaultdict(lambda: defaultdict(list))
    for usage in split.usages:
        if usage.sense_id is not None:
            usages_by_sense[usage.word][usage.sense_id].append(usage)

    senses_by_word = defaultdict(list)
    for sense in split.senses:
        senses_by_word[sense.word].append(sense)

    pairs = []
    for word in split.words():
        word_senses = senses_by_word.get(word, [])
        if len(word_senses) < 2:
            continue

        for sense in word_senses:
            if sense.gloss is None:
                continue
            for other_id, other_usages in usages_by_sense[word].items():
                if other_id == sense.sense_id:
                    continue
                for usage in other_usages:
                    pairs.append(LabeledPair(
                        word=word,
                        example_text=usage.example_text,
                        gloss=sense.gloss,
                        label=0,
                        source_usage_id=usage.usage_id,
                        source_sense_id=sense.sense_id,
                    ))

    return pairs


def build_training_set(split: DatasetSplit, seed: int) -> PairDataset:
    """
    Union of positives and negatives, deduplicated on text and shuffled by seed.

    Args:
        split: A loaded split.
        seed: Shuffle seed.

    Returns:
        The pair dataset.
    """
    positives = positive_pairs(split)
    negatives = negative_pairs(split)

    # Canonical order first so the result does not depend on row order
    unique: Dict[Tuple[str, str, int], LabeledPair] = {}
    for pair in sorted(positives + negatives, key=_pair_sort_key):
        unique.setdefault(pair.text_key, pair)

    ordered = list(unique.values())
    permutation = np.random.default_rng(seed).permutation(len(ordered))
    pairs = [ordered[i] for i in permutation]

    duplicates = len(positives) + len(negatives) - len(pairs)
    logger.info(
        f"Built {len(pairs)} pairs for {split.language.value}: {len(positives)} positive, "
        f"{len(negatives)} negative, {duplicates} duplicates dropped"
    )
    return PairDataset(language=split.language, pairs=pairs)


def split_train_dev(dataset: PairDataset, dev_fraction: float, seed: int) -> Tuple[PairDataset, PairDataset]:
    """
    Seeded pair-level train/dev split, stratified by label when possible.

    Used when a language has no training split and pairs come from the
    annotated old-period usages of the test data.
    """
    if not 0.0 < dev_fraction < 1.0:
        raise TrainingDataError("dev_fraction must be between 0 and 1")

    pairs = dataset.pairs
    labels = dataset.labels()
    counts = np.bincount(labels, minlength=2) if labels else np.zeros(2, dtype=int)

    # Stratified splits need one pair of each label on both sides
    dev_size = int(np.ceil(len(pairs) * dev_fraction))
    stratify = None
    if counts.min() >= 2:
        dev_size = max(dev_size, len(counts))
        if len(pairs) - dev_size >= len(counts):
            stratify = labels
    if dev_size >= len(pairs):
        raise TrainingDataError(f"Cannot split {len(pairs)} pairs into non-empty train and dev sets")

    try:
        train_pairs, dev_pairs = train_test_split(
            pairs,
            test_size=dev_size,
            random_state=seed,
            shuffle=True,
            stratify=stratify,
        )
    except ValueError as e:
        raise TrainingDataError(f"Cannot split {len(pairs)} pairs into train and dev: {str(e)}") from e
    logger.info(f"Split {len(pairs)} pairs into {len(train_pairs)} train and {len(dev_pairs)} dev")
    return (
        PairDataset(language=dataset.language, pairs=list(train_pairs)),
        PairDataset(language=dataset.language, pairs=list(dev_pairs)),
    )
