import random

import pytest

from src.errors import TrainingDataError
from src.models.sense import Period
from src.pairgen.pair_generator import build_training_set, negative_pairs, positive_pairs, split_train_dev
from src.storage.corpus import load_split, period_view
from tests.conftest import split_from_rows

WRITER_GLOSS = "Символ искусства писателя, писательского труда, его ремесла."


def brute_force_pairs(split):
    """Independent pair generator iterating over all usage/sense combinations."""
    glosses = {(s.word, s.sense_id): s.gloss for s in split.senses}
    sense_count = {}
    for s in split.senses:
        sense_count[s.word] = sense_count.get(s.word, 0) + 1

    expected = set()
    for usage in split.usages:
        if usage.sense_id is None:
            continue
        for (word, sense_id), gloss in glosses.items():
            if word != usage.word or gloss is None:
                continue
            if sense_id == usage.sense_id:
                expected.add((usage.example_text, gloss, 1))
            elif sense_count[word] >= 2:
                expected.add((usage.example_text, gloss, 0))
    return expected


def random_rows(rng: random.Random):
    rows = []
    for w in range(rng.randint(1, 20)):
        word = f"w{w}"
        n_senses = rng.randint(1, 5)
        for s in range(n_senses):
            sense_id = f"{word}s{s}"
            gloss = f"gloss of {sense_id}"
            for u in range(rng.randint(1, 6)):
                period = rng.choice(["old", "new"])
                annotated = u == 0 or rng.random() < 0.8
                rows.append((
                    f"{sense_id}u{u}",
                    word,
                    sense_id if annotated else None,
                    gloss if annotated else None,
                    f"usage {u} of {sense_id}",
                    period,
                ))
    return rows


def test_matches_brute_force_on_random_inventories():
    rng = random.Random(7)
    for trial in range(100):
        split = split_from_rows(random_rows(rng))
        dataset = build_training_set(split, seed=trial)

        assert {pair.text_key for pair in dataset.pairs} == brute_force_pairs(split)


def test_pero_fixture_rows(pero_path):
    split = load_split(pero_path, "ru")
    keys = {pair.text_key for pair in build_training_set(split, seed=42).pairs}

    assert ("У него бойкое, острое перо.", WRITER_GLOSS, 1) in keys
    assert ("Перья зверя.", WRITER_GLOSS, 0) in keys
    assert ("На подушке лежало белое гусиное перо.", WRITER_GLOSS, 0) in keys


def test_unannotated_usages_never_paired(pero_path):
    split = load_split(pero_path, "ru")
    pairs = positive_pairs(split) + negative_pairs(split)

    assert all(pair.source_usage_id != "pero-4" for pair in pairs)


def test_single_sense_word_has_no_negatives():
    split = split_from_rows([
        ("u1", "kuu", "s1", "the moon of the earth", "the moon rose", "old"),
        ("u2", "kuu", "s1", "the moon of the earth", "the moon set", "new"),
    ])

    assert negative_pairs(split) == []
    assert len(positive_pairs(split)) == 2


def test_same_seed_same_order(synthetic_split):
    first = build_training_set(synthetic_split, seed=3)
    second = build_training_set(synthetic_split, seed=3)

    assert first.pairs == second.pairs


def test_row_order_does_not_change_pair_set():
    rows = [
        ("u1", "kuu", "s1", "the moon of the earth", "the moon rose", "old"),
        ("u2", "kuu", "s2", "a month of the year", "in a month", "old"),
        ("u3", "kuu", "s2", "a month of the year", "next month", "new"),
    ]
    forward = build_training_set(split_from_rows(rows), seed=1)
    backward = build_training_set(split_from_rows(list(reversed(rows))), seed=1)

    assert forward.pairs == backward.pairs


def test_old_period_protocol_split(synthetic_split):
    dataset = build_training_set(period_view(synthetic_split, Period.OLD), seed=42)
    train, dev = split_train_dev(dataset, 0.1, seed=42)

    assert len(train) + len(dev) == len(dataset)
    assert set(dev.labels()) == {0, 1}
    assert not {p.text_key for p in train.pairs} & {p.text_key for p in dev.pairs}


def test_dev_fraction_bounds(synthetic_split):
    dataset = build_training_set(synthetic_split, seed=42)
    with pytest.raises(TrainingDataError):
        split_train_dev(dataset, 1.5, seed=42)


def small_old_split():
    rows = []
    for sense in ["a", "b"]:
        for k in range(2):
            rows.append((f"u-{sense}{k}", "kuu", f"kuu_{sense}", f"meaning {sense} of the word kuu",
                         f"old example {k} of sense {sense}", "old"))
    return split_from_rows(rows)


def test_small_split_keeps_both_labels_in_dev():
    dataset = build_training_set(small_old_split(), seed=42)
    assert len(dataset) == 8

    train, dev = split_train_dev(dataset, 0.1, seed=42)

    assert len(dev) == 2 and sorted(dev.labels()) == [0, 1]
    assert sorted(set(train.labels())) == [0, 1]
    assert len(train) + len(dev) == len(dataset)


def test_too_few_pairs_to_split():
    rows = [("u1", "kuu", "kuu_a", "meaning a of the word kuu", "old example", "old")]
    dataset = build_training_set(split_from_rows(rows), seed=42)

    with pytest.raises(TrainingDataError, match="1 pairs"):
        split_train_dev(dataset, 0.1, seed=42)
