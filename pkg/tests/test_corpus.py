import pytest

from src.errors import CorpusParseError, CorpusValidationError, SerializationError
from src.models.prediction import PredictionRecord
from src.models.sense import DatasetSplit, Language, Period
from src.storage.corpus import (
    load_predictions,
    load_split,
    old_inventories,
    period_view,
    save_predictions,
    save_split,
)
from tests.conftest import synthetic_rows, write_split_file


def test_load_pero_fixture(pero_path):
    split = load_split(pero_path, "ru")

    assert split.language == Language.RUSSIAN
    assert [u.usage_id for u in split.usages] == ["pero-1", "pero-2", "pero-3", "pero-4"]
    assert split.usages[3].sense_id is None
    senses = split.sense_index()
    assert senses[("перо", "pero_writer")].gloss == "Символ искусства писателя, писательского труда, его ремесла."
    assert senses[("перо", "pero_feather")].period == Period.OLD


def test_missing_file_names_path(tmp_path):
    path = tmp_path / "absent.tsv"
    with pytest.raises(FileNotFoundError, match="absent.tsv"):
        load_split(str(path), "fi")


def test_column_count_mismatch_reports_line(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text(
        "usage_id\tword\tsense_id\tgloss\texample\tperiod\tdate\n"
        "u1\tkuu\ts1\tmoon\tthe moon rose\told\t\n"
        "u2\tkuu\ts1\tmoon\n",
        encoding="utf-8",
    )
    with pytest.raises(CorpusParseError) as info:
        load_split(str(path), "fi")
    assert info.value.line_number == 3
    assert "bad.tsv:3" in str(info.value)


def test_unknown_period_rejected(tmp_path):
    path = write_split_file(tmp_path / "split.tsv", [("u1", "kuu", "s1", "moon", "the moon rose", "middle")])
    with pytest.raises(CorpusValidationError, match="period"):
        load_split(path, "fi")


def test_reserved_prefix_rejected(tmp_path):
    path = write_split_file(tmp_path / "split.tsv", [("u1", "kuu", "novel:kuu", "moon", "the moon rose", "old")])
    with pytest.raises(CorpusValidationError, match="novel:"):
        load_split(path, "fi")


def test_sense_without_gloss_rejected(tmp_path):
    path = write_split_file(tmp_path / "split.tsv", [("u1", "kuu", "s1", None, "the moon rose", "old")])
    with pytest.raises(CorpusValidationError, match="no gloss"):
        load_split(path, "fi")


def test_duplicate_usage_id_rejected(tmp_path):
    path = write_split_file(tmp_path / "split.tsv", [
        ("u1", "kuu", "s1", "moon", "the moon rose", "old"),
        ("u1", "kuu", "s1", "moon", "the moon set", "new"),
    ])
    with pytest.raises(CorpusValidationError, match="Duplicate usage_id"):
        load_split(path, "fi")


def test_save_split_reloads_identically(tmp_path):
    source = write_split_file(tmp_path / "source.tsv", synthetic_rows(n_words=3))
    split = load_split(source, "fi")

    target = tmp_path / "copy.tsv"
    save_split(split, str(target))

    assert load_split(str(target), "fi") == split


def test_old_inventories_exclude_new_senses(synthetic_split):
    inventories = old_inventories(synthetic_split)

    assert set(inventories) == set(synthetic_split.words())
    assert inventories["kuusi"].sense_ids == ["kuusi_1", "kuusi_2"]
    assert all(not sense_id.endswith("_3") for inv in inventories.values() for sense_id in inv.sense_ids)


def test_period_view_keeps_only_used_senses(synthetic_split):
    old = period_view(synthetic_split, Period.OLD)

    assert all(u.period == Period.OLD for u in old.usages)
    assert not any(s.sense_id.endswith("_3") for s in old.senses)


def _record(usage_id, sense_id, novel=False, definition=None):
    return PredictionRecord(
        usage_id=usage_id,
        word="kuu",
        language=Language.FINNISH,
        period=Period.NEW,
        example_text=f"example of {usage_id}",
        assigned_sense_id=sense_id,
        is_novel=novel,
        winning_probability=0.25 if novel else 0.75,
        definition=definition,
    )


def test_enriched_submission_marks_missing_candidates(tmp_path):
    path = tmp_path / "enriched.tsv"
    records = [
        _record("u1", "s1"),
        _record("u2", "novel:kuu:u2", novel=True, definition="a satellite of a planet"),
        _record("u3", "novel:kuu:u3", novel=True, definition=""),
    ]
    save_predictions(records, str(path), with_definitions=True)

    loaded = load_predictions(str(path), "fi")

    assert [r.assigned_sense_id for r in loaded] == ["s1", "novel:kuu:u2", "novel:kuu:u3"]
    assert loaded[0].definition is None
    assert loaded[1].definition == "a satellite of a planet"
    assert loaded[2].no_candidates
    assert loaded[1].winning_probability == 0.25


def test_novel_flag_must_match_id(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text(
        "usage_id\tword\tsense_id\texample\tperiod\tis_novel\tprobability\n"
        "u1\tkuu\ts1\tthe moon rose\tnew\ttrue\t0.1\n",
        encoding="utf-8",
    )
    with pytest.raises(CorpusValidationError):
        load_predictions(str(path), "fi")


def test_tab_in_field_cannot_be_written(tmp_path):
    record = _record("u1", "s1").model_copy(update={"example_text": "tab\tinside"})
    with pytest.raises(SerializationError):
        save_predictions([record], str(tmp_path / "out.tsv"))


def test_gold_gloss_uses_the_split_index(synthetic_split, mocker):
    spy = mocker.spy(DatasetSplit, "sense_index")
    usages = [u for u in synthetic_split.usages if u.sense_id is not None]

    glosses = [synthetic_split.gold_gloss(u) for u in usages]

    assert spy.call_count == 0
    assert glosses[0] == "first meaning of kuusi concerning trees and forests"
    assert all(glosses)


def test_sense_index_is_a_copy(synthetic_split):
    index = synthetic_split.sense_index()
    index.clear()

    assert synthetic_split.gold_gloss(synthetic_split.usages[0]) is not None
    assert len(synthetic_split.sense_index()) == len(synthetic_split.senses)
