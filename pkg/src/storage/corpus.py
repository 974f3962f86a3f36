"""
Corpus access layer: loading, validating and writing the shared-task TSV files.
"""
import logging
import os
from typing import List, Dict, Iterable, Optional, Sequence, Tuple

from pydantic import ValidationError

from src.errors import CorpusParseError, CorpusValidationError, SerializationError
from src.models.prediction import PredictionRecord
from src.models.scoring import LabeledPair, PairDataset
from src.models.sense import (
    DatasetSplit,
    Language,
    NOVEL_PREFIX,
    Period,
    SenseDefinition,
    SenseInventory,
    UsageExample,
)

logger = logging.getLogger(__name__)

DELIMITER = "\t"

SPLIT_COLUMNS = ["usage_id", "word", "sense_id", "gloss", "example", "period", "date"]
REQUIRED_SPLIT_COLUMNS = {"usage_id", "word", "example", "period"}

SUBMISSION_COLUMNS = ["usage_id", "word", "sense_id", "example", "period", "is_novel", "probability"]
ENRICHED_COLUMNS = SUBMISSION_COLUMNS + ["definition"]

PAIR_COLUMNS = ["word", "example", "gloss", "label", "usage_id", "sense_id"]


def _absent(value: str) -> Optional[str]:
    return value if value != "" else None


def _field(value: Optional[str]) -> str:
    return "" if value is None else value


def read_table(path: str, required: Iterable[str]) -> Tuple[List[str], List[Tuple[int, Dict[str, str]]]]:
    """
    Read a headed TSV file into (line number, row dict) pairs.

    Args:
        path: File to read.
        required: Columns that must be present in the header.

    Returns:
        The header and the parsed rows.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"Input file not found: {path}")

    with open(path, "r", encoding="utf-8", newline="") as f:
        lines = f.read().split("\n")

    if not lines or not lines[0].strip():
        raise CorpusParseError("missing header row", path=path, line_number=1)

    header = lines[0].rstrip("\r").split(DELIMITER)
    missing = set(required) - set(header)
    if missing:
        raise CorpusParseError(f"header lacks columns {sorted(missing)}", path=path, line_number=1)

    rows = []
    for line_number, line in enumerate(lines[1:], start=2):
        line = line.rstrip("\r")
        if not line:
            continue
        fields = line.split(DELIMITER)
        if len(fields) != len(header):
            raise CorpusParseError(
                f"expected {len(header)} columns, found {len(fields)}",
                path=path,
                line_number=line_number,
            )
        rows.append((line_number, dict(zip(header, fields))))

    return header, rows


def _format_lines(rows: Iterable[Sequence[str]]) -> List[str]:
    lines = []
    for row in rows:
        for value in row:
            if DELIMITER in value or "\n" in value or "\r" in value:
                raise SerializationError(f"Field contains a tab or line break: {value[:40]!r}")
        lines.append(DELIMITER.join(row))
    return lines


def write_table(path: str, header: Sequence[str], rows: Iterable[Sequence[str]]):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    lines = [DELIMITER.join(header)] + _format_lines(rows)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("\n".join(lines) + "\n")


def append_table(path: str, header: Sequence[str], rows: Iterable[Sequence[str]]):
    """
    Append rows to a TSV file, writing the header first if the file is new.
    """
    lines = _format_lines(rows)
    if not os.path.isfile(path):
        write_table(path, header, [])
    if not lines:
        return
    with open(path, "a", encoding="utf-8", newline="") as f:
        f.write("\n".join(lines) + "\n")


def load_split(path: str, language: str) -> DatasetSplit:
    """
    Load and validate a dataset split.

    Args:
        path: Tab-separated file with a header row.
        language: Language code of the split.

    Returns:
        The validated split, usages in file order.
    """
    _, rows = read_table(path, REQUIRED_SPLIT_COLUMNS)

    try:
        language_code = Language(language)
    except ValueError:
        raise CorpusValidationError(f"Unknown language code '{language}'")

    usages: List[UsageExample] = []
    glosses: Dict[Tuple[str, str], Optional[str]] = {}
    periods: Dict[Tuple[str, str], Period] = {}

    for line_number, row in rows:
        try:
            period = Period(row["period"])
        except ValueError:
            raise CorpusValidationError(f"{path}:{line_number}: unknown period '{row['period']}'")

        sense_id = _absent(row.get("sense_id", ""))
        gloss = _absent(row.get("gloss", ""))

        if sense_id is not None and sense_id.startswith(NOVEL_PREFIX):
            raise CorpusValidationError(
                f"{path}:{line_number}: sense id '{sense_id}' uses the reserved '{NOVEL_PREFIX}' prefix"
            )
        if sense_id is None and gloss is not None:
            logger.debug(f"{path}:{line_number}: gloss without sense id ignored")

        try:
            usage = UsageExample(
                usage_id=row["usage_id"],
                word=row["word"],
                example_text=row["example"],
                period=period,
                sense_id=sense_id,
                date=_absent(row.get("date", "")),
            )
        except ValidationError as e:
            raise CorpusValidationError(f"{path}:{line_number}: {e.errors()[0]['msg']}")
        usages.append(usage)

        if sense_id is None:
            continue

        key = (usage.word, sense_id)
        known = glosses.get(key)
        if known is None:
            glosses[key] = gloss
        elif gloss is not None and gloss != known:
            logger.warning(f"{path}:{line_number}: conflicting gloss for sense '{sense_id}', keeping the first one")

        if period == Period.OLD or key not in periods:
            periods[key] = period

    senses = []
    for (word, sense_id), gloss in glosses.items():
        if gloss is None:
            raise CorpusValidationError(
                f"{path}: sense '{sense_id}' of word '{word}' has no gloss row"
            )
        senses.append(SenseDefinition(sense_id=sense_id, word=word, gloss=gloss, period=periods[(word, sense_id)]))

    try:
        split = DatasetSplit(language=language_code, usages=usages, senses=senses)
    except ValidationError as e:
        raise CorpusValidationError(f"{path}: {e.errors()[0]['msg']}")

    logger.info(f"Loaded {len(usages)} usages and {len(senses)} senses from {path}")
    return split


def save_split(split: DatasetSplit, path: str):
    """
    Write a split in the dataset TSV schema.
    """
    senses = split.sense_index()
    rows = []
    for usage in split.usages:
        gloss = None
        if usage.sense_id is not None:
            gloss = senses[(usage.word, usage.sense_id)].gloss
        rows.append([
            usage.usage_id,
            usage.word,
            _field(usage.sense_id),
            _field(gloss),
            usage.example_text,
            usage.period.value,
            _field(usage.date),
        ])
    write_table(path, SPLIT_COLUMNS, rows)
    logger.info(f"Saved {len(rows)} usages to {path}")


def old_inventories(split: DatasetSplit) -> Dict[str, SenseInventory]:
    """
    Old-period sense inventory per word.

    Args:
        split: A loaded split.

    Returns:
        Mapping from every word of the split to its old-period senses (possibly none).
    """
    entries: Dict[str, List[SenseDefinition]] = {word: [] for word in split.words()}
    for sense in split.senses:
        if sense.period == Period.OLD:
            entries[sense.word].append(sense)
    return {word: SenseInventory(word=word, entries=senses) for word, senses in entries.items()}


def save_predictions(records: List[PredictionRecord], path: str, with_definitions: bool = False):
    """
    Write a submission file.

    Args:
        records: Records in output order.
        path: Destination file.
        with_definitions: Add the definition column (Subtask 2 submission).
    """
    rows = []
    for record in records:
        if not record.assigned_sense_id:
            raise SerializationError(f"Record '{record.usage_id}' has no sense id")
        row = [
            record.usage_id,
            record.word,
            record.assigned_sense_id,
            record.example_text,
            record.period.value,
            "true" if record.is_novel else "false",
            "" if record.winning_probability is None else repr(record.winning_probability),
        ]
        if with_definitions:
            row.append(_field(record.definition))
        rows.append(row)

    write_table(path, ENRICHED_COLUMNS if with_definitions else SUBMISSION_COLUMNS, rows)
    logger.info(f"Saved {len(rows)} predictions to {path}")


def load_predictions(path: str, language: str) -> List[PredictionRecord]:
    """
    Read a submission or enriched submission file.

    In an enriched file every novel record carries a definition; an empty one
    marks a sense without candidate definitions.
    """
    header, rows = read_table(path, SUBMISSION_COLUMNS)
    enriched = "definition" in header

    records = []
    for line_number, row in rows:
        try:
            is_novel = row["is_novel"] == "true"
            definition = None
            no_candidates = False
            if enriched and is_novel:
                definition = row["definition"]
                no_candidates = definition == ""
            probability = _absent(row["probability"])
            records.append(PredictionRecord(
                usage_id=row["usage_id"],
                word=row["word"],
                language=Language(language),
                period=Period(row["period"]),
                example_text=row["example"],
                assigned_sense_id=row["sense_id"],
                is_novel=is_novel,
                winning_probability=float(probability) if probability is not None else None,
                definition=definition,
                no_candidates=no_candidates,
            ))
        except (ValidationError, ValueError) as e:
            raise CorpusValidationError(f"{path}:{line_number}: {e}")

    logger.info(f"Loaded {len(records)} predictions from {path}")
    return records


def save_pairs(dataset: PairDataset, path: str):
    """
    Dump a pair dataset for inspection and training.
    """
    rows = [
        [pair.word, pair.example_text, pair.gloss, str(pair.label), pair.source_usage_id, pair.source_sense_id]
        for pair in dataset.pairs
    ]
    write_table(path, PAIR_COLUMNS, rows)
    logger.info(f"Saved {len(rows)} pairs to {path}")


def load_pairs(path: str, language: str) -> PairDataset:
    """
    Load a pair dataset written by save_pairs.
    """
    _, rows = read_table(path, PAIR_COLUMNS)

    pairs = []
    for line_number, row in rows:
        if row["label"] not in ("0", "1"):
            raise CorpusValidationError(f"{path}:{line_number}: label must be 0 or 1")
        pairs.append(LabeledPair(
            word=row["word"],
            example_text=row["example"],
            gloss=row["gloss"],
            label=int(row["label"]),
            source_usage_id=row["usage_id"],
            source_sense_id=row["sense_id"],
        ))

    try:
        return PairDataset(language=Language(language), pairs=pairs)
    except (ValidationError, ValueError) as e:
        raise CorpusValidationError(f"{path}: {e}")


def period_view(split: DatasetSplit, period: Period) -> DatasetSplit:
    """
    Restrict a split to the usages of one period and the senses they use.
    """
    usages = [usage for usage in split.usages if usage.period == period]
    used = {(usage.word, usage.sense_id) for usage in usages if usage.sense_id is not None}
    senses = [sense for sense in split.senses if (sense.word, sense.sense_id) in used]
    return DatasetSplit(language=split.language, usages=usages, senses=senses)
