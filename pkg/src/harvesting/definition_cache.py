"""
Append-only TSV store of harvested definitions.
"""
import logging
import os
from datetime import datetime
from typing import List, Set, Tuple

from src.errors import CorpusValidationError
from src.models.harvest import DefinitionCorpus, DefinitionEntry
from src.storage.corpus import append_table, read_table

logger = logging.getLogger(__name__)

CACHE_COLUMNS = ["language", "surface_form", "definition", "source_url", "fetched_at"]


class DefinitionCache:
    """
    One row per definition; a row with an empty definition marks a form that
    was fetched and had none.
    """
    def __init__(self, path: str):
        self.path = path

    def exists(self) -> bool:
        return os.path.isfile(self.path)

    def read(self) -> Tuple[List[DefinitionEntry], Set[Tuple[str, str]]]:
        """
        Stored entries and every fetched (language, surface form).
        """
        if not self.exists():
            return [], set()

        _, rows = read_table(self.path, CACHE_COLUMNS)
        entries = []
        fetched = set()
        for line_number, row in rows:
            fetched.add((row["language"], row["surface_form"]))
            if row["definition"] == "":
                continue
            try:
                entries.append(DefinitionEntry(
                    language=row["language"],
                    surface_form=row["surface_form"],
                    definition=row["definition"],
                    source_url=row["source_url"],
                    fetched_at=datetime.fromisoformat(row["fetched_at"]),
                ))
            except ValueError as e:
                raise CorpusValidationError(f"{self.path}:{line_number}: {e}")
        return entries, fetched

    def fetched_forms(self) -> Set[Tuple[str, str]]:
        return self.read()[1]

    def append(self, language: str, surface_form: str, source_url: str, fetched_at: datetime, entries: List[DefinitionEntry]):
        """
        Persist the outcome of one fetch.
        """
        stamp = fetched_at.isoformat()
        if entries:
            rows = [[e.language, e.surface_form, e.definition, e.source_url, e.fetched_at.isoformat()] for e in entries]
        else:
            rows = [[language, surface_form, "", source_url, stamp]]
        append_table(self.path, CACHE_COLUMNS, rows)

    def load_corpus(self) -> DefinitionCorpus:
        entries, fetched = self.read()
        return DefinitionCorpus.from_entries(entries, fetched=sorted(fetched))
