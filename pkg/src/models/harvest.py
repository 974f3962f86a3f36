"""
Models for harvested dictionary definitions.
"""
from datetime import datetime
from typing import List, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

MARKUP_TOKENS = ("{{", "}}", "[[", "]]")


class DefinitionEntry(BaseModel):
    """One definition line of a dictionary page."""
    model_config = ConfigDict(frozen=True)

    language: str
    surface_form: str
    definition: str
    source_url: str
    fetched_at: datetime

    @field_validator("definition")
    @classmethod
    def _plain_text(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("definition must not be empty")
        for token in MARKUP_TOKENS:
            if token in value:
                raise ValueError(f"definition contains markup '{token}'")
        return value


class DefinitionCorpus(BaseModel):
    """Harvested definitions indexed by (language, surface form)."""
    model_config = ConfigDict(frozen=True)

    entries: List[DefinitionEntry] = Field(default_factory=list)
    index: Dict[Tuple[str, str], List[DefinitionEntry]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _index_consistent(self) -> "DefinitionCorpus":
        indexed = sum(len(group) for group in self.index.values())
        if indexed != len(self.entries):
            raise ValueError("Corpus index does not cover the entry list")
        for (language, form), group in self.index.items():
            for entry in group:
                if (entry.language, entry.surface_form) != (language, form):
                    raise ValueError(f"Entry for '{entry.surface_form}' filed under '{form}'")
        return self

    @classmethod
    def from_entries(
        cls,
        entries: List[DefinitionEntry],
        fetched: Optional[List[Tuple[str, str]]] = None,
    ) -> "DefinitionCorpus":
        """
        Build a corpus from entries plus forms that were fetched but had no definitions.

        Forms are ordered by (language, surface form); definitions keep page order.
        """
        index: Dict[Tuple[str, str], List[DefinitionEntry]] = {}
        for key in fetched or []:
            index.setdefault(key, [])
        for entry in entries:
            index.setdefault((entry.language, entry.surface_form), []).append(entry)

        ordered = {key: index[key] for key in sorted(index)}
        flat = [entry for group in ordered.values() for entry in group]
        return cls(entries=flat, index=ordered)

    def lookup(self, language: str, surface_form: str) -> Optional[List[DefinitionEntry]]:
        """
        Definitions of a form; None when the form was never fetched.
        """
        group = self.index.get((language, surface_form))
        return list(group) if group is not None else None

    def definitions(self, language: str, surface_form: str) -> List[str]:
        return [entry.definition for entry in self.lookup(language, surface_form) or []]

    @property
    def fetched_forms(self) -> List[Tuple[str, str]]:
        return list(self.index)


class FetchedPage(BaseModel):
    """Rendered HTML of one dictionary page."""
    model_config = ConfigDict(frozen=True)

    language: str
    surface_form: str
    url: str
    html: str
    fetched_at: datetime


class HarvestReport(BaseModel):
    """Outcome of a harvesting batch."""
    requested: int = 0
    fetched: int = 0
    skipped: int = 0
    errors: Dict[str, str] = Field(default_factory=dict)


class CoverageRow(BaseModel):
    """Per-language coverage of a definition corpus."""
    model_config = ConfigDict(frozen=True)

    language: str
    requested_forms: int
    fetched_forms: int
    forms_with_definitions: int
    total_definitions: int

    @property
    def coverage(self) -> float:
        if self.requested_forms == 0:
            return 0.0
        return self.forms_with_definitions / self.requested_forms
