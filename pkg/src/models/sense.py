"""
Dataset models: usages, sense definitions, splits and inventories.
"""
from enum import Enum
from typing import Any, List, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

# Namespace reserved for minted sense IDs
NOVEL_PREFIX = "novel:"


class Period(str, Enum):
    """Time period a usage comes from."""
    OLD = "old"
    NEW = "new"


class Language(str, Enum):
    """Shared-task languages."""
    FINNISH = "fi"
    RUSSIAN = "ru"
    GERMAN = "de"


class UsageExample(BaseModel):
    """One dated attestation of a target word."""
    model_config = ConfigDict(frozen=True)

    usage_id: str
    word: str
    example_text: str
    period: Period
    sense_id: Optional[str] = None
    date: Optional[str] = None

    @field_validator("example_text")
    @classmethod
    def _example_not_empty(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("example_text must not be empty")
        return value

    @property
    def is_annotated(self) -> bool:
        return self.sense_id is not None


class SenseDefinition(BaseModel):
    """A sense ID and its gloss for one word."""
    model_config = ConfigDict(frozen=True)

    sense_id: str
    word: str
    period: Period
    gloss: Optional[str] = None

    @field_validator("gloss")
    @classmethod
    def _gloss_not_blank(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and not value.strip():
            raise ValueError("gloss must be absent or non-empty")
        return value


class SenseInventory(BaseModel):
    """Known senses of one word."""
    model_config = ConfigDict(frozen=True)

    word: str
    entries: List[SenseDefinition] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_entries(self) -> "SenseInventory":
        seen = set()
        for entry in self.entries:
            if entry.word != self.word:
                raise ValueError(f"Inventory for '{self.word}' contains a sense of '{entry.word}'")
            if entry.sense_id in seen:
                raise ValueError(f"Duplicate sense_id '{entry.sense_id}' in inventory for '{self.word}'")
            seen.add(entry.sense_id)
        return self

    @property
    def sense_ids(self) -> List[str]:
        return [entry.sense_id for entry in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


class DatasetSplit(BaseModel):
    """All usages and senses of one language split."""
    model_config = ConfigDict(frozen=True)

    language: Language
    usages: List[UsageExample] = Field(default_factory=list)
    senses: List[SenseDefinition] = Field(default_factory=list)

    _senses_by_key: Dict[Tuple[str, str], SenseDefinition] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_integrity(self) -> "DatasetSplit":
        usage_ids = set()
        for usage in self.usages:
            if usage.usage_id in usage_ids:
                raise ValueError(f"Duplicate usage_id '{usage.usage_id}'")
            usage_ids.add(usage.usage_id)

        senses_by_key: Dict[Tuple[str, str], SenseDefinition] = {}
        for sense in self.senses:
            key = (sense.word, sense.sense_id)
            if key in senses_by_key:
                raise ValueError(f"Duplicate sense '{sense.sense_id}' for word '{sense.word}'")
            senses_by_key[key] = sense

        for usage in self.usages:
            if usage.sense_id is not None and (usage.word, usage.sense_id) not in senses_by_key:
                raise ValueError(
                    f"Usage '{usage.usage_id}' references unknown sense "
                    f"'{usage.sense_id}' of word '{usage.word}'"
                )
        return self

    def words(self) -> List[str]:
        """Distinct words in first-appearance order."""
        ordered: Dict[str, None] = {}
        for usage in self.usages:
            ordered.setdefault(usage.word, None)
        for sense in self.senses:
            ordered.setdefault(sense.word, None)
        return list(ordered)

    def model_post_init(self, __context: Any) -> None:
        self._senses_by_key = {(sense.word, sense.sense_id): sense for sense in self.senses}

    def sense_index(self) -> Dict[Tuple[str, str], SenseDefinition]:
        return dict(self._senses_by_key)

    def usage_index(self) -> Dict[str, UsageExample]:
        return {usage.usage_id: usage for usage in self.usages}

    def gold_gloss(self, usage: UsageExample) -> Optional[str]:
        """Gloss of the usage's gold sense, if annotated and glossed."""
        if usage.sense_id is None:
            return None
        sense = self._senses_by_key.get((usage.word, usage.sense_id))
        return sense.gloss if sense else None
