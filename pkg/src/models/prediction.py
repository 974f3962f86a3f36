"""
Prediction models for sense assignment and definition matching.
"""
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.sense import Language, Period, NOVEL_PREFIX


class NovelIdMode(str, Enum):
    """How novel sense IDs are minted."""
    PER_USAGE = "per_usage"
    PER_WORD = "per_word"


class AssignPolicy(BaseModel):
    """Threshold rule for novel sense detection."""
    model_config = ConfigDict(frozen=True)

    threshold: float = Field(0.35, ge=0.0, le=1.0)
    novel_id_mode: NovelIdMode = NovelIdMode.PER_USAGE


class PredictionRecord(BaseModel):
    """Per-usage output of the pipeline."""
    model_config = ConfigDict(frozen=True)

    usage_id: str
    word: str
    language: Language
    period: Period
    example_text: str
    assigned_sense_id: str
    is_novel: bool = False
    winning_probability: Optional[float] = Field(None, ge=0.0, le=1.0)
    definition: Optional[str] = None
    no_candidates: bool = False

    @model_validator(mode="after")
    def _check_novelty(self) -> "PredictionRecord":
        minted = self.assigned_sense_id.startswith(NOVEL_PREFIX)
        if minted != self.is_novel:
            raise ValueError(
                f"Record '{self.usage_id}': is_novel={self.is_novel} disagrees with "
                f"sense id '{self.assigned_sense_id}'"
            )
        if self.definition is not None and not self.is_novel:
            raise ValueError(f"Record '{self.usage_id}': only novel senses carry a definition")
        return self
