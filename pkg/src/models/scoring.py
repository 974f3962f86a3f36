"""
Models for pair classification: training pairs, scorer inputs, configs and checkpoints.
"""
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.sense import Language

PAIR_DELIMITER = "\t"


class LabeledPair(BaseModel):
    """Example/gloss pair with a binary match label."""
    model_config = ConfigDict(frozen=True)

    word: str
    example_text: str
    gloss: str
    label: int = Field(..., ge=0, le=1)
    source_usage_id: str
    source_sense_id: str

    @property
    def text_key(self):
        return (self.example_text, self.gloss, self.label)


class PairDataset(BaseModel):
    """Training or development pairs of one language."""
    model_config = ConfigDict(frozen=True)

    language: Language
    pairs: List[LabeledPair] = Field(default_factory=list)

    @model_validator(mode="after")
    def _no_duplicates(self) -> "PairDataset":
        keys = set()
        for pair in self.pairs:
            if pair.text_key in keys:
                raise ValueError(f"Duplicate pair for usage '{pair.source_usage_id}' and sense '{pair.source_sense_id}'")
            keys.add(pair.text_key)
        return self

    def labels(self) -> List[int]:
        return [pair.label for pair in self.pairs]

    def __len__(self) -> int:
        return len(self.pairs)


class ScorerInput(BaseModel):
    """Example text and gloss joined by a single tab."""
    model_config = ConfigDict(frozen=True)

    text: str

    @field_validator("text")
    @classmethod
    def _single_delimiter(cls, value: str) -> str:
        if value.count(PAIR_DELIMITER) != 1:
            raise ValueError("Scorer input must contain exactly one tab delimiter")
        return value

    @property
    def example_text(self) -> str:
        return self.text.split(PAIR_DELIMITER)[0]

    @property
    def gloss(self) -> str:
        return self.text.split(PAIR_DELIMITER)[1]


class TrainConfig(BaseModel):
    """Training hyperparameters of the pair classifier."""
    model_config = ConfigDict(frozen=True, protected_namespaces=())

    model_identifier: str = "xlm-roberta-base"
    epochs: int = Field(10, ge=0)
    batch_size: int = Field(32, ge=1)
    grad_accum_steps: int = Field(1, ge=1)
    learning_rate: float = Field(5e-4, gt=0.0)
    half_precision: bool = False
    adapter: bool = True
    warm_start_checkpoint: Optional[str] = None
    seed: int = 42

    # Free hyperparameters, recorded with every checkpoint
    optimizer: str = "adamw"
    weight_decay: float = Field(0.0, ge=0.0)
    warmup_steps: int = Field(0, ge=0)
    adapter_reduction_factor: int = Field(16, ge=1)
    max_length: int = Field(256, ge=8)
    selection_threshold: float = Field(0.5, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _epochs_need_warm_start(self) -> "TrainConfig":
        if self.epochs == 0 and not self.warm_start_checkpoint:
            raise ValueError("epochs may only be 0 when continuing from a warm-start checkpoint")
        return self

    @property
    def effective_batch_size(self) -> int:
        return self.batch_size * self.grad_accum_steps


class TrainingLogEntry(BaseModel):
    """Epoch-end training record."""
    model_config = ConfigDict(frozen=True)

    epoch: int
    train_loss: Optional[float] = None
    dev_f1: float = Field(..., ge=0.0, le=1.0)


class Checkpoint(BaseModel):
    """Stored model with its selection score."""
    model_config = ConfigDict(frozen=True)

    path: str
    dev_f1: float = Field(..., ge=0.0, le=1.0)
    epoch: int = Field(..., ge=0)
    config: TrainConfig
    log: List[TrainingLogEntry] = Field(default_factory=list)
