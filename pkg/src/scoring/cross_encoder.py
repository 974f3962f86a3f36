"""
Cross-encoder scorer: a pretrained encoder with a single-logit classification head,
optionally with a bottleneck adapter.
"""
import json
import logging
import os
from typing import List, Dict, Optional, Tuple

import adapters
import pandas as pd
import torch
from adapters import SeqBnConfig
from transformers import AutoModelForSequenceClassification, AutoTokenizer, PreTrainedModel, PreTrainedTokenizerBase, set_seed

from src.errors import ScorerNotReadyError
from src.models.scoring import Checkpoint, PAIR_DELIMITER, ScorerInput, TrainConfig, TrainingLogEntry
from src.scoring.base_scorer import BaseScorer

logger = logging.getLogger(__name__)

ADAPTER_NAME = "sense_match"

CONFIG_FILE = "config.json"
WEIGHTS_FILE = "weights.pt"
LOG_FILE = "training_log.tsv"


def build_model(config: TrainConfig) -> PreTrainedModel:
    """
    Create a fresh pair classifier from the pretrained encoder.

    Head and adapter weights are initialized from the config seed.

    Args:
        config: Training configuration.

    Returns:
        The model, with only adapter and head trainable when config.adapter is set.
    """
    set_seed(config.seed)
    model = AutoModelForSequenceClassification.from_pretrained(config.model_identifier, num_labels=1)

    if config.adapter:
        adapters.init(model)
        model.add_adapter(ADAPTER_NAME, config=SeqBnConfig(reduction_factor=config.adapter_reduction_factor))
        model.train_adapter(ADAPTER_NAME)

        # Everything outside the encoder body is the classification head
        encoder_params = {id(p) for p in model.base_model.parameters()}
        for param in model.parameters():
            if id(param) not in encoder_params:
                param.requires_grad = True

    return model


def count_parameters(model: PreTrainedModel) -> Tuple[int, int]:
    """
    Trainable and total parameter counts.
    """
    trainable = 0
    total = 0
    for param in model.parameters():
        total += param.numel()
        if param.requires_grad:
            trainable += param.numel()
    return trainable, total


def write_checkpoint(path: str, config: TrainConfig, state: Dict[str, torch.Tensor], log: List[TrainingLogEntry]):
    """
    Store config, weights and training log in a checkpoint directory.
    """
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, CONFIG_FILE), "w", encoding="utf-8") as f:
        f.write(config.model_dump_json(indent=2))
    torch.save(state, os.path.join(path, WEIGHTS_FILE))

    frame = pd.DataFrame([entry.model_dump() for entry in log], columns=["epoch", "train_loss", "dev_f1"])
    frame.to_csv(os.path.join(path, LOG_FILE), sep="\t", index=False)
    logger.info(f"Saved checkpoint to {path}")


def read_checkpoint(path: str) -> Checkpoint:
    """
    Read checkpoint metadata; the selected epoch is the first with the best dev F1.
    """
    config_path = os.path.join(path, CONFIG_FILE)
    if not os.path.isfile(config_path):
        raise FileNotFoundError(f"Checkpoint config not found: {config_path}")

    with open(config_path, "r", encoding="utf-8") as f:
        config = TrainConfig(**json.load(f))

    log = []
    log_path = os.path.join(path, LOG_FILE)
    if os.path.isfile(log_path):
        frame = pd.read_csv(log_path, sep="\t")
        for row in frame.itertuples(index=False):
            log.append(TrainingLogEntry(
                epoch=int(row.epoch),
                train_loss=None if pd.isna(row.train_loss) else float(row.train_loss),
                dev_f1=float(row.dev_f1),
            ))

    best = max(log, key=lambda entry: entry.dev_f1, default=None)
    return Checkpoint(
        path=path,
        dev_f1=best.dev_f1 if best else 0.0,
        epoch=best.epoch if best else 0,
        config=config,
        log=log,
    )


def load_model(path: str) -> Tuple[PreTrainedModel, PreTrainedTokenizerBase, TrainConfig]:
    """
    Rebuild the model of a checkpoint and load its weights.
    """
    checkpoint = read_checkpoint(path)
    config = checkpoint.config
    model = build_model(config)
    state = torch.load(os.path.join(path, WEIGHTS_FILE), map_location="cpu")
    model.load_state_dict(state)
    tokenizer = AutoTokenizer.from_pretrained(config.model_identifier)
    return model, tokenizer, config


class CrossEncoderScorer(BaseScorer):
    """
    Scores pairs with a sequence classification model in inference mode.
    """
    def __init__(self, batch_size: int = 64, max_length: int = 256, device: Optional[str] = None):
        """
        Initialize the scorer.

        Args:
            batch_size: Pairs per forward pass.
            max_length: Maximum encoder sequence length.
            device: Torch device; defaults to CUDA when available.
        """
        super().__init__()
        self.batch_size = batch_size
        self.max_length = max_length
        self.device = torch.device(device or ("cuda" if torch.cuda.is_available() else "cpu"))
        self.model: Optional[PreTrainedModel] = None
        self.tokenizer: Optional[PreTrainedTokenizerBase] = None

    @property
    def ready(self) -> bool:
        return self.model is not None and self.tokenizer is not None

    @classmethod
    def from_checkpoint(cls, path: str, batch_size: int = 64, device: Optional[str] = None) -> "CrossEncoderScorer":
        model, tokenizer, config = load_model(path)
        scorer = cls(batch_size=batch_size, max_length=config.max_length, device=device)
        scorer.attach(model, tokenizer)
        logger.info(f"Loaded scorer from {path} ({config.model_identifier})")
        return scorer

    def attach(self, model: PreTrainedModel, tokenizer: PreTrainedTokenizerBase) -> "CrossEncoderScorer":
        self.model = model.to(self.device)
        self.tokenizer = tokenizer
        return self

    def _input_ids(self, scorer_input: ScorerInput) -> List[int]:
        """
        Token IDs with the example truncated first so the gloss stays whole.
        """
        tokenizer = self.tokenizer
        example_ids = tokenizer.encode(scorer_input.example_text, add_special_tokens=False)
        gloss_ids = tokenizer.encode(PAIR_DELIMITER + scorer_input.gloss, add_special_tokens=False)

        room = self.max_length - tokenizer.num_special_tokens_to_add(pair=False)
        if len(gloss_ids) > room:
            gloss_ids = gloss_ids[:room]
        example_ids = example_ids[:max(0, room - len(gloss_ids))]

        return tokenizer.build_inputs_with_special_tokens(example_ids + gloss_ids)

    def tensorize(self, inputs: List[ScorerInput]) -> Dict[str, torch.Tensor]:
        if not self.ready:
            raise ScorerNotReadyError("CrossEncoderScorer has no model loaded")
        batch = self.tokenizer.pad(
            {"input_ids": [self._input_ids(scorer_input) for scorer_input in inputs]},
            padding=True,
            return_tensors="pt",
        )
        return {key: value.to(self.device) for key, value in batch.items()}

    def _score(self, inputs: List[ScorerInput]) -> List[float]:
        self.model.eval()
        probabilities: List[float] = []
        with torch.no_grad():
            for start in range(0, len(inputs), self.batch_size):
                features = self.tensorize(inputs[start:start + self.batch_size])
                logits = self.model(**features).logits.squeeze(-1).float()
                probabilities.extend(torch.sigmoid(logits).cpu().tolist())
        return probabilities
