"""
Training of the pair classifier with epoch-end dev F1 checkpoint selection.
"""
import logging
from typing import List, Dict, Optional

import torch
from sklearn.metrics import f1_score
from transformers import AutoTokenizer, get_constant_schedule_with_warmup, set_seed

from src.errors import TrainingDataError
from src.models.scoring import Checkpoint, PairDataset, TrainConfig, TrainingLogEntry
from src.scoring.cross_encoder import (
    CrossEncoderScorer,
    build_model,
    count_parameters,
    load_model,
    read_checkpoint,
    write_checkpoint,
)
from src.scoring.encoding import encode_pair

logger = logging.getLogger(__name__)


class ScorerTrainer:
    """
    Trains one classifier per language; the trainer owns the model exclusively.
    """
    def __init__(self, config: TrainConfig, output_dir: str, device: Optional[str] = None):
        """
        Initialize the trainer.

        Args:
            config: Training configuration.
            output_dir: Directory receiving the best checkpoint.
            device: Torch device; defaults to CUDA when available.
        """
        self.config = config
        self.output_dir = output_dir
        self.device = torch.device(device or ("cuda" if torch.cuda.is_available() else "cpu"))
        self.log: List[TrainingLogEntry] = []

    def _validate(self, train: PairDataset, dev: PairDataset):
        if len(dev) == 0:
            raise TrainingDataError("Development set is empty")
        if self.config.epochs > 0 and len(train) == 0:
            raise TrainingDataError("Training set is empty")
        if len(set(dev.labels())) < 2:
            raise TrainingDataError("Development set needs both labels for F1-based selection")

    def _prepare_model(self):
        config = self.config
        if config.warm_start_checkpoint:
            base = read_checkpoint(config.warm_start_checkpoint).config
            if base.model_identifier != config.model_identifier:
                logger.info(f"Warm start uses the checkpoint encoder {base.model_identifier}")
            # Architecture comes from the checkpoint being continued
            self.config = config.model_copy(update={
                "model_identifier": base.model_identifier,
                "adapter": base.adapter,
                "adapter_reduction_factor": base.adapter_reduction_factor,
            })
            model, tokenizer, _ = load_model(config.warm_start_checkpoint)
            logger.info(f"Continuing training from {config.warm_start_checkpoint}")
        else:
            model = build_model(config)
            tokenizer = AutoTokenizer.from_pretrained(config.model_identifier)

        trainable, total = count_parameters(model)
        logger.info(
            f"Trainable params: {trainable} || all params: {total} || "
            f"trainable%: {100 * trainable / max(total, 1):.2f}"
        )
        return model, tokenizer

    def _dev_f1(self, scorer: CrossEncoderScorer, dev: PairDataset) -> float:
        inputs = [encode_pair(pair.example_text, pair.gloss) for pair in dev.pairs]
        probabilities = scorer.score_batch(inputs)
        predictions = [int(p >= self.config.selection_threshold) for p in probabilities]
        return float(f1_score(dev.labels(), predictions, zero_division=0))

    def train(self, train: PairDataset, dev: PairDataset) -> Checkpoint:
        """
        Train and keep the epoch with the highest dev F1.

        Args:
            train: Training pairs.
            dev: Development pairs containing both labels.

        Returns:
            The stored best checkpoint.
        """
        self._validate(train, dev)
        set_seed(self.config.seed)

        model, tokenizer = self._prepare_model()
        config = self.config
        scorer = CrossEncoderScorer(
            batch_size=config.batch_size,
            max_length=config.max_length,
            device=str(self.device),
        ).attach(model, tokenizer)

        use_amp = config.half_precision and self.device.type == "cuda"
        if config.half_precision and not use_amp:
            logger.warning("Half precision requested without CUDA, training in full precision")

        optimizer = torch.optim.AdamW(
            [param for param in model.parameters() if param.requires_grad],
            lr=config.learning_rate,
            weight_decay=config.weight_decay,
        )
        scheduler = get_constant_schedule_with_warmup(optimizer, num_warmup_steps=config.warmup_steps)
        scaler = torch.cuda.amp.GradScaler(enabled=use_amp)
        loss_fn = torch.nn.BCEWithLogitsLoss()

        train_inputs = [encode_pair(pair.example_text, pair.gloss) for pair in train.pairs]
        train_labels = torch.tensor(train.labels(), dtype=torch.float32)

        self.log = []
        best_f1 = -1.0
        best_epoch = 0
        best_state: Dict[str, torch.Tensor] = {}

        if config.epochs == 0:
            best_f1 = self._dev_f1(scorer, dev)
            best_state = {key: value.detach().cpu().clone() for key, value in model.state_dict().items()}
            self.log.append(TrainingLogEntry(epoch=0, train_loss=None, dev_f1=best_f1))
            logger.info(f"No training epochs, dev F1 of the warm-start model: {best_f1:.4f}")

        for epoch in range(1, config.epochs + 1):
            model.train()
            generator = torch.Generator().manual_seed(config.seed + epoch)
            order = torch.randperm(len(train_inputs), generator=generator).tolist()
            batches = [order[i:i + config.batch_size] for i in range(0, len(order), config.batch_size)]

            epoch_loss = 0.0
            optimizer.zero_grad()
            for step, indices in enumerate(batches, start=1):
                features = scorer.tensorize([train_inputs[i] for i in indices])
                labels = train_labels[indices].to(self.device)

                with torch.autocast(device_type=self.device.type, dtype=torch.float16, enabled=use_amp):
                    logits = model(**features).logits.squeeze(-1)
                loss = loss_fn(logits.float(), labels)
                epoch_loss += loss.item() * len(indices)

                scaler.scale(loss / config.grad_accum_steps).backward()
                if step % config.grad_accum_steps == 0 or step == len(batches):
                    scaler.step(optimizer)
                    scaler.update()
                    optimizer.zero_grad()
                    scheduler.step()

            train_loss = epoch_loss / len(train_inputs)
            dev_f1 = self._dev_f1(scorer, dev)
            self.log.append(TrainingLogEntry(epoch=epoch, train_loss=train_loss, dev_f1=dev_f1))
            logger.info(f"Epoch {epoch}/{config.epochs}: train loss {train_loss:.4f}, dev F1 {dev_f1:.4f}")

            if dev_f1 > best_f1:
                best_f1 = dev_f1
                best_epoch = epoch
                best_state = {key: value.detach().cpu().clone() for key, value in model.state_dict().items()}

        write_checkpoint(self.output_dir, config, best_state, self.log)
        logger.info(f"Best checkpoint: epoch {best_epoch} with dev F1 {best_f1:.4f}")
        return Checkpoint(path=self.output_dir, dev_f1=best_f1, epoch=best_epoch, config=config, log=list(self.log))


def train(train_set: PairDataset, dev: PairDataset, config: TrainConfig, output_dir: str) -> Checkpoint:
    return ScorerTrainer(config, output_dir).train(train_set, dev)
