import logging
import os
import random

import pytest
from tokenizers import Tokenizer, models, pre_tokenizers, processors
from transformers import BertConfig, BertModel, PreTrainedTokenizerFast

from src.errors import TrainingDataError
from src.models.scoring import LabeledPair, PairDataset, TrainConfig
from src.models.sense import Language
from src.scoring.cross_encoder import CrossEncoderScorer, build_model, count_parameters, read_checkpoint
from src.scoring.trainer import train

MATCH_WORDS = [f"alpha{i}" for i in range(20)]
MISMATCH_WORDS = [f"omega{i}" for i in range(20)]


@pytest.fixture(scope="module")
def tiny_encoder(tmp_path_factory):
    """A small BERT and word-level tokenizer saved locally."""
    path = str(tmp_path_factory.mktemp("tiny_encoder"))
    special = ["[PAD]", "[UNK]", "[CLS]", "[SEP]"]
    vocab = {token: index for index, token in enumerate(special + MATCH_WORDS + MISMATCH_WORDS)}

    backend = Tokenizer(models.WordLevel(vocab=vocab, unk_token="[UNK]"))
    backend.pre_tokenizer = pre_tokenizers.Whitespace()
    backend.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=backend,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
    )
    tokenizer.save_pretrained(path)

    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    BertModel(config).save_pretrained(path)
    return path


def separable_pairs(n: int, seed: int) -> PairDataset:
    """Label-1 pairs use one vocabulary, label-0 pairs another."""
    rng = random.Random(seed)
    pairs = []
    seen = set()
    while len(pairs) < n:
        label = len(pairs) % 2
        words = MATCH_WORDS if label else MISMATCH_WORDS
        example = " ".join(rng.choices(words, k=6))
        gloss = " ".join(rng.choices(words, k=4))
        if (example, gloss, label) in seen:
            continue
        seen.add((example, gloss, label))
        pairs.append(LabeledPair(
            word="w",
            example_text=example,
            gloss=gloss,
            label=label,
            source_usage_id=f"u{len(pairs)}",
            source_sense_id=f"s{label}",
        ))
    return PairDataset(language=Language.FINNISH, pairs=pairs)


def small_config(path: str, **overrides) -> TrainConfig:
    values = dict(
        model_identifier=path,
        epochs=3,
        batch_size=16,
        grad_accum_steps=1,
        learning_rate=1e-3,
        adapter=False,
        max_length=32,
        seed=13,
    )
    values.update(overrides)
    return TrainConfig(**values)


@pytest.mark.slow
def test_smoke_training_separates_vocabularies(tiny_encoder, tmp_path):
    train_set = separable_pairs(500, seed=1)
    dev_set = separable_pairs(60, seed=2)
    out = str(tmp_path / "checkpoint")

    checkpoint = train(train_set, dev_set, small_config(tiny_encoder), out)

    assert checkpoint.dev_f1 >= 0.9
    assert [entry.epoch for entry in checkpoint.log] == [1, 2, 3]
    losses = [entry.train_loss for entry in checkpoint.log]
    assert losses[0] >= losses[1] >= losses[2]
    for name in ("config.json", "weights.pt", "training_log.tsv"):
        assert os.path.isfile(os.path.join(out, name))

    stored = read_checkpoint(out)
    assert stored.epoch == checkpoint.epoch
    assert stored.dev_f1 == pytest.approx(checkpoint.dev_f1)
    assert stored.config.model_identifier == tiny_encoder


@pytest.mark.slow
def test_zero_epoch_warm_start_reproduces_checkpoint(tiny_encoder, tmp_path):
    train_set = separable_pairs(100, seed=3)
    dev_set = separable_pairs(20, seed=4)
    first = str(tmp_path / "first")
    second = str(tmp_path / "second")

    train(train_set, dev_set, small_config(tiny_encoder, epochs=1), first)
    continued = train(train_set, dev_set, small_config(tiny_encoder, epochs=0, warm_start_checkpoint=first), second)

    assert [entry.epoch for entry in continued.log] == [0]
    pairs = [(p.example_text, p.gloss) for p in dev_set.pairs]
    original = CrossEncoderScorer.from_checkpoint(first, device="cpu").score_texts(pairs)
    copied = CrossEncoderScorer.from_checkpoint(second, device="cpu").score_texts(pairs)
    assert copied == pytest.approx(original, abs=1e-6)


def test_adapter_training_freezes_encoder(tiny_encoder):
    model = build_model(small_config(tiny_encoder, adapter=True, adapter_reduction_factor=4))
    trainable, total = count_parameters(model)

    assert 0 < trainable < total
    named = dict(model.named_parameters())
    assert all(param.requires_grad for name, param in named.items() if name.startswith("classifier"))
    assert any(param.requires_grad for name, param in named.items() if "adapter" in name)
    assert not named["bert.embeddings.word_embeddings.weight"].requires_grad


def test_single_label_dev_set_rejected(tiny_encoder, tmp_path):
    train_set = separable_pairs(20, seed=5)
    positives = [pair for pair in separable_pairs(10, seed=6).pairs if pair.label == 1]
    dev_set = PairDataset(language=Language.FINNISH, pairs=positives)

    with pytest.raises(TrainingDataError, match="both labels"):
        train(train_set, dev_set, small_config(tiny_encoder), str(tmp_path / "out"))


def test_half_precision_falls_back_on_cpu(tiny_encoder, tmp_path, caplog, mocker):
    mocker.patch("torch.cuda.is_available", return_value=False)
    train_set = separable_pairs(16, seed=7)
    dev_set = separable_pairs(8, seed=8)

    with caplog.at_level(logging.WARNING):
        train(train_set, dev_set, small_config(tiny_encoder, epochs=1, half_precision=True), str(tmp_path / "out"))

    assert "full precision" in caplog.text
