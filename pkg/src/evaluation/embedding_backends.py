"""
Token embedding backends for the semantic similarity metric.
"""
import abc
import logging
import threading
from typing import Dict, Optional

import numpy as np
import torch
from transformers import AutoModel, AutoTokenizer

from src.errors import MetricInputError

logger = logging.getLogger(__name__)


class BaseEmbeddingBackend(abc.ABC):
    """
    Base class for backends returning one vector per token.
    """
    def __init__(self):
        self.backend_type = self.__class__.__name__

    @property
    @abc.abstractmethod
    def dimension(self) -> int:
        pass

    @abc.abstractmethod
    def embed(self, text: str) -> np.ndarray:
        """
        Embed a text.

        Args:
            text: Non-empty text.

        Returns:
            Array of shape (tokens, dimension).
        """
        pass


class BagOfWordsBackend(BaseEmbeddingBackend):
    """
    One-hot vectors over lowercased whitespace tokens; deterministic test backend.

    The vocabulary grows as texts are embedded; a lock serializes growth so
    one backend can be shared by concurrent scoring threads.
    """
    def __init__(self, dimension: int = 16384):
        super().__init__()
        self._dimension = dimension
        self.vocabulary: Dict[str, int] = {}
        self._vocabulary_lock = threading.Lock()

    @property
    def dimension(self) -> int:
        return self._dimension

    def _index(self, token: str) -> int:
        with self._vocabulary_lock:
            if token not in self.vocabulary:
                if len(self.vocabulary) >= self._dimension:
                    raise MetricInputError(f"Bag-of-words vocabulary exceeds {self._dimension} tokens")
                self.vocabulary[token] = len(self.vocabulary)
            return self.vocabulary[token]

    def embed(self, text: str) -> np.ndarray:
        tokens = text.lower().split()
        vectors = np.zeros((len(tokens), self._dimension), dtype=np.float32)
        for row, token in enumerate(tokens):
            vectors[row, self._index(token)] = 1.0
        return vectors


class TransformerBackend(BaseEmbeddingBackend):
    """
    Contextual vectors from the last hidden layer of a pretrained encoder.
    """
    def __init__(self, model_name: str, device: Optional[str] = None):
        """
        Load the encoder.

        Args:
            model_name: Hugging Face model identifier or local path.
            device: Torch device; defaults to CUDA when available.
        """
        super().__init__()
        self.device = torch.device(device or ("cuda" if torch.cuda.is_available() else "cpu"))
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModel.from_pretrained(model_name).to(self.device)
        self.model.eval()
        logger.info(f"Loaded embedding model {model_name}")

    @property
    def dimension(self) -> int:
        return self.model.config.hidden_size

    def embed(self, text: str) -> np.ndarray:
        encoded = self.tokenizer(
            text,
            return_tensors="pt",
            truncation=True,
            return_special_tokens_mask=True,
        )
        special = encoded.pop("special_tokens_mask")[0].bool()
        encoded = {key: value.to(self.device) for key, value in encoded.items()}

        with torch.no_grad():
            hidden = self.model(**encoded).last_hidden_state[0].float().cpu()

        # Special tokens take no part in the alignment
        tokens = hidden[~special]
        if tokens.shape[0] == 0:
            tokens = hidden
        return tokens.numpy()
