"""
Base scorer for example/gloss pair probabilities.
"""
import abc
import logging
from typing import List, Sequence, Tuple

from src.errors import ScorerNotReadyError
from src.models.scoring import ScorerInput
from src.scoring.encoding import encode_pair

logger = logging.getLogger(__name__)


class BaseScorer(abc.ABC):
    """
    Base class for pair scorers.

    Implementations hold no mutable state between scoring calls.
    """
    def __init__(self):
        self.scorer_type = self.__class__.__name__

    @property
    def ready(self) -> bool:
        """
        Whether the scorer can score pairs.
        """
        return True

    @abc.abstractmethod
    def _score(self, inputs: List[ScorerInput]) -> List[float]:
        """
        Score a non-empty batch.

        Args:
            inputs: Encoded pairs.

        Returns:
            One probability per input.
        """
        pass

    def score_batch(self, inputs: Sequence[ScorerInput]) -> List[float]:
        """
        Probability that each gloss describes its example, in input order.
        """
        if not self.ready:
            raise ScorerNotReadyError(f"{self.scorer_type} has no model loaded")
        if not inputs:
            return []

        probabilities = self._score(list(inputs))
        if len(probabilities) != len(inputs):
            raise ScorerNotReadyError(
                f"{self.scorer_type} returned {len(probabilities)} scores for {len(inputs)} inputs"
            )
        return [min(1.0, max(0.0, float(p))) for p in probabilities]

    def score_texts(self, pairs: Sequence[Tuple[str, str]]) -> List[float]:
        """
        Encode (example, gloss) pairs and score them.
        """
        return self.score_batch([encode_pair(example, gloss) for example, gloss in pairs])


def score_batch(scorer: BaseScorer, pairs: Sequence[ScorerInput]) -> List[float]:
    return scorer.score_batch(pairs)
