"""
Oracle scorer backed by gold annotations.
"""
import logging
from typing import List, Set

from src.models.scoring import ScorerInput
from src.models.sense import DatasetSplit
from src.scoring.base_scorer import BaseScorer
from src.scoring.encoding import encode_pair

logger = logging.getLogger(__name__)


class OracleScorer(BaseScorer):
    """
    Returns 1.0 for gold (example, gloss) pairs and 0.0 for everything else.
    """
    def __init__(self, gold: DatasetSplit):
        super().__init__()
        self.gold_texts: Set[str] = set()
        for usage in gold.usages:
            gloss = gold.gold_gloss(usage)
            if gloss is not None:
                self.gold_texts.add(encode_pair(usage.example_text, gloss).text)
        logger.debug(f"Oracle scorer indexed {len(self.gold_texts)} gold pairs")

    def _score(self, inputs: List[ScorerInput]) -> List[float]:
        return [1.0 if scorer_input.text in self.gold_texts else 0.0 for scorer_input in inputs]


def oracle_scorer(gold: DatasetSplit) -> OracleScorer:
    return OracleScorer(gold)
