"""
Lexical-overlap scorer: Jaccard similarity of lowercased whitespace tokens.
"""
from typing import List, Set

from src.models.scoring import ScorerInput
from src.scoring.base_scorer import BaseScorer


def _tokens(text: str) -> Set[str]:
    return set(text.lower().split())


class OverlapScorer(BaseScorer):
    """
    Deterministic test backend.
    """
    def _score(self, inputs: List[ScorerInput]) -> List[float]:
        probabilities = []
        for scorer_input in inputs:
            example_tokens = _tokens(scorer_input.example_text)
            gloss_tokens = _tokens(scorer_input.gloss)
            union = example_tokens | gloss_tokens
            if not union:
                probabilities.append(0.0)
                continue
            probabilities.append(len(example_tokens & gloss_tokens) / len(union))
        return probabilities


def mock_overlap_scorer() -> OverlapScorer:
    return OverlapScorer()
