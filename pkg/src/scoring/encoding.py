"""
Text pair encoding for the scorer: example, tab, gloss.
"""
from typing import Tuple

from src.errors import EncodingError
from src.models.scoring import PAIR_DELIMITER, ScorerInput


def encode_pair(example_text: str, gloss: str) -> ScorerInput:
    """
    Join an example and a gloss with a single tab.

    Tabs inside either text become spaces so the delimiter stays unique.

    Args:
        example_text: Usage example.
        gloss: Sense definition.

    Returns:
        The scorer input.
    """
    if not example_text or not gloss:
        raise EncodingError("Both the example text and the gloss must be non-empty")

    example_text = example_text.replace(PAIR_DELIMITER, " ")
    gloss = gloss.replace(PAIR_DELIMITER, " ")
    return ScorerInput(text=f"{example_text}{PAIR_DELIMITER}{gloss}")


def decode_pair(scorer_input: ScorerInput) -> Tuple[str, str]:
    example_text, gloss = scorer_input.text.split(PAIR_DELIMITER)
    return example_text, gloss
