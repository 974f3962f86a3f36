"""
Evaluation report models.
"""
from typing import Dict, Optional

from pydantic import BaseModel, Field


class LanguageScores(BaseModel):
    """Scores of one language; a subtask left unscored stays None."""
    ari: Optional[float] = None
    f1: Optional[float] = None
    bleu: Optional[float] = None
    bert_score: Optional[float] = None


class OverallScores(LanguageScores):
    """Unweighted means across languages."""
    subtask2_overall: Optional[float] = None


class EvaluationReport(BaseModel):
    """Per-language and overall scores for both subtasks."""
    per_language: Dict[str, LanguageScores] = Field(default_factory=dict)
    overall: OverallScores = Field(default_factory=OverallScores)
