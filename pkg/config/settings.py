"""
Configuration settings for the diachronic sense change system.
"""
import os
import json
import logging
from typing import List, Dict, Any, Optional

from dotenv import load_dotenv

from src.errors import ConfigurationError

load_dotenv()


def _parse_grid(raw: str) -> List[float]:
    return [float(value) for value in raw.split(",") if value.strip()]


class Settings:
    """
    Application settings without pydantic.
    """
    def __init__(self):
        # Application settings
        self.LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
        self.DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", "42"))

        # Novel sense detection
        self.NOVEL_THRESHOLD = float(os.getenv("NOVEL_THRESHOLD", "0.35"))
        self.NOVEL_ID_MODE = os.getenv("NOVEL_ID_MODE", "per_usage")
        self.THRESHOLD_GRID = _parse_grid(
            os.getenv("THRESHOLD_GRID", "0.20,0.25,0.30,0.35,0.40,0.45,0.50")
        )

        # Scoring settings
        self.SCORING_BATCH_SIZE = int(os.getenv("SCORING_BATCH_SIZE", "64"))
        self.MAX_SEQUENCE_LENGTH = int(os.getenv("MAX_SEQUENCE_LENGTH", "256"))

        # Dev split for languages without a training split (pair-level fraction)
        self.DEV_FRACTION = float(os.getenv("DEV_FRACTION", "0.1"))

        # Wiktionary editions
        self.WIKTIONARY_URLS = {
            "fi": os.getenv("WIKTIONARY_FI_URL", "https://fi.wiktionary.org"),
            "ru": os.getenv("WIKTIONARY_RU_URL", "https://ru.wiktionary.org"),
            "de": os.getenv("WIKTIONARY_DE_URL", "https://de.wiktionary.org"),
        }

        # Harvesting settings
        self.HARVEST_RATE = float(os.getenv("HARVEST_RATE", "1.0"))  # requests per second
        self.HARVEST_WORKERS = int(os.getenv("HARVEST_WORKERS", "4"))
        self.HTTP_TIMEOUT = int(os.getenv("HTTP_TIMEOUT", "30"))  # seconds
        self.HTTP_RETRIES = int(os.getenv("HTTP_RETRIES", "3"))
        self.HTTP_USER_AGENT = os.getenv(
            "HTTP_USER_AGENT", "sense-change-harvester/1.0 (research; polite crawler)"
        )

        # Evaluation settings
        self.EMBEDDING_MODEL = os.getenv("EMBEDDING_MODEL", "xlm-roberta-base")


# Per-language training defaults
LANGUAGE_TRAIN_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "fi": {
        "model_identifier": "xlm-roberta-large",
        "epochs": 10,
        "batch_size": 128,
        "grad_accum_steps": 3,
        "learning_rate": 5e-4,
        "half_precision": True,
        "adapter": True,
    },
    "ru": {
        "model_identifier": "xlm-roberta-base",
        "epochs": 50,
        "batch_size": 144,
        "grad_accum_steps": 1,
        "learning_rate": 5e-4,
        "half_precision": False,
        "adapter": True,
    },
    # German continues from the best Finnish checkpoint (--warm-start)
    "de": {
        "model_identifier": "xlm-roberta-large",
        "epochs": 20,
        "batch_size": 48,
        "grad_accum_steps": 6,
        "learning_rate": 5e-4,
        "half_precision": True,
        "adapter": True,
    },
}


def resolve_train_config(
    language: str,
    config_file: Optional[str] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Merge training settings: flags > config file > per-language defaults.

    Args:
        language: Language code whose defaults form the base layer.
        config_file: Optional JSON file with TrainConfig fields.
        overrides: Values given on the command line (None values are ignored).

    Returns:
        Keyword arguments for TrainConfig.
    """
    if language not in LANGUAGE_TRAIN_DEFAULTS:
        raise ConfigurationError(f"No training defaults for language '{language}'")

    merged = dict(LANGUAGE_TRAIN_DEFAULTS[language])

    if config_file:
        with open(config_file, "r", encoding="utf-8") as f:
            file_values = json.load(f)
        if not isinstance(file_values, dict):
            raise ConfigurationError(f"Config file {config_file} must contain a JSON object")
        merged.update(file_values)

    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    return merged


# Create settings instance
settings = Settings()

# Configure logging based on settings
log_level = getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO)
logging.basicConfig(
    level=log_level,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
