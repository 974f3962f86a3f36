"""
Definition parsers, one per Wiktionary edition.
"""
from typing import Dict, Type

from src.errors import ConfigurationError
from src.harvesting.parsers.base_parser import BaseDefinitionParser
from src.harvesting.parsers.finnish_parser import FinnishDefinitionParser
from src.harvesting.parsers.german_parser import GermanDefinitionParser
from src.harvesting.parsers.russian_parser import RussianDefinitionParser

PARSERS: Dict[str, Type[BaseDefinitionParser]] = {
    "fi": FinnishDefinitionParser,
    "ru": RussianDefinitionParser,
    "de": GermanDefinitionParser,
}


def get_parser(language: str) -> BaseDefinitionParser:
    if language not in PARSERS:
        raise ConfigurationError(f"No definition parser for language '{language}'")
    return PARSERS[language]()
