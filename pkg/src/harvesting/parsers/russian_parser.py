"""
Russian edition: the "Значение" list of the "Русский" section.
"""
from typing import List

from bs4 import Tag

from src.harvesting.parsers.base_parser import BaseDefinitionParser, discard, heading_level, heading_text

MEANING_HEADING = "Значение"
EXAMPLE_MARK = "◆"


class RussianDefinitionParser(BaseDefinitionParser):
    language = "ru"

    def is_language_heading(self, text: str, level: int) -> bool:
        return level == 1 and text == "Русский"

    def extract(self, section: List[Tag]) -> List[str]:
        definitions = []
        in_meanings = False
        for element in section:
            if heading_level(element) is not None:
                in_meanings = heading_text(element) == MEANING_HEADING
                continue
            if not in_meanings or element.name != "ol":
                continue

            for item in element.find_all("li", recursive=False):
                discard(item.find_all(class_=lambda value: value and value.startswith("example")))
                discard(item.find_all(["dl", "ul", "ol"]))
                definitions.append(item.get_text().split(EXAMPLE_MARK)[0])
        return definitions
