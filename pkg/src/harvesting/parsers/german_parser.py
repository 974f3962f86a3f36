"""
German edition: the "Bedeutungen" block of a "(Deutsch)" section.
"""
import re
from typing import List

from bs4 import Tag

from src.harvesting.parsers.base_parser import BaseDefinitionParser, discard

MEANINGS_TITLE = "Sinn und Bezeichnetes (Semantik)"

_SENSE_NUMBER = re.compile(r"^\s*\[\s*\d+[a-z]?\s*\]\s*")


class GermanDefinitionParser(BaseDefinitionParser):
    language = "de"

    def is_language_heading(self, text: str, level: int) -> bool:
        return level == 2 and text.endswith("(Deutsch)")

    def _is_meanings_label(self, element: Tag) -> bool:
        return element.name == "p" and (
            element.get("title") == MEANINGS_TITLE or element.get_text().strip().startswith("Bedeutungen:")
        )

    def extract(self, section: List[Tag]) -> List[str]:
        definitions = []
        expecting_list = False
        for element in section:
            if self._is_meanings_label(element):
                expecting_list = True
                continue
            if not expecting_list:
                continue
            if element.name != "dl":
                expecting_list = False
                continue

            for item in element.find_all("dd", recursive=False):
                discard(item.find_all(["dl", "ul", "ol"]))
                definitions.append(_SENSE_NUMBER.sub("", item.get_text()))
            expecting_list = False
        return definitions
