"""
Finnish edition: numbered lists under the part-of-speech headings of "Suomi".
"""
from typing import List

from bs4 import Tag

from src.harvesting.parsers.base_parser import BaseDefinitionParser, discard


class FinnishDefinitionParser(BaseDefinitionParser):
    language = "fi"

    def is_language_heading(self, text: str, level: int) -> bool:
        return level == 2 and text == "Suomi"

    def extract(self, section: List[Tag]) -> List[str]:
        lists = []
        for element in section:
            if element.name == "ol":
                lists.append(element)
            else:
                lists.extend(ol for ol in element.find_all("ol") if ol.find_parent("ol") is None)

        definitions = []
        for ordered in lists:
            for item in ordered.find_all("li", recursive=False):
                # Usage examples and sub-lists are nested inside the item
                discard(item.find_all(["dl", "ul", "ol"]))
                definitions.append(item.get_text())
        return definitions
