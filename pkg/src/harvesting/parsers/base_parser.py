"""
Base parser for the definition lists of a Wiktionary edition.
"""
import abc
import logging
import re
from typing import Iterable, List, Optional

from bs4 import BeautifulSoup, Tag

from src.errors import ExtractionError

logger = logging.getLogger(__name__)

HEADING_TAGS = {"h1", "h2", "h3", "h4", "h5", "h6"}

_TEMPLATE = re.compile(r"\{\{[^{}]*\}\}")
_LINK = re.compile(r"\[\[(?:[^\[\]|]*\|)?([^\[\]]*)\]\]")
_WHITESPACE = re.compile(r"\s+")


def clean_definition(text: str) -> str:
    """
    Plain definition text: residual wiki markup removed, whitespace collapsed.
    """
    previous = None
    while previous != text:
        previous = text
        text = _TEMPLATE.sub("", text)
    text = _LINK.sub(r"\1", text)
    for token in ("{{", "}}", "[[", "]]"):
        text = text.replace(token, "")
    return _WHITESPACE.sub(" ", text).strip()


def discard(elements: Iterable[Tag]):
    """
    Remove elements from the tree, skipping those already removed along with an ancestor.
    """
    for element in elements:
        if not element.decomposed:
            element.decompose()


def heading_level(tag: Tag) -> Optional[int]:
    """
    Level of a section heading in either page skin, None for other elements.

    Older pages render <h2><span class="mw-headline">, newer ones wrap the
    heading in <div class="mw-heading">.
    """
    if not isinstance(tag, Tag):
        return None
    if tag.name in HEADING_TAGS:
        return int(tag.name[1])
    if tag.name == "div" and "mw-heading" in (tag.get("class") or []):
        inner = tag.find(HEADING_TAGS)
        if inner is not None:
            return int(inner.name[1])
    return None


def heading_text(tag: Tag) -> str:
    headline = tag.find(class_="mw-headline")
    source = headline if headline is not None else tag
    # Edit links live outside the title text
    discard(source.find_all(class_="mw-editsection"))
    return _WHITESPACE.sub(" ", source.get_text()).strip()


class BaseDefinitionParser(abc.ABC):
    """
    Base class for per-edition definition extractors.
    """
    language: str = ""

    def __init__(self):
        self.parser_type = self.__class__.__name__

    @abc.abstractmethod
    def is_language_heading(self, text: str, level: int) -> bool:
        """
        Whether a heading opens the target-language section of the page.
        """
        pass

    @abc.abstractmethod
    def extract(self, section: List[Tag]) -> List[str]:
        """
        Raw definition texts of the target-language section.

        Args:
            section: Top-level elements of the section, heading excluded.

        Returns:
            Definition texts in page order.
        """
        pass

    def language_section(self, content: Tag) -> Optional[List[Tag]]:
        """
        Top-level elements between the language heading and the next heading
        of the same or a higher level.
        """
        elements = [child for child in content.children if isinstance(child, Tag)]
        section_level = None
        section: List[Tag] = []

        for element in elements:
            level = heading_level(element)
            if section_level is None:
                if level is not None and self.is_language_heading(heading_text(element), level):
                    section_level = level
                continue
            if level is not None and level <= section_level:
                break
            section.append(element)

        return section if section_level is not None else None

    def parse(self, html: str, title: str) -> List[str]:
        """
        Definitions of the target-language entry of a rendered page.

        Args:
            html: Page HTML.
            title: Page title, used in error messages.

        Returns:
            Clean definitions; empty when the page has no target-language entry.
        """
        soup = BeautifulSoup(html, "html.parser")
        content = soup.find(class_="mw-parser-output")
        if content is None:
            raise ExtractionError("page has no article content", title=title)

        section = self.language_section(content)
        if section is None:
            logger.debug(f"{self.parser_type}: no {self.language} section on page '{title}'")
            return []

        definitions = []
        for text in self.extract(section):
            cleaned = clean_definition(text)
            if cleaned:
                definitions.append(cleaned)
        return definitions
