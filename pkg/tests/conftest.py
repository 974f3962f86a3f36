"""
Shared builders for synthetic splits and a local Wiktionary server.
"""
import asyncio
import os
import threading
import time
from contextlib import contextmanager
from typing import Dict, Iterable, List, Optional, Tuple

import pytest
from aiohttp import web
from aiohttp.test_utils import TestServer

from src.models.sense import DatasetSplit, Language, Period, SenseDefinition, UsageExample
from src.storage.corpus import SPLIT_COLUMNS

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

# (usage_id, word, sense_id, gloss, example, period)
Row = Tuple[str, str, Optional[str], Optional[str], str, str]


def split_from_rows(rows: List[Row], language: str = "fi") -> DatasetSplit:
    """
    Build a split the way load_split would, from (usage_id, word, sense_id, gloss, example, period) rows.
    """
    usages = []
    glosses = {}
    periods = {}
    for usage_id, word, sense_id, gloss, example, period in rows:
        usages.append(UsageExample(
            usage_id=usage_id, word=word, example_text=example, period=Period(period), sense_id=sense_id,
        ))
        if sense_id is None:
            continue
        key = (word, sense_id)
        if glosses.get(key) is None:
            glosses[key] = gloss
        if period == "old" or key not in periods:
            periods[key] = Period(period)

    senses = [
        SenseDefinition(sense_id=sense_id, word=word, gloss=gloss, period=periods[(word, sense_id)])
        for (word, sense_id), gloss in glosses.items()
    ]
    return DatasetSplit(language=Language(language), usages=usages, senses=senses)


def write_split_file(path, rows: List[Row]) -> str:
    lines = ["\t".join(SPLIT_COLUMNS)]
    for usage_id, word, sense_id, gloss, example, period in rows:
        lines.append("\t".join([usage_id, word, sense_id or "", gloss or "", example, period, ""]))
    path = str(path)
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    return path


WORDS = [
    "kuusi", "kieli", "kuu", "palaa", "tuuli",
    "selkä", "kurkku", "kanta", "kate", "aalto",
]


def synthetic_rows(n_words: int = 10, novel_every: int = 2) -> List[Row]:
    """
    Fully annotated synthetic data: two old senses per word, two new-period
    usages per old sense, and one novel sense on every `novel_every`-th word.

    Glosses have at least four tokens and differ across words.
    """
    rows: List[Row] = []
    for w in range(n_words):
        word = WORDS[w % len(WORDS)] + ("" if w < len(WORDS) else str(w))
        senses = [
            (f"{word}_1", f"first meaning of {word} concerning trees and forests"),
            (f"{word}_2", f"second meaning of {word} concerning numbers and counting"),
        ]
        for sense_id, gloss in senses:
            for k in range(2):
                rows.append((f"{word}-o-{sense_id}-{k}", word, sense_id, gloss,
                             f"old example {k} of {sense_id} in a sentence", "old"))
        for sense_id, gloss in senses:
            for k in range(2):
                rows.append((f"{word}-n-{sense_id}-{k}", word, sense_id, gloss,
                             f"new example {k} of {sense_id} in a sentence", "new"))
        if w % novel_every == 0:
            novel_id = f"{word}_3"
            novel_gloss = f"recent meaning of {word} about phones and networks"
            for k in range(2):
                rows.append((f"{word}-n-{novel_id}-{k}", word, novel_id, novel_gloss,
                             f"new example {k} of {novel_id} in a sentence", "new"))
    return rows


@pytest.fixture
def synthetic_split() -> DatasetSplit:
    return split_from_rows(synthetic_rows())


@pytest.fixture
def pero_path() -> str:
    return os.path.join(FIXTURES, "pero.tsv")


def fixture_page(name: str) -> str:
    with open(os.path.join(FIXTURES, "wiktionary", name), encoding="utf-8") as f:
        return f.read()


class FakeWiktionary:
    """
    Serves fixed pages under /<language>/wiki/<title> and a statistics API
    under /<language>/w/api.php, recording every page request.
    """
    def __init__(self, pages: Dict[Tuple[str, str], str], failing: Iterable[Tuple[str, str]] = ()):
        self.pages = pages
        self.failing = set(failing)
        self.hits: List[Tuple[str, str, float]] = []
        self.server: Optional[TestServer] = None

    async def _page(self, request: web.Request) -> web.Response:
        key = (request.match_info["language"], request.match_info["title"])
        self.hits.append((*key, time.monotonic()))
        if key in self.failing:
            return web.Response(status=503, text="Service unavailable")
        html = self.pages.get(key)
        if html is None:
            return web.Response(status=404, text="Not found")
        return web.Response(text=html, content_type="text/html")

    async def _api(self, request: web.Request) -> web.Response:
        return web.json_response({"batchcomplete": "", "query": {"statistics": {"pages": 1234, "articles": 1000}}})

    async def start(self) -> Dict[str, str]:
        app = web.Application()
        app.router.add_get("/{language}/wiki/{title}", self._page)
        app.router.add_get("/{language}/w/api.php", self._api)
        self.server = TestServer(app)
        await self.server.start_server()
        return {language: str(self.server.make_url(f"/{language}")) for language in ("fi", "ru", "de")}

    async def close(self):
        if self.server is not None:
            await self.server.close()

    def requested(self) -> List[Tuple[str, str]]:
        return [(language, title) for language, title, _ in self.hits]


@contextmanager
def serve_in_thread(fake: FakeWiktionary):
    """
    Run a FakeWiktionary on its own event loop for synchronous callers.
    """
    loop = asyncio.new_event_loop()
    thread = threading.Thread(target=loop.run_forever, daemon=True)
    thread.start()
    try:
        yield asyncio.run_coroutine_threadsafe(fake.start(), loop).result(timeout=10)
    finally:
        asyncio.run_coroutine_threadsafe(fake.close(), loop).result(timeout=10)
        loop.call_soon_threadsafe(loop.stop)
        thread.join(timeout=10)
        loop.close()
