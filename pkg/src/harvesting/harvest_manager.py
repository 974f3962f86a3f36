"""
Harvest manager: concurrent, resumable collection of candidate definitions.
"""
import asyncio
import logging
from datetime import datetime, timezone
from typing import List, Dict, Optional, Sequence, Tuple

import pandas as pd

from config.settings import settings
from src.errors import ExtractionError, TransportError
from src.harvesting.definition_cache import DefinitionCache
from src.harvesting.parsers import get_parser
from src.harvesting.wiktionary_client import WiktionaryClient
from src.models.harvest import CoverageRow, DefinitionCorpus, DefinitionEntry, HarvestReport

logger = logging.getLogger(__name__)


async def fetch_definitions(client: WiktionaryClient, language: str, surface_form: str) -> List[DefinitionEntry]:
    """
    Definitions of a form in the target-language section of its edition.

    Args:
        client: Wiktionary client.
        language: Language code of the edition and section.
        surface_form: Form to look up, unmodified.

    Returns:
        Entries in page order; empty when the page does not exist.
    """
    parser = get_parser(language)
    page = await client.fetch_page(language, surface_form)
    if page is None:
        return []

    texts = parser.parse(page.html, title=surface_form)
    return [
        DefinitionEntry(
            language=language,
            surface_form=surface_form,
            definition=text,
            source_url=page.url,
            fetched_at=page.fetched_at,
        )
        for text in texts
    ]


class HarvestManager:
    """
    Fetches definitions for many forms with bounded concurrency.

    All workers share the client's rate limiter; cache writes go through one lock.
    """
    def __init__(self, client: WiktionaryClient, cache: DefinitionCache, workers: int = settings.HARVEST_WORKERS):
        """
        Initialize the harvest manager.

        Args:
            client: Wiktionary client.
            cache: Persistent definition store.
            workers: Maximum concurrent fetches.
        """
        self.client = client
        self.cache = cache
        self.workers = max(1, workers)
        self._cache_lock = asyncio.Lock()

    async def _harvest_form(self, language: str, surface_form: str, semaphore: asyncio.Semaphore, report: HarvestReport):
        async with semaphore:
            try:
                entries = await fetch_definitions(self.client, language, surface_form)
            except (TransportError, ExtractionError) as e:
                report.errors[f"{language}:{surface_form}"] = str(e)
                logger.warning(f"Failed to harvest '{surface_form}' ({language}): {str(e)}")
                return

            async with self._cache_lock:
                self.cache.append(
                    language,
                    surface_form,
                    source_url=self.client.page_url(language, surface_form),
                    fetched_at=datetime.now(timezone.utc),
                    entries=entries,
                )
            report.fetched += 1
            logger.debug(f"Harvested {len(entries)} definitions for '{surface_form}' ({language})")

    async def build_corpus(self, words: Sequence[Tuple[str, str]]) -> Tuple[DefinitionCorpus, HarvestReport]:
        """
        Fetch every unique form not yet in the cache.

        Args:
            words: (language, surface form) pairs, duplicates allowed.

        Returns:
            The corpus restricted to the requested forms, and the batch report.
        """
        unique = list(dict.fromkeys(words))
        done = self.cache.fetched_forms()
        pending = [key for key in unique if key not in done]

        report = HarvestReport(requested=len(unique), skipped=len(unique) - len(pending))
        logger.info(f"Harvesting {len(pending)} forms ({report.skipped} already cached) with {self.workers} workers")

        semaphore = asyncio.Semaphore(self.workers)
        await asyncio.gather(*[
            self._harvest_form(language, form, semaphore, report) for language, form in pending
        ])

        stored = self.cache.load_corpus()
        requested = set(unique)
        entries = [entry for entry in stored.entries if (entry.language, entry.surface_form) in requested]
        fetched = [key for key in stored.fetched_forms if key in requested]
        corpus = DefinitionCorpus.from_entries(entries, fetched=fetched)

        if report.errors:
            logger.warning(f"{len(report.errors)} forms failed and can be retried on the next run")
        logger.info(f"Harvest finished: {report.fetched} fetched, {len(corpus.entries)} definitions in corpus")
        return corpus, report


async def build_corpus(
    words: Sequence[Tuple[str, str]],
    client: WiktionaryClient,
    cache: DefinitionCache,
    workers: int = settings.HARVEST_WORKERS,
) -> Tuple[DefinitionCorpus, HarvestReport]:
    return await HarvestManager(client, cache, workers).build_corpus(words)


def coverage_report(corpus: DefinitionCorpus, words: Sequence[Tuple[str, str]]) -> List[CoverageRow]:
    """
    Per-language coverage of the requested forms, languages in sorted order.

    Args:
        corpus: Harvested definitions.
        words: Requested (language, surface form) pairs.

    Returns:
        One row per language present in the request.
    """
    requested: Dict[str, set] = {}
    for language, form in words:
        requested.setdefault(language, set()).add(form)

    rows = []
    for language in sorted(requested):
        fetched = 0
        with_definitions = 0
        total = 0
        for form in requested[language]:
            found = corpus.lookup(language, form)
            if found is None:
                continue
            fetched += 1
            total += len(found)
            if found:
                with_definitions += 1
        row = CoverageRow(
            language=language,
            requested_forms=len(requested[language]),
            fetched_forms=fetched,
            forms_with_definitions=with_definitions,
            total_definitions=total,
        )
        logger.info(f"Coverage {language}: {with_definitions}/{row.requested_forms} forms ({row.coverage:.0%})")
        rows.append(row)
    return rows


def coverage_frame(rows: List[CoverageRow], statistics: Optional[Dict[str, int]] = None) -> pd.DataFrame:
    records = []
    for row in rows:
        record = {**row.model_dump(), "coverage": row.coverage}
        if statistics is not None:
            record["edition_pages"] = statistics.get(row.language)
        records.append(record)
    return pd.DataFrame(records)


async def edition_statistics(client: WiktionaryClient, language: str) -> int:
    """
    Total page count of an edition from the site statistics API.
    """
    data = await client.query_api(language, {"action": "query", "meta": "siteinfo", "siprop": "statistics"})
    try:
        return int(data["query"]["statistics"]["pages"])
    except (KeyError, TypeError, ValueError):
        raise TransportError(f"Unexpected statistics response from the {language} edition")
