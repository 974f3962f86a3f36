"""
Async HTTP client for the language editions of Wiktionary.
"""
import asyncio
import json
import logging
from datetime import datetime, timezone
from typing import Any, Dict, Optional, Tuple
from urllib.parse import quote

import aiohttp

from config.settings import settings
from src.errors import ConfigurationError, TransportError
from src.harvesting.rate_limiter import RateLimiter
from src.models.harvest import FetchedPage

logger = logging.getLogger(__name__)

RETRY_STATUSES = {429, 500, 502, 503, 504}


class WiktionaryClient:
    """
    Fetches rendered article pages, one shared rate limiter for all editions.

    Pages are cached in memory, so a form is requested at most once per client.
    """
    def __init__(
        self,
        base_urls: Optional[Dict[str, str]] = None,
        rate_limiter: Optional[RateLimiter] = None,
        timeout: int = settings.HTTP_TIMEOUT,
        retries: int = settings.HTTP_RETRIES,
        backoff: float = 0.5,
        user_agent: str = settings.HTTP_USER_AGENT,
    ):
        """
        Initialize the client.

        Args:
            base_urls: Edition base URL per language code.
            rate_limiter: Shared limiter; one at the configured rate by default.
            timeout: Total request timeout in seconds.
            retries: Retries after the first failed attempt.
            backoff: Base delay of the exponential retry backoff in seconds.
            user_agent: User-Agent header value.
        """
        self.base_urls = dict(base_urls or settings.WIKTIONARY_URLS)
        self.rate_limiter = rate_limiter or RateLimiter(settings.HARVEST_RATE)
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.user_agent = user_agent
        self.session = None
        self.request_count = 0
        self.page_cache: Dict[Tuple[str, str], Optional[FetchedPage]] = {}

    async def __aenter__(self) -> "WiktionaryClient":
        await self._ensure_session()
        return self

    async def __aexit__(self, exc_type, exc, tb):
        await self.close()

    async def _ensure_session(self):
        """
        Ensure that an HTTP session exists.
        """
        if self.session is None or self.session.closed:
            timeout = aiohttp.ClientTimeout(total=self.timeout)
            self.session = aiohttp.ClientSession(timeout=timeout, headers={"User-Agent": self.user_agent})

    async def close(self):
        if self.session and not self.session.closed:
            await self.session.close()
        self.session = None

    def base_url(self, language: str) -> str:
        if language not in self.base_urls:
            raise ConfigurationError(f"No Wiktionary edition configured for language '{language}'")
        return self.base_urls[language].rstrip("/")

    def page_url(self, language: str, surface_form: str) -> str:
        return f"{self.base_url(language)}/wiki/{quote(surface_form.replace(' ', '_'))}"

    async def _request(self, url: str, params: Optional[Dict[str, str]] = None) -> Tuple[int, str]:
        """
        GET with retries; returns status and body, 404 included.
        """
        await self._ensure_session()
        last_error = None

        for attempt in range(self.retries + 1):
            if attempt:
                await asyncio.sleep(self.backoff * 2 ** (attempt - 1))
            await self.rate_limiter.acquire()
            self.request_count += 1
            try:
                async with self.session.get(url, params=params, allow_redirects=True) as response:
                    if response.status in RETRY_STATUSES:
                        last_error = f"HTTP error {response.status}"
                        logger.debug(f"Retryable response {response.status} from {url}")
                        continue
                    if response.status >= 400 and response.status != 404:
                        raise TransportError(f"HTTP error {response.status} for {url}")
                    return response.status, await response.text()
            except aiohttp.ClientError as e:
                last_error = f"Connection error: {str(e)}"
            except asyncio.TimeoutError:
                last_error = "Request timed out"
            logger.debug(f"Attempt {attempt + 1} for {url} failed: {last_error}")

        raise TransportError(f"Giving up on {url} after {self.retries + 1} attempts: {last_error}")

    async def fetch_page(self, language: str, surface_form: str) -> Optional[FetchedPage]:
        """
        Fetch the article of a form, following redirects.

        Args:
            language: Edition language code.
            surface_form: Page title as given, not normalized.

        Returns:
            The page, or None when the edition has no such page.
        """
        key = (language, surface_form)
        if key in self.page_cache:
            return self.page_cache[key]

        url = self.page_url(language, surface_form)
        status, body = await self._request(url)
        page = None
        if status != 404:
            page = FetchedPage(
                language=language,
                surface_form=surface_form,
                url=url,
                html=body,
                fetched_at=datetime.now(timezone.utc),
            )
        else:
            logger.debug(f"No page for '{surface_form}' in the {language} edition")

        self.page_cache[key] = page
        return page

    async def query_api(self, language: str, params: Dict[str, str]) -> Dict[str, Any]:
        """
        Call the MediaWiki action API of an edition.
        """
        url = f"{self.base_url(language)}/w/api.php"
        status, body = await self._request(url, params={**params, "format": "json"})
        if status == 404:
            raise TransportError(f"No API endpoint at {url}")
        try:
            return json.loads(body)
        except ValueError as e:
            raise TransportError(f"Invalid JSON from {url}: {str(e)}")
