"""
Shared request pacing for concurrent fetch workers.
"""
import asyncio
import logging
import time
from typing import List

logger = logging.getLogger(__name__)


class RateLimiter:
    """
    Spaces requests at least 1/rate seconds apart across all callers.
    """
    def __init__(self, rate: float = 1.0):
        """
        Initialize the rate limiter.

        Args:
            rate: Maximum requests per second; 0 or less disables pacing.
        """
        self.rate = rate
        self.interval = 1.0 / rate if rate > 0 else 0.0
        self.last_request_time = None
        self.request_times: List[float] = []
        self._lock = asyncio.Lock()

    async def acquire(self):
        """
        Wait for the next request slot.
        """
        async with self._lock:
            now = time.monotonic()
            if self.last_request_time is not None and self.interval > 0:
                wait_time = self.last_request_time + self.interval - now
                if wait_time > 0:
                    logger.debug(f"Rate limiting: sleeping for {wait_time:.2f} seconds")
                    await asyncio.sleep(wait_time)
                    now = time.monotonic()
            self.last_request_time = now
            self.request_times.append(now)
