"""
HeckMort - Series Cache
On-disk cache of evaluated identity sides keyed by (normalized source hash, order).

One JSON file per key holds the canonical series form. Writes go through a temporary
file and os.replace so concurrent workers never observe a partial entry.
"""

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional, Union

from identity_parser import Node, to_source
from logging_setup import LoggerMixin
from series_core import QSeries


def cache_key(node: Union[Node, str], order: int) -> str:
    """File stem for a side: sha256 of its printed source plus the order"""
    source = node if isinstance(node, str) else to_source(node)
    digest = hashlib.sha256(source.encode("utf-8")).hexdigest()
    return f"{digest}_{order}"


class SeriesCache(LoggerMixin):
    """Read-through cache for evaluated expression sides"""

    def __init__(self, directory: Union[str, Path], enabled: bool = True):
        self.directory = Path(directory)
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def path_for(self, node: Union[Node, str], order: int) -> Path:
        return self.directory / f"{cache_key(node, order)}.json"

    def get(self, node: Union[Node, str], order: int) -> Optional[QSeries]:
        if not self.enabled:
            return None
        path = self.path_for(node, order)
        try:
            with open(path, "r", encoding="utf-8") as f:
                series = QSeries.from_json_obj(json.load(f))
        except FileNotFoundError:
            self.misses += 1
            return None
        except (OSError, ValueError, KeyError, TypeError) as e:
            # unreadable entries are recomputed and overwritten
            self.logger.warning(f"Ignoring corrupt cache entry {path.name}: {e}")
            self.misses += 1
            return None
        self.hits += 1
        self.logger.debug(f"Cache hit {path.name}")
        return series

    def put(self, node: Union[Node, str], order: int, series: QSeries) -> None:
        if not self.enabled:
            return
        path = self.path_for(node, order)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, temp_name = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as f:
                    json.dump(series.to_json_obj(), f, sort_keys=True)
                os.replace(temp_name, path)
            except BaseException:
                Path(temp_name).unlink(missing_ok=True)
                raise
        except OSError as e:
            self.logger.warning(f"Could not write cache entry {path.name}: {e}")
            return
        self.logger.debug(f"Cached {path.name}")

    def clear(self) -> int:
        """Delete every cache entry; returns the number of files removed"""
        if not self.directory.exists():
            return 0
        removed = 0
        for path in self.directory.glob("*.json"):
            path.unlink(missing_ok=True)
            removed += 1
        self.logger.info(f"Removed {removed} cache entries from {self.directory}")
        return removed
