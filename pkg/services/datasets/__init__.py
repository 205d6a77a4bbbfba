import asyncio
import csv
import hashlib
import io
from collections import defaultdict
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import aiohttp
import numpy as np

from config.logger import logger
from config.settings import settings
from transport.errors import DownloadError, ParseError
from utils import format_series, parse_series, write_text_atomic

from .types import DatasetInfo, DatasetSpec

DATA_DIR = Path(__file__).parent / "data"
HEART_STRIDE = 4
HEART_SPACING = 0.5
TB3MS_FIRST, TB3MS_LAST = (1959, 1), (2009, 3)

DATASETS: Dict[str, DatasetSpec] = {
    "sunspots": DatasetSpec(
        name="sunspots",
        url="https://raw.githubusercontent.com/statsmodels/statsmodels/main/statsmodels/datasets/sunspots/sunspots.csv",
        description="Yearly sunspot numbers 1700-2008",
        rows=309,
        bundled="sunspots.csv",
    ),
    "heart": DatasetSpec(
        name="heart",
        url="http://ecg.mit.edu/time-series/hr.11839",
        description="Instantaneous heart rate, every 4th of 1800 half-second readings",
        rows=450,
    ),
    "tb3ms": DatasetSpec(
        name="tb3ms",
        url="https://fred.stlouisfed.org/graph/fredgraph.csv?id=TB3MS",
        description="3-Month Treasury Bill rate, quarterly averages 1959Q1-2009Q3",
        rows=203,
    ),
}

Series = Tuple[np.ndarray, np.ndarray]


def parse_sunspots(text: str) -> Series:
    rows = list(csv.DictReader(io.StringIO(text)))
    pairs = [(float(r["YEAR"]), float(r["SUNACTIVITY"])) for r in rows if 1700 <= float(r["YEAR"]) <= 2008]
    return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])


def parse_heart(text: str) -> Series:
    values = np.array([float(tok) for tok in text.split()])[::HEART_STRIDE]
    return HEART_STRIDE * HEART_SPACING * np.arange(values.size), values


def parse_tb3ms(text: str) -> Series:
    """Quarterly means of the monthly series; t is the year plus the quarter's start fraction."""
    reader = csv.reader(io.StringIO(text))
    next(reader, None)
    quarters: Dict[Tuple[int, int], List[float]] = defaultdict(list)
    for row in reader:
        if len(row) < 2 or row[1].strip() in ("", "."):
            continue
        year, month = int(row[0][:4]), int(row[0][5:7])
        key = (year, (month - 1) // 3 + 1)
        if TB3MS_FIRST <= key <= TB3MS_LAST:
            quarters[key].append(float(row[1]))
    keys = sorted(quarters)
    t = np.array([year + (q - 1) / 4 for year, q in keys])
    return t, np.array([np.mean(quarters[k]) for k in keys])


PARSERS: Dict[str, Callable[[str], Series]] = {
    "sunspots": parse_sunspots,
    "heart": parse_heart,
    "tb3ms": parse_tb3ms,
}


class DatasetFetcher:
    """
    Downloads the benchmark series and keeps canonical ``t,y`` copies in a cache directory.

    A cached copy is used when present; sunspots falls back to the bundled CSV
    when the download fails.
    """

    def __init__(
        self,
        cache_dir: Optional[Path] = None,
        timeout: Optional[float] = None,
        session: Optional[aiohttp.ClientSession] = None,
    ):
        self.cache_dir = Path(cache_dir or settings.TP_CACHE_DIR)
        self.timeout = timeout or settings.DOWNLOAD_TIMEOUT
        self.session = session

    def cache_path(self, name: str) -> Path:
        return self.cache_dir / f"{name}.csv"

    async def _download(self, url: str) -> str:
        timeout = aiohttp.ClientTimeout(total=self.timeout)
        if self.session is not None:
            async with self.session.get(url, timeout=timeout) as response:
                response.raise_for_status()
                return await response.text()
        async with aiohttp.ClientSession() as session:
            async with session.get(url, timeout=timeout) as response:
                response.raise_for_status()
                return await response.text()

    def _store(self, spec: DatasetSpec, text: str, origin: str, out: Optional[Path]) -> DatasetInfo:
        t, y = parse_series(text, spec.name)
        if t.size != spec.rows:
            raise ParseError(f"{spec.name}: expected {spec.rows} rows, got {t.size}")
        cache = self.cache_path(spec.name)
        if origin != "cache":
            write_text_atomic(cache, text)
        path = Path(out) if out is not None else cache
        if out is not None:
            write_text_atomic(path, text)
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        logger.info(f"{spec.name}: {t.size} rows from {origin} -> {path} (sha256 {digest[:12]})")
        return DatasetInfo(name=spec.name, path=path, source=spec.url, rows=int(t.size), sha256=digest, origin=origin)

    async def fetch(self, name: str, out: Optional[Path] = None, refresh: bool = False) -> DatasetInfo:
        spec = DATASETS.get(name)
        if spec is None:
            raise ParseError(f"Unknown dataset {name!r}; choose from {sorted(DATASETS)}")
        cache = self.cache_path(name)
        if cache.is_file() and not refresh:
            return self._store(spec, cache.read_text(encoding="utf-8"), "cache", out)

        try:
            raw = await self._download(spec.url)
            t, y = PARSERS[name](raw)
            return self._store(spec, format_series(t, y), "download", out)
        except (aiohttp.ClientError, asyncio.TimeoutError, ValueError, KeyError, ParseError) as err:
            if spec.bundled is None:
                raise DownloadError(
                    f"Could not fetch {name} from {spec.url} ({err}); place a 't,y' CSV at {cache} to use it offline"
                ) from err
            logger.warning(f"Download of {name} failed ({err}); using the bundled copy")
            text = (DATA_DIR / spec.bundled).read_text(encoding="utf-8")
            return self._store(spec, text, "bundled", out)

    async def fetch_many(
        self, names: Sequence[str], out_dir: Optional[Path] = None, refresh: bool = False
    ) -> List[DatasetInfo]:
        """Fetch several datasets concurrently, each written to ``out_dir/<name>.csv`` when given."""
        names = list(dict.fromkeys(names))
        return await asyncio.gather(
            *(self.fetch(n, Path(out_dir) / f"{n}.csv" if out_dir else None, refresh=refresh) for n in names)
        )


async def load_dataset(name_or_path: str) -> Tuple[str, np.ndarray, np.ndarray]:
    """A registered dataset name (fetched or cached) or a path to a ``t,y`` CSV."""
    if name_or_path in DATASETS:
        info = await DatasetFetcher().fetch(name_or_path)
        path = info.path
    else:
        path = Path(name_or_path)
        if not path.is_file():
            raise ParseError(f"Dataset {name_or_path!r} is neither a known name nor a file")
    t, y = parse_series(path.read_text(encoding="utf-8"), str(path))
    return path.stem, t, y


__all__ = [
    "DATASETS",
    "DatasetFetcher",
    "DatasetInfo",
    "DatasetSpec",
    "load_dataset",
    "parse_heart",
    "parse_sunspots",
    "parse_tb3ms",
]
