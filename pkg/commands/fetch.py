from argparse import Namespace
from pathlib import Path

from services.datasets import DatasetFetcher
from transport.errors import ConfigError


async def run_fetch(args: Namespace) -> int:
    fetcher = DatasetFetcher(cache_dir=Path(args.cache_dir) if args.cache_dir else None)
    if args.out:
        if len(set(args.name)) > 1:
            raise ConfigError("--out takes a single dataset; use --out-dir for several")
        infos = [await fetcher.fetch(args.name[0], Path(args.out), refresh=args.refresh)]
    else:
        infos = await fetcher.fetch_many(args.name, Path(args.out_dir) if args.out_dir else None, refresh=args.refresh)
    for info in infos:
        print(f"{info.name}: {info.rows} rows -> {info.path} ({info.origin}, sha256 {info.sha256})")
    return 0
