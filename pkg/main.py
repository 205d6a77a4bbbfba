"""Command-line entry point: ``python main.py <command>`` (installed as ``tp``)."""
import argparse
import asyncio
import inspect
import json
import sys
from typing import List, Optional

from pydantic import ValidationError

from commands import COMMANDS
from config.logger import logger
from transport.errors import ConfigError, ParseError, TransportError
from transport.experiments import DEFAULT_SAMPLES, DEFAULT_TRAIN_FRAC

EXIT_FAILURE = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tp", description="Deep transport processes for time-series regression")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="train a stack configuration on a t,y series")
    fit.add_argument("--data", required=True, help="CSV with header t,y")
    fit.add_argument("--config", required=True, help="stack configuration (JSON file or inline JSON)")
    fit.add_argument("--out", required=True, help="model file to write")
    fit.add_argument("--report", help="also write the fit report here")
    fit.add_argument("--seed", type=int, default=None, help="overrides train.seed")
    fit.add_argument("--allow-duplicates", action="store_true")

    sample = sub.add_parser("sample", help="posterior samples and quantile bands at new inputs")
    sample.add_argument("--model", required=True)
    inputs = sample.add_mutually_exclusive_group()
    inputs.add_argument("--inputs", help="CSV whose first column holds the prediction inputs")
    inputs.add_argument("--grid", help="start,stop,count")
    sample.add_argument("--n", type=int, default=1000, help="number of sample paths")
    sample.add_argument("--out", required=True, help="samples CSV (t,sample_id,value)")
    sample.add_argument("--quantiles", help="quantile CSV (default: <out>_quantiles.csv)")
    sample.add_argument("--seed", type=int, default=0)

    nll = sub.add_parser("nll", help="print the full-data NLL of a model")
    nll.add_argument("--model", required=True)
    nll.add_argument("--data", help="series to score (default: the model's training data)")
    nll.add_argument("--allow-duplicates", action="store_true")

    diagnose = sub.add_parser("diagnose", help="tail-dependence report of a copula")
    source = diagnose.add_mutually_exclusive_group(required=True)
    source.add_argument("--model")
    source.add_argument("--copula", help='tail spec, e.g. {"kind": "student_t", "theta": 1, "rho": 0}')
    diagnose.add_argument("--pairs", help="CSV of observed pairs (header t,y)")
    diagnose.add_argument("--n", type=int, default=100_000, help="simulated pairs when --pairs is absent; 0 skips")
    diagnose.add_argument("--seed", type=int, default=0)

    bench = sub.add_parser("benchmark", help="random-split WGP / TGP comparison")
    bench.add_argument("--dataset", required=True, help="sunspots | heart | tb3ms | path to a t,y CSV")
    bench.add_argument("--models", default="wgp,tgp")
    bench.add_argument("--splits", type=int, default=10)
    bench.add_argument("--train-frac", type=float, default=DEFAULT_TRAIN_FRAC)
    bench.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--train", help="TrainConfig overrides (JSON file or inline JSON)")
    bench.add_argument("--workers", type=int, default=None)
    bench.add_argument("--out", help="per-split metrics CSV")
    bench.add_argument("--report", help="full metrics report JSON")

    fetch = sub.add_parser("fetch", help="download benchmark datasets as t,y CSVs")
    fetch.add_argument("--name", required=True, nargs="+", choices=["sunspots", "heart", "tb3ms"])
    target = fetch.add_mutually_exclusive_group()
    target.add_argument("--out", help="where to write the CSV of a single dataset (default: the cache copy only)")
    target.add_argument("--out-dir", help="directory receiving <name>.csv for every dataset")
    fetch.add_argument("--cache-dir", help="overrides TP_CACHE_DIR")
    fetch.add_argument("--refresh", action="store_true", help="ignore the cached copy")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    command = COMMANDS[args.command]
    try:
        if inspect.iscoroutinefunction(command):
            return asyncio.run(command(args))
        return command(args)
    except TransportError as e:
        logger.error(f"{args.command}: {e}", exc_info=False)
        return e.exit_code
    except ValidationError as e:
        logger.error(f"{args.command}: invalid configuration: {e}", exc_info=False)
        return ConfigError.exit_code
    except (FileNotFoundError, json.JSONDecodeError) as e:
        logger.error(f"{args.command}: {e}", exc_info=False)
        return ParseError.exit_code
    except Exception as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
