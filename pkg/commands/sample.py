import csv
import io
from argparse import Namespace
from pathlib import Path

import numpy as np

from transport.errors import ConfigError, ParseError
from transport.probcore import make_rng
from transport.stack import LayerStack, stack_posterior_sample, stack_quantiles
from utils import write_text_atomic

from .model_file import read_model

QUANTILE_PROBS = (0.025, 0.5, 0.975)


def parse_grid(spec: str) -> np.ndarray:
    """``start,stop,count`` -> evenly spaced inputs."""
    try:
        start, stop, count = spec.split(",")
        return np.linspace(float(start), float(stop), int(count))
    except ValueError as err:
        raise ParseError(f"grid must be 'start,stop,count', got {spec!r}") from err


def read_inputs(path: str) -> np.ndarray:
    """First column of a CSV with a header row."""
    source = Path(path)
    if not source.is_file():
        raise ParseError(f"Inputs file not found: {source}")
    rows = list(csv.reader(io.StringIO(source.read_text(encoding="utf-8"))))
    values = []
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            values.append(float(row[0]))
        except ValueError as err:
            raise ParseError(f"{source}: line {line}: {err}") from err
    return np.array(values)


def format_samples(t_bar: np.ndarray, samples: np.ndarray) -> str:
    lines = ["t,sample_id,value"]
    for k, path in enumerate(samples):
        lines.extend(f"{ti:.17g},{k},{v:.17g}" for ti, v in zip(t_bar, path))
    return "\n".join(lines) + "\n"


def format_quantiles(table) -> str:
    lines = ["t,mean,q025,q50,q975"]
    columns = [table.column(p) for p in QUANTILE_PROBS]
    for i, ti in enumerate(table.inputs):
        cells = [f"{ti:.17g}", f"{table.mean[i]:.17g}"] + [f"{c[i]:.17g}" for c in columns]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def run_sample(args: Namespace) -> int:
    if args.n < 1:
        raise ConfigError(f"--n must be positive, got {args.n}")
    model = read_model(args.model)
    if args.inputs:
        t_bar = read_inputs(args.inputs)
    elif args.grid:
        t_bar = parse_grid(args.grid)
    else:
        raise ConfigError("give prediction inputs with --inputs or --grid")

    stack = LayerStack.from_config(model.config)
    draws = stack_posterior_sample(
        stack, model.t, model.y, t_bar, args.n, make_rng(args.seed), seed=args.seed, model_hash=model.hash
    )
    table = stack_quantiles(draws, QUANTILE_PROBS)

    out = Path(args.out)
    quantiles = Path(args.quantiles) if args.quantiles else out.with_name(f"{out.stem}_quantiles.csv")
    write_text_atomic(out, format_samples(draws.inputs, draws.samples))
    write_text_atomic(quantiles, format_quantiles(table))
    print(f"{draws.size} samples at {t_bar.size} inputs -> {out}, {quantiles}")
    return 0
