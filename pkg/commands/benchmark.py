from argparse import Namespace

from services.datasets import load_dataset
from transport.experiments import run_benchmark
from transport.metrics import METRICS, format_table
from transport.types import MetricsReport
from transport.types.config import TrainConfig
from utils import json_parser, write_text_atomic


def format_metrics_csv(report: MetricsReport) -> str:
    lines = ["split,model," + ",".join(METRICS) + ",train_nll"]
    for row in report.splits:
        values = ",".join(f"{getattr(row, m):.17g}" for m in METRICS)
        lines.append(f"{row.split},{row.model},{values},{row.train_nll:.17g}")
    return "\n".join(lines) + "\n"


async def run_benchmark_command(args: Namespace) -> int:
    name, t, y = await load_dataset(args.dataset)
    train = TrainConfig.model_validate(json_parser(args.train)) if args.train else None
    report = await run_benchmark(
        name,
        t,
        y,
        models=[m.strip() for m in args.models.split(",") if m.strip()],
        splits=args.splits,
        train_frac=args.train_frac,
        samples=args.samples,
        seed=args.seed,
        train=train,
        max_workers=args.workers,
    )
    if args.out:
        write_text_atomic(args.out, format_metrics_csv(report))
    if args.report:
        write_text_atomic(args.report, report.model_dump_json(indent=2) + "\n")
    print(format_table(report))
    return 0
