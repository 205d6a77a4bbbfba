from argparse import Namespace

from config.logger import logger
from transport.trainer import fit
from utils import read_series, write_text_atomic

from .model_file import build_model_file, read_stack_config, write_model


def run_fit(args: Namespace) -> int:
    t, y = read_series(args.data, allow_duplicates=args.allow_duplicates)
    config = read_stack_config(args.config)
    result = fit(config, t, y, seed=args.seed)
    model = build_model_file(result.config, t, y, result.report)
    write_model(args.out, model)
    report = result.report.model_dump_json(indent=2)
    if args.report:
        write_text_atomic(args.report, report + "\n")
    print(report)
    logger.info(f"Model written to {args.out} (hash {model.hash[:12]})")
    return 0
