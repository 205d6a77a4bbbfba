from argparse import Namespace

from transport.stack import LayerStack, stack_nll
from utils import read_series

from .model_file import read_model


def run_nll(args: Namespace) -> int:
    model = read_model(args.model)
    if args.data:
        t, y = read_series(args.data, allow_duplicates=args.allow_duplicates)
    else:
        t, y = model.t, model.y
    result = stack_nll(LayerStack.from_config(model.config), t, y)
    print(f"{result.value:.9f}")
    if result.reason:
        print(f"# {result.reason}")
    return 0
