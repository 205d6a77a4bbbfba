from typing import Awaitable, Callable, Dict, Union
from argparse import Namespace

from .fit import run_fit
from .sample import run_sample
from .nll import run_nll
from .diagnose import run_diagnose
from .benchmark import run_benchmark_command
from .fetch import run_fetch

Command = Callable[[Namespace], Union[int, Awaitable[int]]]

COMMANDS: Dict[str, Command] = {
    "fit": run_fit,
    "sample": run_sample,
    "nll": run_nll,
    "diagnose": run_diagnose,
    "benchmark": run_benchmark_command,
    "fetch": run_fetch,
}

__all__ = ["COMMANDS", "Command"]
