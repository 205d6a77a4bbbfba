"""Exception hierarchy. ``exit_code`` is what the CLI returns for each class."""
from typing import Optional, Sequence


class TransportError(Exception):
    exit_code = 1


class ParseError(TransportError):
    exit_code = 2


class ConfigError(TransportError):
    exit_code = 3


class NumericalError(TransportError):
    exit_code = 4


class NotPositiveDefiniteError(NumericalError):
    def __init__(self, minor: int, jitter: float):
        self.minor = minor
        self.jitter = jitter
        super().__init__(
            f"Matrix not positive definite: leading minor of order {minor} fails "
            f"even with jitter {jitter:.1e}"
        )


class QuadratureError(NumericalError):
    pass


class SliceSamplingError(NumericalError):
    pass


class SingularPointError(NumericalError):
    pass


class FitError(NumericalError):
    def __init__(self, msg: str, last_params: Optional[Sequence[float]] = None):
        super().__init__(msg)
        self.last_params = None if last_params is None else list(last_params)


class DomainError(TransportError, ValueError):
    exit_code = 4

    def __init__(self, msg: str, coordinate: Optional[int] = None):
        self.coordinate = coordinate
        if coordinate is not None:
            msg = f"{msg} (coordinate {coordinate})"
        super().__init__(msg)


class DownloadError(TransportError):
    exit_code = 5
