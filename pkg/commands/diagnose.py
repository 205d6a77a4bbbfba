"""Tail-dependence report of a copula: closed form where one exists, rank estimates from pairs."""
from argparse import Namespace
from typing import Optional, Tuple

import numpy as np
from pydantic import TypeAdapter
from scipy import stats

from transport.errors import ConfigError
from transport.kernels import gram
from transport.layers import ArchimedeanLayer, TailSpec, empirical_tail_table, tail_dependence_coeffs
from transport.layers.elliptical import IDENTITY_NU_INV
from transport.layers.tail import ArchimedeanTail, GaussianTail, StudentTTail
from transport.probcore import make_rng
from transport.types import TailReport
from transport.types.config import ClaytonCopula, IndependenceCopula
from utils import json_parser, read_series

from .model_file import read_model


def tail_spec_from_model(path: str) -> TailSpec:
    """Bivariate copula of the model at its first two training inputs."""
    model = read_model(path)
    copula, cov = model.config.copula, model.config.covariance
    rho = 0.0
    if cov is not None and len(model.data.t) >= 2:
        K = gram(cov.effective_kernel(), model.t[:2], model.t[:2])
        rho = float(K[0, 1] / np.sqrt(K[0, 0] * K[1, 1]))
    if copula is None or copula.family == "gaussian":
        return GaussianTail(rho=rho)
    if copula.family == "student_t":
        if copula.nu_inv < IDENTITY_NU_INV:
            return GaussianTail(rho=rho)
        return StudentTTail(theta=1.0 / copula.nu_inv, rho=rho)
    if copula.family in ("independence", "clayton"):
        return ArchimedeanTail(generator=copula.family, theta=getattr(copula, "theta", 1.0))
    raise ConfigError(f"No tail report for copula family {copula.family!r}")


def simulate_pairs(spec: TailSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """(n, 2) draws whose ranks follow the bivariate copula."""
    if isinstance(spec, ArchimedeanTail):
        config = ClaytonCopula(theta=spec.theta) if spec.generator == "clayton" else IndependenceCopula()
        return ArchimedeanLayer(config).sample_copula(2, rng, n)
    shape = np.array([[1.0, spec.rho], [spec.rho, 1.0]])
    if isinstance(spec, StudentTTail):
        law = stats.multivariate_t(shape=shape, df=spec.theta, allow_singular=True)
    else:
        law = stats.multivariate_normal(cov=shape, allow_singular=True)
    return law.rvs(size=n, random_state=rng).reshape(n, 2)


def read_pairs(path: str) -> np.ndarray:
    # two-column CSV with the series header
    a, b = read_series(path, allow_duplicates=True)
    return np.column_stack([a, b])


def diagnose(spec: TailSpec, pairs: Optional[np.ndarray]) -> TailReport:
    closed: Optional[Tuple[float, float]] = tail_dependence_coeffs(spec)
    empirical = empirical_tail_table(pairs) if pairs is not None else {}
    name = spec.generator if isinstance(spec, ArchimedeanTail) else spec.kind
    return TailReport(
        copula=name, closed_form=closed, empirical=empirical, pairs=0 if pairs is None else int(pairs.shape[0])
    )


def run_diagnose(args: Namespace) -> int:
    if args.model:
        spec = tail_spec_from_model(args.model)
    elif args.copula:
        spec = TypeAdapter(TailSpec).validate_python(json_parser(args.copula))
    else:
        raise ConfigError("give --model or --copula")
    if args.pairs:
        pairs = read_pairs(args.pairs)
    elif args.n > 0:
        pairs = simulate_pairs(spec, args.n, make_rng(args.seed))
    else:
        pairs = None
    print(diagnose(spec, pairs).model_dump_json(indent=2))
    return 0
