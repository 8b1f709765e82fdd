#!/usr/bin/env python3
"""
Convergence studies: one ErrorReport per (eps, p), a least-squares rate
fit per eps and the robustness ratio of the fitted rates.

Classes:
    - StudyConfig: Validated study parameters.
    - StudyResult: Rows, fits and robustness ratio.

Functions:
    - convergence_study: Runs a study.
    - fit_rate: log(error) against p.
    - robustness_ratio: max/min of the fitted rates.
    - write_csv: CSV table with the frozen columns.
"""
import csv
import logging
import math
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Any, Dict, Iterable, List, Optional, TextIO, Tuple

import numpy as np

from api.v1.services.fem_service import (galerkin_solve, gl_interpolant,
                                         hp_reference, hp_reference_gap,
                                         sbl_mesh)
from api.v1.services.norms_service import error_norms, exp_layer_errors
from api.v1.services.reference_service import reference_solution
from api.v1.services.relu_service import (exp_interpolant, exp_relu_net,
                                          pw_poly_relu_net)
from api.v1.services.snn_service import convert, simulate, verify_equivalence
from api.v1.services.solution_service import boundary_layer_net, solution_net
from api.v1.utils.schema_utils import STUDY_SCHEMA, validate
from config import Config
from models.error_report import CSV_COLUMNS, ErrorReport, Method, RateFit
from models.errors import (ConfigError, UnsupportedProblemError,
                           UnsupportedReferenceError)
from models.network import Network
from models.piecewise_polynomial import PiecewisePolynomial
from models.problem import BvpProblem
from models.spiking_network import RescaleParams, SpikingNetwork

logger = logging.getLogger(__name__)


@dataclass
class StudyConfig:
    """
    Parameters of a convergence study.

    Attributes:
        method (Method): What is measured.
        p_values (list): Degrees, in any order.
        epsilons (list): Perturbation parameters.
        problem (dict): Declarative problem without epsilon.
        kappa, beta (float): Mesh and tolerance parameters.
        norm (str): Error the rate is fitted to.
        samples (int): Extra sup-norm sample points.
        exact_boundary (bool): Passed to solution_net.
        seed (int): Seed of the random SNN check points.
    """
    method: Method
    p_values: List[int]
    epsilons: List[float]
    problem: Dict[str, Any] = field(default_factory=dict)
    kappa: float = Config.DEFAULT_KAPPA
    beta: float = Config.DEFAULT_BETA
    norm: str = "balanced"
    samples: int = Config.LINF_SAMPLES
    exact_boundary: bool = False
    seed: int = Config.DEFAULT_SEED

    @classmethod
    def from_json(cls, data: Dict[str, Any],
                  seed: Optional[int] = None) -> "StudyConfig":
        """
        Validates a study config document.

        Raises:
            ConfigError: On schema violations, unknown methods or a
                method that cannot handle the problem.
        """
        validate(data, STUDY_SCHEMA)
        config = cls(Method.from_str(data["method"]),
                     [int(p) for p in data["p"]],
                     [float(e) for e in data["epsilon"]],
                     dict(data.get("problem", {})),
                     float(data.get("kappa", Config.DEFAULT_KAPPA)),
                     float(data.get("beta", Config.DEFAULT_BETA)),
                     data.get("norm", "balanced"),
                     int(data.get("samples", Config.LINF_SAMPLES)),
                     bool(data.get("exact_boundary", False)),
                     Config.DEFAULT_SEED if seed is None else int(seed))
        config.check_compatible()
        return config

    def problem_at(self, epsilon: float) -> BvpProblem:
        return BvpProblem.from_json({**self.problem, "epsilon": epsilon})

    def check_compatible(self) -> None:
        """
        Raises:
            ConfigError: If the problem is invalid, or tanh/sigmoid is
                asked for a problem without a closed-form solution.
        """
        problem = self.problem_at(1.0)
        if self.method in (Method.TANH, Method.SIGMOID):
            try:
                reference_solution(problem)
            except (UnsupportedProblemError, UnsupportedReferenceError) as err:
                raise ConfigError(
                    f"Method {self.method.value} needs constant b and a "
                    f"closed-form source: {err}") from err

    def to_json(self) -> Dict[str, Any]:
        return {"method": self.method.value, "p": self.p_values,
                "epsilon": self.epsilons, "problem": self.problem,
                "kappa": self.kappa, "beta": self.beta, "norm": self.norm,
                "samples": self.samples,
                "exact_boundary": self.exact_boundary}


@dataclass
class StudyResult:
    """Output of convergence_study."""
    config: StudyConfig
    rows: List[ErrorReport] = field(default_factory=list)
    fits: List[RateFit] = field(default_factory=list)
    robustness: Optional[float] = None

    @property
    def flagged(self) -> bool:
        return any(row.flagged for row in self.rows)

    def to_json(self) -> Dict[str, Any]:
        return {"config": self.config.to_json(),
                "rows": [row.to_json() for row in self.rows],
                "fits": [fit.to_json() for fit in self.fits],
                "robustness": self.robustness,
                "flagged": self.flagged}


class _MinusLayer:
    """e^{-(1+x)/eps} with its derivative."""

    def __init__(self, epsilon: float) -> None:
        self.epsilon = epsilon

    def evaluate(self, x: Any) -> Tuple[np.ndarray, np.ndarray]:
        value = np.exp(-(1.0 + np.asarray(x, dtype=float)) / self.epsilon)
        return value, -value / self.epsilon


class _Pulled:
    """x -> v(2x - 1) for a piecewise polynomial v on (-1, 1)."""

    def __init__(self, v: PiecewisePolynomial) -> None:
        self.v = v

    def evaluate(self, x: Any) -> Tuple[np.ndarray, np.ndarray]:
        value, deriv = self.v.evaluate(2.0 * np.asarray(x, dtype=float) - 1.0)
        return value, 2.0 * deriv


class _SpikingEvaluator:
    """
    Values from the simulated spiking network. Derivatives come from the
    ReLU network it was converted from, which realizes the same function.
    """

    def __init__(self, net: Network, snn: SpikingNetwork) -> None:
        self.net, self.snn = net, snn

    def evaluate(self, x: Any) -> Tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float).reshape(-1, 1)
        values = simulate(self.snn, self.snn.encode(x))[:, 0]
        return values, self.net.scalar(x[:, 0])[1]


def _reference(problem: BvpProblem, p: int, kappa: float
               ) -> Tuple[Any, Dict[str, Any]]:
    """Closed form when available, otherwise the hp surrogate."""
    try:
        return reference_solution(problem), {}
    except (UnsupportedReferenceError, UnsupportedProblemError):
        gap = hp_reference_gap(problem, p, kappa)
        logger.info("Using the hp reference at eps=%.3e p=%d (gap %.3e)",
                    problem.epsilon, p, gap)
        return hp_reference(problem, p, kappa), {"reference_gap": gap}


def _measure(config: StudyConfig, p: int, epsilon: float) -> ErrorReport:
    method = config.method
    start = time.perf_counter()
    extra: Dict[str, Any] = {}
    depth = size = 0
    if method is Method.RELU_EXP:
        net = exp_relu_net(epsilon, config.kappa, p, config.beta)
        v = exp_interpolant(epsilon, config.kappa, p)
        errors = exp_layer_errors(net, epsilon, config.samples,
                                  breakpoints=0.5 * (v.mesh.nodes + 1.0),
                                  surrogate=_Pulled(v))
        extra["weighted_h1"] = errors.pop("weighted_h1")
        depth, size = net.depth, net.size
    elif method is Method.TANH_EXP:
        net = boundary_layer_net("tanh", epsilon, 1.0, "-", p, config.beta)
        errors = error_norms(net, _MinusLayer(epsilon),
                             BvpProblem(epsilon), samples=config.samples)
        depth, size = net.depth, net.size
    else:
        problem = config.problem_at(epsilon)
        reference, extra = _reference(problem, p, config.kappa)
        mesh = sbl_mesh(config.kappa, p, epsilon)
        breakpoints = mesh.nodes
        surrogate = None
        if method is Method.FEM:
            approx = galerkin_solve(problem, mesh, p)
        elif method is Method.FEM_INTERP:
            approx = gl_interpolant(reference, mesh, p)
        elif method in (Method.RELU, Method.SNN):
            surrogate = galerkin_solve(problem, mesh, p)
            approx, _ = pw_poly_relu_net(surrogate,
                                         math.exp(-config.beta * p))
            depth, size = approx.depth, approx.size
            if method is Method.SNN:
                snn = convert(approx, RescaleParams(), config.seed)
                check = verify_equivalence(approx, snn, 1000, config.seed)
                extra["snn_max_rel"] = check.max_rel
                approx = _SpikingEvaluator(approx, snn)
                depth, size = snn.depth, snn.size
        else:
            approx = solution_net(method.value, problem, p, config.kappa,
                                  config.beta, config.exact_boundary)
            depth, size = approx.depth, approx.size
            breakpoints = None
        errors = error_norms(approx, reference, problem, breakpoints,
                             config.samples, surrogate=surrogate)
    walltime = 1000.0 * (time.perf_counter() - start)
    row = ErrorReport(method.value, p, epsilon, errors["l2"],
                      errors["h1_semi"], errors["linf"], errors["energy"],
                      errors["balanced"], depth, size, walltime,
                      errors["w1inf"], errors["flagged"], extra)
    logger.info("%s eps=%.3e p=%d %s=%.3e (%.0f ms)", method.value, epsilon,
                p, config.norm, getattr(row, config.norm), walltime)
    return row


def _measure_task(task: Tuple[Dict[str, Any], int, int, float]
                  ) -> ErrorReport:
    data, seed, p, epsilon = task
    return _measure(StudyConfig.from_json(data, seed), p, epsilon)


def fit_rate(epsilon: float, rows: Iterable[ErrorReport],
             norm: str = "balanced") -> RateFit:
    """
    Least-squares fit log(error) = intercept - rate p over the rows whose
    error is above Config.RATE_FLOOR. Fewer than two such rows give a fit
    with rate None.
    """
    points = [(row.p, getattr(row, norm)) for row in rows
              if getattr(row, norm) > Config.RATE_FLOOR]
    p_values = [p for p, _ in points]
    if len(set(p_values)) < 2:
        return RateFit(epsilon, None, None, None, p_values)
    p = np.array(p_values, dtype=float)
    log_err = np.log([err for _, err in points])
    slope, intercept = np.polyfit(p, log_err, 1)
    residual = float(np.sqrt(np.mean((intercept + slope * p - log_err) ** 2)))
    return RateFit(epsilon, float(-slope), float(intercept), residual,
                   p_values)


def robustness_ratio(fits: Iterable[RateFit]) -> Optional[float]:
    """max/min fitted rate, or None unless every rate is positive."""
    rates = [fit.rate for fit in fits]
    if not rates or any(rate is None or rate <= 0 for rate in rates):
        return None
    return max(rates) / min(rates)


def convergence_study(config: "StudyConfig | Dict[str, Any]",
                      jobs: Optional[int] = None,
                      seed: Optional[int] = None) -> StudyResult:
    """
    Measures config.method for every (eps, p).

    Rows are sorted by eps, then p, whatever the number of workers.

    Args:
        config: StudyConfig or a config document.
        jobs (int, optional): Worker processes, Config.DEFAULT_JOBS.
        seed (int, optional): Seed of random check points.

    Raises:
        ConfigError: If the config document is invalid.
    """
    if not isinstance(config, StudyConfig):
        config = StudyConfig.from_json(config, seed)
    jobs = Config.DEFAULT_JOBS if jobs is None else jobs
    grid = sorted((eps, p) for eps in set(config.epsilons)
                  for p in set(config.p_values))
    if jobs > 1 and len(grid) > 1:
        tasks = [(config.to_json(), config.seed, p, eps) for eps, p in grid]
        with Pool(min(jobs, len(tasks))) as pool:
            rows = pool.map(_measure_task, tasks)
    else:
        rows = [_measure(config, p, eps) for eps, p in grid]
    fits = [fit_rate(eps, [row for row in rows if row.epsilon == eps],
                     config.norm)
            for eps in sorted(set(config.epsilons))] if rows else []
    result = StudyResult(config, rows, fits, robustness_ratio(fits))
    if result.flagged:
        logger.warning("%d of %d rows flagged by the quadrature check",
                       sum(row.flagged for row in rows), len(rows))
    return result


def write_csv(result: StudyResult, stream: TextIO) -> None:
    """Header plus one line per row, columns exactly CSV_COLUMNS."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in result.rows:
        writer.writerow([value if not isinstance(value, float)
                         else repr(value) for value in row.csv_row()])
