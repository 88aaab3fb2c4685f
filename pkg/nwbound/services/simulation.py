"""
Simulation Monte Carlo par ensemble
Estime le biais réel E[m̂ₙ(x)] − m(x) en régénérant N jeux de données indépendants,
puis confronte ce biais aux bornes et à l'estimation de Rosenblatt.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from nwbound.config import settings
from nwbound.errors import ConfigError, DomainError
from nwbound.services.bounds import (
    BoundInput,
    RosenblattInput,
    bias_bound_bounded,
    bias_bound_unbounded,
    rosenblatt_estimate_additive,
)
from nwbound.services.designs import ProductDesign, as_product
from nwbound.services.estimator import Bandwidth, Dataset, nw_estimate_batch
from nwbound.services.geometry import BoxInterval, LipschitzSpec, contains

logger = logging.getLogger(__name__)

# ========================================
# CATALOGUE DES FONCTIONS DE TEST
# ========================================


@dataclass(frozen=True)
class TestFunction:
    """Fonction de régression 1-d avec dérivées analytiques et constantes de Lipschitz faibles"""

    __test__ = False  # pas une classe de test pytest

    name: str
    m: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    m_prime: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    m_double_prime: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    L_m: float
    M: Optional[float]
    domain: BoxInterval
    description: str = ""


def _logcosh60(x):
    x = np.asarray(x, dtype=float)
    # log cosh(u) = logaddexp(u, −u) − log 2, sans débordement pour |u| grand
    return (np.logaddexp(60.0 * x, -60.0 * x) - math.log(2.0)) / 60.0


def _logcosh60_second(x):
    t = np.tanh(60.0 * np.asarray(x, dtype=float))
    return 60.0 * (1.0 - t * t)


def test_function_catalog() -> List[TestFunction]:
    """Les quatre fonctions de régression des expériences"""
    real_line = BoxInterval.real_line()
    return [
        TestFunction(
            name="sin5",
            m=lambda x: np.sin(5.0 * np.asarray(x, dtype=float)),
            m_prime=lambda x: 5.0 * np.cos(5.0 * np.asarray(x, dtype=float)),
            m_double_prime=lambda x: -25.0 * np.sin(5.0 * np.asarray(x, dtype=float)),
            L_m=5.0,
            # oscillation sup|m(y) − m(z)| = 2, et non l'amplitude 1
            M=2.0,
            domain=real_line,
            description="sin(5x)",
        ),
        TestFunction(
            name="log",
            m=lambda x: np.log(np.asarray(x, dtype=float)),
            m_prime=lambda x: 1.0 / np.asarray(x, dtype=float),
            m_double_prime=lambda x: -1.0 / np.asarray(x, dtype=float) ** 2,
            L_m=1.0,
            M=None,
            domain=BoxInterval.from_bounds([1.0], [math.inf]),
            description="log x, x > 1",
        ),
        TestFunction(
            name="logcosh60",
            m=_logcosh60,
            m_prime=lambda x: np.tanh(60.0 * np.asarray(x, dtype=float)),
            m_double_prime=_logcosh60_second,
            L_m=1.0,
            M=None,
            domain=real_line,
            description="log cosh(60x) / 60",
        ),
        TestFunction(
            name="sqrt",
            m=lambda x: np.sqrt(np.asarray(x, dtype=float) ** 2 + 1.0),
            m_prime=lambda x: np.asarray(x, dtype=float) / np.sqrt(np.asarray(x, dtype=float) ** 2 + 1.0),
            m_double_prime=lambda x: (np.asarray(x, dtype=float) ** 2 + 1.0) ** -1.5,
            L_m=1.0,
            M=None,
            domain=real_line,
            description="sqrt(x² + 1)",
        ),
    ]


def get_test_function(name: str) -> TestFunction:
    for fn in test_function_catalog():
        if fn.name == name:
            return fn
    known = ", ".join(fn.name for fn in test_function_catalog())
    raise DomainError(f"fonction de régression inconnue '{name}' (connues : {known})")


def additive_regression(functions: Sequence[TestFunction]) -> Callable[[np.ndarray], np.ndarray]:
    """m(x) = Σₖ mₖ(xₖ) pour des points (k, d)"""

    def m(points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        total = np.zeros(points.shape[0])
        for k, fn in enumerate(functions):
            total = total + fn.m(points[:, k])
        return total

    return m


# ========================================
# CONFIGURATION ET RAPPORT
# ========================================


@dataclass
class ExperimentConfig:
    design: ProductDesign
    functions: List[TestFunction]
    h: Bandwidth
    grid: np.ndarray
    n: int = settings.DEFAULT_N
    N: int = settings.DEFAULT_ENSEMBLE
    noise_sigma: float = settings.DEFAULT_NOISE_SIGMA
    noise_slope: float = 0.0
    seed: int = 0

    def __post_init__(self):
        self.design = as_product(self.design)
        self.grid = np.atleast_2d(np.asarray(self.grid, dtype=float))
        d = self.design.dim
        if self.n < 100:
            raise ConfigError(f"n doit être ≥ 100 (reçu {self.n})", field="ensemble.n")
        if self.N < 2:
            raise ConfigError(f"N doit être ≥ 2 (reçu {self.N})", field="ensemble.N")
        if self.noise_sigma < 0.0 or self.noise_slope < 0.0:
            raise ConfigError("le bruit doit être positif", field="noise")
        if len(self.functions) != d:
            raise ConfigError(f"{len(self.functions)} fonctions pour un design de dimension {d}", field="regression.functions")
        if self.h.dim != d:
            raise ConfigError(f"{self.h.dim} bandwidths pour un design de dimension {d}", field="bandwidths.h")
        if self.grid.shape[1] != d:
            raise ConfigError(f"grille de dimension {self.grid.shape[1]} ≠ {d}", field="grid")
        support = self.design.support
        for point in self.grid:
            if not contains(support, point):
                raise ConfigError(f"le point {point.tolist()} sort du support {self.design.label}", field="grid")

    @property
    def regression(self) -> Callable[[np.ndarray], np.ndarray]:
        return additive_regression(self.functions)

    def noise_scale(self, points: np.ndarray) -> np.ndarray:
        """σ(x) = sigma + slope·‖x‖₁"""
        return self.noise_sigma + self.noise_slope * np.sum(np.abs(points), axis=1)


@dataclass
class BiasReport:
    """Une ligne par point de grille ; les bornes absentes valent None"""

    grid: np.ndarray
    m_true: np.ndarray
    m_hat_mean: np.ndarray
    empirical_bias: np.ndarray
    standard_error: np.ndarray
    bound_bounded: List[Optional[float]]
    bound_unbounded: List[Optional[float]]
    rosenblatt: np.ndarray
    design_density: np.ndarray
    failures: Dict[int, str] = field(default_factory=dict)

    @property
    def applicable_bound(self) -> List[Optional[float]]:
        """Borne M fini si disponible, sinon borne non bornée"""
        return [b if b is not None else u for b, u in zip(self.bound_bounded, self.bound_unbounded)]

    def __len__(self) -> int:
        return self.grid.shape[0]


# ========================================
# ENSEMBLE
# ========================================


def _member_estimates(config: ExperimentConfig, seed_seq: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    inputs = config.design.sample(config.n, rng)
    noise = rng.standard_normal(config.n) * config.noise_scale(inputs)
    outputs = config.regression(inputs) + noise
    data = Dataset(inputs, outputs)
    return nw_estimate_batch(data, config.grid, config.h, raise_on_empty=False)


def run_ensemble(
    config: ExperimentConfig,
    jobs: Optional[int] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> np.ndarray:
    """
    Estimations m̂_{n,j}(x) de forme (N, k)

    Le membre j utilise le j-ème enfant de SeedSequence(seed) : le résultat ne dépend
    ni du nombre de threads ni de l'ordre de complétion.
    """
    jobs = jobs or settings.JOBS
    children = np.random.SeedSequence(config.seed).spawn(config.N)
    estimates = np.empty((config.N, config.grid.shape[0]))
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        # map rend les résultats dans l'ordre des membres
        results = executor.map(lambda s: _member_estimates(config, s), children)
        for j, row in enumerate(results):
            estimates[j] = row
            logger.debug(f"Membre {j + 1}/{config.N} terminé")
            if progress is not None:
                progress(j + 1, config.N)
    return estimates


def _bounds_at(spec: LipschitzSpec, h: Bandwidth):
    bound_input = BoundInput(spec=spec, h=h)
    bounded = bias_bound_bounded(bound_input) if spec.is_bounded else None
    unbounded = bias_bound_unbounded(bound_input) if spec.boxes_coincide else None
    return bounded, unbounded


def _rosenblatt_at(config: ExperimentConfig, point: np.ndarray) -> float:
    inputs = [
        RosenblattInput(
            m_prime=fn.m_prime,
            m_double_prime=fn.m_double_prime,
            f=factor.pdf,
            f_prime=factor.pdf_prime,
            x=float(point[k]),
            h=float(config.h.h[k]),
        )
        for k, (fn, factor) in enumerate(zip(config.functions, config.design.factors))
    ]
    return float(rosenblatt_estimate_additive(inputs))


def empirical_bias(
    config: ExperimentConfig,
    jobs: Optional[int] = None,
    specs: Optional[Sequence[LipschitzSpec]] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> BiasReport:
    """
    Biais empirique par point de grille, avec erreur standard sd/√N

    Si specs est fourni (une LipschitzSpec par point), les deux bornes (M fini, non bornée)
    sont jointes au rapport. Un voisinage vide est consigné dans failures, sans lever.
    """
    k = config.grid.shape[0]
    if specs is not None and len(specs) != k:
        raise DomainError(f"{len(specs)} specs pour {k} points de grille")

    logger.info(
        f"🚀 Ensemble : {config.N} jeux de {config.n} points, {k} points de grille, design {config.design.label}"
    )
    estimates = run_ensemble(config, jobs=jobs, progress=progress)
    m_true = config.regression(config.grid)

    failures: Dict[int, str] = {}
    m_hat_mean = np.full(k, np.nan)
    standard_error = np.full(k, np.nan)
    for i in range(k):
        column = estimates[:, i]
        if np.any(np.isnan(column)):
            members = np.flatnonzero(np.isnan(column)).tolist()
            failures[i] = f"voisinage vide pour les membres {members}"
            logger.warning(f"⚠️ Point {config.grid[i].tolist()} : {failures[i]}")
            continue
        # moyenne centrée sur le premier membre : un ensemble constant donne exactement sa valeur
        ref = column[0]
        m_hat_mean[i] = ref + np.mean(column - ref)
        standard_error[i] = np.std(column, ddof=1) / math.sqrt(config.N)

    bound_bounded: List[Optional[float]] = [None] * k
    bound_unbounded: List[Optional[float]] = [None] * k
    if specs is not None:
        for i, spec in enumerate(specs):
            bound_bounded[i], bound_unbounded[i] = _bounds_at(spec, config.h)

    rosenblatt = np.array([_rosenblatt_at(config, point) for point in config.grid])
    report = BiasReport(
        grid=config.grid,
        m_true=m_true,
        m_hat_mean=m_hat_mean,
        empirical_bias=m_hat_mean - m_true,
        standard_error=standard_error,
        bound_bounded=bound_bounded,
        bound_unbounded=bound_unbounded,
        rosenblatt=rosenblatt,
        design_density=config.design.pdf(config.grid),
        failures=failures,
    )
    logger.info(f"✅ Ensemble terminé ({len(failures)} point(s) en échec)")
    return report
