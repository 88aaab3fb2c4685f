"""
Résolution d'un fichier d'expérience en objets de calcul
Design produit, fonctions du catalogue, grille et une LipschitzSpec par point de grille
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from nwbound.errors import ConfigError, DomainError
from nwbound.schemas import ExperimentFile, LipschitzSection
from nwbound.services.designs import ProductDesign, make_design, make_product_design
from nwbound.services.estimator import Bandwidth
from nwbound.services.geometry import BoxInterval, LipschitzSpec, contains
from nwbound.services.simulation import ExperimentConfig, TestFunction, get_test_function

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResolvedConstants:
    """Constantes et boîtes absolues partagées par tous les points de grille"""

    L_f: float
    L_m: float
    M: Optional[float]
    upsilon: BoxInterval
    delta: BoxInterval
    gamma: BoxInterval


@dataclass
class Scenario:
    name: str
    config: ExperimentConfig
    constants: ResolvedConstants
    specs: List[LipschitzSpec]
    allow_partial: bool = False


# ========================================
# BRIQUES
# ========================================


def build_design(model: ExperimentFile) -> ProductDesign:
    factors = []
    for factor in model.design.factor_list():
        try:
            factors.append(make_design(factor.kind, **factor.params))
        except DomainError as e:
            raise ConfigError(str(e), field="design") from e
    return make_product_design(factors)


def build_functions(model: ExperimentFile) -> List[TestFunction]:
    try:
        return [get_test_function(name) for name in model.regression.functions]
    except DomainError as e:
        raise ConfigError(str(e), field="regression.functions") from e


def build_grid(model: ExperimentFile) -> np.ndarray:
    """Produit cartésien des axes, premier axe le plus lent ; forme (k, d)"""
    axes = [np.linspace(lo, hi, count) for lo, hi, count in zip(model.grid.lower, model.grid.upper, model.grid.points)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def _box_from_config(value, fallback: BoxInterval, field: str) -> BoxInterval:
    if isinstance(value, str):
        return fallback
    try:
        return BoxInterval.from_bounds([lo for lo, _ in value], [hi for _, hi in value])
    except ValueError as e:
        raise ConfigError(str(e), field=field) from e


def resolve_constants(
    lipschitz: LipschitzSection, design: ProductDesign, functions: List[TestFunction]
) -> ResolvedConstants:
    """Υ = support ∩ domaine de m ; D et G d'après la config ; 'auto' délégué aux catalogues"""
    domain = BoxInterval(
        lower=tuple(fn.domain.lower[0] for fn in functions),
        upper=tuple(fn.domain.upper[0] for fn in functions),
    )
    try:
        upsilon = design.support.intersect(domain)
    except DomainError as e:
        raise ConfigError(f"le support du design ne rencontre pas le domaine de m : {e}", field="regression.functions") from e

    delta = _box_from_config(lipschitz.delta, upsilon, "lipschitz.delta")
    if not delta.is_subset_of(upsilon):
        raise ConfigError("D doit être inclus dans Υ = support ∩ domaine de m", field="lipschitz.delta")
    if lipschitz.gamma == "delta":
        gamma = delta
    else:
        gamma = _box_from_config(lipschitz.gamma, upsilon, "lipschitz.gamma")
    if not gamma.is_subset_of(delta):
        raise ConfigError("G doit être inclus dans D", field="lipschitz.gamma")

    if lipschitz.L_f == "auto":
        L_f = design.log_lipschitz_constant(delta)
    else:
        L_f = float(lipschitz.L_f)

    L_m = sum(fn.L_m for fn in functions) if lipschitz.L_m == "auto" else float(lipschitz.L_m)

    if lipschitz.M == "unbounded":
        M = None
    elif lipschitz.M == "auto":
        oscillations = [fn.M for fn in functions]
        M = None if any(v is None for v in oscillations) else math.fsum(oscillations)
    else:
        M = float(lipschitz.M)

    return ResolvedConstants(L_f=L_f, L_m=L_m, M=M, upsilon=upsilon, delta=delta, gamma=gamma)


def spec_at(point, constants: ResolvedConstants) -> LipschitzSpec:
    if not contains(constants.gamma, point):
        raise ConfigError(f"le point {list(point)} doit être intérieur à G", field="grid")
    return LipschitzSpec.from_absolute(
        x=point,
        L_m=constants.L_m,
        L_f=constants.L_f,
        M=constants.M,
        upsilon=constants.upsilon,
        delta=constants.delta,
        gamma=constants.gamma,
    )


# ========================================
# ASSEMBLAGE
# ========================================


def build_scenario(model: ExperimentFile) -> Scenario:
    """Config validée → ExperimentConfig + specs ; toute incohérence lève ConfigError"""
    design = build_design(model)
    functions = build_functions(model)
    grid = build_grid(model)
    try:
        h = Bandwidth(model.bandwidths.h)
    except DomainError as e:
        raise ConfigError(str(e), field="bandwidths.h") from e

    config = ExperimentConfig(
        design=design,
        functions=functions,
        h=h,
        grid=grid,
        n=model.ensemble.n,
        N=model.ensemble.N,
        noise_sigma=model.noise.sigma,
        noise_slope=model.noise.slope,
        seed=model.seed,
    )
    constants = resolve_constants(model.lipschitz, design, functions)
    specs = [spec_at(tuple(point), constants) for point in grid]
    logger.info(
        f"✅ Scénario {model.name} : L_f={constants.L_f:g}, L_m={constants.L_m:g}, "
        f"M={'non borné' if constants.M is None else f'{constants.M:g}'}, {len(specs)} points"
    )
    return Scenario(
        name=model.name,
        config=config,
        constants=constants,
        specs=specs,
        allow_partial=model.allow_partial,
    )
