"""
Catalogue des designs aléatoires (Laplace, Cauchy, Uniforme, Pareto, Normale)
Densités, pentes de log-densité, échantillonneurs et constantes log-Lipschitz faibles
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence

import numpy as np
from scipy import stats

from nwbound.errors import DomainError
from nwbound.services.geometry import BoxInterval

logger = logging.getLogger(__name__)

# Plus petit uniforme tiré : ppf(0) vaut −∞ pour les supports non bornés
_U_MIN = np.nextafter(0.0, 1.0)

# ========================================
# DESIGN 1-D
# ========================================


@dataclass(frozen=True)
class Design:
    """Design univarié : loi scipy gelée + pente analytique de log f"""

    kind: str
    params: Dict[str, float]
    support: BoxInterval
    dist: stats.rv_continuous = field(repr=False, compare=False)
    slope_fn: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)

    def pdf(self, x):
        return self.dist.pdf(x)

    def log_pdf(self, x):
        return self.dist.logpdf(x)

    def cdf(self, x):
        return self.dist.cdf(x)

    def log_pdf_slope(self, x):
        """d/dx log f là où la densité est dérivable"""
        return self.slope_fn(np.asarray(x, dtype=float))

    def pdf_prime(self, x):
        """f′ = f · (log f)′"""
        return self.pdf(x) * self.log_pdf_slope(x)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n tirages indépendants par inversion de la fonction de répartition"""
        if n < 1:
            raise DomainError(f"n doit être ≥ 1 (reçu {n})")
        u = rng.uniform(_U_MIN, 1.0, size=n)
        return self.dist.ppf(u)

    @property
    def label(self) -> str:
        args = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.kind}({args})"


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"le paramètre {name} doit être strictement positif (reçu {value})")
    return value


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"le paramètre {name} doit être fini (reçu {value})")
    return value


def _laplace(mu: float = 0.0, lam: float = 1.0) -> Design:
    mu, lam = _finite("mu", mu), _positive("lam", lam)
    return Design(
        kind="laplace",
        params={"mu": mu, "lam": lam},
        support=BoxInterval.real_line(),
        dist=stats.laplace(loc=mu, scale=lam),
        slope_fn=lambda x: -np.sign(x - mu) / lam,
    )


def _cauchy(mu: float = 0.0, gamma: float = 1.0) -> Design:
    mu, gamma = _finite("mu", mu), _positive("gamma", gamma)
    return Design(
        kind="cauchy",
        params={"mu": mu, "gamma": gamma},
        support=BoxInterval.real_line(),
        dist=stats.cauchy(loc=mu, scale=gamma),
        slope_fn=lambda x: -2.0 * (x - mu) / (gamma**2 + (x - mu) ** 2),
    )


def _uniform(a: float = 0.0, b: float = 1.0) -> Design:
    a, b = _finite("a", a), _finite("b", b)
    if not a < b:
        raise DomainError(f"uniform : il faut a < b (reçu a={a}, b={b})")
    return Design(
        kind="uniform",
        params={"a": a, "b": b},
        support=BoxInterval.from_bounds([a], [b]),
        dist=stats.uniform(loc=a, scale=b - a),
        slope_fn=lambda x: np.zeros_like(x, dtype=float),
    )


def _pareto(alpha: float = 1.0) -> Design:
    alpha = _positive("alpha", alpha)
    return Design(
        kind="pareto",
        params={"alpha": alpha},
        support=BoxInterval.from_bounds([1.0], [math.inf]),
        dist=stats.pareto(b=alpha),
        slope_fn=lambda x: -(alpha + 1.0) / x,
    )


def _normal(mu: float = 0.0, sigma: float = 1.0) -> Design:
    mu, sigma = _finite("mu", mu), _positive("sigma", sigma)
    return Design(
        kind="normal",
        params={"mu": mu, "sigma": sigma},
        support=BoxInterval.real_line(),
        dist=stats.norm(loc=mu, scale=sigma),
        slope_fn=lambda x: -(x - mu) / sigma**2,
    )


DESIGN_FACTORIES: Dict[str, Callable[..., Design]] = {
    "laplace": _laplace,
    "cauchy": _cauchy,
    "uniform": _uniform,
    "pareto": _pareto,
    "normal": _normal,
}


def make_design(kind: str, **params: float) -> Design:
    """Construit un design du catalogue, ex. make_design('laplace', mu=0, lam=1)"""
    factory = DESIGN_FACTORIES.get(kind)
    if factory is None:
        known = ", ".join(sorted(DESIGN_FACTORIES))
        raise DomainError(f"design inconnu '{kind}' (connus : {known})")
    try:
        return factory(**params)
    except TypeError as e:
        raise DomainError(f"paramètres invalides pour {kind} : {e}") from e


# ========================================
# CONSTANTE LOG-LIPSCHITZ
# ========================================


def log_lipschitz_constant(design: Design, interval: BoxInterval) -> float:
    """
    sup de |d/dx log f| sur l'intervalle fermé

    Cette borne domine la constante faible en tout point de l'intervalle.
    """
    if interval.dim != 1:
        raise DomainError("log_lipschitz_constant attend un intervalle 1-d")
    if not interval.is_subset_of(design.support):
        raise DomainError(f"l'intervalle {interval.lower + interval.upper} sort du support de {design.label}")
    a, b = interval.lower[0], interval.upper[0]
    p = design.params

    if design.kind == "laplace":
        return 1.0 / p["lam"]
    if design.kind == "uniform":
        return 0.0
    if design.kind == "pareto":
        return (p["alpha"] + 1.0) / a
    if design.kind == "normal":
        return max(abs(a - p["mu"]), abs(b - p["mu"])) / p["sigma"] ** 2
    if design.kind == "cauchy":
        mu, gamma = p["mu"], p["gamma"]
        if a <= mu - gamma <= b or a <= mu + gamma <= b:
            return 1.0 / gamma
        return max(_cauchy_abs_slope(a, mu, gamma), _cauchy_abs_slope(b, mu, gamma))
    raise DomainError(f"pas de constante log-Lipschitz pour {design.kind}")


def _cauchy_abs_slope(x: float, mu: float, gamma: float) -> float:
    if math.isinf(x):
        return 0.0
    return 2.0 * abs(x - mu) / (gamma**2 + (x - mu) ** 2)


# ========================================
# DESIGN PRODUIT
# ========================================


@dataclass(frozen=True)
class ProductDesign:
    """Design multivarié à coordonnées indépendantes"""

    factors: List[Design]

    @property
    def dim(self) -> int:
        return len(self.factors)

    @property
    def support(self) -> BoxInterval:
        return BoxInterval(
            lower=tuple(f.support.lower[0] for f in self.factors),
            upper=tuple(f.support.upper[0] for f in self.factors),
        )

    def pdf(self, points) -> np.ndarray:
        """Densité jointe = produit des densités marginales ; points de forme (k, d)"""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        density = np.ones(points.shape[0])
        for i, factor in enumerate(self.factors):
            density = density * factor.pdf(points[:, i])
        return density

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Échantillon (n, d), colonne par colonne avec le même générateur"""
        return np.column_stack([factor.sample(n, rng) for factor in self.factors])

    def log_lipschitz_constant(self, region: BoxInterval) -> float:
        """Sous la norme L1 la constante jointe est le max des constantes marginales"""
        if region.dim != self.dim:
            raise DomainError(f"région de dimension {region.dim} pour un design de dimension {self.dim}")
        return max(log_lipschitz_constant(f, region.factor(i)) for i, f in enumerate(self.factors))

    @property
    def label(self) -> str:
        return " × ".join(f.label for f in self.factors)


def as_product(design) -> ProductDesign:
    if isinstance(design, ProductDesign):
        return design
    return ProductDesign(factors=[design])


def sample(design, n: int, seed: int) -> np.ndarray:
    """n tirages déterministes étant donné la graine"""
    rng = np.random.default_rng(seed)
    return design.sample(n, rng)


def make_product_design(factors: Sequence[Design]) -> ProductDesign:
    if not factors:
        raise DomainError("un design produit a besoin d'au moins un facteur")
    return ProductDesign(factors=list(factors))
