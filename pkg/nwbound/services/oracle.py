"""
Oracle de quadrature adaptative
Référence indépendante des formes fermées ; jamais utilisé par le calcul des bornes
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from scipy import integrate

from nwbound.config import settings
from nwbound.errors import DomainError, QuadratureError
from nwbound.services.extmath import ext
from nwbound.services.geometry import BoxInterval

logger = logging.getLogger(__name__)

# Au-delà de 40 écarts-types l'intégrande gaussien est sous 1e-300
CLIP_SIGMAS = 40.0

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    subdivisions: int

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            subdivisions=self.subdivisions + other.subdivisions,
        )


_ZERO = QuadratureResult(value=0.0, error_estimate=0.0, subdivisions=0)


def _quad_piece(f, a: float, b: float, rel_tol: float, abs_tol: float, limit: int) -> QuadratureResult:
    out = integrate.quad(f, a, b, epsrel=rel_tol, epsabs=abs_tol, limit=limit, full_output=1)
    value, error, info = out[0], out[1], out[2]
    if len(out) > 3:
        raise QuadratureError(f"quadrature non convergée sur [{a}, {b}] : {out[3]}")
    if not math.isfinite(value):
        raise QuadratureError(f"intégrande non fini sur [{a}, {b}]")
    return QuadratureResult(value=float(value), error_estimate=float(error), subdivisions=int(info["last"]))


def integrate_1d(
    f: Callable[[float], float],
    lower,
    upper,
    rel_tol: Optional[float] = None,
    breakpoints: Sequence[float] = (),
    scale: Optional[float] = None,
    abs_tol: Optional[float] = None,
) -> QuadratureResult:
    """
    ∫_{lower}^{upper} f(l) dl par Gauss–Kronrod adaptatif (QUADPACK)

    - breakpoints : points de coupure (pics, points anguleux) ; l'intégrale est sommée par morceaux
    - scale : écart-type du poids gaussien ; une borne infinie est alors ramenée à
      40·scale au-delà du point de coupure extrême, sinon QUADPACK traite l'infini
    """
    rel_tol = settings.QUAD_REL_TOL if rel_tol is None else rel_tol
    abs_tol = settings.QUAD_ABS_TOL if abs_tol is None else abs_tol
    if rel_tol < 1e-12:
        raise DomainError(f"rel_tol doit être ≥ 1e-12 (reçu {rel_tol})")
    lo, hi = float(ext(lower)), float(ext(upper))
    if lo == hi:
        return _ZERO
    if lo > hi:
        raise DomainError(f"bornes inversées : {lo} > {hi}")

    cuts = sorted(float(p) for p in breakpoints if lo < p < hi)
    if scale is not None:
        anchors = cuts or [v for v in (lo, hi) if math.isfinite(v)] or [0.0]
        if math.isinf(lo):
            lo = min(anchors) - CLIP_SIGMAS * scale
        if math.isinf(hi):
            hi = max(anchors) + CLIP_SIGMAS * scale

    edges = [lo] + cuts + [hi]
    result = _ZERO
    for a, b in zip(edges[:-1], edges[1:]):
        result = result + _quad_piece(f, a, b, rel_tol, abs_tol, settings.QUAD_LIMIT)
    return result


def integrate_box(
    f: Callable[..., float],
    box: BoxInterval,
    rel_tol: Optional[float] = None,
    breakpoints: Sequence[Sequence[float]] = (),
    scales: Optional[Sequence[float]] = None,
) -> QuadratureResult:
    """
    Intégrale itérée sur une boîte (d ≤ 3) ; f(z₁, …, z_d)

    L'estimation d'erreur renvoyée est celle de la quadrature externe.
    """
    d = box.dim
    if d > 3:
        raise DomainError("l'oracle itéré est limité à d ≤ 3")
    cuts = list(breakpoints) or [()] * d
    scales = list(scales) if scales is not None else [None] * d

    def nested(level: int, prefix: tuple) -> QuadratureResult:
        if level == d - 1:
            return integrate_1d(
                lambda z: f(*prefix, z), box.lower[level], box.upper[level], rel_tol, cuts[level], scales[level]
            )
        return integrate_1d(
            lambda z: nested(level + 1, prefix + (z,)).value,
            box.lower[level],
            box.upper[level],
            rel_tol,
            cuts[level],
            scales[level],
        )

    return nested(0, ())


# ========================================
# INTÉGRALES DE POPULATION DE NADARAYA–WATSON
# ========================================


def _kernel(x: float, z: float, h: float) -> float:
    u = (x - z) / h
    return math.exp(-0.5 * u * u) / (_SQRT_2PI * h)


def nw_numerator_integral(
    m: Callable[[float], float],
    pdf: Callable[[float], float],
    x: float,
    h: float,
    domain: BoxInterval,
    rel_tol: Optional[float] = None,
    breakpoints: Sequence[float] = (),
) -> QuadratureResult:
    """∫_domain K_h(x − z)(m(z) − m(x)) f(z) dz"""
    mx = m(x)
    return integrate_1d(
        lambda z: _kernel(x, z, h) * (m(z) - mx) * pdf(z),
        domain.lower[0],
        domain.upper[0],
        rel_tol,
        breakpoints=[x, *breakpoints],
        scale=h,
    )


def nw_denominator_integral(
    pdf: Callable[[float], float],
    x: float,
    h: float,
    domain: BoxInterval,
    rel_tol: Optional[float] = None,
    breakpoints: Sequence[float] = (),
) -> QuadratureResult:
    """∫_domain K_h(x − z) f(z) dz"""
    return integrate_1d(
        lambda z: _kernel(x, z, h) * pdf(z),
        domain.lower[0],
        domain.upper[0],
        rel_tol,
        breakpoints=[x, *breakpoints],
        scale=h,
    )


def population_bias(
    m: Callable[[float], float],
    pdf: Callable[[float], float],
    x: float,
    h: float,
    domain: BoxInterval,
    rel_tol: Optional[float] = None,
    breakpoints: Sequence[float] = (),
) -> float:
    """Biais à n → ∞ : numérateur / dénominateur"""
    numerator = nw_numerator_integral(m, pdf, x, h, domain, rel_tol, breakpoints)
    denominator = nw_denominator_integral(pdf, x, h, domain, rel_tol, breakpoints)
    if denominator.value <= 0.0:
        raise QuadratureError(f"dénominateur nul en x={x}")
    return numerator.value / denominator.value
