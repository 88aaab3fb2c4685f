"""
Bornes du biais de Nadaraya–Watson à bandwidth finie + estimation asymptotique de Rosenblatt

Numérateur et dénominateur sont assemblés à partir des intégrales 1-d par dimension,
avec leurs facteurs 2⁻¹ explicites (factorisation indépendante + somme-produit).
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from nwbound.errors import DomainError
from nwbound.services.estimator import Bandwidth
from nwbound.services.extmath import ext, phi_limit, scaled_erf_difference
from nwbound.services.geometry import BoxInterval, LipschitzSpec, effective_phi_box

logger = logging.getLogger(__name__)

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# ========================================
# ENTRÉES
# ========================================


@dataclass(frozen=True)
class BoundInput:
    spec: LipschitzSpec
    h: Bandwidth

    def __post_init__(self):
        if self.spec.dim != self.h.dim:
            raise DomainError(f"spec de dimension {self.spec.dim}, bandwidth de dimension {self.h.dim}")


@dataclass(frozen=True)
class RosenblattInput:
    """Dérivées analytiques fournies par l'appelant (aucune différentiation numérique)"""

    m_prime: Callable[[float], float]
    m_double_prime: Callable[[float], float]
    f: Callable[[float], float]
    f_prime: Callable[[float], float]
    x: float
    h: float


# ========================================
# INTÉGRALES 1-D EN FORME FERMÉE
# ========================================


def _ordered(tau_minus, tau_plus):
    lo, hi = ext(tau_minus), ext(tau_plus)
    if not lo < hi:
        raise DomainError(f"il faut tau_minus < tau_plus (reçu {float(lo)} ≥ {float(hi)})")
    return lo, hi


def _straddles_zero(tau_minus, tau_plus):
    lo, hi = _ordered(tau_minus, tau_plus)
    if not (lo < 0.0 <= hi):
        raise DomainError(f"il faut tau_minus < 0 ≤ tau_plus (reçu {float(lo)}, {float(hi)})")
    return lo, hi


def _check_h(h: float):
    if not (h > 0.0 and math.isfinite(h)):
        raise DomainError(f"la bandwidth doit être > 0 (reçu {h})")


def psi(L: float, h: float, tau_minus, tau_plus) -> float:
    """
    Ψ(L, h, τ⁻, τ⁺) = e^{L²h²/2}(ϕ(τ⁺) − ϕ(τ⁻))
                    = 2·∫_{τ⁻}^{τ⁺} e^{−l²/(2h²) − lL}/√(2πh²) dl
    """
    _check_h(h)
    lo, hi = _ordered(tau_minus, tau_plus)
    return max(scaled_erf_difference(L, h, lo, hi), 0.0)


def zeta(h: float, tau_minus, tau_plus, L_f: float) -> float:
    """
    ζ = e^{L²h²/2}(2ϕ(0) − ϕ(−τ⁺) − ϕ(τ⁻))
      = 2·∫_{τ⁻}^{τ⁺} e^{−l²/(2h²) + |l|L}/√(2πh²) dl,  τ⁻ < 0 ≤ τ⁺

    L négatif donne l'intégrale à décroissance e^{−|l||L|}.
    """
    _check_h(h)
    lo, hi = _straddles_zero(tau_minus, tau_plus)
    right = scaled_erf_difference(L_f, h, -hi, 0.0) if hi > 0.0 else 0.0
    left = scaled_erf_difference(L_f, h, lo, 0.0)
    return max(right + left, 0.0)


def moment_integral_signed(L_m: float, L_f: float, h: float, tau_minus, tau_plus) -> float:
    """∫_{τ⁻}^{τ⁺} e^{−l²/(2h²) − lL_f}/√(2πh²)·l·L_m dl"""
    _check_h(h)
    lo, hi = _ordered(tau_minus, tau_plus)
    if L_m == 0.0:
        return 0.0
    boundary = L_m * h / _SQRT_2PI * (phi_limit(lo, L_f, h) - phi_limit(hi, L_f, h))
    if L_f == 0.0:
        return boundary
    return boundary - 0.5 * L_m * L_f * h * h * psi(L_f, h, lo, hi)


def moment_integral_abs(L_m: float, L_f: float, h: float, tau_minus, tau_plus) -> float:
    """
    ∫_{τ⁻}^{τ⁺} e^{−l²/(2h²) + |l|L_f}/√(2πh²)·|l|·L_m dl,  τ⁻ < 0 ≤ τ⁺

    Forme fermée : L_m h/√(2π)(2 − φ(τ⁺, −L_f) − φ(τ⁻, L_f)) + (L_m L_f h²/2)·ζ,
    signe + sur le terme ζ (somme des deux moitiés signées).
    """
    _check_h(h)
    lo, hi = _straddles_zero(tau_minus, tau_plus)
    if L_m == 0.0:
        return 0.0
    boundary = L_m * h / _SQRT_2PI * (2.0 - phi_limit(hi, -L_f, h) - phi_limit(lo, L_f, h))
    if L_f == 0.0:
        return boundary
    return boundary + 0.5 * L_m * L_f * h * h * zeta(h, lo, hi, L_f)


# ========================================
# ASSEMBLAGE MULTIVARIÉ
# ========================================


def _half_zeta_factors(h: Bandwidth, box: BoxInterval, L: float) -> list:
    return [0.5 * zeta(hi, lo, up, L) for hi, lo, up in zip(h, box.lower, box.upper)]


def _prod(values: Iterable[float]) -> float:
    return math.prod(values)


def denominator_lower_bound(spec: LipschitzSpec, h: Bandwidth, region: Optional[BoxInterval] = None, form: str = "decay") -> float:
    """
    Minorant de ∫ K_h(x − z) f(z) dz / f(x)

    form="decay" : ∏ ½·ζ(hᵢ, −δᵢ⁻, δᵢ⁺, −L_f), intégrale exacte du minorant e^{−L_f|l|}
    form="signed" : ∏ ½·Ψ(L_f, hᵢ, −δᵢ⁻, δᵢ⁺), variante à pente signée (comparaison)
    """
    region = region or spec.delta
    if form == "decay":
        return _prod(_half_zeta_factors(h, region, -spec.L_f))
    if form == "signed":
        return _prod(0.5 * psi(spec.L_f, hi, lo, up) for hi, lo, up in zip(h, region.lower, region.upper))
    raise DomainError(f"forme de dénominateur inconnue : {form}")


def linear_part_bound(spec: LipschitzSpec, h: Bandwidth, box: BoxInterval) -> float:
    """
    ∫_box e^{L_f|l|₁} K_h(l) L_m |l|₁ dl
    = Σₖ [∏_{i≠k} ½·ζ(hᵢ, box_i)] · moment_integral_abs(L_m, L_f, hₖ, box_k)
    """
    halves = _half_zeta_factors(h, box, spec.L_f)
    total = 0.0
    for k, (hk, lo, up) in enumerate(zip(h, box.lower, box.upper)):
        others = _prod(v for i, v in enumerate(halves) if i != k)
        total += others * moment_integral_abs(spec.L_m, spec.L_f, hk, lo, up)
    return total


def numerator_upper_bound(spec: LipschitzSpec, h: Bandwidth) -> float:
    """Majorant de ∫ K_h(x − z)|m(z) − m(x)| f(z) dz / f(x), cas M fini"""
    if spec.M is None:
        raise DomainError("M non borné : le numérateur borné n'est pas défini")
    phi_box = effective_phi_box(spec)
    linear = linear_part_bound(spec, h, phi_box)
    capped = spec.M * (
        _prod(_half_zeta_factors(h, spec.gamma, spec.L_f)) - _prod(_half_zeta_factors(h, phi_box, spec.L_f))
    )
    outside_mass = 1.0 - _prod(0.5 * psi(0.0, hi, lo, up) for hi, lo, up in zip(h, spec.gamma.lower, spec.gamma.upper))
    return linear + max(capped, 0.0) + spec.M * max(outside_mass, 0.0)


def bias_bound_bounded(bound_input: BoundInput) -> float:
    """Borne du biais pour une fonction de régression bornée (M < ∞)"""
    spec, h = bound_input.spec, bound_input.h
    if spec.M is None:
        raise DomainError("M non borné : utiliser bias_bound_unbounded")
    if spec.M == 0.0:
        return 0.0
    numerator = numerator_upper_bound(spec, h)
    denominator = denominator_lower_bound(spec, h)
    bound = numerator / denominator
    if not math.isfinite(bound):
        logger.warning(f"⚠️ Borne non finie en x={spec.x} (num={numerator}, den={denominator})")
    return bound


def bias_bound_unbounded(bound_input: BoundInput) -> float:
    """Borne du biais sans hypothèse de bornitude, exige Υ ≡ D ≡ G"""
    spec, h = bound_input.spec, bound_input.h
    if not spec.boxes_coincide:
        raise DomainError("le cas non borné exige Υ ≡ D ≡ G")
    numerator = linear_part_bound(spec, h, spec.upsilon)
    denominator = denominator_lower_bound(spec, h, spec.upsilon)
    bound = numerator / denominator
    if not math.isfinite(bound):
        logger.warning(f"⚠️ Borne non finie en x={spec.x} (num={numerator}, den={denominator})")
    return bound


# ========================================
# ROSENBLATT
# ========================================


def rosenblatt_signed(ri: RosenblattInput) -> float:
    """h²·(m″(x)/2 + m′(x)f′(x)/f(x)), second moment du noyau gaussien standard = 1"""
    fx = ri.f(ri.x)
    if not fx > 0.0:
        raise DomainError(f"Rosenblatt exige f(x) > 0 (f({ri.x}) = {fx})")
    return ri.h**2 * (0.5 * ri.m_double_prime(ri.x) + ri.m_prime(ri.x) * ri.f_prime(ri.x) / fx)


def rosenblatt_estimate(ri: RosenblattInput, signed: bool = False) -> float:
    value = rosenblatt_signed(ri)
    return value if signed else abs(value)


def rosenblatt_estimate_additive(inputs: Sequence[RosenblattInput], signed: bool = False) -> float:
    """m additive et design produit : somme des termes par dimension"""
    value = sum(rosenblatt_signed(ri) for ri in inputs)
    return value if signed else abs(value)
