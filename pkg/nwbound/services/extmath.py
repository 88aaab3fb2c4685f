"""
Fonctions spéciales stables et fonctions limites φ / ϕ
Réels étendus (±∞) avec formes indéterminées signalées, jamais de NaN silencieux
"""

import math
from typing import Union

from scipy import special

from nwbound.errors import IndeterminateFormError

SQRT2 = math.sqrt(2.0)

# ========================================
# RÉELS ÉTENDUS
# ========================================


class ExtReal(float):
    """
    Réel étendu : un float fini, +∞ ou −∞ (jamais NaN)

    L'arithmétique suit les conventions des réels étendus ; ∞ − ∞ et 0·∞
    lèvent IndeterminateFormError au lieu de produire NaN.
    """

    def __new__(cls, value: Union[float, int, str] = 0.0):
        number = float(value)
        if math.isnan(number):
            raise IndeterminateFormError(f"NaN n'est pas un réel étendu : {value!r}")
        return super().__new__(cls, number)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self)

    def _checked(self, result: float, op: str, other) -> "ExtReal":
        if math.isnan(result):
            raise IndeterminateFormError(f"Forme indéterminée : {float(self)} {op} {other}")
        return ExtReal(result)

    def __add__(self, other):
        return self._checked(float(self) + float(other), "+", other)

    __radd__ = __add__

    def __sub__(self, other):
        return self._checked(float(self) - float(other), "-", other)

    def __rsub__(self, other):
        return ExtReal(other).__sub__(self)

    def __mul__(self, other):
        return self._checked(float(self) * float(other), "*", other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if float(other) == 0.0:
            raise ZeroDivisionError("division d'un réel étendu par zéro")
        return self._checked(float(self) / float(other), "/", other)

    def __rtruediv__(self, other):
        return ExtReal(other).__truediv__(self)

    def __neg__(self):
        return ExtReal(-float(self))

    def __abs__(self):
        return ExtReal(abs(float(self)))

    def __repr__(self) -> str:
        return f"ExtReal({float(self)!r})"


INF = ExtReal(math.inf)
NEG_INF = ExtReal(-math.inf)


def ext(value) -> ExtReal:
    """Convertit un nombre (ou 'inf', '-inf') en ExtReal"""
    if isinstance(value, ExtReal):
        return value
    return ExtReal(value)


# ========================================
# FONCTIONS D'ERREUR
# ========================================


def erf(x: float) -> float:
    """Fonction d'erreur standard"""
    return float(special.erf(x))


def erfc(x: float) -> float:
    """Fonction d'erreur complémentaire"""
    return float(special.erfc(x))


def erfcx(x: float) -> float:
    """Fonction d'erreur complémentaire mise à l'échelle : e^{x²}·erfc(x), sans overflow pour x > 0"""
    return float(special.erfcx(x))


# ========================================
# FONCTIONS LIMITES
# ========================================


def phi_limit(l, L: float, h: float) -> float:
    """φ(l, L, h) = lim_{g→l} exp(−g²/(2h²) − g·L) ; vaut 0 en ±∞"""
    l = ext(l)
    if not l.is_finite:
        return 0.0
    return math.exp(-float(l) ** 2 / (2.0 * h * h) - float(l) * L)


def varphi_limit(l, L: float, h: float) -> float:
    """ϕ(l, L, h) = lim_{g→l} erf((g + h²L)/(h√2)) ; vaut ±1 en ±∞"""
    l = ext(l)
    if not l.is_finite:
        return 1.0 if l > 0 else -1.0
    return erf((float(l) + h * h * L) / (h * SQRT2))


def _u(t: float, L: float, h: float) -> float:
    return (t + h * h * L) / (h * SQRT2)


def _upper_tail(t: ExtReal, L: float, h: float) -> float:
    """e^{L²h²/2}·erfc(u(t)) = erfcx(u)·φ(t), pour u(t) ≥ 0"""
    if not t.is_finite:
        return 0.0 if t > 0 else 2.0 * math.exp(L * L * h * h / 2.0)
    return erfcx(_u(float(t), L, h)) * phi_limit(t, L, h)


def _lower_tail(t: ExtReal, L: float, h: float) -> float:
    """e^{L²h²/2}·erfc(−u(t)) = erfcx(−u)·φ(t), pour u(t) ≤ 0"""
    if not t.is_finite:
        return 0.0 if t < 0 else 2.0 * math.exp(L * L * h * h / 2.0)
    return erfcx(-_u(float(t), L, h)) * phi_limit(t, L, h)


def scaled_erf_difference(L: float, h: float, t_lo, t_hi) -> float:
    """
    e^{L²h²/2}·(ϕ(t_hi, L, h) − ϕ(t_lo, L, h)) sans overflow

    Le facteur exponentiel est absorbé dans erfcx : e^{L²h²/2}·erfc(u) = erfcx(u)·φ(t).
    Seul le cas où l'intervalle contient le pic −h²L garde e^{L²h²/2} explicite,
    et l'intégrale y est alors réellement de cet ordre.
    """
    t_lo, t_hi = ext(t_lo), ext(t_hi)
    if t_lo == t_hi:
        return 0.0
    u_lo = _u(float(t_lo), L, h) if t_lo.is_finite else float(t_lo)
    u_hi = _u(float(t_hi), L, h) if t_hi.is_finite else float(t_hi)

    if u_lo >= 0.0:
        return _upper_tail(t_lo, L, h) - _upper_tail(t_hi, L, h)
    if u_hi <= 0.0:
        return _lower_tail(t_hi, L, h) - _lower_tail(t_lo, L, h)
    peak = 2.0 * math.exp(L * L * h * h / 2.0)
    return peak - _upper_tail(t_hi, L, h) - _lower_tail(t_lo, L, h)
