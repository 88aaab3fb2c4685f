"""
Géométrie : boîtes ouvertes sur les réels étendus et description Lipschitz
d'un point de requête (hypothèses sur Υ, D, G)

Les boîtes de LipschitzSpec sont stockées en coordonnées relatives l = z − x :
Ῡ = Ω(−υ⁻, υ⁺), etc. Toutes les formes fermées consomment ces décalages.
"""

import math
from typing import Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from nwbound.errors import DomainError

# ========================================
# BOÎTES
# ========================================


class BoxInterval(BaseModel):
    """Intervalle ouvert de dimension d : (lower₁, upper₁) × … × (lower_d, upper_d)"""

    model_config = ConfigDict(frozen=True)

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    @model_validator(mode="after")
    def _check_bounds(self) -> "BoxInterval":
        if len(self.lower) == 0:
            raise ValueError("une boîte doit avoir au moins une dimension")
        if len(self.lower) != len(self.upper):
            raise ValueError(
                f"dimensions incohérentes : {len(self.lower)} bornes inf, {len(self.upper)} bornes sup"
            )
        for i, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if math.isnan(lo) or math.isnan(hi):
                raise ValueError(f"borne NaN en dimension {i}")
            if not lo < hi:
                raise ValueError(f"dimension {i} : il faut lower < upper (reçu {lo} ≥ {hi})")
        return self

    @classmethod
    def from_bounds(cls, lower: Sequence[float], upper: Sequence[float]) -> "BoxInterval":
        return cls(lower=tuple(float(v) for v in lower), upper=tuple(float(v) for v in upper))

    @classmethod
    def real_line(cls, dim: int = 1) -> "BoxInterval":
        return cls(lower=(-math.inf,) * dim, upper=(math.inf,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def shifted(self, origin: Sequence[float]) -> "BoxInterval":
        """Translate la boîte de −origin (absolu → relatif)"""
        self._check_dim(origin)
        return BoxInterval(
            lower=tuple(lo - o for lo, o in zip(self.lower, origin)),
            upper=tuple(hi - o for hi, o in zip(self.upper, origin)),
        )

    def unshifted(self, origin: Sequence[float]) -> "BoxInterval":
        """Translate la boîte de +origin (relatif → absolu)"""
        self._check_dim(origin)
        return BoxInterval(
            lower=tuple(lo + o for lo, o in zip(self.lower, origin)),
            upper=tuple(hi + o for hi, o in zip(self.upper, origin)),
        )

    def intersect(self, other: "BoxInterval") -> "BoxInterval":
        self._check_dim(other.lower)
        try:
            return BoxInterval(
                lower=tuple(max(a, b) for a, b in zip(self.lower, other.lower)),
                upper=tuple(min(a, b) for a, b in zip(self.upper, other.upper)),
            )
        except ValueError as e:
            raise DomainError(f"intersection vide : {e}") from e

    def is_subset_of(self, other: "BoxInterval") -> bool:
        self._check_dim(other.lower)
        return all(
            o_lo <= lo and hi <= o_hi
            for lo, hi, o_lo, o_hi in zip(self.lower, self.upper, other.lower, other.upper)
        )

    def factor(self, i: int) -> "BoxInterval":
        """Projection 1-d sur la dimension i"""
        return BoxInterval(lower=(self.lower[i],), upper=(self.upper[i],))

    def _check_dim(self, values: Sequence[float]):
        if len(values) != self.dim:
            raise DomainError(f"dimension {len(values)} incompatible avec une boîte de dimension {self.dim}")


def contains(box: BoxInterval, point: Sequence[float]) -> bool:
    """Vrai ssi lower[i] < point[i] < upper[i] pour tout i (intervalle ouvert)"""
    box._check_dim(point)
    return all(lo < p < hi for lo, p, hi in zip(box.lower, point, box.upper))


# ========================================
# DESCRIPTION LIPSCHITZ D'UN POINT
# ========================================


class LipschitzSpec(BaseModel):
    """
    Problème au point x : constantes L_m, L_f, borne d'oscillation M
    (None = non bornée) et boîtes imbriquées G ⊆ D ⊆ Υ en coordonnées relatives
    """

    model_config = ConfigDict(frozen=True)

    x: Tuple[float, ...]
    L_m: float = Field(ge=0.0)
    L_f: float = Field(ge=0.0)
    M: Optional[float] = Field(default=None, ge=0.0)
    upsilon: BoxInterval
    delta: BoxInterval
    gamma: BoxInterval

    @model_validator(mode="after")
    def _check_nesting(self) -> "LipschitzSpec":
        d = len(self.x)
        if any(not math.isfinite(v) for v in self.x):
            raise ValueError("le point de requête doit être fini")
        for name in ("upsilon", "delta", "gamma"):
            box = getattr(self, name)
            if box.dim != d:
                raise ValueError(f"{name} : dimension {box.dim} ≠ {d}")
            if not contains(box, (0.0,) * d):
                raise ValueError(f"{name} doit contenir x (décalages strictement positifs)")
        if not self.gamma.is_subset_of(self.delta):
            raise ValueError("il faut G ⊆ D")
        if not self.delta.is_subset_of(self.upsilon):
            raise ValueError("il faut D ⊆ Υ")
        if self.M is not None and not math.isfinite(self.M):
            raise ValueError("M doit être fini, ou None pour une fonction non bornée")
        return self

    @classmethod
    def from_absolute(
        cls,
        x: Sequence[float],
        L_m: float,
        L_f: float,
        M: Optional[float],
        upsilon: BoxInterval,
        delta: Optional[BoxInterval] = None,
        gamma: Optional[BoxInterval] = None,
    ) -> "LipschitzSpec":
        """Construit la spec à partir de boîtes en coordonnées absolues"""
        delta = delta or upsilon
        gamma = gamma or delta
        return cls(
            x=tuple(float(v) for v in x),
            L_m=L_m,
            L_f=L_f,
            M=M,
            upsilon=upsilon.shifted(x),
            delta=delta.shifted(x),
            gamma=gamma.shifted(x),
        )

    @property
    def dim(self) -> int:
        return len(self.x)

    @property
    def is_bounded(self) -> bool:
        return self.M is not None

    @property
    def boxes_coincide(self) -> bool:
        """Υ ≡ D ≡ G, condition du cas non borné"""
        return self.upsilon == self.delta == self.gamma


def effective_phi_box(spec: LipschitzSpec) -> BoxInterval:
    """
    Boîte de troncature F (relative) : φᵢ± = min(γᵢ±, M/L_m)

    Au-delà de M/L_m le plafond constant M bat la pente L_m·|l|. Si L_m = 0, F ≡ G.
    """
    if spec.M is None:
        raise DomainError("M non borné : utiliser la borne du cas non borné")
    if spec.L_m == 0.0:
        return spec.gamma
    cap = spec.M / spec.L_m
    if cap <= 0.0:
        raise DomainError("M/L_m = 0 : la boîte F serait vide")
    return BoxInterval(
        lower=tuple(max(lo, -cap) for lo in spec.gamma.lower),
        upper=tuple(min(hi, cap) for hi in spec.gamma.upper),
    )
