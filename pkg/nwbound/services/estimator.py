"""
Noyau gaussien multivarié et estimateur de Nadaraya–Watson
Poids calculés en espace logarithmique (max soustrait avant exponentiation)
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from nwbound.config import settings
from nwbound.errors import DomainError, EmptyNeighborhoodError

logger = logging.getLogger(__name__)

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# ========================================
# TYPES
# ========================================


class Bandwidth:
    """Vecteur de bandwidths strictement positives, une par dimension"""

    __slots__ = ("h",)

    def __init__(self, h):
        values = np.atleast_1d(np.asarray(h, dtype=float))
        if values.ndim != 1 or values.size == 0:
            raise DomainError("la bandwidth doit être un vecteur non vide")
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            raise DomainError(f"toutes les bandwidths doivent être > 0 (reçu {values.tolist()})")
        values.setflags(write=False)
        self.h = values

    @property
    def dim(self) -> int:
        return self.h.size

    def __iter__(self):
        return iter(self.h.tolist())

    def __repr__(self) -> str:
        return f"Bandwidth({self.h.tolist()})"


class Dataset:
    """
    Observations {xᵢ, yᵢ}, stockées triées lexicographiquement

    L'ordre canonique rend l'estimation indépendante (bit à bit) de l'ordre de saisie.
    """

    __slots__ = ("inputs", "outputs")

    def __init__(self, inputs, outputs):
        x = np.asarray(inputs, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        y = np.asarray(outputs, dtype=float).ravel()
        if x.ndim != 2 or x.shape[0] == 0:
            raise DomainError("le jeu de données doit contenir au moins une observation")
        if x.shape[0] != y.shape[0]:
            raise DomainError(f"{x.shape[0]} entrées pour {y.shape[0]} sorties")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise DomainError("les observations doivent être finies")
        # lexsort : la dernière clé est la clé primaire
        keys = [y] + [x[:, j] for j in reversed(range(x.shape[1]))]
        order = np.lexsort(keys)
        self.inputs = np.ascontiguousarray(x[order])
        self.outputs = np.ascontiguousarray(y[order])

    @property
    def n(self) -> int:
        return self.outputs.size

    @property
    def dim(self) -> int:
        return self.inputs.shape[1]


# ========================================
# NOYAU
# ========================================


def log_gaussian_kernel(offsets, h: Bandwidth) -> np.ndarray:
    """log K_h(offset) ; offsets de forme (..., d)"""
    offsets = np.asarray(offsets, dtype=float)
    if offsets.shape[-1] != h.dim:
        raise DomainError(f"décalage de dimension {offsets.shape[-1]} pour une bandwidth de dimension {h.dim}")
    z = offsets / h.h
    return -0.5 * np.sum(z * z, axis=-1) - np.sum(np.log(h.h)) - h.dim * _LOG_SQRT_2PI


def gaussian_kernel(offset: Sequence[float], h: Bandwidth) -> float:
    """K_h(offset) = ∏ᵢ exp(−offsetᵢ²/(2hᵢ²))/√(2π hᵢ²)"""
    return float(np.exp(log_gaussian_kernel(np.atleast_1d(offset), h)))


# ========================================
# ESTIMATEUR
# ========================================


def _log_weights(data: Dataset, queries: np.ndarray, h: Bandwidth) -> np.ndarray:
    # (k, n) : la constante de normalisation se simplifie dans le ratio
    z = (queries[:, None, :] - data.inputs[None, :, :]) / h.h
    return -0.5 * np.sum(z * z, axis=-1)


def nw_estimate_batch(
    data: Dataset,
    queries,
    h: Bandwidth,
    log_weight_floor: Optional[float] = None,
    raise_on_empty: bool = True,
) -> np.ndarray:
    """
    m̂(x) pour un lot de points de requête (k, d)

    Avec raise_on_empty=False, les points sans voisinage valent NaN au lieu de lever.
    """
    floor = settings.LOG_WEIGHT_FLOOR if log_weight_floor is None else log_weight_floor
    queries = np.asarray(queries, dtype=float)
    if queries.ndim == 1:
        queries = queries[:, None] if data.dim == 1 else queries[None, :]
    if queries.shape[1] != data.dim or h.dim != data.dim:
        raise DomainError(
            f"dimensions incohérentes : données {data.dim}, requêtes {queries.shape[1]}, bandwidth {h.dim}"
        )

    log_w = _log_weights(data, queries, h)
    log_norm = np.sum(np.log(h.h)) + data.dim * _LOG_SQRT_2PI
    log_total = logsumexp(log_w, axis=1) - log_norm
    empty = ~np.isfinite(log_total) | (log_total < floor)
    if raise_on_empty and np.any(empty):
        where = queries[np.argmax(empty)].tolist()
        raise EmptyNeighborhoodError(
            f"voisinage vide en x={where} : somme des poids sous e^{floor:g}, bandwidth trop petite"
        )

    w = np.exp(log_w - np.max(log_w, axis=1, keepdims=True))
    y = data.outputs
    y_ref = y[0]
    # centrage sur y_ref : une réponse constante est reproduite exactement
    estimate = y_ref + (w @ (y - y_ref)) / np.sum(w, axis=1)
    estimate = np.clip(estimate, y.min(), y.max())
    estimate[empty] = np.nan
    return estimate


def nw_estimate(data: Dataset, x, h: Bandwidth) -> float:
    """m̂(x) = Σᵢ K_h(x−xᵢ)yᵢ / Σⱼ K_h(x−xⱼ)"""
    point = np.atleast_1d(np.asarray(x, dtype=float))
    return float(nw_estimate_batch(data, point[None, :], h)[0])
