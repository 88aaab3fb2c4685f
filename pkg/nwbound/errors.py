"""
Hiérarchie d'exceptions
Chaque famille correspond à un code de sortie de la CLI
"""

from typing import Optional


class NWBoundError(Exception):
    """Racine de toutes les erreurs du paquet"""

    exit_code: int = 1


class ConfigError(NWBoundError, ValueError):
    """Fichier de configuration invalide (code 2)"""

    exit_code = 2

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class DomainError(NWBoundError, ValueError):
    """Précondition violée (ordre des bornes, inclusion des boîtes, dimensions...)"""

    exit_code = 2


class NumericError(NWBoundError, ArithmeticError):
    """Échec numérique (code 3)"""

    exit_code = 3


class IndeterminateFormError(NumericError):
    """Forme indéterminée sur les réels étendus (∞ − ∞, 0·∞)"""


class EmptyNeighborhoodError(NumericError):
    """Tous les poids du noyau s'annulent : bandwidth beaucoup trop petite"""


class QuadratureError(NumericError):
    """La quadrature adaptative n'a pas convergé"""
