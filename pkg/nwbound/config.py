"""
Configuration de l'application
Variables d'environnement et settings d'exécution (préfixe NWBOUND_)
"""

from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict
from functools import lru_cache


class Settings(BaseSettings):
    """Configuration d'exécution"""

    model_config = SettingsConfigDict(
        env_prefix="NWBOUND_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Application
    APP_NAME: str = "nwbound"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Expériences fournies, résolues par nom court (--config sin_laplace)
    CONFIGS_DIR: Path = Path(__file__).resolve().parent.parent / "configs"

    # Parallélisme (fallback de --jobs)
    JOBS: int = 1

    # Valeurs par défaut des expériences (échelle "bureau" : minutes, pas heures)
    DEFAULT_N: int = 10_000
    DEFAULT_ENSEMBLE: int = 50
    DEFAULT_NOISE_SIGMA: float = 0.1

    # Quadrature de référence
    QUAD_REL_TOL: float = 1e-10
    QUAD_ABS_TOL: float = 1e-14
    QUAD_LIMIT: int = 200

    # Estimateur : en dessous, la somme des poids s'annule en double précision
    LOG_WEIGHT_FLOOR: float = -745.0


@lru_cache()
def get_settings() -> Settings:
    """Récupère les settings (cached)"""
    return Settings()


# Instance globale
settings = get_settings()
