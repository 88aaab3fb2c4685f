"""
Schémas pydantic du fichier d'expérience (TOML)
Chargement, surcharges --set et traduction des erreurs de validation en ConfigError
"""

import json
import logging
import sys
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from nwbound.config import settings
from nwbound.errors import ConfigError

logger = logging.getLogger(__name__)

PositiveFloat = Annotated[float, Field(gt=0.0, allow_inf_nan=False)]
NonNegativeFloat = Annotated[float, Field(ge=0.0, allow_inf_nan=False)]
AbsoluteInterval = Tuple[float, float]

_UNION_TAGS = {"float", "int", "str", "bool", "list", "tuple"}


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ========================================
# SECTIONS
# ========================================


class DesignFactor(_Section):
    kind: str
    params: Dict[str, float] = {}


class DesignSection(_Section):
    """Un design 1-d (kind + params) ou un design produit (factors)"""

    kind: Optional[str] = None
    params: Dict[str, float] = {}
    factors: Optional[List[DesignFactor]] = None

    @model_validator(mode="after")
    def _one_form(self) -> "DesignSection":
        if (self.kind is None) == (self.factors is None):
            raise ValueError("renseigner soit 'kind', soit 'factors'")
        if self.factors is not None and len(self.factors) == 0:
            raise ValueError("'factors' ne peut pas être vide")
        return self

    def factor_list(self) -> List[DesignFactor]:
        if self.factors is not None:
            return self.factors
        return [DesignFactor(kind=self.kind, params=self.params)]


class RegressionSection(_Section):
    functions: List[str] = Field(min_length=1)


class NoiseSection(_Section):
    sigma: NonNegativeFloat = settings.DEFAULT_NOISE_SIGMA
    slope: NonNegativeFloat = 0.0


class GridSection(_Section):
    lower: List[float] = Field(min_length=1)
    upper: List[float] = Field(min_length=1)
    points: List[Annotated[int, Field(ge=1)]] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_axes(self) -> "GridSection":
        if not len(self.lower) == len(self.upper) == len(self.points):
            raise ValueError("lower, upper et points doivent avoir la même longueur")
        for lo, hi, count in zip(self.lower, self.upper, self.points):
            if lo > hi or (lo == hi and count > 1):
                raise ValueError(f"axe de grille invalide [{lo}, {hi}] avec {count} points")
        return self


class BandwidthSection(_Section):
    h: List[PositiveFloat] = Field(min_length=1)


class EnsembleSection(_Section):
    n: int = Field(default=settings.DEFAULT_N, ge=100)
    N: int = Field(default=settings.DEFAULT_ENSEMBLE, ge=2)


class LipschitzSection(_Section):
    """'auto' délègue aux catalogues ; boîtes données en coordonnées absolues"""

    L_f: Union[Literal["auto"], NonNegativeFloat] = "auto"
    L_m: Union[Literal["auto"], NonNegativeFloat] = "auto"
    M: Union[Literal["auto", "unbounded"], NonNegativeFloat] = "auto"
    delta: Union[Literal["support"], List[AbsoluteInterval]] = "support"
    gamma: Union[Literal["support", "delta"], List[AbsoluteInterval]] = "delta"


class ExperimentFile(_Section):
    """Fichier d'expérience complet"""

    name: str = Field(min_length=1, pattern=r"^[A-Za-z0-9_.-]+$")
    seed: int = 0
    allow_partial: bool = False
    design: DesignSection
    regression: RegressionSection
    noise: NoiseSection = NoiseSection()
    grid: GridSection
    bandwidths: BandwidthSection
    ensemble: EnsembleSection = EnsembleSection()
    lipschitz: LipschitzSection = LipschitzSection()

    @property
    def dim(self) -> int:
        return len(self.bandwidths.h)

    @field_validator("seed")
    @classmethod
    def _seed_positive(cls, value: int) -> int:
        if value < 0:
            raise ValueError("la graine doit être ≥ 0")
        return value


# ========================================
# CHARGEMENT
# ========================================


def config_error_from_validation(error: ValidationError) -> ConfigError:
    """Première erreur pydantic → ConfigError nommant le champ (ex. bandwidths.h)"""
    first = error.errors()[0]
    # les unions ajoutent à loc le nom de chaque branche essayée
    parts = [
        part
        for part in first["loc"]
        if isinstance(part, str) and part.isidentifier() and part not in _UNION_TAGS
    ]
    return ConfigError(first["msg"], field=".".join(parts) or None)


def parse_override(assignment: str) -> Tuple[List[str], Any]:
    """'bandwidths.h=[0.2]' → (['bandwidths', 'h'], [0.2]) ; valeur TOML, sinon chaîne brute"""
    key, sep, raw = assignment.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(f"surcharge invalide '{assignment}' (attendu KEY=VALUE)", field="--set")
    try:
        value = tomllib.loads(f"value = {raw.strip()}")["value"]
    except tomllib.TOMLDecodeError:
        value = raw.strip()
    return key.split("."), value


def apply_overrides(raw: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    for assignment in overrides:
        path, value = parse_override(assignment)
        node = raw
        for part in path[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"'{part}' n'est pas une section", field=".".join(path))
            node = child
        node[path[-1]] = value
        logger.debug(f"Surcharge {'.'.join(path)} = {value!r}")
    return raw


BUNDLED_ALIASES = {
    "fig1a": "sin_laplace",
    "fig1b": "sin_uniform",
    "fig1c": "logcosh_laplace",
    "fig1d": "sqrt_cauchy",
    "fig1e": "log_pareto",
}


def resolve_config_path(path: Union[str, Path]) -> Path:
    """
    Chemin existant tel quel ; sinon un nom court (ou un alias) désigne une expérience fournie

    "sin_laplace" et "fig1a" renvoient tous deux à CONFIGS_DIR/sin_laplace.toml.
    """
    path = Path(path)
    if path.exists() or path.suffix or path.parent != Path("."):
        return path
    name = BUNDLED_ALIASES.get(path.name, path.name)
    bundled = settings.CONFIGS_DIR / f"{name}.toml"
    if bundled.exists():
        logger.debug(f"Expérience fournie : {path.name} → {bundled}")
        return bundled
    return path


def read_raw_config(path: Union[str, Path]) -> Dict[str, Any]:
    """TOML, ou JSON d'un manifeste de run (on relit alors sa section 'config')"""
    path = resolve_config_path(path)
    if not path.exists():
        raise ConfigError(f"fichier introuvable : {path}", field="--config")
    try:
        if path.suffix == ".json":
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
            return data.get("config", data)
        with open(path, "rb") as f:
            return tomllib.load(f)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigError(f"syntaxe invalide dans {path} : {e}", field="--config") from e


def _check_dimensions(model: ExperimentFile):
    d = model.dim
    if len(model.regression.functions) != d:
        raise ConfigError(f"{len(model.regression.functions)} fonctions pour d={d}", field="regression.functions")
    if len(model.design.factor_list()) != d:
        raise ConfigError(f"{len(model.design.factor_list())} facteurs de design pour d={d}", field="design")
    if len(model.grid.lower) != d:
        raise ConfigError(f"grille de dimension {len(model.grid.lower)} pour d={d}", field="grid")
    for name in ("delta", "gamma"):
        boxes = getattr(model.lipschitz, name)
        if isinstance(boxes, list) and len(boxes) != d:
            raise ConfigError(f"{len(boxes)} intervalles pour d={d}", field=f"lipschitz.{name}")


def load_experiment(
    path: Union[str, Path],
    overrides: Sequence[str] = (),
    seed: Optional[int] = None,
) -> ExperimentFile:
    """Lit, surcharge et valide un fichier d'expérience"""
    raw = apply_overrides(read_raw_config(path), overrides)
    if seed is not None:
        raw["seed"] = seed
    try:
        model = ExperimentFile.model_validate(raw)
    except ValidationError as e:
        raise config_error_from_validation(e) from e
    _check_dimensions(model)
    logger.info(f"📁 Configuration chargée : {model.name} (d={model.dim})")
    return model
