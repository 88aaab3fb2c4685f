"""
Commande `check` : valide une configuration et affiche la spec Lipschitz résolue, sans simuler
"""

import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence

from nwbound.schemas import load_experiment
from nwbound.services.geometry import BoxInterval
from nwbound.services.scenario import Scenario, build_scenario

logger = logging.getLogger(__name__)


def _format_box(box: BoxInterval) -> str:
    return " × ".join(f"({lo:g}, {hi:g})" for lo, hi in zip(box.lower, box.upper))


def describe(scenario: Scenario) -> List[str]:
    """Lignes lisibles décrivant le scénario résolu"""
    c = scenario.constants
    config = scenario.config
    bounded = c.M is not None
    unbounded = c.upsilon == c.delta == c.gamma
    lines = [
        f"expérience : {scenario.name}",
        f"design : {config.design.label}",
        f"régression : {' + '.join(fn.description for fn in config.functions)}",
        f"L_f={c.L_f:g}",
        f"L_m={c.L_m:g}",
        f"M={'unbounded' if c.M is None else f'{c.M:g}'}",
        f"Υ={_format_box(c.upsilon)}",
        f"D={_format_box(c.delta)}",
        f"G={_format_box(c.gamma)}",
        f"h={[float(v) for v in config.h]}",
        f"grille : {config.grid.shape[0]} points, ensemble : N={config.N} × n={config.n}",
        f"borne M fini : {'oui' if bounded else 'non'}, borne non bornée : {'oui' if unbounded else 'non'}",
    ]
    if bounded and c.L_m > 0 and c.M > 0 and math.isfinite(c.M / c.L_m):
        lines.append(f"troncature F : |l| ≤ M/L_m = {c.M / c.L_m:g}")
    return lines


def check_experiment(
    config_path: Path,
    overrides: Sequence[str] = (),
    seed: Optional[int] = None,
) -> Scenario:
    model = load_experiment(config_path, overrides=overrides, seed=seed)
    scenario = build_scenario(model)
    for line in describe(scenario):
        print(line)
    logger.info(f"✅ Configuration {model.name} valide")
    return scenario
