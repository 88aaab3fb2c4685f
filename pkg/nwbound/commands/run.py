"""
Commande `run` : simulation d'ensemble + bornes + export CSV/gnuplot
Les sorties sont écrites dans le dossier de travail du run puis publiées ensemble ;
en cas d'échec seul ce dossier est supprimé.
"""

import logging
import time
from pathlib import Path
from typing import Optional, Sequence

from nwbound.errors import NumericError
from nwbound.schemas import load_experiment
from nwbound.services.exporter import write_csv, write_gnuplot
from nwbound.services.run_manager import RunManager, RunManifest
from nwbound.services.scenario import build_scenario
from nwbound.services.simulation import empirical_bias

logger = logging.getLogger(__name__)


def run_experiment(
    config_path: Path,
    out_dir: Path,
    overrides: Sequence[str] = (),
    seed: Optional[int] = None,
    jobs: Optional[int] = None,
) -> RunManifest:
    """Exécute une expérience de bout en bout et renvoie son manifeste"""
    start_time = time.time()

    # ========================================
    # CONFIGURATION
    # ========================================

    model = load_experiment(config_path, overrides=overrides, seed=seed)
    scenario = build_scenario(model)

    out_dir = Path(out_dir)
    manager = RunManager(out_dir)
    run_id = model.name
    csv_path = out_dir / f"{run_id}.csv"
    gp_path = out_dir / f"{run_id}.gp"
    manager.create_run(run_id, config=model.model_dump(mode="json"), seed=model.seed)
    staging = manager.work_dir(run_id)

    try:
        # ========================================
        # SIMULATION
        # ========================================

        manager.set_running(run_id)
        total = scenario.config.N

        def progress(done: int, _total: int):
            # manifeste réécrit tous les ~10 %
            if done == total or done % max(1, total // 10) == 0:
                manager.set_progress(run_id, int(90 * done / total), f"Membre {done}/{total}")

        report = empirical_bias(scenario.config, jobs=jobs, specs=scenario.specs, progress=progress)
        logger.info(f"✅ Simulation terminée en {time.time() - start_time:.2f}s")

        if report.failures and not scenario.allow_partial:
            first = min(report.failures)
            raise NumericError(
                f"{len(report.failures)} point(s) de grille en échec, dont x={report.grid[first].tolist()} : "
                f"{report.failures[first]} (allow_partial=true pour accepter)"
            )
        if report.failures:
            logger.warning(f"⚠️ {len(report.failures)} point(s) en échec conservés (allow_partial)")

        # ========================================
        # EXPORT
        # ========================================

        manager.set_progress(run_id, 95, "Export")
        staged_csv = write_csv(report, staging / csv_path.name)
        write_gnuplot(staged_csv, title=f"{run_id} : {scenario.config.design.label}", dim=report.grid.shape[1])
        manager.set_completed(run_id, outputs={"csv": str(csv_path), "gnuplot": str(gp_path)})
        manager.publish(run_id)

    except Exception as e:
        manager.set_failed(run_id, str(e))
        manager.discard(run_id)
        raise

    logger.info(f"🎉 Run {run_id} terminé en {time.time() - start_time:.2f}s")
    return manager.get_run(run_id)
