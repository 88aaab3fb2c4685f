"""
Run Manager pour les expériences
Suit le cycle de vie d'un run (pending → running → completed/failed) dans un manifeste JSON.
Tant qu'un run n'est pas publié, son manifeste et ses sorties vivent dans un dossier de
travail caché du dossier de sortie : un échec ne touche jamais aux résultats déjà publiés.
"""

import logging
import os
import shutil
import tempfile
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel

from nwbound.config import settings

logger = logging.getLogger(__name__)


class RunManifest(BaseModel):
    """Photographie d'un run : config, version, graine, durée, fichiers produits"""

    run_id: str
    status: Literal["pending", "running", "completed", "failed"] = "pending"
    progress: int = 0
    current_step: str = "Initialisation..."
    config: Dict[str, Any]
    version: str = settings.APP_VERSION
    seed: int
    created_at: str
    started_at: Optional[str] = None
    completed_at: Optional[str] = None
    wall_clock_seconds: Optional[float] = None
    outputs: Dict[str, str] = {}
    error: Optional[str] = None


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _current_umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


def write_atomic(path: Path, content: str, newline: Optional[str] = None):
    """Écrit dans un fichier temporaire du même dossier puis remplace la cible"""
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline=newline) as f:
            f.write(content)
        # mkstemp crée en 0600 ; la cible suit l'umask comme un open() ordinaire
        os.chmod(tmp_name, 0o666 & ~_current_umask())
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise


class RunManager:
    """Gestionnaire des runs d'un dossier de sortie"""

    def __init__(self, runs_dir: Path):
        self.runs: Dict[str, RunManifest] = {}
        self._clocks: Dict[str, float] = {}
        self._work_dirs: Dict[str, Path] = {}
        self.runs_dir = Path(runs_dir)
        self.runs_dir.mkdir(parents=True, exist_ok=True)

    def manifest_path(self, run_id: str) -> Path:
        """Emplacement publié du manifeste"""
        return self.runs_dir / f"{run_id}.manifest.json"

    def work_dir(self, run_id: str) -> Path:
        """Dossier où le run écrit tant qu'il n'est pas publié"""
        return self._work_dirs.get(run_id, self.runs_dir)

    def create_run(self, run_id: str, config: Dict[str, Any], seed: int) -> RunManifest:
        """Créer un nouveau run"""
        self._work_dirs[run_id] = Path(tempfile.mkdtemp(prefix=f".{run_id}.", suffix=".partial", dir=self.runs_dir))
        run = RunManifest(run_id=run_id, config=config, seed=seed, created_at=_now())
        self.runs[run_id] = run
        self._save_run(run_id)
        logger.info(f"📋 Run créé : {run_id} (graine {seed})")
        return run

    def update_run(self, run_id: str, updates: Dict[str, Any]):
        """Mettre à jour un run"""
        if run_id in self.runs:
            self.runs[run_id] = self.runs[run_id].model_copy(update=updates)
            self._save_run(run_id)

    def get_run(self, run_id: str) -> Optional[RunManifest]:
        """Récupérer un run"""
        if run_id in self.runs:
            return self.runs[run_id]

        # Essayer de charger depuis le fichier
        return self._load_run(run_id)

    def set_running(self, run_id: str, step: str = "Simulation en cours..."):
        """Marquer un run comme en cours"""
        self._clocks[run_id] = time.perf_counter()
        self.update_run(run_id, {"status": "running", "started_at": _now(), "current_step": step})

    def set_progress(self, run_id: str, progress: int, step: str):
        """Mettre à jour la progression"""
        self.update_run(run_id, {"progress": progress, "current_step": step})

    def set_completed(self, run_id: str, outputs: Dict[str, str]):
        """Marquer un run comme terminé (les sorties sont nommées par leur emplacement publié)"""
        self.update_run(
            run_id,
            {
                "status": "completed",
                "progress": 100,
                "current_step": "Run terminé",
                "outputs": outputs,
                "completed_at": _now(),
                "wall_clock_seconds": self._elapsed(run_id),
            },
        )
        logger.info(f"✅ Run {run_id} terminé")

    def set_failed(self, run_id: str, error: str):
        """Marquer un run comme échoué"""
        run = self.runs.get(run_id)
        if run is None:
            return
        self.runs[run_id] = run.model_copy(
            update={
                "status": "failed",
                "current_step": "Erreur",
                "error": error,
                "completed_at": _now(),
                "wall_clock_seconds": self._elapsed(run_id),
            }
        )
        logger.error(f"❌ Run {run_id} échoué : {error}")

    def publish(self, run_id: str):
        """Remplace les sorties publiées par celles du dossier de travail, manifeste en dernier"""
        work_dir = self._work_dirs.pop(run_id, None)
        if work_dir is None:
            return
        names = [Path(p).name for p in self.runs[run_id].outputs.values()]
        names.append(self.manifest_path(run_id).name)
        for name in names:
            os.replace(work_dir / name, self.runs_dir / name)
            logger.info(f"📁 Publié : {self.runs_dir / name}")
        shutil.rmtree(work_dir, ignore_errors=True)

    def discard(self, run_id: str):
        """Supprime ce que le run a écrit ; les sorties déjà publiées restent en place"""
        work_dir = self._work_dirs.pop(run_id, None)
        if work_dir is None:
            return
        shutil.rmtree(work_dir, ignore_errors=True)
        logger.info(f"🗑️ Sorties partielles supprimées : {work_dir}")

    def _elapsed(self, run_id: str) -> Optional[float]:
        start = self._clocks.get(run_id)
        return None if start is None else time.perf_counter() - start

    def _save_run(self, run_id: str):
        """Sauvegarder un run sur disque"""
        try:
            path = self.work_dir(run_id) / self.manifest_path(run_id).name
            write_atomic(path, self.runs[run_id].model_dump_json(indent=2) + "\n")
        except OSError as e:
            logger.error(f"❌ Erreur sauvegarde run {run_id}: {e}")

    def _load_run(self, run_id: str) -> Optional[RunManifest]:
        """Charger un run publié depuis le disque"""
        try:
            run_file = self.manifest_path(run_id)
            if run_file.exists():
                run = RunManifest.model_validate_json(run_file.read_text(encoding="utf-8"))
                self.runs[run_id] = run
                return run
        except (OSError, ValueError) as e:
            logger.error(f"❌ Erreur chargement run {run_id}: {e}")

        return None
