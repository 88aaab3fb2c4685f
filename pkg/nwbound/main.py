"""
Point d'entrée principal de la CLI nwbound
Sous-commandes run / check ; codes de sortie 0 ok, 2 configuration, 3 échec numérique
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from nwbound.commands.check import check_experiment
from nwbound.commands.run import run_experiment
from nwbound.config import settings
from nwbound.errors import ConfigError, NWBoundError

logger = logging.getLogger(__name__)


def configure_logging(level: str = settings.LOG_LEVEL):
    """Configuration du logging"""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Bornes à bandwidth finie du biais de Nadaraya–Watson, confrontées à la simulation",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub: argparse.ArgumentParser):
        sub.add_argument("--config", type=Path, required=True, help="fichier d'expérience TOML (ou manifeste JSON)")
        sub.add_argument("--seed", type=int, default=None, help="remplace la graine du fichier")
        sub.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="surcharge un champ, ex. --set bandwidths.h=[0.2] (répétable)",
        )

    run_parser = subparsers.add_parser("run", help="simule, calcule les bornes et exporte CSV + gnuplot")
    add_common(run_parser)
    run_parser.add_argument("--out", type=Path, default=Path("results"), help="dossier de sortie")
    run_parser.add_argument(
        "--jobs", type=int, default=None, help=f"threads de l'ensemble (défaut : NWBOUND_JOBS={settings.JOBS})"
    )

    check_parser = subparsers.add_parser("check", help="valide la configuration et affiche la spec résolue")
    add_common(check_parser)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging("DEBUG" if settings.DEBUG else settings.LOG_LEVEL)

    try:
        if args.command == "run":
            if args.jobs is not None and args.jobs < 1:
                raise ConfigError(f"doit être ≥ 1 (reçu {args.jobs})", field="--jobs")
            logger.info(f"🚀 Démarrage de {settings.APP_NAME} {settings.APP_VERSION} : run {args.config}")
            manifest = run_experiment(
                args.config, args.out, overrides=args.overrides, seed=args.seed, jobs=args.jobs
            )
            for kind, path in manifest.outputs.items():
                logger.info(f"📁 {kind} : {path}")
        else:
            check_experiment(args.config, overrides=args.overrides, seed=args.seed)
    except NWBoundError as e:
        logger.error(f"❌ {type(e).__name__} : {e}")
        return e.exit_code

    return 0


if __name__ == "__main__":
    sys.exit(main())
