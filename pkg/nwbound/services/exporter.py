"""
Export des résultats
CSV (RFC 4180, 17 chiffres significatifs) + script gnuplot statique à trois panneaux
"""

import csv
import io
import logging
import math
from pathlib import Path
from typing import List, Optional

from nwbound.services.run_manager import write_atomic
from nwbound.services.simulation import BiasReport

logger = logging.getLogger(__name__)

VALUE_COLUMNS = [
    "m_true",
    "m_hat_mean",
    "empirical_bias",
    "standard_error",
    "bound_theorem1",
    "bound_theorem2",
    "rosenblatt",
    "design_density",
]


def csv_header(dim: int) -> List[str]:
    inputs = ["x"] if dim == 1 else [f"x{i + 1}" for i in range(dim)]
    return inputs + VALUE_COLUMNS


def format_number(value: Optional[float]) -> str:
    """17 chiffres significatifs ; champ vide si la valeur est absente"""
    if value is None or math.isnan(value):
        return ""
    return format(float(value), ".17g")


def report_rows(report: BiasReport) -> List[List[str]]:
    rows = []
    for i in range(len(report)):
        values = [
            report.m_true[i],
            report.m_hat_mean[i],
            report.empirical_bias[i],
            report.standard_error[i],
            report.bound_bounded[i],
            report.bound_unbounded[i],
            report.rosenblatt[i],
            report.design_density[i],
        ]
        rows.append([format_number(v) for v in report.grid[i]] + [format_number(v) for v in values])
    return rows


def render_csv(report: BiasReport) -> str:
    buffer = io.StringIO(newline="")
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(csv_header(report.grid.shape[1]))
    writer.writerows(report_rows(report))
    return buffer.getvalue()


def write_csv(report: BiasReport, path: Path) -> Path:
    write_atomic(path, render_csv(report), newline="")
    logger.info(f"📁 CSV écrit : {path}")
    return path


# ========================================
# GNUPLOT
# ========================================

_GNUPLOT_1D = """\
# {title}
set datafile separator ","
set key autotitle columnhead
set terminal pngcairo size 1500,450
set output "{png}"
set multiplot layout 1,3 title "{title}"

set title "régression"
plot "{csv}" using "x":"m_true" with lines lw 2, \\
     "" using "x":"m_hat_mean" with points pt 7 ps 0.5

set title "biais"
plot "{csv}" using "x":(abs(column("empirical_bias"))) with lines lw 2 title "|biais empirique|", \\
     "" using "x":"bound_theorem1" with lines dt 2 title "borne (M fini)", \\
     "" using "x":"bound_theorem2" with lines dt 3 title "borne (non bornée)", \\
     "" using "x":"rosenblatt" with lines dt 4 title "Rosenblatt"

set title "design"
plot "{csv}" using "x":"design_density" with lines lw 2

unset multiplot
"""

_GNUPLOT_ND = """\
# {title}
set datafile separator ","
set key autotitle columnhead
set terminal pngcairo size 1000,450
set output "{png}"
set xlabel "point de grille"
set title "{title}"
plot "{csv}" using 0:(abs(column("empirical_bias"))) with linespoints title "|biais empirique|", \\
     "" using 0:"bound_theorem1" with linespoints dt 2 title "borne (M fini)", \\
     "" using 0:"bound_theorem2" with linespoints dt 3 title "borne (non bornée)", \\
     "" using 0:"rosenblatt" with linespoints dt 4 title "Rosenblatt"
"""


def render_gnuplot(csv_name: str, title: str, dim: int) -> str:
    template = _GNUPLOT_1D if dim == 1 else _GNUPLOT_ND
    png = Path(csv_name).with_suffix(".png").name
    return template.format(title=title, csv=csv_name, png=png)


def write_gnuplot(csv_path: Path, title: str, dim: int) -> Path:
    path = Path(csv_path).with_suffix(".gp")
    write_atomic(path, render_gnuplot(Path(csv_path).name, title, dim))
    logger.info(f"📁 Script gnuplot écrit : {path}")
    return path
