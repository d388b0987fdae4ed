"""Mesh-refinement study of the FEM flexural frequencies."""

import logging
import math
from typing import Dict, List, Sequence

from piezobeam.config import config
from piezobeam.models.error_codes import ParameterError
from piezobeam.models.schemas import ConvergenceReport, ConvergenceRow
from piezobeam.services.fem_oracle import FemFlags, solve_flexural
from piezobeam.services.section import Layup, Section

logger = logging.getLogger(__name__)

# Hermite cubic eigenvalue error order
EXPECTED_ORDER = 4


def convergence_report(layup: Layup, section: Section, meshes: Sequence[int], k: int,
                       flags: FemFlags = FemFlags()) -> ConvergenceReport:
    """
    Tabulate the first k flexural frequencies over a mesh sequence.

    Rows carry the relative change from the previous mesh, the observed
    order from three consecutive meshes and a Richardson extrapolation with
    the expected order. Modes whose frequency rises under refinement beyond
    the monotone tolerance are flagged.
    """
    meshes = [int(n) for n in meshes]
    if not meshes:
        raise ParameterError("mesh list must not be empty")
    if any(b <= a for a, b in zip(meshes, meshes[1:])):
        raise ParameterError(f"mesh list must be strictly ascending (got {meshes})")
    if k < 1:
        raise ParameterError(f"mode count must be >= 1 (got {k})")

    history: Dict[int, List[float]] = {mode: [] for mode in range(1, k + 1)}
    rows: List[ConvergenceRow] = []
    non_monotone = set()

    for i, n in enumerate(meshes):
        freqs = solve_flexural(layup, section, n, k, flags)
        for mode, f in enumerate(freqs, start=1):
            previous = history[mode]
            row = ConvergenceRow(n_elems=n, mode=mode, freq_hz=f)

            if previous:
                f_prev = previous[-1]
                row.rel_change = (f - f_prev) / f_prev
                ratio = n / meshes[i - 1]
                row.extrapolated_hz = f + (f - f_prev) / (ratio ** EXPECTED_ORDER - 1.0)
                if f > f_prev * (1.0 + config.MONOTONE_TOLERANCE):
                    non_monotone.add(mode)

            if len(previous) >= 2:
                change_prev = previous[-1] - previous[-2]
                change = f - previous[-1]
                if change != 0 and change_prev != 0:
                    row.observed_order = math.log(abs(change_prev / change)) / math.log(n / meshes[i - 1])

            previous.append(f)
            rows.append(row)

    if non_monotone:
        logger.warning(f"Non-monotone refinement for modes {sorted(non_monotone)}")

    return ConvergenceReport(
        meshes=meshes,
        modes=k,
        rows=rows,
        non_monotone_modes=sorted(non_monotone),
    )
