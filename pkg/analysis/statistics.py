"""
Statistics Block - boxplot summaries of sweep energies.

Median and quartiles use linear interpolation; outliers lie outside the
Tukey fences Q1 - 1.5 IQR and Q3 + 1.5 IQR. The chemical-accuracy band
is closed on both ends.
"""

from typing import Literal, Optional, Sequence

import numpy as np

from core.config import get_settings
from core.errors import InvalidArgumentError
from core.models import SummaryStats, TrialRecord

TUKEY_K = 1.5
BAND_EPSILON = 1e-12


def summarize_energies(
    energies: Sequence[float],
    reference_energy: Optional[float] = None,
    band: Optional[float] = None,
    failed: int = 0,
    quantity: Literal["final", "recalculated"] = "final",
    mean_circuit_executions: Optional[float] = None,
) -> SummaryStats:
    """
    Summarize a non-empty list of energies.

    Example:
        [-1.9, -1.87, -1.86, -1.1] -> q1 = -1.8775, q3 = -1.67,
        upper fence -1.35875, one outlier (-1.1)
    """
    accuracy = get_settings().accuracy
    ref = accuracy.reference_energy if reference_energy is None else reference_energy
    band = accuracy.band if band is None else band

    e = np.asarray(energies, dtype=float)
    if e.size == 0:
        raise InvalidArgumentError("Cannot summarize an empty set of energies", "energies")

    q1, median, q3 = np.percentile(e, [25, 50, 75])
    iqr = q3 - q1
    lower, upper = q1 - TUKEY_K * iqr, q3 + TUKEY_K * iqr
    n_outliers = int(np.count_nonzero((e < lower) | (e > upper)))

    within = int(np.count_nonzero(np.abs(e - ref) <= band + BAND_EPSILON))
    p = within / e.size
    pct_stderr = float(np.sqrt(p * (1 - p) / e.size) * 100)

    return SummaryStats(
        quantity=quantity,
        count=int(e.size),
        failed=failed,
        median=float(median),
        q1=float(q1),
        q3=float(q3),
        iqr=float(iqr),
        lower_fence=float(lower),
        upper_fence=float(upper),
        n_outliers=n_outliers,
        minimum=float(e.min()),
        maximum=float(e.max()),
        reference_energy=ref,
        band=band,
        pct_in_accuracy=100.0 * p,
        pct_stderr=pct_stderr,
        n_below_reference=int(np.count_nonzero(e < ref)),
        mean_circuit_executions=mean_circuit_executions,
    )


def summarize(
    records: Sequence[TrialRecord],
    reference_energy: Optional[float] = None,
    band: Optional[float] = None,
    quantity: Literal["final", "recalculated"] = "final",
) -> SummaryStats:
    """Summarize the successful trials; failed ones only count in ``failed``."""
    ok = [r for r in records if r.succeeded]
    failed = len(records) - len(ok)
    if quantity == "recalculated":
        energies = [r.recalculated_energy for r in ok if r.recalculated_energy is not None]
    else:
        energies = [r.final_energy for r in ok]
    if not energies:
        raise InvalidArgumentError(f"No successful trials with a {quantity} energy", "records")

    executions = float(np.mean([r.circuit_executions for r in ok]))
    return summarize_energies(
        energies,
        reference_energy=reference_energy,
        band=band,
        failed=failed,
        quantity=quantity,
        mean_circuit_executions=executions,
    )


def summarize_all(
    records: Sequence[TrialRecord],
    reference_energy: Optional[float] = None,
    band: Optional[float] = None,
) -> list[SummaryStats]:
    """Final-energy summary, plus the recalculated one when records carry it."""
    out = [summarize(records, reference_energy, band, "final")]
    if any(r.succeeded and r.recalculated_energy is not None for r in records):
        out.append(summarize(records, reference_energy, band, "recalculated"))
    return out
