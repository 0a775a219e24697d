"""
Similarity Block - probability-vector similarity of VQE trial outcomes.

Pure functions over outcome distributions: Jaccard-Tanimoto index,
normalized scalar product, set-averaged and reference similarities, and
the ground-like / excited / erroneous classification built on them.
No side effects, deterministic output.
"""

from typing import Callable, Optional, Sequence

import numpy as np

from core.config import SimilarityThresholds, get_settings
from core.errors import DimensionMismatchError, InvalidArgumentError
from core.models import SimilarityAnalysis, SimilarityReport, TrialClass, TrialRecord

Measure = Callable[[np.ndarray, np.ndarray], float]


def _pair(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatchError(x.shape[0], y.shape[0], "vector length")
    return x, y


def jaccard_tanimoto(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Sum of componentwise minima over sum of componentwise maxima.

    Example:
        x = [0.5, 0.5, 0, 0], y = [0.5, 0, 0.5, 0] -> 0.5 / 1.5 = 1/3
    """
    x, y = _pair(x, y)
    union = np.maximum(x, y).sum()
    if union == 0:
        return 1.0
    return float(np.minimum(x, y).sum() / union)


def normalized_scalar(x: Sequence[float], y: Sequence[float]) -> float:
    """Cosine of the angle between two non-zero vectors."""
    x, y = _pair(x, y)
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise InvalidArgumentError("Normalized scalar product of a zero vector", "vector")
    return float(np.clip(x @ y / (nx * ny), 0.0, 1.0))


MEASURES: dict[str, Measure] = {
    "jt": jaccard_tanimoto,
    "scalar": normalized_scalar,
}


def _stack(vectors: Sequence[Sequence[float]]) -> np.ndarray:
    if len(vectors) == 0:
        raise InvalidArgumentError("Similarity needs at least one vector", "vectors")
    lengths = {len(v) for v in vectors}
    if len(lengths) != 1:
        raise DimensionMismatchError(min(lengths), max(lengths), "vector length")
    return np.asarray(vectors, dtype=float)


def similarity_matrix(vectors: Sequence[Sequence[float]], measure: str = "jt") -> np.ndarray:
    """
    All pairwise similarities, self-pairs on the diagonal.

    Rows are built one at a time against the whole set, so memory stays
    at N x N rather than N x N x 2^q.
    """
    V = _stack(vectors)
    if measure == "jt":
        rows = []
        for v in V:
            union = np.maximum(v, V).sum(axis=1)
            inter = np.minimum(v, V).sum(axis=1)
            rows.append(np.divide(inter, union, out=np.ones_like(union), where=union > 0))
        out = np.vstack(rows)
    elif measure == "scalar":
        norms = np.linalg.norm(V, axis=1)
        if np.any(norms == 0):
            raise InvalidArgumentError("Normalized scalar product of a zero vector", "vectors")
        U = V / norms[:, None]
        out = U @ U.T
    else:
        raise InvalidArgumentError(f"Unknown measure '{measure}' (use jt or scalar)", "measure")
    return np.clip(out, 0.0, 1.0)


def averaged_similarity(vectors: Sequence[Sequence[float]], measure: str = "jt") -> np.ndarray:
    """Mean similarity of each vector to every vector in the set, itself included."""
    return np.clip(similarity_matrix(vectors, measure).mean(axis=1), 0.0, 1.0)


def reference_similarity(
    vectors: Sequence[Sequence[float]],
    energies: Sequence[float],
    measure: str = "jt",
) -> tuple[int, np.ndarray]:
    """
    Similarity of each vector to the vector of the lowest-energy trial.

    Returns:
        (position of the reference vector, similarities)
    """
    V = _stack(vectors)
    if len(energies) != V.shape[0]:
        raise DimensionMismatchError(V.shape[0], len(energies), "energy count")
    ref = int(np.argmin(energies))
    fn = MEASURES.get(measure)
    if fn is None:
        raise InvalidArgumentError(f"Unknown measure '{measure}' (use jt or scalar)", "measure")
    return ref, np.array([fn(V[ref], v) for v in V])


def classify_one(
    energy: float,
    similarity: float,
    ground_energy: float,
    thresholds: Optional[SimilarityThresholds] = None,
) -> TrialClass:
    t = thresholds or get_settings().similarity
    if ground_energy - t.ground_below <= energy <= ground_energy + t.ground_above \
            and similarity >= t.jt_high:
        return TrialClass.GROUND_LIKE
    if t.excited_min <= energy <= t.excited_max and similarity <= t.jt_low:
        return TrialClass.EXCITED
    return TrialClass.ERRONEOUS


def classify(
    energies: Sequence[float],
    similarities: Sequence[float],
    ground_energy: float,
    thresholds: Optional[SimilarityThresholds] = None,
) -> list[TrialClass]:
    """
    Label every trial.

    GroundLike: energy in [E0 - below, E0 + above] and averaged similarity
    at least jt_high. Excited: energy in the excited band and averaged
    similarity at most jt_low. Everything else is Erroneous.
    """
    if len(energies) != len(similarities):
        raise DimensionMismatchError(len(energies), len(similarities), "similarity count")
    return [classify_one(e, s, ground_energy, thresholds) for e, s in zip(energies, similarities)]


def analyze_trials(
    records: Sequence[TrialRecord],
    ground_energy: float,
    circuit: int = 0,
    measure: str = "jt",
    thresholds: Optional[SimilarityThresholds] = None,
) -> SimilarityAnalysis:
    """Similarity reports for the successful trials of a sweep."""
    if measure not in MEASURES:
        raise InvalidArgumentError(f"Unknown measure '{measure}' (use jt or scalar)", "measure")

    selected, vectors = [], []
    for record in records:
        if not record.succeeded:
            continue
        group = next((g for g in record.probabilities if g.circuit == circuit), None)
        if group is None:
            raise InvalidArgumentError(
                f"Trial {record.trial_index} has no probabilities for circuit {circuit}", "circuit"
            )
        selected.append(record)
        vectors.append(group.probabilities)

    if not selected:
        raise InvalidArgumentError("No successful trials to analyze", "records")

    energies = [r.final_energy for r in selected]
    avg_jt = averaged_similarity(vectors, "jt")
    avg_scalar = averaged_similarity(vectors, "scalar")
    ref_pos, ref_jt = reference_similarity(vectors, energies, "jt")
    _, ref_scalar = reference_similarity(vectors, energies, "scalar")

    chosen = avg_jt if measure == "jt" else avg_scalar
    labels = classify(energies, chosen, ground_energy, thresholds)

    reports = [
        SimilarityReport(
            trial_index=r.trial_index,
            energy=r.final_energy,
            avg_jt=float(avg_jt[i]),
            avg_scalar=float(avg_scalar[i]),
            reference_jt=float(np.clip(ref_jt[i], 0.0, 1.0)),
            reference_scalar=float(np.clip(ref_scalar[i], 0.0, 1.0)),
            label=labels[i],
        )
        for i, r in enumerate(selected)
    ]
    counts = {c.value: 0 for c in TrialClass}
    for label in labels:
        counts[label.value] += 1

    return SimilarityAnalysis(
        circuit=circuit,
        measure=measure,
        ground_energy=ground_energy,
        reference_trial=selected[ref_pos].trial_index,
        class_counts=counts,
        reports=reports,
    )
