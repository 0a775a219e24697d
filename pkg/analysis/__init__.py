"""
Analysis Package

Pure-function blocks over trial results:
- similarity.py: probability-vector similarity and outcome classification
- statistics.py: boxplot statistics and chemical-accuracy rates
"""

from analysis.similarity import (
    jaccard_tanimoto,
    normalized_scalar,
    similarity_matrix,
    averaged_similarity,
    reference_similarity,
    classify,
    analyze_trials,
)

from analysis.statistics import summarize, summarize_energies, summarize_all

__all__ = [
    "jaccard_tanimoto",
    "normalized_scalar",
    "similarity_matrix",
    "averaged_similarity",
    "reference_similarity",
    "classify",
    "analyze_trials",
    "summarize",
    "summarize_energies",
    "summarize_all",
]
