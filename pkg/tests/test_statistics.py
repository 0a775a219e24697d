"""
Tests for boxplot summaries and chemical-accuracy rates.
"""

import pytest


def _record(i, energy, recalculated=None, executions=100, failed=False):
    from core.models import TrialRecord, TrialStatus

    return TrialRecord(
        trial_index=i,
        seed=i,
        status=TrialStatus.FAILED if failed else TrialStatus.COMPLETED,
        final_energy=None if failed else energy,
        recalculated_energy=recalculated,
        circuit_executions=executions,
        error="optimize: boom" if failed else None,
    )


class TestSummarizeEnergies:
    """Quartiles, fences and outliers."""

    def test_boxplot_example(self):
        """Linear-interpolation quartiles and one high outlier."""
        from analysis.statistics import summarize_energies

        s = summarize_energies([-1.9, -1.87, -1.86, -1.1])
        assert s.q1 == pytest.approx(-1.8775)
        assert s.median == pytest.approx(-1.865)
        assert s.q3 == pytest.approx(-1.67)
        assert s.upper_fence == pytest.approx(-1.35875)
        assert s.n_outliers == 1
        assert s.minimum == -1.9
        assert s.maximum == -1.1

    def test_accuracy_rate_and_stderr(self):
        """Two of four inside the band: 50% with a 25-point standard error."""
        from analysis.statistics import summarize_energies

        s = summarize_energies([-1.9, -1.87, -1.86, -1.1], reference_energy=-1.865, band=0.006)
        assert s.pct_in_accuracy == pytest.approx(50.0)
        assert s.pct_stderr == pytest.approx(25.0)

    def test_band_is_closed(self):
        """An energy exactly on the band edge counts as accurate."""
        from analysis.statistics import summarize_energies

        s = summarize_energies([-1.0015], reference_energy=-1.0, band=0.0015)
        assert s.pct_in_accuracy == 100.0

    def test_defaults_from_settings(self):
        """Reference energy and band fall back to the configured values."""
        from analysis.statistics import summarize_energies
        from core.config import get_settings

        s = summarize_energies([-1.867, -1.866])
        assert s.reference_energy == get_settings().accuracy.reference_energy
        assert s.band == get_settings().accuracy.band
        assert s.pct_in_accuracy == 100.0

    def test_below_reference_counted(self):
        """Energies under the reference are reported separately."""
        from analysis.statistics import summarize_energies

        s = summarize_energies([-1.87, -1.86, -1.85], reference_energy=-1.86712)
        assert s.n_below_reference == 1

    def test_single_energy(self):
        """One trial has zero spread and no outliers."""
        from analysis.statistics import summarize_energies

        s = summarize_energies([-1.5])
        assert s.iqr == 0.0
        assert s.n_outliers == 0

    def test_empty(self):
        """No energies, no summary."""
        from analysis.statistics import summarize_energies
        from core.errors import InvalidArgumentError

        with pytest.raises(InvalidArgumentError):
            summarize_energies([])


class TestSummarizeRecords:
    """Summaries over trial records."""

    def test_failed_trials_counted_not_summarized(self):
        """Failed trials appear in ``failed`` only."""
        from analysis.statistics import summarize

        records = [_record(0, -1.86), _record(1, -1.85), _record(2, None, failed=True)]
        s = summarize(records)
        assert s.count == 2
        assert s.failed == 1
        assert s.mean_circuit_executions == 100.0

    def test_recalculated_column(self):
        """summarize_all adds a recalculated summary when present."""
        from analysis.statistics import summarize_all

        records = [_record(0, -1.80, -1.86), _record(1, -1.82, -1.865)]
        summaries = summarize_all(records)
        assert [s.quantity for s in summaries] == ["final", "recalculated"]
        assert summaries[1].median == pytest.approx(-1.8625)

    def test_final_only_when_no_recalculation(self):
        """Without recalculated energies there is one summary."""
        from analysis.statistics import summarize_all

        assert len(summarize_all([_record(0, -1.8)])) == 1

    def test_all_failed(self):
        """A sweep with no successful trial cannot be summarized."""
        from analysis.statistics import summarize
        from core.errors import InvalidArgumentError

        with pytest.raises(InvalidArgumentError):
            summarize([_record(0, None, failed=True)])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
