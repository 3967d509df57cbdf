import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from saskit.dataio import (
    Dataset,
    DatasetInvariantError,
    InconsistentColumnCount,
    NonPositiveQ,
    NoNumericRows,
    load_ascii,
    save_ascii,
)


class TestLoadAscii:
    def test_two_column_with_header(self):
        parsed = load_ascii("# q I\n0.01 100.0\n0.02 50.0")
        assert len(parsed.dataset) == 2
        assert parsed.skipped_lines == 1
        assert parsed.column_count == 2
        assert parsed.dataset.d_intensity is None

    def test_comma_delimited_sorted(self):
        parsed = load_ascii("0.02,50,2\n0.01,100,3")
        assert parsed.delimiter == "comma"
        assert parsed.dataset.q == pytest.approx([0.01, 0.02])
        assert parsed.dataset.intensity == pytest.approx([100, 50])
        assert parsed.dataset.d_intensity == pytest.approx([3, 2])

    def test_semicolon_delimiter(self):
        parsed = load_ascii("0.1;10\n0.2;5")
        assert parsed.delimiter == "semicolon"
        assert len(parsed.dataset) == 2

    def test_no_numeric_rows(self):
        with pytest.raises(NoNumericRows):
            load_ascii("hello\nworld")
        with pytest.raises(NoNumericRows):
            load_ascii("")

    def test_percent_comments_and_text_headers(self):
        text = "% instrument X\nq I dI\n0.01 10 1\n0.02 5 0.5\n"
        parsed = load_ascii(text)
        assert len(parsed.dataset) == 2
        assert parsed.skipped_lines == 2

    def test_four_column_dq_discarded(self):
        parsed = load_ascii("0.01 10 1 0.001\n0.02 5 0.5 0.001")
        assert parsed.column_count == 4
        assert parsed.dataset.d_intensity == pytest.approx([1, 0.5])

    def test_inconsistent_columns(self):
        with pytest.raises(InconsistentColumnCount):
            load_ascii("0.01 10 1\n0.02 5")

    def test_all_nonpositive_q(self):
        with pytest.raises(NonPositiveQ):
            load_ascii("-0.01 10\n0.0 5")

    def test_nonfinite_rows_dropped(self):
        parsed = load_ascii("0.01 10\n0.02 nan\n0.03 7")
        assert len(parsed.dataset) == 2
        assert parsed.skipped_lines == 1

    def test_duplicate_q_averaged(self):
        parsed = load_ascii("0.01 10 2\n0.01 20 2\n0.02 5 1")
        assert parsed.dataset.q == pytest.approx([0.01, 0.02])
        assert parsed.dataset.intensity[0] == pytest.approx(15.0)
        # quadrature / n: sqrt(2^2 + 2^2)/2
        assert parsed.dataset.d_intensity[0] == pytest.approx(math.sqrt(8) / 2)
        assert parsed.skipped_lines == 1

    def test_nonpositive_q_rows_dropped_but_rest_kept(self):
        parsed = load_ascii("-0.01 3\n0.01 10\n0.02 5")
        assert parsed.dataset.q == pytest.approx([0.01, 0.02])


class TestSaveAscii:
    def test_three_column_round_trip(self):
        ds = Dataset(q=[0.01, 0.02], intensity=[100.0, 50.0], d_intensity=[3.0, 2.0])
        text = save_ascii(ds)
        assert text.startswith("# q I dI\n")
        back = load_ascii(text).dataset
        assert back.q == pytest.approx(ds.q, rel=1e-8)
        assert back.intensity == pytest.approx(ds.intensity, rel=1e-8)
        assert back.d_intensity == pytest.approx(ds.d_intensity, rel=1e-8)

    def test_two_column_output_without_di(self):
        ds = Dataset(q=[0.01, 0.02], intensity=[1.0, 2.0])
        text = save_ascii(ds)
        assert text.splitlines()[0] == "# q I"
        assert all(len(line.split()) == 2 for line in text.splitlines()[1:])

    def test_empty_dataset_rejected_upstream(self):
        with pytest.raises(DatasetInvariantError):
            Dataset(q=[], intensity=[])


class TestDatasetInvariants:
    def test_length_mismatch(self):
        with pytest.raises(DatasetInvariantError):
            Dataset(q=[0.1, 0.2], intensity=[1.0])

    def test_descending_q_rejected(self):
        with pytest.raises(DatasetInvariantError):
            Dataset(q=[0.2, 0.1], intensity=[1.0, 2.0])

    def test_nonpositive_error_bars_rejected(self):
        with pytest.raises(DatasetInvariantError):
            Dataset(q=[0.1, 0.2], intensity=[1.0, 2.0], d_intensity=[1.0, 0.0])


@st.composite
def datasets(draw):
    raw = draw(st.lists(st.floats(min_value=1e-4, max_value=10.0, allow_nan=False),
                        min_size=1, max_size=30))
    # distinct at the serializer's 9-significant-digit precision
    q = sorted({float(f"{v:.9g}") for v in raw})
    n = len(q)
    intensity = draw(st.lists(
        st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
        min_size=n, max_size=n))
    with_errors = draw(st.booleans())
    d_intensity = None
    if with_errors:
        d_intensity = draw(st.lists(
            st.floats(min_value=1e-6, max_value=1e4, allow_nan=False),
            min_size=n, max_size=n))
    return Dataset(q=np.array(q), intensity=np.array(intensity),
                   d_intensity=None if d_intensity is None else np.array(d_intensity))


class TestRoundTripProperty:
    @given(datasets())
    @settings(max_examples=60, deadline=None)
    def test_load_save_round_trip(self, ds):
        back = load_ascii(save_ascii(ds)).dataset
        assert back.q == pytest.approx(ds.q, rel=1e-8)
        assert back.intensity == pytest.approx(ds.intensity, rel=1e-8, abs=1e-300)
        if ds.d_intensity is None:
            assert back.d_intensity is None
        else:
            assert back.d_intensity == pytest.approx(ds.d_intensity, rel=1e-8)

    @given(datasets())
    @settings(max_examples=40, deadline=None)
    def test_loader_output_satisfies_invariants(self, ds):
        back = load_ascii(save_ascii(ds)).dataset
        assert np.all(back.q > 0)
        assert np.all(np.diff(back.q) > 0)
        assert len(back.q) == len(back.intensity)
