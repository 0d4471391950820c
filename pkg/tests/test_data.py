import numpy as np
import pytest

from wtrv.data import (DegenerateSeriesError, EmptyDataError, SchemaError,
                       Series, describe, read_csv)


@pytest.fixture
def csv_path(tmp_path):
    path = tmp_path / "rain.csv"
    path.write_text(
        "year,rainfall_mm\n"
        "2001,912.4\n"
        "2002,\n"
        "2003,1044.1\n"
        "2004,not-a-number\n"
        "2005,873.0\n")
    return str(path)


class TestReadCsv:
    def test_values_and_skips(self, csv_path):
        s = read_csv(csv_path, "rainfall_mm", year_column="year", label="demo")
        assert s.n == 3
        assert s.skipped == 2
        assert np.allclose(s.rainfall_mm, [912.4, 1044.1, 873.0])
        assert list(s.year) == [2001, 2003, 2005]

    def test_missing_column(self, csv_path):
        with pytest.raises(SchemaError):
            read_csv(csv_path, "precip")

    def test_empty(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("year,rainfall_mm\n")
        with pytest.raises(EmptyDataError):
            read_csv(str(path), "rainfall_mm")

    def test_nonpositive_rejected(self, tmp_path):
        path = tmp_path / "neg.csv"
        path.write_text("rainfall_mm\n-5.0\n3.0\n")
        with pytest.raises(ValueError):
            read_csv(str(path), "rainfall_mm")


class TestDescribe:
    def test_population_moments(self):
        v = np.array([2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0])
        st = describe(Series("t", v))
        assert st.n == 8
        assert st.mean == pytest.approx(5.0)
        assert st.median == pytest.approx(4.5)
        assert st.mode == pytest.approx(4.0)
        assert st.std == pytest.approx(2.0)  # classic population-sd example
        assert st.variance == pytest.approx(4.0)
        d = v - 5.0
        m2, m3, m4 = (np.mean(d ** k) for k in (2, 3, 4))
        assert st.skewness == pytest.approx(m3 / m2 ** 1.5)
        assert st.kurtosis == pytest.approx(m4 / m2 ** 2)  # non-excess
        assert st.minimum == 2.0 and st.maximum == 9.0

    def test_sample_convention_differs(self):
        v = np.array([2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0])
        pop = describe(Series("t", v), convention="population")
        sam = describe(Series("t", v), convention="sample")
        assert sam.variance == pytest.approx(pop.variance * 8 / 7)
        assert sam.skewness != pop.skewness

    def test_constant_series(self):
        with pytest.raises(DegenerateSeriesError):
            describe(Series("t", np.full(5, 3.0)))

    def test_as_dict_keys(self):
        st = describe(Series("t", np.array([1.0, 2.0, 3.0])))
        d = st.as_dict()
        for key in ("n", "mean", "median", "mode", "std", "variance",
                    "skewness", "kurtosis", "minimum", "maximum"):
            assert key in d

    def test_unknown_convention(self):
        with pytest.raises(ValueError):
            describe(Series("t", np.array([1.0, 2.0, 3.0])), convention="fisher")
