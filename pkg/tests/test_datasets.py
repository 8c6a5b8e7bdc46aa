import numpy as np
import pytest

from hextreme.datasets import BUNDLED, load_dataset, read_data_file
from hextreme.specfun import DomainError


class TestBundled:
    def test_names_and_sizes(self):
        sizes = {"piracicaba_x": 39, "carbon_y": 69, "failures_z": 201}
        for name in BUNDLED:
            d = load_dataset(name)
            assert d.n == sizes[name]
            assert d.name == name
            assert np.all(d.values > 0)

    def test_known_values(self):
        x = load_dataset("piracicaba_x")
        assert float(x.values.min()) == pytest.approx(6.18)
        assert float(x.values.max()) == pytest.approx(153.78)
        z = load_dataset("failures_z")
        assert float(z.values.min()) == 1.0
        assert float(z.values.max()) == 2194.0

    def test_unknown_name(self):
        with pytest.raises(DomainError):
            load_dataset("nope")


class TestReadDataFile:
    def test_plain_column(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("1.5\n2.5\n\n3.5\n")
        d = read_data_file(str(p))
        np.testing.assert_allclose(d.values, [1.5, 2.5, 3.5])

    def test_header_line_allowed(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("value\n1.5\n2.5\n")
        d = read_data_file(str(p))
        np.testing.assert_allclose(d.values, [1.5, 2.5])

    def test_bad_line_reports_number(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("1.5\nxyz\n2.5\n")
        with pytest.raises(DomainError, match="line 2"):
            read_data_file(str(p))

    def test_nonpositive_rejected(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("1.5\n0\n")
        with pytest.raises(DomainError, match="positive"):
            read_data_file(str(p))

    def test_too_few_values(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("1.5\n")
        with pytest.raises(DomainError):
            read_data_file(str(p))
