import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slidevar import ParseError, Table, ValidationError, ingest, load_prices, read_table, write_table
from slidevar.dataio import percent_log_losses, table_path

from conftest import write_price_csv

finite_floats = st.floats(allow_nan=False, allow_infinity=False, width=64)


class TestPriceParsing:
    def test_happy_path(self, tmp_path):
        path = write_price_csv(tmp_path / "p.csv", [100.0, 99.0, 101.5])
        series = load_prices(path)
        assert series.n == 3
        assert series.dates == ("2024-01-01", "2024-01-02", "2024-01-03")
        assert series.prices.tolist() == [100.0, 99.0, 101.5]

    def test_ingest_drops_the_first_date(self, tmp_path):
        path = write_price_csv(tmp_path / "p.csv", [100.0, 99.0])
        dates, losses = ingest(path)
        assert dates == ("2024-01-02",)
        # a fall from 100 to 99 is a positive percent log-loss
        assert losses[0] == pytest.approx(-100.0 * math.log(99.0 / 100.0))
        assert losses[0] == pytest.approx(1.0050335853501441)

    def test_header_required(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("time,close\n2024-01-01,100\n2024-01-02,99\n")
        with pytest.raises(ParseError, match="line 1"):
            load_prices(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("")
        with pytest.raises(ParseError, match="empty"):
            load_prices(path)

    def test_too_few_rows(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("date,price\n2024-01-01,100\n")
        with pytest.raises(ParseError, match="two"):
            load_prices(path)

    def test_bad_date(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("date,price\n2024-13-01,100\n2024-01-02,99\n")
        with pytest.raises(ParseError, match="line 2"):
            load_prices(path)

    def test_unsorted_dates(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("date,price\n2024-01-05,100\n2024-01-02,99\n")
        with pytest.raises(ParseError, match="ascending"):
            load_prices(path)

    def test_duplicate_dates(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("date,price\n2024-01-02,100\n2024-01-02,99\n")
        with pytest.raises(ParseError, match="ascending"):
            load_prices(path)

    def test_nonpositive_price(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("date,price\n2024-01-01,100\n2024-01-02,-3\n")
        with pytest.raises(ParseError, match="positive"):
            load_prices(path)

    def test_wrong_field_count(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("date,price\n2024-01-01,100,extra\n2024-01-02,99\n")
        with pytest.raises(ParseError, match="2 fields"):
            load_prices(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_prices(tmp_path / "nope.csv")


class TestLogLosses:
    def test_sign_convention(self):
        # price up -> negative loss; price down -> positive loss
        losses = percent_log_losses(np.array([100.0, 110.0, 99.0]))
        assert losses[0] < 0.0
        assert losses[1] > 0.0

    def test_round_trip_sums(self):
        prices = np.array([100.0, 95.0, 103.0, 101.0])
        losses = percent_log_losses(prices)
        total = -100.0 * math.log(prices[-1] / prices[0])
        assert losses.sum() == pytest.approx(total, abs=1e-12)

    def test_needs_two_prices(self):
        with pytest.raises(ValidationError):
            percent_log_losses(np.array([100.0]))


class TestTableRoundTrip:
    def sample_table(self):
        return Table(
            name="sample",
            columns=("name", "count", "value", "flag", "note"),
            rows=(
                ("alpha", 3, 0.1 + 0.2, True, None),
                ("beta", -1, -1.5e-308, False, "x"),
                ("gamma", 0, float(np.pi), True, None),
            ),
        )

    @pytest.mark.parametrize("fmt", ["csv", "json-lines"])
    def test_typed_round_trip(self, tmp_path, fmt):
        table = self.sample_table()
        path = write_table(table, tmp_path, fmt)
        back = read_table(path)
        assert back.columns == table.columns
        assert back.rows == table.rows

    @pytest.mark.parametrize("fmt", ["csv", "json-lines"])
    @given(values=st.lists(finite_floats, min_size=1, max_size=30))
    @settings(max_examples=120)
    def test_floats_survive_bit_for_bit(self, tmp_path_factory, fmt, values):
        tmp_path = tmp_path_factory.mktemp("tables")
        table = Table(name="floats", columns=("value",), rows=tuple((v,) for v in values))
        back = read_table(write_table(table, tmp_path, fmt))
        for (original,), (restored,) in zip(table.rows, back.rows):
            assert isinstance(restored, float)
            assert math.copysign(1.0, restored) == math.copysign(1.0, original)
            assert restored == original

    def test_fifteen_significant_digits(self, tmp_path):
        # repr-based cells carry >= 15 significant digits by construction
        value = 1.234567890123456789
        table = Table(name="digits", columns=("v",), rows=((value,),))
        back = read_table(write_table(table, tmp_path, "csv"))
        assert f"{back.rows[0][0]:.15g}" == f"{value:.15g}"

    def test_deterministic_bytes(self, tmp_path):
        table = self.sample_table()
        a = write_table(table, tmp_path / "a", "csv").read_bytes()
        b = write_table(table, tmp_path / "b", "csv").read_bytes()
        assert a == b

    def test_row_width_validated(self):
        with pytest.raises(ValidationError):
            Table(name="bad", columns=("a", "b"), rows=((1,),))

    def test_column_accessor(self):
        table = self.sample_table()
        assert table.column("count") == (3, -1, 0)
        with pytest.raises(ValidationError):
            table.column("missing")

    def test_paths_by_format(self, tmp_path):
        assert table_path(tmp_path, "t", "csv").suffix == ".csv"
        assert table_path(tmp_path, "t", "json-lines").suffix == ".jsonl"
        with pytest.raises(ValidationError):
            table_path(tmp_path, "t", "parquet")

    def test_unknown_extension_rejected(self, tmp_path):
        path = tmp_path / "t.xlsx"
        path.write_text("x")
        with pytest.raises(ParseError):
            read_table(path)

    def test_empty_table_file_rejected(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("")
        with pytest.raises(ParseError):
            read_table(path)
