"""Benchmark harness: measured op counts, report structure, CSV schema."""

import csv
import io
import random

import pytest

from hsc import keys
from hsc.bench import CSV_COLUMNS, bench_run

EXPECTED_OPS = [
    "scalar_mult", "group_add", "hash_to_scalar",
    "keygen", "pchs_signcrypt", "pchs_unsigncrypt",
    "cphs_signcrypt", "cphs_unsigncrypt",
]


@pytest.fixture(scope="module")
def toy_report():
    params, _ = keys.setup("toy-101", n=64, rng=random.Random(8))
    return bench_run(params, iterations=200, algo_iterations=3,
                     rng=random.Random(9))


class TestReportShape:
    def test_all_operations_timed(self, toy_report):
        assert [t.name for t in toy_report.timings] == EXPECTED_OPS
        for t in toy_report.timings:
            assert t.mean_s >= 0 and t.median_s >= 0

    def test_iteration_counts_recorded(self, toy_report):
        assert toy_report.timing("scalar_mult").iterations == 200
        assert toy_report.timing("pchs_signcrypt").iterations == 3

    def test_group_name(self, toy_report):
        assert toy_report.group_name == "toy-101"

    def test_rejects_zero_iterations(self):
        params, _ = keys.setup("toy-13", rng=random.Random(1))
        with pytest.raises(ValueError):
            bench_run(params, iterations=0)


class TestMeasuredOpCounts:
    """The count table comes from scoped counters, so it reflects what
    the code actually does."""

    def test_key_generation(self, toy_report):
        c = toy_report.op_counts["key_generation"]
        assert (c.scalar_mults, c.hash_calls) == (4, 1)

    def test_pchs_signcrypt(self, toy_report):
        c = toy_report.op_counts["pchs_signcrypt"]
        assert (c.scalar_mults, c.hash_calls) == (4, 2)

    def test_pchs_unsigncrypt(self, toy_report):
        c = toy_report.op_counts["pchs_unsigncrypt"]
        assert (c.scalar_mults, c.hash_calls) == (4, 2)

    def test_cphs_signcrypt(self, toy_report):
        c = toy_report.op_counts["cphs_signcrypt"]
        assert (c.scalar_mults, c.hash_calls) == (3, 2)

    def test_cphs_unsigncrypt(self, toy_report):
        c = toy_report.op_counts["cphs_unsigncrypt"]
        assert (c.scalar_mults, c.hash_calls) == (4, 2)


class TestMachineReadableRows:
    def test_stable_schema(self, toy_report):
        parsed = list(csv.DictReader(io.StringIO(toy_report.to_csv())))
        assert list(parsed[0].keys()) == CSV_COLUMNS
        kinds = {row["record"] for row in parsed}
        assert kinds == {"timing", "opcount"}

    def test_timing_rows_parse_as_floats(self, toy_report):
        for row in toy_report.rows():
            if row["record"] == "timing":
                assert float(row["mean_s"]) >= 0
                assert float(row["median_s"]) >= 0
                assert int(row["iterations"]) >= 1

    def test_opcount_rows_carry_counts(self, toy_report):
        rows = {r["name"]: r for r in toy_report.rows() if r["record"] == "opcount"}
        assert rows["cphs_signcrypt"]["scalar_mults"] == 3

    def test_human_table_renders(self, toy_report):
        text = toy_report.table()
        assert "scalar_mult" in text and "cphs_unsigncrypt" in text
