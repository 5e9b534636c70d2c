"""Frequency tables, the cross-run deviation report, community summaries,
and the generator fit check."""

import numpy as np
import pytest

from sociogen.errors import ParseError, SociogenError
from sociogen.graph import Graph
from sociogen.louvain import CommunityLabeling
from sociogen.profiles import Attribute
from sociogen.propagator import UserTable
from sociogen.rmat import RmatParams
from sociogen.stats import (
    DeviationReport,
    FitReport,
    FrequencyTable,
    community_summary,
    deviation_report,
    format_deviation_report,
    frequency_table,
    read_community_summary,
    read_frequency_table,
    rmat_fit_check,
    write_community_summary,
    write_frequency_table,
)

SCHEMA = [
    Attribute("Color", ("red", "green", "blue"), (0.2, 0.5, 0.3)),
    Attribute("Shape", ("round", "square"), (0.4, 0.6)),
]


def make_users(codes, community) -> UserTable:
    codes = np.asarray(codes, np.int16)
    n = codes.shape[1]
    return UserTable(
        schema=SCHEMA,
        codes=codes,
        numfriends=np.zeros(n, np.int8),
        classvalue=np.zeros(n, bool),
        authority=np.zeros(n),
        community=np.asarray(community, np.int64),
    )


def table_of(scope_counts: dict) -> FrequencyTable:
    """Build a one-attribute table from {scope: [count per value]}."""
    schema = [Attribute("X", ("a", "b"), (0.5, 0.5))]
    scopes = list(scope_counts)
    counts = np.zeros((len(scopes), 1, 2), np.int64)
    for s, scope in enumerate(scopes):
        counts[s, 0] = scope_counts[scope]
    return FrequencyTable(schema=schema, scopes=scopes, counts=counts)


class TestFrequencyTable:
    @pytest.fixture()
    def users(self):
        return make_users(
            [[0, 0, 1, 2, 1, 0], [0, 1, 1, 1, 0, 0]],
            [0, 0, 0, 1, 1, 2],
        )

    def test_hand_counts(self, users):
        table = frequency_table(users)
        assert table.scopes == ["ALL", "0", "1", "2"]
        assert table.count("ALL", "Color", "red") == 3
        assert table.count("ALL", "Color", "green") == 2
        assert table.count("ALL", "Color", "blue") == 1
        assert table.count("0", "Color", "blue") == 0
        assert table.count("1", "Shape", "round") == 1
        assert table.count("2", "Color", "red") == 1

    def test_community_counts_sum_to_all(self, users):
        table = frequency_table(users)
        per_comm = table.counts[1:].sum(axis=0)
        assert np.array_equal(per_comm, table.counts[0])

    def test_shares_are_percentages(self, users):
        table = frequency_table(users)
        shares = table.shares("ALL")
        assert shares[0, :3].sum() == pytest.approx(100.0)
        assert shares[1, :2].sum() == pytest.approx(100.0)
        assert shares[0, 0] == pytest.approx(50.0)
        # padding beyond an attribute's own values stays zero
        assert shares[1, 2] == 0.0

    def test_explicit_labeling_overrides_column(self, users):
        table = frequency_table(users, labeling=np.zeros(6, np.int64))
        assert table.scopes == ["ALL", "0"]
        assert np.array_equal(table.counts[0], table.counts[1])

    def test_labeling_object_accepted(self, users):
        labeling = CommunityLabeling(
            assignment=np.asarray(users.community),
            num_communities=3,
            quality=0.0,
            resolution=1.0,
            raw_num_communities=3,
        )
        table = frequency_table(users, labeling=labeling)
        assert table.scopes == ["ALL", "0", "1", "2"]

    def test_unknown_attribute_rejected(self, users):
        table = frequency_table(users)
        with pytest.raises(SociogenError, match="Size"):
            table.count("ALL", "Size", "red")


class TestDeviationReport:
    def test_identical_runs_score_zero(self):
        t = table_of({"ALL": [6, 4]})
        report = deviation_report([t, t, t])
        assert report.runs == 3
        assert (report.avg == 0).all()
        assert (report.stdev == 0).all()

    def test_two_run_hand_oracle(self):
        # shares 60/40 vs 40/60: every value sits 10 points from the mean
        a = table_of({"ALL": [6, 4]})
        b = table_of({"ALL": [4, 6]})
        report = deviation_report([a, b])
        assert report.avg[0, 0] == pytest.approx(10.0)
        assert report.stdev[0, 0] == pytest.approx(0.0)

    def test_three_run_hand_oracle(self):
        tables = [table_of({"ALL": c}) for c in ([5, 5], [6, 4], [7, 3])]
        report = deviation_report(tables)
        # deviations from the 60/40 mean: 10, 0, 10 per value
        samples = np.array([10.0, 10.0, 0.0, 0.0, 10.0, 10.0])
        assert report.avg[0, 0] == pytest.approx(samples.mean())
        assert report.stdev[0, 0] == pytest.approx(samples.std())

    def test_scope_is_the_second_axis(self):
        a = table_of({"ALL": [6, 4], "0": [1, 0]})
        b = table_of({"ALL": [4, 6], "0": [0, 1]})
        report = deviation_report([a, b])
        assert report.scopes == ["ALL", "0"]
        assert report.avg[0, 0] == pytest.approx(10.0)
        assert report.avg[0, 1] == pytest.approx(50.0)

    def test_run_order_does_not_matter(self):
        tables = [table_of({"ALL": c}) for c in ([5, 5], [6, 4], [7, 3])]
        fwd = deviation_report(tables)
        rev = deviation_report(tables[::-1])
        assert np.allclose(fwd.avg, rev.avg)
        assert np.allclose(fwd.stdev, rev.stdev)

    def test_scope_subset_selection(self):
        a = table_of({"ALL": [6, 4], "0": [1, 0]})
        b = table_of({"ALL": [4, 6], "0": [0, 1]})
        report = deviation_report([a, b], scopes=["0"])
        assert report.scopes == ["0"]
        assert report.avg.shape == (1, 1)
        assert report.avg[0, 0] == pytest.approx(50.0)

    def test_single_run_rejected(self):
        with pytest.raises(SociogenError, match="at least 2"):
            deviation_report([table_of({"ALL": [1, 1]})])

    def test_mismatched_scopes_rejected(self):
        a = table_of({"ALL": [6, 4], "0": [1, 0]})
        b = table_of({"ALL": [4, 6]})
        with pytest.raises(SociogenError, match="disagree"):
            deviation_report([a, b])

    def test_unknown_scope_rejected(self):
        a = table_of({"ALL": [6, 4]})
        b = table_of({"ALL": [4, 6]})
        with pytest.raises(SociogenError, match="unknown scope"):
            deviation_report([a, b], scopes=["7"])

    def test_to_dict_layout(self):
        a = table_of({"ALL": [6, 4]})
        b = table_of({"ALL": [4, 6]})
        d = deviation_report([a, b]).to_dict()
        assert d["runs"] == 2
        assert d["avg"]["X"]["ALL"] == pytest.approx(10.0)
        assert d["stdev"]["X"]["ALL"] == pytest.approx(0.0)

    def test_formatted_layout(self):
        a = table_of({"ALL": [6, 4], "1": [1, 0]})
        b = table_of({"ALL": [4, 6], "1": [0, 1]})
        text = format_deviation_report(deviation_report([a, b]))
        lines = text.splitlines()
        assert lines[0] == "attribute\tALL_avg\tALL_stdev\tCom1_avg\tCom1_stdev"
        assert lines[1] == "X\t10.00\t0.00\t50.00\t0.00"
        assert text.endswith("\n")


class TestCommunitySummary:
    def test_descending_with_zero_rows(self):
        rows = community_summary(np.array([0, 0, 1, 3]))
        assert rows == [(3, 1), (2, 0), (1, 1), (0, 2)]

    def test_counts_sum_to_nodes(self):
        labels = np.array([0, 1, 1, 2, 2, 2, 5])
        rows = community_summary(labels)
        assert sum(c for _, c in rows) == labels.size
        assert [c for c, _ in rows] == [5, 4, 3, 2, 1, 0]

    def test_labeling_object_accepted(self):
        labeling = CommunityLabeling(
            assignment=np.array([0, 0, 1]),
            num_communities=2,
            quality=0.0,
            resolution=1.0,
            raw_num_communities=2,
        )
        assert community_summary(labeling) == [(1, 1), (0, 2)]


class TestFrequencyTableIO:
    GOLDEN = (
        "community\tattribute\tvalue\tfrequency\n"
        "ALL\tCOLOR\tred\t2\n"
        "ALL\tCOLOR\tgreen\t1\n"
        "ALL\tCOLOR\tblue\t1\n"
        "ALL\tSHAPE\tround\t2\n"
        "ALL\tSHAPE\tsquare\t2\n"
        "0\tCOLOR\tred\t1\n"
        "0\tCOLOR\tgreen\t1\n"
        "0\tCOLOR\tblue\t0\n"
        "0\tSHAPE\tround\t1\n"
        "0\tSHAPE\tsquare\t1\n"
        "1\tCOLOR\tred\t1\n"
        "1\tCOLOR\tgreen\t0\n"
        "1\tCOLOR\tblue\t1\n"
        "1\tSHAPE\tround\t1\n"
        "1\tSHAPE\tsquare\t1\n"
    )

    def test_exact_file_layout(self, tmp_path):
        users = make_users([[0, 1, 2, 0], [0, 1, 1, 0]], [0, 0, 1, 1])
        path = tmp_path / "out1.csv"
        write_frequency_table(frequency_table(users), path)
        assert path.read_text() == self.GOLDEN

    def test_round_trip(self, tmp_path):
        users = make_users([[0, 1, 2, 0], [0, 1, 1, 0]], [0, 0, 1, 1])
        table = frequency_table(users)
        path = tmp_path / "out1.csv"
        write_frequency_table(table, path)
        back = read_frequency_table(path, SCHEMA)
        assert back.scopes == table.scopes
        assert np.array_equal(back.counts, table.counts)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "out1.csv"
        path.write_text("community,attribute,value,frequency\n")
        with pytest.raises(ParseError, match=":1:"):
            read_frequency_table(path, SCHEMA)

    def test_column_count_enforced(self, tmp_path):
        path = tmp_path / "out1.csv"
        path.write_text("community\tattribute\tvalue\tfrequency\nALL\tCOLOR\tred\n")
        with pytest.raises(ParseError, match=":2:"):
            read_frequency_table(path, SCHEMA)

    def test_unknown_attribute_rejected(self, tmp_path):
        path = tmp_path / "out1.csv"
        path.write_text("community\tattribute\tvalue\tfrequency\nALL\tSIZE\tred\t1\n")
        with pytest.raises(ParseError, match="SIZE"):
            read_frequency_table(path, SCHEMA)

    def test_bad_count_rejected(self, tmp_path):
        path = tmp_path / "out1.csv"
        path.write_text("community\tattribute\tvalue\tfrequency\nALL\tCOLOR\tred\tmany\n")
        with pytest.raises(ParseError, match=":2:"):
            read_frequency_table(path, SCHEMA)


class TestCommunitySummaryIO:
    def test_exact_file_layout(self, tmp_path):
        path = tmp_path / "out2.csv"
        write_community_summary([(3, 1), (2, 0), (1, 1), (0, 2)], path)
        assert path.read_text() == "3\t1\n2\t0\n1\t1\n0\t2\n"

    def test_round_trip(self, tmp_path):
        rows = community_summary(np.array([0, 0, 1, 3]))
        path = tmp_path / "out2.csv"
        write_community_summary(rows, path)
        assert read_community_summary(path) == rows

    def test_bad_rows_rejected(self, tmp_path):
        path = tmp_path / "out2.csv"
        path.write_text("1\t2\t3\n")
        with pytest.raises(ParseError, match=":1:"):
            read_community_summary(path)
        path.write_text("1\ttwo\n")
        with pytest.raises(ParseError, match="bad row"):
            read_community_summary(path)


class TestFitCheck:
    def test_trivial_for_degenerate_graphs(self):
        params = RmatParams(num_nodes=2, num_edges=1, rng_seed=0)
        g = Graph.from_edges(1, np.empty(0, np.int64), np.empty(0, np.int64))
        report = rmat_fit_check(g, params)
        assert report.trivial
        assert report.passed

    def test_small_scale_agreement(self):
        params = RmatParams(num_nodes=256, num_edges=2000, rng_seed=0)
        report = rmat_fit_check(None, params, runs=12)
        assert not report.trivial
        assert report.degrees.size > 0
        assert (report.expected >= 5.0).all()
        assert report.passed

    def test_nested_blocks_never_cross(self):
        params = RmatParams(
            num_nodes=64, num_edges=500, a=0.5, b=0.0, c=0.0, d=0.5, rng_seed=1
        )
        report = rmat_fit_check(None, params, runs=4)
        assert report.cross_block_clean is True

    def test_block_check_skipped_when_inapplicable(self):
        params = RmatParams(num_nodes=64, num_edges=500, rng_seed=1)
        report = rmat_fit_check(None, params, runs=4)
        assert report.cross_block_clean is None

    def test_out_of_band_bin_fails(self):
        report = FitReport(
            degrees=np.array([1, 2]),
            expected=np.array([10.0, 10.0]),
            observed_mean=np.array([10.0, 99.0]),
            stderr=np.array([1.0, 1.0]),
            within=np.array([True, False]),
            cross_block_clean=None,
            trivial=False,
        )
        assert not report.passed
