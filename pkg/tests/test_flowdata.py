import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddosbench.errors import EmptyDatasetError, FlowParseError, StratificationError
from ddosbench.flowdata import (FEATURE_COLUMNS, Dataset, FlowRecord, clean,
                                load_any_csv, matrix_to_csv, parse_flow_csv,
                                parse_matrix_csv, stratified_split, to_csv, to_matrix)

from conftest import make_matrix

HEADER = "pkt_size_mean,pkt_rate,duration,protocol,label\n"


def test_parse_single_row():
    ds = parse_flow_csv(HEADER + "512,100.0,2.5,TCP,ddos\n")
    assert len(ds) == 1
    assert ds.records[0] == FlowRecord(512.0, 100.0, 2.5, "TCP", 1)


def test_parse_header_only():
    assert len(parse_flow_csv(HEADER)) == 0


def test_wrong_column_count_cites_line():
    with pytest.raises(FlowParseError, match="line 2") as exc:
        parse_flow_csv(HEADER + "512,100.0,2.5,TCP\n")
    assert exc.value.line == 2


def test_wrong_header():
    with pytest.raises(FlowParseError, match="line 1"):
        parse_flow_csv("size,rate,duration,protocol,label\n1,2,3,TCP,ddos\n")


def test_unknown_label():
    with pytest.raises(FlowParseError, match="line 3"):
        parse_flow_csv(HEADER + "1,2,3,TCP,benign\n1,2,3,TCP,botnet\n")


def test_crlf_and_unknown_protocol():
    ds = parse_flow_csv(HEADER.replace("\n", "\r\n") + "1,2,3,sctp,benign\r\n")
    assert ds.records[0].protocol == "OTHER"
    assert ds.records[0].label == 0


def test_unparseable_numbers_become_missing():
    ds = parse_flow_csv(HEADER + "abc,2,,UDP,ddos\n")
    r = ds.records[0]
    assert math.isnan(r.pkt_size_mean) and math.isnan(r.duration)
    assert r.pkt_rate == 2.0


def test_clean_identity_on_valid_rows():
    ds = parse_flow_csv(HEADER + "1,2,3,TCP,ddos\n4,5,6,UDP,benign\n7,8,9,ICMP,ddos\n")
    out, stats = clean(ds)
    assert out.records == ds.records
    assert (stats.rows_dropped_missing, stats.rows_dropped_range, stats.rows_out) == (0, 0, 3)


def test_clean_drops_missing():
    rows = ["1,2,3,TCP,ddos"] * 4 + ["1,2,,TCP,ddos"]
    out, stats = clean(parse_flow_csv(HEADER + "\n".join(rows) + "\n"))
    assert len(out) == 4 and stats.rows_dropped_missing == 1


def test_clean_drops_negative():
    out, stats = clean(parse_flow_csv(HEADER + "1,-1,3,TCP,ddos\n1,2,3,TCP,benign\n"))
    assert len(out) == 1 and stats.rows_dropped_range == 1


def test_clean_drops_non_finite():
    out, stats = clean(parse_flow_csv(HEADER + "inf,1,1,TCP,ddos\n1,2,3,TCP,benign\n"))
    assert len(out) == 1 and stats.rows_dropped_missing == 1


def test_clean_empty_result_raises():
    with pytest.raises(EmptyDatasetError):
        clean(parse_flow_csv(HEADER + "1,-1,3,TCP,ddos\n"))


def test_to_matrix_one_hot_and_shape():
    ds = parse_flow_csv(HEADER + "1,2,3,TCP,ddos\n4,5,6,OTHER,benign\n")
    m = to_matrix(ds)
    assert m.values.shape == (2, 7)
    assert m.column_names == FEATURE_COLUMNS
    assert m.values[0, 3:].tolist() == [1, 0, 0, 0]
    assert m.values[1, 3:].tolist() == [0, 0, 0, 1]
    assert m.labels.tolist() == [1, 0]
    assert m.values[1, :3].tolist() == [4, 5, 6]


def test_feature_matrix_is_immutable():
    m = make_matrix([[1.0, 2.0]], [0])
    with pytest.raises(ValueError):
        m.values[0, 0] = 5.0


def test_feature_matrix_rejects_duplicate_names():
    with pytest.raises(ValueError):
        make_matrix([[1.0, 2.0]], names=("a", "a"))


def test_csv_round_trip():
    ds = parse_flow_csv(HEADER + "512.25,1e5,0.1,UDP,ddos\n1,2,3,ICMP,benign\n")
    assert parse_flow_csv(to_csv(ds)).records == ds.records


def _balanced(n0, n1):
    values = np.arange(n0 + n1, dtype=float).reshape(-1, 1)
    return make_matrix(values, [0] * n0 + [1] * n1)


def test_split_counts_50_50():
    train, test = stratified_split(_balanced(50, 50), 0.8, 42)
    assert np.bincount(train.labels).tolist() == [40, 40]
    assert np.bincount(test.labels).tolist() == [10, 10]


def test_split_deterministic():
    m = _balanced(50, 50)
    a = stratified_split(m, 0.8, 42)
    b = stratified_split(m, 0.8, 42)
    assert a[0] == b[0] and a[1] == b[1]


def test_split_smallest_case():
    train, test = stratified_split(_balanced(2, 2), 0.5, 0)
    assert np.bincount(train.labels).tolist() == [1, 1]
    assert np.bincount(test.labels).tolist() == [1, 1]


def test_split_class_too_small():
    with pytest.raises(StratificationError):
        stratified_split(_balanced(5, 1), 0.8, 0)


def test_split_single_class():
    with pytest.raises(StratificationError):
        stratified_split(_balanced(5, 0), 0.8, 0)


def test_split_seed_changes_assignment():
    m = _balanced(50, 50)
    assert stratified_split(m, 0.8, 1)[0] != stratified_split(m, 0.8, 2)[0]


def test_matrix_csv_round_trip(tmp_path):
    m = make_matrix([[0.5, -1.25], [3.0, 1e-7]], [1, 0], names=("x1", "x2"))
    assert parse_matrix_csv(matrix_to_csv(m)) == m
    p = tmp_path / "m.csv"
    p.write_text(matrix_to_csv(m))
    assert load_any_csv(p) == m


# --- properties ---------------------------------------------------------------

finite_or_bad = st.one_of(
    st.floats(min_value=-10, max_value=1e6, allow_nan=False),
    st.just(math.nan), st.just(math.inf))
records = st.builds(FlowRecord, finite_or_bad, finite_or_bad, finite_or_bad,
                    st.sampled_from(["TCP", "UDP", "ICMP", "OTHER"]),
                    st.integers(0, 1))


@given(st.lists(records, min_size=1, max_size=40))
def test_clean_idempotent_and_accounts_for_rows(recs):
    ds = Dataset(tuple(recs))
    try:
        once, stats = clean(ds)
    except EmptyDatasetError:
        return
    twice, stats2 = clean(once)
    assert twice == once
    assert stats.rows_out == stats.rows_in - stats.rows_dropped_missing - stats.rows_dropped_range
    assert stats2.rows_dropped_missing == stats2.rows_dropped_range == 0


@given(st.lists(records, min_size=1, max_size=30))
def test_to_matrix_preserves_order(recs):
    ds = Dataset(tuple(recs))
    m = to_matrix(ds)
    for i, r in enumerate(ds.records):
        np.testing.assert_array_equal(m.values[i, :3], np.array(r.numeric()))
        assert m.labels[i] == r.label


@settings(max_examples=60)
@given(st.integers(2, 40), st.integers(2, 40),
       st.floats(0.05, 0.95), st.integers(0, 2**31 - 1))
def test_split_is_partition(n0, n1, frac, seed):
    m = _balanced(n0, n1)
    train, test = stratified_split(m, frac, seed)
    ids = np.concatenate([train.values[:, 0], test.values[:, 0]])
    assert sorted(ids.tolist()) == list(range(n0 + n1))
    for cls, n in ((0, n0), (1, n1)):
        n_train = int((train.labels == cls).sum())
        assert abs(n_train - frac * n) <= 1
        assert 1 <= n_train <= n - 1
