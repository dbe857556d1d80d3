import itertools

import pytest

from wittgk import WITT, WITT_POSITIVE, CommMonomial, parse_any
from wittgk.errors import InsufficientData, KindMismatch, NotHomogeneous, ResourceLimit
from wittgk.growth import (
    DimensionSeries,
    QuotientGrowth,
    count_spanning,
    filtration_check,
    filtration_constant,
    free_series,
    gk_slope,
    graded_dim_quotient,
    iter_normal_words,
    qr_bound,
    sk_criticality_probe,
)
from wittgk.linalg import exact_rank
from wittgk.partitions import iter_partitions, partition_count
from wittgk.reduction import POISSON, TWO_SIDED, IdealSpec, ReductionParams, compute_params, is_normal_word


def poisson(text):
    return IdealSpec(parse_any(text, WITT_POSITIVE), POISSON)


def _brute_normal_count(params, kind, N, metric):
    """All sorted letter tuples in a box, filtered by the normality test and the metric."""
    lo = 1 if metric == "degree" else -N
    count = 0
    for length in range(N + 1):
        for word in itertools.combinations_with_replacement(range(lo, N + 1), length):
            cost = sum(word) if metric == "degree" else sum(map(abs, word))
            if cost <= N and is_normal_word(CommMonomial.from_indices(word), params, kind):
                count += 1
    return count


def test_spanning_counts():
    p = ReductionParams(2, 3, 1, 1)
    assert count_spanning(p, WITT_POSITIVE, 3) == 7
    assert count_spanning(p, WITT_POSITIVE, 0) == 1
    assert count_spanning(ReductionParams(2, 5, -1, 1), WITT, 1, "abs") == 4


@pytest.mark.parametrize("params, kind, N, metric", [
    (ReductionParams(2, 3, 1, 1), WITT_POSITIVE, 9, "degree"),
    (ReductionParams(2, 7, 1, 3), WITT_POSITIVE, 12, "degree"),
    (ReductionParams(1, 2, -1, 1), WITT, 4, "abs"),
    (ReductionParams(2, 3, -1, 1), WITT, 4, "abs"),
])
def test_spanning_count_against_brute_force(params, kind, N, metric):
    assert count_spanning(params, kind, N, metric) == _brute_normal_count(params, kind, N, metric)


def test_spanning_budget():
    with pytest.raises(ResourceLimit):
        count_spanning(ReductionParams(3, 9, 1, 4), WITT_POSITIVE, 30, budget=1000)
    with pytest.raises(KindMismatch):
        list(iter_normal_words(ReductionParams(2, 3, 1, 1), WITT, 3))


def test_graded_dims_examples():
    assert graded_dim_quotient(None, 4) == 5
    assert graded_dim_quotient(poisson("x[1]x[1]"), 2) == 1
    assert graded_dim_quotient(IdealSpec(parse_any("e[1]e[1]", WITT_POSITIVE), TWO_SIDED), 2) == 1


def test_free_series_matches_partitions():
    assert free_series(25).dims == [partition_count(n) for n in range(26)]


def test_enveloping_without_relations_has_partition_dims():
    # a generator of large degree leaves low degrees untouched
    q = QuotientGrowth(IdealSpec(parse_any("e[9]", WITT_POSITIVE), TWO_SIDED))
    assert [q.dim(n) for n in range(9)] == [partition_count(n) for n in range(9)]
    assert q.dim(9) == partition_count(9) - 1


def test_x1_squared_dims_by_explicit_rank():
    # degree 4: the adjoint module gives x_1^2 (deg 2) and d_2(x_1^2) = 2 x_1 x_3 (deg 4)
    rows = [parse_any(t, WITT_POSITIVE).terms for t in ("x[1]x[1]x[1]x[1]", "x[1]x[1]x[2]", "x[1]x[3]")]
    assert exact_rank(rows) == 3
    assert graded_dim_quotient(poisson("x[1]x[1]"), 4) == partition_count(4) - 3
    assert graded_dim_quotient(poisson("x[1]x[1]"), 3) == partition_count(3) - 1


@pytest.mark.parametrize("g", ["x[1]x[1]", "x[1]x[2]", "x[2]x[2] + x[1]x[3]"])
def test_spanning_by_normal_words(g):
    q = QuotientGrowth(poisson(g))
    params = compute_params(q.spec)
    for N in range(1, 15):
        assert q.spans(N)
        normal = sum(1 for p in iter_partitions(N) if is_normal_word(CommMonomial.from_indices(p), params, WITT_POSITIVE))
        assert q.dim(N) <= normal


def test_cumulative_bounded_by_spanning_count():
    q = QuotientGrowth(poisson("x[1]x[1]"))
    cum = q.series(20).cumulative()
    for N, total in enumerate(cum):
        assert total <= count_spanning(q.params, WITT_POSITIVE, N) <= qr_bound(q.params, N)


def test_not_homogeneous_rejected():
    with pytest.raises(NotHomogeneous):
        QuotientGrowth(IdealSpec(parse_any("e[1]e[1] + e[1]", WITT_POSITIVE), TWO_SIDED))
    with pytest.raises(KindMismatch):
        QuotientGrowth(IdealSpec(parse_any("e[1]e[1]", WITT), TWO_SIDED))


def test_slopes():
    const = DimensionSeries([(0, 1)] + [(n, 0) for n in range(1, 21)])
    assert gk_slope(const, (10, 20)) == pytest.approx(0, abs=1e-9)
    linear = DimensionSeries([(n, n) for n in range(0, 21)])
    assert gk_slope(linear, (10, 20)) == pytest.approx(2, abs=0.2)
    assert gk_slope(free_series(25), (15, 25)) > 4
    with pytest.raises(InsufficientData):
        gk_slope(linear, (19, 20))


def test_filtration_constant_and_trivial_pair():
    spec = IdealSpec(parse_any("e[1]e[1]", WITT), TWO_SIDED)
    assert filtration_constant(spec.generator) == 16
    report = filtration_check(spec, pairs=[((), ())])
    assert report.C == 16 and report.all_pass
    assert report.samples[0].max_output == 0 and report.samples[0].bound == 16


def test_filtration_seeded_samples():
    spec = IdealSpec(parse_any("e[1]e[1]", WITT), TWO_SIDED)
    a = filtration_check(spec, 20, seed=3, max_abs=12)
    b = filtration_check(spec, 20, seed=3, max_abs=12)
    assert a.all_pass
    assert [(s.m1, s.m2, s.max_output) for s in a.samples] == [(s.m1, s.m2, s.max_output) for s in b.samples]
    params = compute_params(spec)
    for s in a.samples:
        for m in (s.m1, s.m2):
            assert sum(map(abs, m)) <= 12
            assert is_normal_word(CommMonomial.from_indices(m), params, WITT)


def test_filtration_needs_full_line_two_sided():
    with pytest.raises(KindMismatch):
        filtration_check(poisson("x[1]x[1]"), 1)


def test_sk_probe_examples():
    x1 = parse_any("x[1]", WITT_POSITIVE)
    # d_a(x_1) = (a - 1) x_{a+1}: everything except x_2 is reached
    assert sk_criticality_probe(1, x1, 8).dims == [0, 1, 0, 0, 0, 0, 0, 0]
    s = sk_criticality_probe(2, parse_any("x[1]x[1]", WITT_POSITIVE), 6)
    assert s.dims == [0, 0, 1, 1, 1, 1]
    # below deg g the full length-k space survives
    s = sk_criticality_probe(2, parse_any("x[3]x[4]", WITT_POSITIVE), 6)
    assert s.dims == [sum(1 for _ in iter_partitions(N, parts=2)) for N in range(1, 7)]
    with pytest.raises(NotHomogeneous):
        sk_criticality_probe(2, parse_any("x[1]x[1] + x[2]", WITT_POSITIVE), 4)
