import datetime as dt
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from kernscan.stats import (
    EQUAL_COUNT,
    LOG_HALVING,
    Item,
    bucket_sizes,
    bucketize,
    chi2_cdf,
    churn_regression,
    commitment,
    commitment_distribution,
    density_per_kloc,
    fault_rate,
    km_estimate,
    logseries_fit,
    origin_regression,
    pearson,
    pmf,
    read_csv,
    relative_rate,
    relative_rate_fraction,
    solve_theta,
    write_table,
)
from kernscan.stats.logseries import sample


# --- rates ------------------------------------------------------------------


def test_fault_rate_examples():
    assert fault_rate(0, 100).rate == 0.0
    assert fault_rate(13, 65).rate == 0.2
    assert fault_rate(0, 0) == (0.0, True)


def test_more_faults_than_notes_rejected():
    with pytest.raises(ValueError):
        fault_rate(3, 2)


def test_relative_rate_equal_rates():
    assert relative_rate("drivers", {"drivers": (5, 50), "fs": (2, 20), "net": (1, 10)}) == 1.0


@given(st.dictionaries(st.sampled_from(["drivers", "fs", "net", "arch", "sound"]),
                       st.tuples(st.integers(1, 50), st.integers(1, 10)), min_size=2))
def test_relative_rate_is_one_for_proportional_counts(scales):
    # every directory has the same rate f/n = 3/7, scaled by an integer
    counts = {d: (3 * a, 7 * a) for d, (a, _) in scales.items()}
    for d in counts:
        assert relative_rate_fraction(d, counts) == Fraction(1)


def test_relative_rate_infinite_when_others_clean():
    assert relative_rate("staging", {"staging": (1, 10), "fs": (0, 10)}) == math.inf
    with pytest.raises(ValueError):
        relative_rate("staging", {"staging": (1, 10), "fs": (0, 0)})


def test_density_per_kloc():
    assert density_per_kloc(3, 1500) == 2.0


# --- buckets ----------------------------------------------------------------


def test_equal_count_eight_into_four():
    assert bucketize([Item(i) for i in range(8)], EQUAL_COUNT, 4).sizes == [2, 2, 2, 2]


def test_log_halving_eight_into_three():
    assert bucketize([Item(i) for i in range(8)], LOG_HALVING, 3).sizes == [4, 2, 2]


def test_too_many_buckets():
    with pytest.raises(ValueError):
        bucketize([Item(1)], EQUAL_COUNT, 2)


def _brute(keys, strategy, k):
    """Partition by repeatedly peeling off the smallest items."""
    order = sorted(range(len(keys)), key=lambda i: (keys[i], i))
    out = []
    for b in range(k):
        left = len(order)
        if strategy == EQUAL_COUNT:
            take = -(-left // (k - b))
        else:
            take = left if b == k - 1 else -(-left // 2)
        out.append(order[:take])
        order = order[take:]
    return out


def test_bucketing_matches_brute_force_on_1000_inputs():
    rng = random.Random(11)
    for trial in range(1000):
        n = rng.randint(1, 120)
        strategy = EQUAL_COUNT if trial % 2 else LOG_HALVING
        kmax = n if strategy == EQUAL_COUNT else max(1, n.bit_length())
        k = rng.randint(1, min(kmax, 8))
        keys = [rng.randint(1, 300) for _ in range(n)]
        items = [Item(key, rng.randint(0, 2), 3, i) for i, key in enumerate(keys)]
        got = bucketize(items, strategy, k)
        want = _brute(keys, strategy, k)
        assert [[it.label for it in b.members] for b in got.buckets] == want
        for b, idx in zip(got.buckets, want):
            assert (b.min_key, b.max_key) == (keys[idx[0]], keys[idx[-1]])
            assert b.fault_count == sum(items[i].faults for i in idx)


@given(st.integers(1, 500), st.integers(1, 9))
def test_equal_count_sizes_differ_by_at_most_one(n, k):
    if k > n:
        return
    sizes = bucket_sizes(n, EQUAL_COUNT, k)
    assert sum(sizes) == n and max(sizes) - min(sizes) <= 1


def test_hundred_items_log_halving():
    rng = random.Random(5)
    lengths = [rng.randint(1, 400) for _ in range(100)]
    b = bucketize([Item(x) for x in lengths], LOG_HALVING, 6)
    assert b.sizes == [50, 25, 13, 6, 3, 3]
    s = sorted(lengths)
    pos = 0
    for bk, size in zip(b.buckets, b.sizes):
        assert (bk.min_key, bk.max_key) == (s[pos], s[pos + size - 1])
        pos += size


# --- log-series -------------------------------------------------------------


def test_pmf_at_one_half():
    assert pmf(1, 0.5) == pytest.approx(0.5 / math.log(2), abs=1e-12)
    assert pmf(1, 0.5) == pytest.approx(0.72135, abs=1e-5)


@pytest.mark.parametrize("theta", [0.01, 0.3, 0.567, 0.8, 0.95, 0.99])
def test_pmf_normalised(theta):
    total, p, k = 0.0, pmf(1, theta), 1
    while k <= 10**6 and p > 0:
        total += p
        k += 1
        p *= theta * (k - 1) / k
    assert 1 - 1e-9 <= total <= 1 + 1e-12


def test_theta_boundary_when_every_file_has_one_fault():
    fit = logseries_fit({1: 40})
    assert fit.boundary == "lower" and fit.theta < 1e-6


@pytest.mark.parametrize("theta", [0.3, 0.567, 0.8])
def test_theta_recovered_from_samples(theta):
    draws = sample(theta, 10_000, random.Random(int(theta * 1000)))
    hist = {}
    for k in draws:
        hist[k] = hist.get(k, 0) + 1
    assert logseries_fit(hist).theta == pytest.approx(theta, abs=0.02)


def test_solve_theta_inverts_mean():
    for theta in (0.1, 0.5, 0.9):
        m = -theta / ((1 - theta) * math.log1p(-theta))
        assert solve_theta(m)[0] == pytest.approx(theta, abs=1e-9)


def test_fit_bins_and_dof():
    fit = logseries_fit({1: 60, 2: 20, 3: 10, 4: 5, 9: 1})
    assert sum(o for _, o, _ in fit.bins) == fit.n == 96
    assert sum(e for _, _, e in fit.bins) == pytest.approx(96)
    assert all(e >= 5 for _, _, e in fit.bins)
    assert fit.dof == len(fit.bins) - 2
    assert 0 <= fit.p_value <= 1


# --- chi-square -------------------------------------------------------------


def _chi2_pdf(x, k):
    return x ** (k / 2 - 1) * math.exp(-x / 2) / (2 ** (k / 2) * math.gamma(k / 2))


def test_chi2_cdf_examples():
    assert chi2_cdf(0, 3) == 0
    assert chi2_cdf(3.841, 1) == pytest.approx(0.95, abs=1e-4)
    assert chi2_cdf(10, 10) == pytest.approx(quad(_chi2_pdf, 0, 10, args=(10,))[0], abs=1e-6)
    assert chi2_cdf(1000, 1) > 1 - 1e-8


@given(st.floats(0, 200), st.floats(0, 200), st.integers(1, 30))
def test_chi2_cdf_monotone(a, b, k):
    lo, hi = sorted((a, b))
    assert chi2_cdf(lo, k) <= chi2_cdf(hi, k)


# --- Kaplan-Meier -----------------------------------------------------------


def test_km_textbook():
    c = km_estimate([(1, True), (2, False), (3, True)])
    assert abs(c.at(1) - 2 / 3) < 1e-12
    assert abs(c.at(3)) < 1e-12
    assert abs(c.mean - 7 / 3) < 1e-12
    assert c.median == 3


def test_km_no_events():
    c = km_estimate([(1, False), (4, False)])
    assert c.no_events and c.mean == 4 and c.median is None and c.at(10) == 1


@given(st.lists(st.tuples(st.floats(0, 20), st.booleans()), min_size=1, max_size=40))
def test_km_non_increasing_and_starts_at_one(obs):
    c = km_estimate(obs)
    s = [1.0] + [st.survival for st in c.steps]
    assert all(x >= y for x, y in zip(s, s[1:]))
    assert c.at(min(t for t, _ in obs) - 1) == 1.0
    if c.median is not None:
        assert c.at(c.median) <= 0.5


@given(st.lists(st.floats(0.01, 20), min_size=1, max_size=30, unique=True))
def test_km_drops_by_one_over_at_risk(times):
    c = km_estimate([(t, True) for t in times])
    prev = 1.0
    for st_ in c.steps:
        assert st_.survival == pytest.approx(prev * (1 - 1 / st_.at_risk), abs=1e-12)
        prev = st_.survival


def test_km_bands_bracket_curve():
    c = km_estimate([(t, t % 3 != 0) for t in range(1, 20)], bands=True)
    for st_ in c.steps:
        assert st_.lower <= st_.survival <= st_.upper


# --- correlation, regression, commitment ------------------------------------


def test_pearson_examples():
    x = [1.0, 2.0, 4.0, 7.0]
    assert pearson(x, x) == 1.0
    assert pearson(x, [-v for v in x]) == -1.0
    assert math.isnan(pearson(x, [3.0] * 4))


def test_pearson_matches_textbook_formula():
    rng = random.Random(1)
    loc = [10_000 * (i + 1) + rng.randint(-500, 500) for i in range(20)]
    notes = [0.03 * l + rng.gauss(0, 40) for l in loc]
    n = len(loc)
    sx, sy = sum(loc), sum(notes)
    sxy = sum(a * b for a, b in zip(loc, notes))
    sxx, syy = sum(a * a for a in loc), sum(b * b for b in notes)
    want = (n * sxy - sx * sy) / math.sqrt((n * sxx - sx ** 2) * (n * syy - sy ** 2))
    assert pearson(loc, notes) == pytest.approx(want, abs=1e-12)


@given(st.lists(st.tuples(st.integers(-100, 100), st.integers(-100, 100)), min_size=3, max_size=20),
       st.floats(0.5, 20), st.floats(-50, 50))
def test_pearson_affine_invariant(pts, a, b):
    x = [float(p) for p, _ in pts]
    y = [float(q) for _, q in pts]
    r = pearson(x, y)
    if math.isnan(r):
        return
    assert pearson([a * v + b for v in x], y) == pytest.approx(r, abs=1e-9)


def test_regression_on_exact_line():
    fit = origin_regression([(x, 0.1 * x) for x in (1.0, 2.0, 5.0, 8.0)])
    assert fit.slope == pytest.approx(0.1) and fit.adj_r2 == pytest.approx(1.0)


def test_regression_zero_y_and_zero_x():
    assert origin_regression([(1.0, 0.0), (2.0, 0.0)]).slope == 0.0
    with pytest.raises(ValueError):
        origin_regression([(0.0, 1.0), (0.0, 2.0)])


def test_packets_of_ten_with_known_slopes():
    slopes = [0.12, 0.04, 0.09, 0.07]
    points = [(float(i % 10 + 1), s * (i % 10 + 1)) for s in slopes for i in range(10)]
    fits, overall = churn_regression(points, 10)
    assert [round(f.slope, 12) for f in fits] == slopes
    assert min(range(4), key=lambda i: fits[i].slope) == 1
    assert min(slopes) < overall.slope < max(slopes)


def test_commitment_equal_scores():
    # a year of 12 commits weighs the same as half a year of 24 (whole days on a calendar)
    as_of = dt.date(2011, 7, 1)
    year = [as_of - dt.timedelta(days=364)] * 12
    half = [as_of - dt.timedelta(days=182)] * 24
    assert commitment(year, as_of) == commitment(half, as_of) == 12 * 364


def test_commitment_before_first_commit():
    with pytest.raises(ValueError):
        commitment([dt.date(2010, 1, 1)], dt.date(2009, 1, 1))


def test_single_developer_all_at_100():
    assert commitment_distribution({"a": 50}, {"a": 7}) == {100: 7}


def test_commitment_distribution_brute_force():
    rng = random.Random(9)
    scores = {f"d{i}": rng.randint(0, 10_000) for i in range(300)}
    scores["top"] = 20_000
    commits = {d: rng.randint(1, 30) for d in scores}
    want = {}
    for d, s in scores.items():
        pct = int(Fraction(100 * s, 20_000) + Fraction(1, 2))
        want[pct] = want.get(pct, 0) + commits[d]
    assert commitment_distribution(scores, commits) == dict(sorted(want.items()))


# --- tables -----------------------------------------------------------------


def test_table_with_sidecar(tmp_path):
    p = write_table(str(tmp_path / "t.csv"), ["a", "b"], [[1, 0.5], [2, math.nan]], {"k": "v"})
    assert read_csv(p) == [{"a": "1", "b": "0.5"}, {"a": "2", "b": "nan"}]
    import json

    meta = json.load(open(p + ".json"))
    assert meta["k"] == "v" and meta["columns"] == ["a", "b"]
