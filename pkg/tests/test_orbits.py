# Orbit catalogs and the statistics on top of them: weighted counting
# against li, windowed sums, and the cumulative counting functions.

import math

import pytest

from shiftlab.potentials import Potential
from shiftlab.sft import primitive_classes
from shiftlab.orbits import (CatalogBudget, EmptyWindow, HorizonTooSmall,
                             OrbitError, build_catalog,
                             counting_ratio_series, cumulative_integrated,
                             cumulative_weighted_count, delta_schedule,
                             exponential_window_report, li,
                             weighted_orbit_count, window_series,
                             windowed_orbit_sum)


@pytest.fixture(scope="module")
def fs2_unit(fs2):
    # unit roof, normalised weight -log 2, unit observable
    one = Potential.constant(fs2, 1.0)
    fu = Potential.constant(fs2, -math.log(2))
    return build_catalog(fs2, one, g=one, f_u=fu, horizon=16.5)


def test_build_catalog_small_examples(gm, fs2):
    one = Potential.constant(gm, 1.0)
    cat = build_catalog(gm, one, horizon=4.0)
    assert len(cat.records) == 4  # one primitive class per period 1..4
    assert [r.n for r in cat.records] == [1, 2, 3, 4]
    cat = build_catalog(fs2, Potential.constant(fs2, 1.0), horizon=3.0)
    assert len(cat.records) == 5  # 2 fixed, 1 of period 2, 2 of period 3
    roof = Potential.from_table(fs2, 1, {(1,): 1.0, (2,): 2.0})
    cat = build_catalog(fs2, roof, horizon=2.0)
    assert {r.word for r in cat.records} == {(1,), (2,)}
    with pytest.raises(OrbitError):
        build_catalog(gm, Potential.constant(gm, -1.0), horizon=4.0)
    with pytest.raises(OrbitError):
        build_catalog(gm, one, horizon=0.5)
    with pytest.raises(CatalogBudget):
        build_catalog(fs2, Potential.constant(fs2, 1.0), horizon=12.0,
                      max_orbits=50)


def test_catalog_completeness(gm, fs2):
    # with a unit roof the horizon-n catalog holds every primitive class
    # of period at most n
    for spec in (gm, fs2):
        one = Potential.constant(spec, 1.0)
        cat = build_catalog(spec, one, horizon=8.0)
        expect = sum(len(primitive_classes(spec, n)) for n in range(1, 9))
        assert len(cat.records) == expect
        assert all(a.lam <= b.lam for a, b in zip(cat.records, cat.records[1:]))


def test_cycle_sums_cyclic_invariance(gm):
    # depth-2 roof: the catalog stores rotation-invariant cycle sums, so
    # the canonical word's sum matches a direct sum over any rotation
    roof = Potential.from_table(gm, 2, {(1, 1): 1.0, (1, 2): 1.3, (2, 1): 1.7})
    cat = build_catalog(gm, roof, horizon=6.0)
    rec = next(r for r in cat.records if r.word == (1, 1, 2))
    assert rec.lam == pytest.approx(1.0 + 1.3 + 1.7)


def test_prune_matches_unpruned(gm, gm_roof):
    # the same roof lifted to depth 2 disables pruning; catalogs agree
    lifted = Potential.from_table(
        gm, 2, {w: gm_roof.value_on_word(w[:1]) for w in
                Potential.constant(gm, 0.0, depth=2).words})
    a = build_catalog(gm, gm_roof, horizon=9.0)
    b = build_catalog(gm, lifted, horizon=9.0)
    assert [r.word for r in a.records] == [r.word for r in b.records]
    for ra, rb in zip(a.records, b.records):
        assert ra.lam == pytest.approx(rb.lam, abs=1e-12)


def test_li_oracle():
    assert li(2.0) == 0.0
    with pytest.raises(OrbitError):
        li(1.5)
    x = math.exp(10)
    assert 1.0 < li(x) / (x / 10) < 1.25
    assert li(100.0) > li(50.0) > li(10.0) > 0


def test_weighted_orbit_count(gm, gm_roof):
    cat = build_catalog(gm, gm_roof, horizon=14.0)
    pr = 0.413538631886836640833550719608
    with pytest.raises(HorizonTooSmall):
        weighted_orbit_count(cat, pr, 3.0)
    with pytest.raises(OrbitError):
        weighted_orbit_count(cat, pr, 20.0)
    pts = counting_ratio_series(cat, pr, [10.0, 12.0, 14.0])
    # unweighted counting (lam_f = 0): value is the raw orbit count
    assert pts[-1].value == len(cat.up_to(14.0))
    assert all(p.target > 0 for p in pts)


def test_window_schedules():
    assert delta_schedule("const", 9.0) == 1.0
    assert delta_schedule("sqrt", 16.0) == 1.0
    assert delta_schedule("inv", 4.0) == 0.25
    assert delta_schedule("exp", 2.0) == pytest.approx(math.exp(-2))
    with pytest.raises(OrbitError):
        delta_schedule("fancy", 1.0)


def test_windowed_sum_lattice_example(fs2_unit):
    # unit roof on the full 2-shift with the normalised weight: the unit
    # window at integer T holds exactly the period-T classes and the sum
    # is T * (#classes) / 2^T, tending to one
    vals = [windowed_orbit_sum(fs2_unit, float(T), 1.0, 1.0).value
            for T in (6, 10, 14, 16)]
    assert vals[0] == pytest.approx(54 / 64)
    assert vals[1] == pytest.approx(990 / 1024)
    assert vals[2] == pytest.approx(16254 / 16384)
    assert vals[3] == pytest.approx(65280 / 65536)
    assert all(v < 1 for v in vals)


def test_windowed_sum_edge_cases(gm, fs2_unit):
    one = Potential.constant(gm, 1.0)
    zero = Potential.constant(gm, 0.0)
    cat = build_catalog(gm, one, g=zero, horizon=8.0)
    assert windowed_orbit_sum(cat, 5.0, 1.0, 1.0).value == 0.0
    with pytest.raises(EmptyWindow):
        windowed_orbit_sum(cat, 2.5, 0.2, 1.0)
    with pytest.raises(OrbitError):
        windowed_orbit_sum(fs2_unit, 16.4, 0.5, 1.0)
    # windows are closed: an orbit sitting exactly on the boundary counts
    wp = windowed_orbit_sum(fs2_unit, 5.5, 1.0, 1.0)
    assert wp.n_orbits > 0


def test_window_full_range_consistency(fs2_unit):
    # delta = T centered at T/2 covers [0, T]: equals the plain average
    T = 12.0
    wp = windowed_orbit_sum(fs2_unit, T / 2, T, 1.0)
    manual = sum(r.lam_g * math.exp(-r.lam_u)
                 for r in fs2_unit.up_to(T)) / T
    assert wp.value == pytest.approx(manual, abs=1e-12)
    series = window_series(fs2_unit, [6.0, 10.0], "const", 1.0)
    assert [p.T for p in series] == [6.0, 10.0]


def test_exponential_windows_out_of_reach(gm):
    one = Potential.constant(gm, 1.0)
    cat = build_catalog(gm, one, horizon=12.0)
    rep = exponential_window_report(cat, [3.3, 5.7, 8.1, 11.6])
    assert rep["probed"] == 4
    assert rep["out_of_statistical_reach"]


def test_cumulative_single_orbit(gm):
    one = Potential.constant(gm, 1.0)
    cat = build_catalog(gm, one, horizon=1.0)
    cp = cumulative_weighted_count(cat, math.log(2), 2.0)
    # one orbit of length 1: a single repetition with weight 1 * e^(pr)
    assert cp.literal == pytest.approx(2.0)
    assert cp.chebyshev == pytest.approx(math.log(2))
    with pytest.raises(OrbitError):
        cumulative_weighted_count(cat, 0.0, 2.0)


def test_cumulative_integrated_trend(fs2):
    one = Potential.constant(fs2, 1.0)
    cat = build_catalog(fs2, one, horizon=13.0)
    pr = math.log(2)
    r500 = cumulative_integrated(cat, pr, 500.0)
    r5000 = cumulative_integrated(cat, pr, 5000.0)
    e500 = abs(r500["chebyshev"] / r500["half_T2"] - 1.0)
    e5000 = abs(r5000["chebyshev"] / r5000["half_T2"] - 1.0)
    assert e5000 < e500
    assert e5000 < 0.05
    assert r5000["literal"] > r5000["chebyshev"]
