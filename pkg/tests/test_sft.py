# Combinatorial layer: matrix validation, word enumeration, periodic
# classes, eventually periodic points and the theta-metric.

import pytest

from shiftlab.sft import (InadmissibleWord, PeriodicMatrix, Point,
                          ReducibleMatrix, SubshiftError, SymbolicMetric,
                          ZeroRowOrColumn, big_distance, check_point,
                          count_fixed_points, cylinder_diameter,
                          enumerate_periodic_words, enumerate_words,
                          is_admissible, is_cyclically_admissible, mobius,
                          periodic_point, point_in_cylinder,
                          primitive_classes, validate_subshift)


def test_validate_rejects_bad_matrices():
    with pytest.raises(ZeroRowOrColumn):
        validate_subshift(2, [[1, 1], [0, 0]])
    with pytest.raises(ZeroRowOrColumn):
        validate_subshift(2, [[0, 1], [0, 1]])
    with pytest.raises(ReducibleMatrix):
        validate_subshift(2, [[1, 1], [0, 1]])
    with pytest.raises(PeriodicMatrix):
        validate_subshift(2, [[0, 1], [1, 0]])
    with pytest.raises(SubshiftError):
        validate_subshift(2, [[1, 2], [1, 0]])


def test_primitivity_exponent(gm, fs2):
    assert fs2.primitivity_exponent == 1
    assert gm.primitivity_exponent == 2


def test_successors_predecessors(gm):
    assert gm.successors(1) == (1, 2)
    assert gm.successors(2) == (1,)
    assert gm.predecessors(1) == (1, 2)
    assert gm.predecessors(2) == (1,)


def test_admissibility(gm):
    assert is_admissible(gm, (1, 2, 1, 1))
    assert not is_admissible(gm, (2, 2))
    assert is_cyclically_admissible(gm, (1, 2))
    assert not is_cyclically_admissible(gm, (2, 1, 2))


def test_word_counts_golden(gm):
    # golden mean: |W_n| follows the Fibonacci recursion 2, 3, 5, 8, ...
    counts = [len(enumerate_words(gm, n)) for n in range(1, 8)]
    assert counts == [2, 3, 5, 8, 13, 21, 34]
    for n in (2, 5):
        ws = enumerate_words(gm, n)
        assert ws == sorted(ws)
        assert all(is_admissible(gm, w) for w in ws)


def test_fixed_point_counts_match_trace(gm, fs2):
    # golden mean traces are the Lucas numbers
    lucas = [1, 3, 4, 7, 11, 18, 29, 47, 76, 123, 199, 322]
    for n, expect in enumerate(lucas, start=1):
        assert count_fixed_points(gm, n) == expect
        assert len(enumerate_periodic_words(gm, n)) == expect
        assert count_fixed_points(fs2, n) == 2 ** n
        assert len(enumerate_periodic_words(fs2, n)) == 2 ** n


def test_primitive_classes_mobius(gm, fs2):
    # sum over d | n of d * (number of primitive d-classes) = trace(A^n)
    for spec in (gm, fs2):
        for n in range(1, 11):
            total = sum(d * len(primitive_classes(spec, d))
                        for d in range(1, n + 1) if n % d == 0)
            assert total == count_fixed_points(spec, n)


def test_primitive_classes_canonical(gm):
    cls = primitive_classes(gm, 5)
    assert len(cls) == 2
    for w in cls:
        assert is_cyclically_admissible(gm, w)
        rots = [w[i:] + w[:i] for i in range(len(w))]
        assert w == min(rots)
        assert len(set(rots)) == len(w)  # primitive


def test_primitive_classes_prune(gm):
    # pruning everything starting with symbol 2 keeps only the 1-words
    full = primitive_classes(gm, 6)
    kept = primitive_classes(gm, 6, prune=lambda w: w[0] == 2)
    assert kept == [w for w in full if w[0] == 1]


def test_mobius_small():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_point_basics(gm):
    x = Point((1,), (1, 2))
    assert x.first(6) == (1, 1, 2, 1, 2, 1)
    assert x.shift().first(4) == (1, 2, 1, 2)
    # canonical form reduces the tail and absorbs redundant prefix
    assert Point((), (1, 2, 1, 2)).equals(Point((), (1, 2)))
    assert Point((1,), (2, 1)).equals(Point((), (1, 2)))
    assert not Point((), (1,)).equals(Point((), (2,)))


def test_point_validation(gm):
    with pytest.raises(InadmissibleWord):
        check_point(gm, Point((), (2,)))
    with pytest.raises(InadmissibleWord):
        periodic_point(gm, (2, 2))
    x = periodic_point(gm, (1, 2))
    assert x.first(4) == (1, 2, 1, 2)


def test_point_in_cylinder(gm):
    x = point_in_cylinder(gm, (2, 1))
    assert x.first(2) == (2, 1)
    check_point(gm, x)
    with pytest.raises(InadmissibleWord):
        point_in_cylinder(gm, (2, 2))


def test_metric_and_ultrametric(gm, met):
    x = periodic_point(gm, (1,))
    y = periodic_point(gm, (1, 2))
    z = periodic_point(gm, (2, 1))
    assert met.distance(x, x) == 0.0
    assert met.distance(x, y) == 0.5  # agree on the first symbol only
    assert met.distance(x, z) == 1.0
    # ultrametric inequality on a few triples
    for a, b, c in [(x, y, z), (y, z, x), (z, x, y)]:
        assert met.distance(a, c) <= max(met.distance(a, b), met.distance(b, c)) + 1e-15


def test_cylinder_diameter(gm, met, fs2):
    # [2] forces one step (2 -> 1) before branching: diameter theta^2
    assert cylinder_diameter(gm, met, (2,)) == 0.25
    assert cylinder_diameter(gm, met, (1,)) == 0.5
    assert cylinder_diameter(fs2, met, (1,)) == 0.5
    # a single-point cylinder in a rigid subshift
    rigid = validate_subshift(2, [[1, 1], [1, 0]])
    assert cylinder_diameter(rigid, met, (2,)) == 0.25


def test_big_distance_dominates(gm, met):
    x = periodic_point(gm, (2, 1))
    y = Point((2, 1), (1,))
    assert big_distance(gm, met, x, x) == 0.0
    d = met.distance(x, y)
    D = big_distance(gm, met, x, y)
    assert D >= d
    # both lie in [2,1] whose forced continuation branches one step later
    assert D == cylinder_diameter(gm, met, x.first(met.common_prefix_len(x, y)))
