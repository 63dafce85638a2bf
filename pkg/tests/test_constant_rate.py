import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analysis.arith import NOT_OBSERVABLE
from analysis.constant_rate import (
    GEN_EVEN_EVEN,
    HALF_EVEN_M,
    KIND_LAMBDA_N,
    KIND_MU,
    KIND_PI_OVER_ODD,
    KIND_XI,
    LARGE,
    ODD_DENOMINATOR,
    TWO_OVER_ODD_EVEN_H,
    TWO_OVER_ODD_ODD_H,
    classify,
    cross_check,
    discontinuity_catalog,
    map_grid,
    topt_constant_rate,
    topt_map,
)


@pytest.mark.parametrize("t0, kind, param, expected", [
    (F(7, 4), LARGE, ("n", 1), F(3)),
    (F(3, 2), LARGE, ("n", 1), F(3)),
    (F(5, 4), LARGE, ("n", 3), F(5)),
    (F(1, 2), HALF_EVEN_M, ("m", 1), F(2)),
    (F(1, 4), HALF_EVEN_M, ("m", 2), F(2)),
    (F(2, 5), TWO_OVER_ODD_EVEN_H, ("h", 2), F(14, 5)),
    (F(2, 3), TWO_OVER_ODD_ODD_H, ("h", 1), F(3)),
])
def test_classification_examples(t0, kind, param, expected):
    analysis = classify(t0)
    assert analysis.case.kind == kind
    assert analysis.case.param(param[0]) == param[1]
    assert analysis.t_opt == expected


@pytest.mark.parametrize("t0, n", [(F(1, 5), 2), (F(1, 3), 1), (F(1), 0)])
def test_odd_denominator_is_not_observable(t0, n):
    analysis = classify(t0)
    assert analysis.case.kind == ODD_DENOMINATOR
    assert analysis.case.param("n") == n
    assert analysis.t_opt is NOT_OBSERVABLE


def test_float_generic_even_even_case():
    t0 = 0.7 / math.pi
    analysis = classify(t0)
    assert (analysis.N, analysis.j) == (8, 4)
    assert analysis.case.kind == GEN_EVEN_EVEN
    assert analysis.t_opt == pytest.approx(2 + 4 * t0, rel=1e-12)
    assert cross_check(t0).agreement


def test_domain_errors():
    for t0 in (F(0), F(2), F(-1, 2), F(5, 2)):
        with pytest.raises(ValueError):
            classify(t0)


def test_case_label():
    assert classify(F(2, 5)).case.label == "TwoOverOddEvenH(h=2)"
    assert classify(F(1, 2)).case.label == "HalfEvenM(m=1)"


def test_blow_up_near_odd_denominators():
    for t0 in (F(1, 3) - F(1, 10**5), F(1, 3) + F(1, 10**5)):
        assert topt_constant_rate(t0) > 100


def _random_t0():
    return st.integers(min_value=1, max_value=200).flatmap(
        lambda q: st.integers(min_value=1, max_value=2 * q - 1).map(lambda p: F(p, q))
    ).filter(lambda t: not (t.numerator == 1 and t.denominator % 2 == 1))


@given(_random_t0())
@settings(max_examples=300, deadline=None)
def test_closed_form_matches_sweep(t0):
    check = cross_check(t0)
    assert check.agreement, f"T_0={t0}: {check.analysis.t_opt} vs {check.oracle_t_opt}"
    assert check.oracle_t_opt == check.analysis.t_opt


@pytest.mark.slow
def test_closed_form_matches_sweep_exhaustive():
    seen = set()
    for q in range(1, 201):
        for p in range(1, 2 * q):
            t0 = F(p, q)
            if t0 in seen or (t0.numerator == 1 and t0.denominator % 2 == 1):
                continue
            seen.add(t0)
            if len(seen) > 10**4:
                return
            assert cross_check(t0).agreement, f"T_0={t0}"


def test_generic_thresholds_stay_ordered():
    for q in range(3, 60):
        for p in range(1, q):
            analysis = classify(F(p, q))
            params = dict(analysis.case.params)
            if "k*" in params:
                assert params["k*"] <= params["h*"] <= params["k*"] + 1
            if "q*" in params:
                assert params["q*"] <= params["l*"] <= params["q*"] + 1


def test_catalog_known_points():
    catalog = discontinuity_catalog(F(1, 10), F(19, 10), max_order=5)
    by_location = {p.location: p for p in catalog.points}
    locations = [p.location for p in catalog.points]
    assert locations == sorted(locations)

    lam = by_location[F(3, 2)]
    assert lam.kind == KIND_LAMBDA_N
    assert (lam.left_limit, lam.right_limit) == (F(4), F(3))

    mu = by_location[F(3, 4)]
    assert mu.kind == KIND_MU
    assert mu.jump == F(3, 4)

    xi = by_location[F(3, 8)]
    assert xi.kind == KIND_XI
    assert xi.left_limit == F(19, 4)
    assert xi.right_limit == F(15, 4)
    assert abs(xi.jump) == 1

    third = by_location[F(1, 3)]
    assert third.kind == KIND_PI_OVER_ODD
    assert third.value_at is NOT_OBSERVABLE
    assert math.isinf(third.left_limit)

    assert by_location[F(1, 2)].value_at == 2
    assert by_location[F(2, 5)].left_limit == F(19, 5)
    assert by_location[F(2, 3)].right_limit == F(11, 3)


@pytest.mark.parametrize("location", [F(3, 2), F(4, 3), F(3, 4), F(3, 8), F(2, 5), F(2, 3), F(1, 4)])
def test_catalog_limits_match_closed_form(location):
    point = {p.location: p for p in discontinuity_catalog(F(1, 10), F(19, 10), max_order=5).points}[location]
    offset = F(1, 10**8)
    assert topt_constant_rate(location - offset) == pytest.approx(float(point.left_limit), abs=1e-6)
    assert topt_constant_rate(location + offset) == pytest.approx(float(point.right_limit), abs=1e-6)


def test_catalog_near_one_third_lists_accumulating_jumps():
    catalog = discontinuity_catalog(F(1, 3) - F(1, 30), F(1, 3) + F(1, 30), max_order=6)
    kinds = {p.kind for p in catalog.points}
    assert kinds == {KIND_PI_OVER_ODD, KIND_MU, KIND_XI}
    [third] = [p for p in catalog.points if p.kind == KIND_PI_OVER_ODD]
    assert third.location == F(1, 3)
    assert math.isinf(third.left_limit) and math.isinf(third.right_limit)
    for point in catalog.points:
        if point.kind != KIND_PI_OVER_ODD:
            offset = F(1, 10**8)
            assert topt_constant_rate(point.location - offset) == pytest.approx(float(point.left_limit), abs=1e-6)
            assert topt_constant_rate(point.location + offset) == pytest.approx(float(point.right_limit), abs=1e-6)


def test_catalog_rejects_bad_order():
    with pytest.raises(ValueError):
        discontinuity_catalog(F(0), F(2), max_order=0)


def test_map_grid_conventions():
    assert map_grid(F(1, 2), F(1, 2), F(1, 10)) == [F(1, 2)]
    assert map_grid(F(1), F(1, 2), F(1, 10)) == []
    assert map_grid(F(1, 2), F(1), F(1, 4)) == [F(1, 2), F(3, 4)]
    with pytest.raises(ValueError):
        map_grid(F(1, 2), F(1), F(0))


def test_topt_map_order_and_plateaus():
    points = topt_map(F(1), F(2), F(1, 100), max_workers=4)
    assert [p.t0 for p in points] == [F(100 + k, 100) for k in range(100)]
    assert points[0].analysis.t_opt is NOT_OBSERVABLE
    observable = points[1:]
    jumps = [b.t0 for a, b in zip(observable, observable[1:]) if a.analysis.t_opt != b.analysis.t_opt]
    # sulla griglia T_0 = 1 + k/100 il caso Large cambia dove cambia ⌈100/k⌉
    assert jumps == [F(100 + k, 100) for k in (2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 15, 17, 20, 25, 34, 50)]
    assert topt_map(F(1, 2), F(1, 2), F(1, 10))[0].analysis.t_opt == 2
