"""The counting formulas: points, orbits, n_theta, census, Poincare, Euler."""

from fractions import Fraction

import pytest

from toricarr.errors import CapabilityError
from toricarr.layers import (
    IntPolynomial,
    a_series_census,
    a_series_poincare,
    closed_form_sums,
    count_layers,
    count_points,
    count_points_of_type,
    equivariant_euler,
    euler_characteristic,
    layer_census,
    n_theta,
    partitions,
    poincare,
    point_orbits,
    point_type_multiset,
    verify_degree_identity,
)
from toricarr.rootsys import build_str, format_type, parse_type
from toricarr.subsys import completion, enumerate_complete

RANK_LE_4 = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4"]


# -- polynomials ----------------------------------------------------------------


def test_polynomial_arithmetic():
    p = IntPolynomial.of([1, 2])  # 2q + 1
    q = IntPolynomial.of([0, 1])
    assert (p * q).coeffs == (0, 1, 2)
    assert (p + q).coeffs == (1, 3)
    assert p(-1) == -1
    assert str(IntPolynomial.of([1, 28, 286, 1260, 2153])) == (
        "2153q^4 + 1260q^3 + 286q^2 + 28q + 1"
    )
    assert IntPolynomial.of([1, 0, 0]).coeffs == (1,)


# -- points ---------------------------------------------------------------------


def test_count_points_closed_forms():
    assert [count_points(build_str(f"A{n}")) for n in range(1, 9)] == list(range(2, 10))
    for n in range(2, 7):
        assert count_points(build_str(f"C{n}" if n > 2 else "B2")) == 2 ** n
    for n in range(2, 7):
        assert count_points(build_str(f"B{n}")) == 2 * (2 ** n - n)
    for n in range(4, 7):
        assert count_points(build_str(f"D{n}")) == 2 * (2 ** n - 2 * n)


def test_count_points_examples():
    assert count_points(build_str("F4")) == 72
    assert count_points(build_str("G2")) == 6
    assert count_points(build_str("E8")) == 157200  # diagram + tables only


def test_count_points_multiplicative():
    assert count_points(build_str("A3xA1")) == 4 * 2
    assert count_points(build_str("B3xG2")) == 10 * 6


def test_point_orbits_b3():
    records = point_orbits(build_str("B3"))
    data = [(r.vertex, r.orbit_size, format_type(r.point_type)) for r in records]
    assert data == [
        (0, 1, "B3"),
        (1, 1, "B3"),
        (2, 6, "A1xA1xA1"),
        (3, 2, "A3"),
    ]
    assert sum(r.orbit_size for r in records) == 10


def test_point_orbits_f4_sum():
    records = point_orbits(build_str("F4"))
    assert sorted(r.orbit_size for r in records) == [1, 3, 12, 24, 32]
    assert sum(r.orbit_size for r in records) == 72
    # F4 has trivial diagram automorphisms: five singleton Q-orbits
    assert sorted({r.aut_orbit for r in records}) == [0, 1, 2, 3, 4]


def test_point_orbits_cn_binomials():
    records = point_orbits(build_str("C4"))
    from math import comb

    assert sorted(r.orbit_size for r in records) == sorted(comb(4, p) for p in range(5))


def test_point_orbits_rejects_products():
    with pytest.raises(ValueError):
        point_orbits(build_str("A1xA1"))


def test_eq1_equals_eq2_through_e8():
    # vertex sum vs Q-orbit sum
    for t in ["A5", "B6", "C6", "D7", "E6", "E7", "E8", "F4", "G2"]:
        rs = build_str(t)
        records = point_orbits(rs)
        by_vertex = sum(r.orbit_size for r in records)
        by_q = {}
        for r in records:
            by_q.setdefault(r.aut_orbit, []).append(r)
        total = sum(len(orb) * orb[0].orbit_size for orb in by_q.values())
        assert by_vertex == total == count_points(rs), t


# -- n_theta ---------------------------------------------------------------------


def test_n_theta_full_system_is_one():
    for t in ["A2", "B3", "F4"]:
        rs = build_str(t)
        full = enumerate_complete(rs, 0).members[0]
        assert n_theta(rs, full) == 1


def test_n_theta_f4_equals_center_order():
    from toricarr.rootsys import type_invariants

    rs = build_str("F4")
    for d in range(5):
        for theta in enumerate_complete(rs, d).members:
            assert n_theta(rs, theta) == type_invariants(theta.type).center_order


def test_n_theta_a_series_partition_formula():
    from math import gcd, prod

    for n in [3, 4, 5]:
        rs = build_str(f"A{n-1}")
        for d in range(n):
            for theta in enumerate_complete(rs, d).members:
                lam = tuple(sorted((s.rank + 1 for s in theta.type), reverse=True))
                lam = lam + (1,) * (n - sum(lam))
                assert n_theta(rs, theta) == prod(lam) // gcd(*lam)


def test_n_theta_rejects_non_complete():
    rs = build_str("G2")
    norms = [rs.inner(r, r) for r in rs.positive_roots]
    longs = [i for i, r in enumerate(rs.positive_roots) if rs.inner(r, r) == max(norms)]
    from toricarr.subsys import make_subsystem

    with pytest.raises(ValueError):
        n_theta(rs, make_subsystem(rs, longs))


def test_n_theta_constant_on_orbits():
    from toricarr.subsys import w_orbit_census
    from toricarr.weyl import WeylGroup

    rs = build_str("B3")
    W = WeylGroup(rs)
    for d in range(4):
        for orbit in w_orbit_census(rs, enumerate_complete(rs, d), W):
            values = {n_theta(rs, m) for m in orbit.members}
            assert len(values) == 1


# -- layer counts and census ------------------------------------------------------


def test_count_layers_trivial_top():
    for t in ["A2", "B3", "F4"]:
        rs = build_str(t)
        assert count_layers(rs, rs.rank) == 1


def test_count_layers_f4():
    rs = build_str("F4")
    assert [count_layers(rs, d) for d in range(5)] == [72, 204, 140, 24, 1]


def test_count_layers_equals_points_at_zero():
    for t in RANK_LE_4:
        rs = build_str(t)
        assert count_layers(rs, 0) == count_points(rs)


def test_census_f4_matches_paper_table():
    rs = build_str("F4")
    records = layer_census(rs)
    # aggregate orbits by type: (space count, layers per space)
    agg = {}
    for r in records:
        key = format_type(r.theta_type)
        cnt, per = agg.get(key, (0, r.layer_count))
        assert per == r.layer_count
        agg[key] = (cnt + r.orbit_size, r.layer_count)
    assert agg == {
        "A0": (1, 1),
        "A1": (24, 1),
        "A1xA1": (72, 1),
        "A2": (32, 1),
        "B2": (18, 2),
        "C3": (12, 4),
        "B3": (12, 5),
        "A1xA2": (96, 1),
        "F4": (1, 72),
    }


def test_census_f4_phi_c_multisets():
    rs = build_str("F4")
    records = {format_type(r.theta_type): r for r in layer_census(rs)}
    as_dict = lambda r: {format_type(t): c for t, c in r.phi_c_types}
    assert as_dict(records["B2"]) == {"B2": 1, "A1xA1": 1}
    assert as_dict(records["B3"]) == {"B3": 1, "A3": 1, "A1xA1xA1": 3}
    # the paper prints "A2xA1" here; affine deletion gives B2xA1 (same counts)
    assert as_dict(records["C3"]) == {"C3": 1, "A1xB2": 3}
    assert as_dict(records["F4"]) == {
        "F4": 1, "A1xC3": 12, "A2xA2": 32, "A1xA3": 24, "B4": 3,
    }


def test_census_integrality():
    for t in RANK_LE_4:
        for r in layer_census(build_str(t)):
            assert all(c >= 0 for _, c in r.phi_c_types)
            assert r.layer_count == sum(c for _, c in r.phi_c_types)


def test_point_type_multiset_product():
    single = dict(point_type_multiset(parse_type("A1")))
    assert single == {parse_type("A1"): 2}
    double = dict(point_type_multiset(parse_type("A1xA1")))
    assert double == {parse_type("A1xA1"): 4}


# -- Euler and Poincare -------------------------------------------------------------


def test_euler_examples():
    assert euler_characteristic(build_str("A1")) == -2
    assert euler_characteristic(build_str("A2")) == 6
    assert euler_characteristic(build_str("F4")) == 1152
    assert euler_characteristic(build_str("D4")) == 192
    assert euler_characteristic(build_str("E8")) == 696729600


def test_euler_multiplicative():
    assert euler_characteristic(build_str("A1xA2")) == -12


def test_equivariant_euler():
    assert equivariant_euler(build_str("A1")).k == -1
    assert equivariant_euler(build_str("F4")).k == 1
    assert equivariant_euler(build_str("B2")).k == 1
    assert abs(equivariant_euler(build_str("C3")).k) == 1


def test_poincare_f4_paper_value():
    poly = poincare(build_str("F4"), "both")
    assert poly.coeffs == (1, 28, 286, 1260, 2153)
    assert closed_form_sums(build_str("F4")) == (1152, 768, 208, 24, 1)


def test_poincare_small_hand_values():
    assert poincare(build_str("A1"), "both").coeffs == (1, 3)
    assert poincare(build_str("A2"), "both").coeffs == (1, 5, 10)


@pytest.mark.parametrize("t", RANK_LE_4)
def test_poincare_routes_agree(t):
    rs = build_str(t)
    closed = poincare(rs, "closed")
    by_layers = poincare(rs, "layers")
    assert closed == by_layers
    assert closed(0) == 1
    assert closed(-1) == euler_characteristic(rs)


def test_poincare_product():
    # layers multiply, so Poincare polynomials multiply
    p1 = poincare(build_str("A1"), "both")
    p11 = poincare(build_str("A1xA1"), "both")
    assert p11 == p1 * p1


def test_poincare_leading_coefficient():
    # each (q+1)^d q^{n-d} term is monic of degree n, so the top coefficient
    # is the plain sum of the per-dimension closed-form sums
    for t in ["A3", "B3", "F4"]:
        rs = build_str(t)
        poly = poincare(rs, "closed")
        assert poly.coeffs[-1] == sum(closed_form_sums(rs))
        assert poly.degree == rs.rank


def test_poincare_capability():
    with pytest.raises(CapabilityError):
        poincare(build_str("E7"))


# -- A series ------------------------------------------------------------------------


def test_partitions():
    assert partitions(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))


def test_a_series_census_hand_values():
    total, breakdown = a_series_census(3, 0)
    assert total == 3 and breakdown == (((3,), 3),)
    total, breakdown = a_series_census(3, 1)
    assert total == 3 and breakdown == (((2, 1), 3),)
    assert a_series_census(3, 2)[0] == 1


def test_a_series_census_matches_enumeration():
    for n in range(2, 7):
        rs = build_str(f"A{n-1}")
        for d in range(n):
            assert a_series_census(n, d)[0] == count_layers(rs, d), (n, d)


def test_a_series_poincare_matches_general_route():
    for n in range(2, 6):
        assert a_series_poincare(n) == poincare(build_str(f"A{n-1}"), "both")
    assert a_series_poincare(3).coeffs == (1, 5, 10)


# -- degree identity -------------------------------------------------------------------


def test_degree_identity_a1():
    res = verify_degree_identity(build_str("A1"))
    assert res.holds
    assert res.terms == ((0, Fraction(1, 2)), (1, Fraction(1, 2)))


def test_degree_identity_f4_term():
    res = verify_degree_identity(build_str("F4"))
    assert res.holds
    assert (0, Fraction(385, 1152)) in res.terms


def test_degree_identity_all_types_through_e8():
    types = (
        [f"A{n}" for n in range(1, 9)]
        + [f"B{n}" for n in range(2, 9)]
        + [f"C{n}" for n in range(3, 9)]
        + [f"D{n}" for n in range(4, 9)]
        + ["E6", "E7", "E8", "F4", "G2"]
    )
    for t in types:
        assert verify_degree_identity(build_str(t)).holds, t
