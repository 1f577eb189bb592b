import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msforge.curve import (
    DZ,
    INF,
    W,
    Z,
    CurvePoint,
    MalformedCurveError,
    Place,
    SuperellipticCurve,
    degree,
    divisor,
    euler_characteristic,
    genus,
    is_power_on_curve,
    local_order,
    make_curve,
    puncture_series,
    residue,
)
from msforge.families import even_curve, even_data, genus_curve, genus_data


def test_genus_of_elliptic_curve():
    assert genus(make_curve(2, [(0, 1), (1, 1), (-1, 1)])) == 1


@pytest.mark.parametrize("n,k", [(3, 2), (4, 3)])
def test_genus_two_examples_with_three_roots(n, k):
    curve = make_curve(n, [(0, 2), (1, k), (3.0, -k)])
    assert genus(curve) == 2


@pytest.mark.parametrize("k", range(2, 9))
def test_even_family_genus_parity(k):
    curve = make_curve(k + 1, [(0, 2), (1, k), (2.5, -k)])
    assert genus(curve) == (k if k % 2 == 0 else k - 1)


@pytest.mark.parametrize("gamma", [1, 2, 3, 4, 7])
def test_genus_family_has_genus_gamma(gamma):
    assert genus(genus_curve(gamma)) == gamma
    assert euler_characteristic(genus_curve(gamma)) == 2 - 2 * gamma


def test_reducible_equation_is_rejected():
    with pytest.raises(MalformedCurveError):
        make_curve(4, [(0, 2), (1, 2)])


def test_repeated_root_is_rejected():
    with pytest.raises(MalformedCurveError):
        make_curve(3, [(1, 1), (1.0, 2)])


def test_riemann_hurwitz_consistency():
    curve = genus_curve(3)
    n = curve.sheets
    ram = sum(curve.ramification(z) - 1 for z in curve.branch_values())
    assert 2 - 2 * genus(curve) == 2 * n - ram


def test_sheet_values_satisfy_equation():
    curve = even_curve(4, 2.3)
    z = np.array([0.3 + 0.2j, -1.5 + 2j, 4.0 - 0.1j])
    ws = curve.sheet_values(z)
    assert ws.shape == (5, 3)
    np.testing.assert_allclose(ws ** 5, np.broadcast_to(curve.rhs(z), (5, 3)), rtol=1e-12)
    for w in ws[:, 0]:
        assert curve.on_curve(CurvePoint(z[0], w))
    assert not curve.on_curve(CurvePoint(z[0], 1.1 * ws[0, 0]))


def test_json_round_trip():
    curve = even_curve(2, 1.75)
    again = SuperellipticCurve.from_json(curve.to_json())
    assert genus(again) == genus(curve)
    assert again.sheets == curve.sheets


# orders of g and eta on the genus family


@pytest.mark.parametrize("gamma", [1, 2, 3])
def test_genus_family_orders(gamma):
    d = genus_data(gamma, 1.0)
    c = d.curve
    assert local_order(d.g, Place(0), c) == 1
    assert local_order(d.eta, Place(0), c) == -(gamma + 3)
    assert local_order(d.g, Place(INF), c) == -2 * gamma - 1
    assert local_order(d.g * d.g * d.eta, Place(0), c) == -(gamma + 1)


def test_even_family_eta_vanishes_at_infinity():
    d = even_data(2, 1.8)
    assert local_order(d.eta, Place(INF), d.curve) == 1


@pytest.mark.parametrize("gamma", [1, 2, 3])
def test_canonical_divisor_degree(gamma):
    d = genus_data(gamma, 1.0)
    total = sum(k for _, k in divisor(d.eta, d.curve))
    assert total == 2 * genus(d.curve) - 2
    assert sum(k for _, k in divisor(d.g, d.curve)) == 0


def test_degree_of_g():
    assert degree(genus_data(1, 1.0).g, genus_curve(1)) == 3
    assert degree(even_data(2, 1.8).g, even_curve(2, 1.8)) == 4


def test_order_is_additive():
    d = genus_data(2, 1.0)
    for pl in (Place(0), Place(INF), Place(1), Place(-1)):
        assert local_order(d.g * d.eta, pl, d.curve) == (
            local_order(d.g, pl, d.curve) + local_order(d.eta, pl, d.curve))


def test_series_of_constant():
    curve = genus_curve(1)
    ser = puncture_series(Z(0, 0), Place(0), curve, terms=3)
    assert ser.order == 0
    np.testing.assert_allclose(ser.coeffs, [1, 0, 0], atol=1e-14)


@pytest.mark.parametrize("gamma", [1, 2, 3])
def test_no_residues_at_the_ends(gamma):
    d = genus_data(gamma, 1.3)
    for pl in (Place(0), Place(INF)):
        assert abs(residue(d.eta, pl, d.curve)) < 1e-12
        assert abs(residue(d.g * d.g * d.eta, pl, d.curve)) < 1e-12


def test_residue_of_dz_over_z():
    curve = make_curve(1, [], [0, INF])
    assert residue(2 * DZ * Z(0, -1), Place(0), curve) == pytest.approx(2.0)


def test_power_detection():
    curve = make_curve(3, [(0, 2), (1, 2), (-1, 2)])
    # (z^2 (z^2-1)^2)^(1/3) = w, so z^2 (z-1)^2 (z+1)^2 is a cube on the curve
    assert is_power_on_curve({0: 2, 1: 2, -1: 2}, 3, curve)
    assert not is_power_on_curve({0: 1}, 3, curve)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 3), st.integers(-3, 3))
def test_monomial_orders_add(gamma, zp, wp):
    curve = genus_curve(gamma)
    m1 = Z(0, zp) * W(wp)
    m2 = Z(1, 1) * W(1)
    for pl in (Place(0), Place(INF), Place(1)):
        assert local_order(m1 * m2, pl, curve) == local_order(m1, pl, curve) + local_order(m2, pl, curve)
