import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcontext.pauli import (
    PauliOperator,
    SymplecticPoint,
    all_points,
    canonical_operator,
    compose,
    from_label,
    symplectic_product,
    to_label,
)

from conftest import dense


def labels(n):
    return st.text(alphabet="IXYZ", min_size=n, max_size=n)


def operators(n):
    return st.builds(
        PauliOperator,
        st.just(n),
        st.integers(0, 3),
        st.integers(0, (1 << n) - 1),
        st.integers(0, (1 << n) - 1),
    )


def test_compose_identity():
    o = from_label("XYZ")
    assert compose(PauliOperator.identity(3), o) == o
    assert compose(o, PauliOperator.identity(3)) == o


def test_compose_x_z_matches_matrix_product():
    xz = compose(from_label("X"), from_label("Z"))
    assert (xz.phase_exp, xz.mu, xz.nu) == (2, 1, 1)
    np.testing.assert_allclose(xz.to_matrix(), dense("X") @ dense("Z"))
    # XZ = -iY
    np.testing.assert_allclose(xz.to_matrix(), -1j * dense("Y"))
    assert to_label(xz) == "-iY"


def test_compose_xx_yy_is_minus_zz():
    prod = compose(from_label("XX"), from_label("YY"))
    assert prod.point() == SymplecticPoint.from_label("ZZ")
    assert to_label(prod) == "-ZZ"
    np.testing.assert_allclose(prod.to_matrix(), dense("XX") @ dense("YY"))


def test_symplectic_product_examples():
    for p in all_points(2):
        assert symplectic_product(p, p) == 0
    xx, yy = SymplecticPoint.from_label("XX"), SymplecticPoint.from_label("YY")
    assert symplectic_product(xx, yy) == 0
    x, z = SymplecticPoint.from_label("X"), SymplecticPoint.from_label("Z")
    assert symplectic_product(x, z) == 1


def test_symplectic_product_rejects_mixed_sizes():
    with pytest.raises(ValueError):
        symplectic_product(SymplecticPoint.from_label("X"), SymplecticPoint.from_label("XX"))
    with pytest.raises(ValueError):
        compose(from_label("X"), from_label("XX"))


def test_label_layout_xyz():
    o = from_label("XYZ")
    assert format(o.mu, "03b") == "011"
    assert format(o.nu, "03b") == "110"
    # Y = i^3 Z X as matrices, so one Y carries phase_exp 3
    assert o.phase_exp == 3
    assert o.scalar() == 1
    np.testing.assert_allclose(o.to_matrix(), dense("XYZ"))


@pytest.mark.parametrize("bad", ["", "XQ", "x", "+-X", "XY Z"])
def test_from_label_rejects(bad):
    with pytest.raises(ValueError):
        from_label(bad)


def test_to_label_identity_and_sign():
    assert to_label(PauliOperator.identity(2)) == "II"
    assert to_label(from_label("-IZY")) == "-IZY"
    assert from_label("+XY") == from_label("XY")


def test_canonical_examples():
    zz = canonical_operator(SymplecticPoint.from_label("ZZ"))
    assert to_label(zz) == "ZZ"
    yy = canonical_operator(SymplecticPoint.from_label("YY"))
    assert compose(yy, yy).is_identity()
    prod = compose(compose(*(canonical_operator(SymplecticPoint.from_label(s)) for s in ("XX", "YY"))),
                   canonical_operator(SymplecticPoint.from_label("ZZ")))
    assert (prod.mu, prod.nu, prod.phase_exp) == (0, 0, 2)  # -I


@pytest.mark.parametrize("n", [1, 2])
def test_compose_matches_dense_on_all_canonical_pairs(n):
    ops = [PauliOperator.identity(n)] + [canonical_operator(p) for p in all_points(n)]
    for a, b in itertools.product(ops, ops):
        np.testing.assert_allclose(compose(a, b).to_matrix(), a.to_matrix() @ b.to_matrix(), atol=1e-12)
        np.testing.assert_allclose(a.to_matrix(), dense(to_label(a)), atol=1e-12)


@given(labels(3), labels(3))
def test_label_round_trip(a, b):
    assert to_label(from_label(a)) == a
    o = from_label(a)
    assert from_label(to_label(o)) == o


@given(operators(3), operators(3))
def test_compose_dense_agreement_three_qubits(a, b):
    np.testing.assert_allclose(compose(a, b).to_matrix(), a.to_matrix() @ b.to_matrix(), atol=1e-12)


@given(operators(4), operators(4))
def test_commutation_phase_rule(a, b):
    ab, ba = compose(a, b), compose(b, a)
    assert (ab.mu, ab.nu) == (ba.mu, ba.nu)
    assert (ab.phase_exp - ba.phase_exp) % 4 == 2 * symplectic_product(a, b)


@given(st.integers(1, 255), st.integers(1, 255), st.integers(1, 255))
def test_symplectic_form_bilinear_alternating(x, y, z):
    p, q, r = (SymplecticPoint(4, v) for v in (x, y, z))
    assert symplectic_product(p, p) == 0
    assert symplectic_product(p, q) == symplectic_product(q, p)
    if q.coords != r.coords:
        assert symplectic_product(p, q + r) == symplectic_product(p, q) ^ symplectic_product(p, r)


@settings(max_examples=200)
@given(st.integers(1, 8), st.data())
def test_canonical_squares_to_identity(n, data):
    p = SymplecticPoint(n, data.draw(st.integers(1, (1 << 2 * n) - 1)))
    o = canonical_operator(p)
    assert o.scalar() == 1
    assert compose(o, o).is_identity()


def test_point_counts():
    for n in (1, 2, 3):
        assert len(set(all_points(n))) == 4**n - 1
    with pytest.raises(ValueError):
        SymplecticPoint(2, 0)
