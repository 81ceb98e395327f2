import numpy as np
import pytest

from presnov import (
    BallRestrictedField,
    CatalogError,
    DimensionMismatchError,
    DomainError,
    NonFiniteValueError,
    ScaledField,
    ShiftedField,
    SumField,
    catalog_field,
    catalog_names,
    radial_component,
)
from presnov.sampling import ball_points


def test_evaluate_identity():
    field = catalog_field("identity", 2).field
    assert np.array_equal(field.evaluate([3.0, -4.0]), [3.0, -4.0])


def test_evaluate_rotation2d():
    field = catalog_field("rotation2d").field
    assert np.array_equal(field.evaluate([1.0, 0.0]), [0.0, 1.0])


def test_evaluate_linear_hand_product():
    # A (1, 0)^T = first column of A.
    field = catalog_field("linear", matrix=[[1.0, 2.0], [0.0, 1.0]]).field
    assert np.array_equal(field.evaluate([1.0, 0.0]), [1.0, 0.0])


def test_radial_component_identity():
    field = catalog_field("identity", 2).field
    assert radial_component(field, [3.0, 4.0]) == 25.0


def test_radial_component_rotation_vanishes():
    field = catalog_field("rotation2d").field
    rng = np.random.Generator(np.random.Philox(7))
    for _ in range(20):
        x = rng.uniform(-5, 5, size=2)
        assert abs(radial_component(field, x)) <= 1e-12 * (1 + x @ x)


def test_radial_component_linear_hand_value():
    # A (1,1) = (3,1); <(3,1), (1,1)> = 4.
    field = catalog_field("linear", matrix=[[1.0, 2.0], [0.0, 1.0]]).field
    assert radial_component(field, [1.0, 1.0]) == pytest.approx(4.0, abs=1e-14)


def test_radial_component_shift_rule():
    base = catalog_field("cubic_radial", 3).field
    b = np.array([0.5, -1.5, 2.0])
    shifted = ShiftedField(base, b)
    rng = np.random.Generator(np.random.Philox(9))
    for _ in range(25):
        x = rng.uniform(-3, 3, size=3)
        lhs = radial_component(shifted, x)
        rhs = radial_component(base, x) + float(b @ x)
        assert lhs == pytest.approx(rhs, rel=1e-13, abs=1e-13)


# ---------------------------------------------------------------------------
# Catalog ground truths
# ---------------------------------------------------------------------------

CATALOG_INSTANCES = [
    ("identity", dict(dimension=3)),
    ("constant", dict(value=[1.0, -2.0, 0.5])),
    ("linear", dict(matrix=[[1.0, 2.0], [0.0, 1.0]])),
    ("rotation2d", dict()),
    ("gradient_poly", dict(dimension=3)),
    ("cubic_radial", dict(dimension=3)),
    ("identity_plus_rotation2d", dict()),
]


def _instantiate(name, kwargs):
    kwargs = dict(kwargs)
    return catalog_field(name, kwargs.pop("dimension", None), **kwargs)


@pytest.mark.parametrize("name,kwargs", CATALOG_INSTANCES)
def test_catalog_closed_forms_sum_to_field(name, kwargs):
    entry = _instantiate(name, kwargs)
    points = ball_points(entry.dimension, 40, 4.0, seed=3)
    for x in points:
        value = entry.field.evaluate(x)
        total = entry.conservative(x) + entry.sphere_invariant(x)
        assert np.allclose(total, value, rtol=1e-12, atol=1e-12 * (1 + np.abs(value).max()))


@pytest.mark.parametrize("name,kwargs", CATALOG_INSTANCES)
def test_catalog_sphere_invariant_orthogonal(name, kwargs):
    entry = _instantiate(name, kwargs)
    points = ball_points(entry.dimension, 40, 4.0, seed=4)
    for x in points:
        u = entry.sphere_invariant(x)
        bound = 1e-12 * (1.0 + np.linalg.norm(x) * np.linalg.norm(u))
        assert abs(float(u @ x)) <= bound


def test_catalog_identity_entry_ground_truth():
    entry = catalog_field("identity", 4)
    x = np.array([1.0, 2.0, -1.0, 0.5])
    assert entry.potential(x) == pytest.approx(0.5 * float(x @ x))
    assert np.array_equal(entry.sphere_invariant(x), np.zeros(4))
    assert entry.coercive is True


def test_catalog_linear_entry_conservative_is_symmetric_part():
    a = np.array([[1.0, 2.0], [0.0, 1.0]])
    entry = catalog_field("linear", matrix=a)
    sym = 0.5 * (a + a.T)
    x = np.array([0.3, -1.7])
    assert np.allclose(entry.conservative(x), sym @ x, rtol=1e-14)
    assert entry.coercive is False  # sym(A) is singular


def test_catalog_rotation_entry_ground_truth():
    entry = catalog_field("rotation2d")
    x = np.array([0.6, -0.8])
    assert entry.potential(x) == 0.0
    assert np.array_equal(entry.sphere_invariant(x), entry.field.evaluate(x))
    assert entry.coercive is False


def test_catalog_coercivity_flags():
    assert catalog_field("identity", 2).coercive is True
    assert catalog_field("constant", value=[1.0, 0.0]).coercive is False
    assert catalog_field("cubic_radial", 5).coercive is True
    assert catalog_field("identity_plus_rotation2d").coercive is True
    assert catalog_field("gradient_poly", 2).coercive is True
    assert catalog_field("linear", matrix=[[2.0, 0.0], [0.0, 3.0]]).coercive is True
    # one coordinate with a negative cubic leading term grows to -infinity
    assert catalog_field(
        "gradient_poly", 2, coeffs=[[0, 1, 0, 1], [0, 1, 0, -1]]
    ).coercive is False
    # pure linear growth in every coordinate is enough
    assert catalog_field(
        "gradient_poly", 2, coeffs=[[0, 1, 0, 0], [1, 2, 0, 0]]
    ).coercive is True


def test_catalog_errors():
    with pytest.raises(CatalogError):
        catalog_field("no_such_field", 2)
    with pytest.raises(CatalogError):
        catalog_field("linear", 2)  # missing matrix
    with pytest.raises(CatalogError):
        catalog_field("rotation2d", 3)
    with pytest.raises(CatalogError):
        catalog_field("identity")  # dimension required
    with pytest.raises(CatalogError):
        catalog_field("linear", matrix=[[1.0, 2.0, 3.0]])
    with pytest.raises(CatalogError):
        catalog_field("gradient_poly", 2, coeffs=[[1.0, 2.0]])
    assert "identity" in catalog_names()


# ---------------------------------------------------------------------------
# Combinators and checks
# ---------------------------------------------------------------------------


def test_combinators_evaluate_structurally():
    ident = catalog_field("identity", 2).field
    rot = catalog_field("rotation2d").field
    combo = SumField(ScaledField(2.0, ident), ShiftedField(rot, [1.0, 0.0]))
    x = np.array([0.5, -1.0])
    expected = 2.0 * x + np.array([-x[1], x[0]]) + np.array([1.0, 0.0])
    assert np.allclose(combo.evaluate(x), expected, rtol=1e-15)


def test_sum_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        SumField(catalog_field("identity", 2).field, catalog_field("identity", 3).field)


def test_evaluate_rejects_wrong_dimension_and_nonfinite():
    field = catalog_field("identity", 2).field
    with pytest.raises(DimensionMismatchError):
        field.evaluate([1.0, 2.0, 3.0])
    with pytest.raises(NonFiniteValueError):
        field.evaluate([np.nan, 0.0])


def test_ball_restriction_enforced():
    field = BallRestrictedField(catalog_field("identity", 2).field, 1.0)
    assert np.array_equal(field.evaluate([0.5, 0.5]), [0.5, 0.5])
    with pytest.raises(DomainError):
        field.evaluate([2.0, 0.0])


def test_non_finite_output_reported():
    from presnov import parse_field

    field = parse_field("1/x1; x2")
    with pytest.raises(NonFiniteValueError):
        field.evaluate([0.0, 1.0])


def test_batch_matches_single():
    entry = catalog_field("gradient_poly", 3)
    points = ball_points(3, 10, 2.0, seed=11)
    batch = entry.field.evaluate_many(points)
    for i, x in enumerate(points):
        assert np.array_equal(batch[i], entry.field.evaluate(x))
