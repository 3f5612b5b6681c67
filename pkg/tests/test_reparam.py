import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retina_prep import (
    ImagePlanar,
    ReparamMatrix,
    ReparamVariant,
    ShapeError,
    ValueDomain,
    VariantKind,
    apply_reparam,
    matrix_for,
)


def _pixel(r, g, b):
    return ImagePlanar(np.array([[[r]], [[g]], [[b]]], dtype=float), ValueDomain.UNIT_INTERVAL)


def test_grayscale_matrix_is_thirds():
    m = matrix_for(ReparamVariant(VariantKind.GRAYSCALE))
    assert m.rows == 3
    assert (m.coefficients == 1.0 / 3.0).all()


def test_green_bias_matrix_rows():
    m = matrix_for(ReparamVariant(VariantKind.GRAYSCALE_GREEN_BIAS))
    for row in m.coefficients:
        assert tuple(row) == (0.299, 0.587, 0.114)


def test_opponency_matrix_table():
    m = matrix_for(ReparamVariant(VariantKind.COLOR_OPPONENCY))
    expected = np.array(
        [
            [1 / 3, 1 / 3, 1 / 3],
            [1 / 2, -1 / 2, 0.0],
            [-1 / 6, -1 / 6, 1 / 3],
        ]
    )
    assert np.array_equal(m.coefficients, expected)
    # opponent rows individually cancel
    assert abs(m.coefficients[1].sum()) < 1e-15
    assert abs(m.coefficients[2].sum()) < 1e-15


def test_single_color_is_identity():
    m = matrix_for(ReparamVariant(VariantKind.SINGLE_COLOR))
    assert np.array_equal(m.coefficients, np.eye(3))


def test_single_row_only_for_grayscale_kinds():
    assert matrix_for(ReparamVariant(VariantKind.GRAYSCALE, 1)).rows == 1
    assert matrix_for(ReparamVariant(VariantKind.GRAYSCALE_GREEN_BIAS, 1)).rows == 1
    with pytest.raises(ValueError):
        ReparamVariant(VariantKind.COLOR_OPPONENCY, 1)
    with pytest.raises(ValueError):
        ReparamVariant(VariantKind.SINGLE_COLOR, 1)


def test_variant_names_round_trip():
    for name in ("grayscale", "grayscale-green-bias", "color-opponency", "single-color"):
        assert ReparamVariant.from_name(name).kind.value == name
    with pytest.raises(ValueError, match="unknown variant"):
        ReparamVariant.from_name("sepia")


def test_opponency_on_pure_red():
    out = apply_reparam(_pixel(1, 0, 0), matrix_for(ReparamVariant(VariantKind.COLOR_OPPONENCY)))
    assert out.value_domain is ValueDomain.SIGNED
    assert np.array_equal(out.data[:, 0, 0], [1 / 3, 1 / 2, -1 / 6])


def test_green_bias_on_pure_red_three_channel():
    out = apply_reparam(
        _pixel(1, 0, 0), matrix_for(ReparamVariant(VariantKind.GRAYSCALE_GREEN_BIAS))
    )
    assert out.value_domain is ValueDomain.UNIT_INTERVAL
    assert np.array_equal(out.data[:, 0, 0], [0.299, 0.299, 0.299])


@settings(max_examples=40)
@given(v=st.floats(0.0, 1.0, allow_nan=False))
def test_achromatic_pixels_zero_the_opponent_channels(v):
    out = apply_reparam(_pixel(v, v, v), matrix_for(ReparamVariant(VariantKind.COLOR_OPPONENCY)))
    assert abs(out.data[1]).max() <= 1e-12
    assert abs(out.data[2]).max() <= 1e-12


def test_grayscale_three_channel_planes_identical(rng):
    img = ImagePlanar(rng.random((3, 5, 7)), ValueDomain.UNIT_INTERVAL)
    out = apply_reparam(img, matrix_for(ReparamVariant(VariantKind.GRAYSCALE)))
    assert np.array_equal(out.data[0], out.data[1])
    assert np.array_equal(out.data[1], out.data[2])


def test_single_color_identity_bit_exact(rng):
    img = ImagePlanar(rng.random((3, 4, 9)), ValueDomain.UNIT_INTERVAL)
    out = apply_reparam(img, matrix_for(ReparamVariant(VariantKind.SINGLE_COLOR)))
    assert np.array_equal(out.data, img.data)
    assert out.value_domain is ValueDomain.UNIT_INTERVAL


@settings(max_examples=30)
@given(
    seed=st.integers(0, 2**32 - 1),
    a=st.floats(0.0, 1.0),
    kind=st.sampled_from(list(VariantKind)),
)
def test_linearity(seed, a, kind):
    rng = np.random.default_rng(seed)
    x = rng.random((3, 4, 5))
    y = rng.random((3, 4, 5))
    b = 1.0 - a  # convex combination keeps inputs in range
    m = matrix_for(ReparamVariant(kind))
    mixed = apply_reparam(ImagePlanar(a * x + b * y, ValueDomain.UNIT_INTERVAL), m)
    fx = apply_reparam(ImagePlanar(x, ValueDomain.UNIT_INTERVAL), m)
    fy = apply_reparam(ImagePlanar(y, ValueDomain.UNIT_INTERVAL), m)
    assert np.abs(mixed.data - (a * fx.data + b * fy.data)).max() <= 1e-12


def test_reparam_needs_three_channels():
    gray = ImagePlanar(np.zeros((1, 2, 2)), ValueDomain.UNIT_INTERVAL)
    with pytest.raises(ShapeError):
        apply_reparam(gray, matrix_for(ReparamVariant(VariantKind.GRAYSCALE)))


def test_reparam_matrix_validation():
    with pytest.raises(ShapeError):
        ReparamMatrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        ReparamMatrix(np.full((3, 3), np.inf))
