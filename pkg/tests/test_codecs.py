import struct
import zlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retina_prep import (
    DecodeError,
    DomainError,
    ImagePlanar,
    UnsupportedFormatError,
    ValueDomain,
    decode_image,
    detect_format,
    encode_visualization,
)
from retina_prep.png import decode_png, encode_png
from retina_prep.pnm import decode_pfm, decode_pnm, encode_pfm, encode_pnm

from conftest import build_png, build_ppm


# --- PNG ------------------------------------------------------------------

def test_png_grayscale_values_map_by_255():
    data = build_png(np.array([[0, 128]], dtype=np.uint8).T)  # 2 rows x 1 col
    img = decode_image(data, "png")
    assert img.channels == 1
    assert np.array_equal(img.data[0], np.array([[0.0], [128 / 255]]))


def test_png_rgb_16bit_scales_by_65535():
    samples = np.array([[[65535, 0, 32768]]], dtype=np.uint16)
    img = decode_image(build_png(samples, bit_depth=16), "png")
    assert img.channels == 3
    assert img.data[0, 0, 0] == 1.0
    assert img.data[1, 0, 0] == 0.0
    assert img.data[2, 0, 0] == 32768 / 65535


def test_png_all_filter_types_decode(rng):
    samples = (rng.random((7, 5, 3)) * 255).astype(np.uint8)
    data = build_png(samples, filters=[0, 1, 2, 3, 4, 4, 3])
    assert np.array_equal(decode_png(data), samples)


@settings(max_examples=25, deadline=None)
@given(
    height=st.integers(1, 8),
    width=st.integers(1, 8),
    channels=st.sampled_from([1, 3]),
    seed=st.integers(0, 2**32 - 1),
)
def test_png_random_filters_round_trip(height, width, channels, seed):
    rng = np.random.default_rng(seed)
    samples = rng.integers(0, 256, size=(height, width, channels), dtype=np.uint8)
    filters = rng.integers(0, 5, size=height).tolist()
    assert np.array_equal(decode_png(build_png(samples, filters=filters)), samples)


def test_png_truncated_payload_is_decode_error():
    data = build_png(np.zeros((4, 4), dtype=np.uint8))
    with pytest.raises(DecodeError, match="offset"):
        decode_png(data[:-10])


def test_png_bad_signature_names_offset_zero():
    with pytest.raises(DecodeError, match="offset 0"):
        decode_png(b"\x89PNX" + b"\x00" * 20)


def test_png_bad_crc_is_decode_error():
    data = bytearray(build_png(np.zeros((2, 2), dtype=np.uint8)))
    data[-5] ^= 0xFF  # corrupt IEND CRC
    with pytest.raises(DecodeError, match="CRC"):
        decode_png(bytes(data))


def test_png_rgba_rejected_not_dropped():
    ihdr = struct.pack(">IIBBBBB", 1, 1, 8, 6, 0, 0, 0)
    raw = zlib.compress(b"\x00\x01\x02\x03\x04")
    data = (
        b"\x89PNG\r\n\x1a\n"
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", raw)
        + _chunk(b"IEND", b"")
    )
    with pytest.raises(UnsupportedFormatError, match="alpha"):
        decode_png(data)


def test_png_palette_rejected():
    ihdr = struct.pack(">IIBBBBB", 1, 1, 8, 3, 0, 0, 0)
    data = b"\x89PNG\r\n\x1a\n" + _chunk(b"IHDR", ihdr) + _chunk(b"IEND", b"")
    with pytest.raises(UnsupportedFormatError, match="palette"):
        decode_png(data)


def test_png_corrupt_zlib_stream():
    ihdr = struct.pack(">IIBBBBB", 1, 1, 8, 0, 0, 0, 0)
    data = (
        b"\x89PNG\r\n\x1a\n"
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", b"not zlib at all")
        + _chunk(b"IEND", b"")
    )
    with pytest.raises(DecodeError, match="compressed"):
        decode_png(data)


def test_png_payload_size_mismatch():
    ihdr = struct.pack(">IIBBBBB", 2, 2, 8, 0, 0, 0, 0)
    data = (
        b"\x89PNG\r\n\x1a\n"
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", zlib.compress(b"\x00\x01"))  # one short row
        + _chunk(b"IEND", b"")
    )
    with pytest.raises(DecodeError, match="header implies"):
        decode_png(data)


def test_png_encode_decode_round_trip(rng):
    samples = (rng.random((5, 9, 3)) * 255).astype(np.uint8)
    assert np.array_equal(decode_png(encode_png(samples)), samples)


def _chunk(ctype, body):
    return (
        struct.pack(">I", len(body))
        + ctype
        + body
        + struct.pack(">I", zlib.crc32(ctype + body) & 0xFFFFFFFF)
    )


# --- PNM ------------------------------------------------------------------

def test_ppm_single_red_pixel():
    data = build_ppm(np.array([[[255, 0, 0]]], dtype=np.uint8))
    img = decode_image(data, "ppm")
    assert img.channels == 3
    assert np.array_equal(img.data[:, 0, 0], [1.0, 0.0, 0.0])


def test_ppm_16bit_maxval():
    data = build_ppm(np.array([[[65535, 0, 12345]]], dtype=np.uint16), maxval=65535)
    img = decode_image(data, "ppm")
    assert img.data[0, 0, 0] == 1.0
    assert img.data[2, 0, 0] == 12345 / 65535


def test_ppm_odd_maxval_scales_by_it():
    header = b"P5\n2 1\n100\n"
    img = decode_image(header + bytes([100, 50]), "ppm")
    assert np.array_equal(img.data[0], [[1.0, 0.5]])


def test_pnm_header_comments():
    data = b"P5\n# a comment\n1 1\n# another\n255\n\x80"
    img = decode_image(data, "ppm")
    assert img.data[0, 0, 0] == 128 / 255


def test_pnm_ascii_rejected():
    with pytest.raises(UnsupportedFormatError, match="ASCII"):
        decode_pnm(b"P3\n1 1\n255\n255 0 0\n")


def test_pnm_payload_mismatch():
    with pytest.raises(DecodeError, match="expected"):
        decode_pnm(b"P6\n2 2\n255\n" + b"\x00" * 5)


def test_decode_encode_ppm_decode_is_exact_for_8bit(rng):
    samples = rng.integers(0, 256, size=(6, 4, 3), dtype=np.uint8)
    gray = rng.integers(0, 256, size=(3, 5), dtype=np.uint8)
    for source in (build_ppm(samples), build_png(samples), build_png(gray)):
        first = decode_image(source)
        second = decode_image(encode_pnm(first), "ppm")
        assert np.array_equal(first.data, second.data)


def test_encode_pnm_rejects_signed():
    img = ImagePlanar(np.zeros((1, 2, 2)) - 0.5, ValueDomain.SIGNED)
    with pytest.raises(DomainError):
        encode_pnm(img)


# --- PFM ------------------------------------------------------------------

def test_pfm_round_trip_signed(rng):
    planes = (rng.random((3, 4, 5)) * 2 - 1).astype(np.float32).astype(np.float64)
    img = ImagePlanar(planes, ValueDomain.SIGNED)
    back = decode_image(encode_pfm(img), "pfm")
    assert back.value_domain is ValueDomain.SIGNED
    assert np.array_equal(back.data, img.data)


def test_pfm_row_order_is_bottom_up():
    # hand-built little-endian Pf with rows bottom-up: file rows [3,4],[1,2]
    payload = struct.pack("<4f", 3.0 / 8, 4.0 / 8, 1.0 / 8, 2.0 / 8)
    data = b"Pf\n2 2\n-1.0\n" + payload
    img = decode_image(data, "pfm")
    assert np.array_equal(img.data[0], np.array([[1 / 8, 2 / 8], [3 / 8, 4 / 8]]))


def test_pfm_big_endian():
    payload = struct.pack(">3f", 0.25, 0.5, 0.75)
    data = b"PF\n1 1\n1.0\n" + payload
    img = decode_image(data, "pfm")
    assert np.array_equal(img.data[:, 0, 0], [0.25, 0.5, 0.75])


def test_pfm_out_of_range_rejected():
    data = b"Pf\n1 1\n-1.0\n" + struct.pack("<f", 2.5)
    with pytest.raises(DecodeError, match="outside"):
        decode_image(data, "pfm")


def test_pfm_zero_scale_rejected():
    with pytest.raises(DecodeError, match="scale"):
        decode_pfm(b"Pf\n1 1\n0.0\n" + b"\x00" * 4)


# --- format detection and dispatch ----------------------------------------

def test_detect_format():
    assert detect_format(build_png(np.zeros((1, 1), dtype=np.uint8))) == "png"
    assert detect_format(b"P6\n1 1\n255\n\x00\x00\x00") == "ppm"
    assert detect_format(b"Pf\n1 1\n-1.0\n" + b"\x00" * 4) == "pfm"
    with pytest.raises(DecodeError):
        detect_format(b"GIF89a")


def test_decode_image_unknown_format_name():
    with pytest.raises(DecodeError, match="unknown format"):
        decode_image(b"P6\n1 1\n255\n\x00\x00\x00", "jpeg")


# --- visualization ---------------------------------------------------------

def test_visualization_midpoint_and_extremes():
    img = ImagePlanar(np.zeros((1, 2, 2)), ValueDomain.SIGNED)
    assert np.array_equal(decode_png(encode_visualization(img))[:, :, 0], np.full((2, 2), 128))
    plus = ImagePlanar(np.ones((1, 1, 1)), ValueDomain.SIGNED)
    minus = ImagePlanar(-np.ones((1, 1, 1)), ValueDomain.SIGNED)
    assert decode_png(encode_visualization(plus))[0, 0, 0] == 0
    assert decode_png(encode_visualization(minus))[0, 0, 0] == 255


def test_visualization_half_value():
    img = ImagePlanar(np.full((1, 1, 1), 0.5), ValueDomain.SIGNED)
    assert decode_png(encode_visualization(img))[0, 0, 0] == 64


def test_visualization_three_channel():
    img = ImagePlanar(np.full((3, 2, 3), -0.25), ValueDomain.SIGNED)
    decoded = decode_png(encode_visualization(img))
    assert decoded.shape == (2, 3, 3)
    assert (decoded == round((0.25 * 0.5 + 0.5) * 255)).all()


def test_visualization_rejects_unit_interval():
    img = ImagePlanar(np.zeros((1, 2, 2)), ValueDomain.UNIT_INTERVAL)
    with pytest.raises(DomainError):
        encode_visualization(img)
