import struct

import numpy as np
import pytest

from cubicmoments import cache
from cubicmoments.family import enumerate_family
from cubicmoments.lseries import family_l_coefficients


def test_roundtrip(ctx, fam2):
    coeffs = family_l_coefficients(fam2)
    fam, back = cache.decode(cache.encode(fam2, coeffs), ctx)
    assert fam.moduli == fam2.moduli and fam.prime_sets == fam2.prime_sets and fam.pis == fam2.pis
    assert np.array_equal(fam.table, fam2.table)
    assert np.array_equal(back, coeffs)
    fam, none = cache.decode(cache.encode(fam2), ctx)
    assert none is None


def test_header_layout(fam0):
    raw = cache.encode(fam0)
    magic, version, flags, q, g, count = struct.unpack_from("<4sHHIII", raw)
    assert (magic, version, flags, q, g, count) == (b"CUBM", 1, 0, 5, 0, 20)


def test_load_statuses(tmp_path):
    data, status = cache.load(5, 0, tmp_path, with_l=False)
    assert status == "created" and data.size == 20
    path = cache.cache_path(5, 0, tmp_path)
    data, status = cache.load(5, 0, tmp_path)
    assert status == "extended"
    before = path.read_bytes()
    mtime = path.stat().st_mtime_ns
    data, status = cache.load(5, 0, tmp_path)
    assert status == "hit"
    assert path.read_bytes() == before and path.stat().st_mtime_ns == mtime
    assert data.coeffs is not None


def test_version_mismatch_regenerates(tmp_path):
    cache.load(5, 0, tmp_path)
    path = cache.cache_path(5, 0, tmp_path)
    raw = bytearray(path.read_bytes())
    good = bytes(raw)
    raw[4:6] = struct.pack("<H", 99)
    path.write_bytes(bytes(raw))
    with pytest.warns(UserWarning, match="version"):
        _, status = cache.load(5, 0, tmp_path)
    assert status == "regenerated"
    assert path.read_bytes() == good


def test_corrupt_file_regenerates(tmp_path):
    cache.load(5, 0, tmp_path)
    path = cache.cache_path(5, 0, tmp_path)
    path.write_bytes(path.read_bytes()[:-7])
    with pytest.warns(UserWarning):
        _, status = cache.load(5, 0, tmp_path)
    assert status == "regenerated"


def test_decode_errors(ctx, fam0):
    raw = cache.encode(fam0)
    with pytest.raises(cache.CacheError):
        cache.decode(b"XXXX" + raw[4:], ctx)
    with pytest.raises(cache.CacheError):
        cache.decode(raw + b"\0", ctx)
    with pytest.raises(cache.CacheError):
        cache.decode(raw[:10], ctx)


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path / "env"))
    assert cache.cache_path(5, 2) == tmp_path / "env" / "q5_g2.cmc"
    assert cache.cache_path(5, 2, tmp_path) == tmp_path / "q5_g2.cmc"


def test_bad_coefficient_shape(fam0):
    with pytest.raises(cache.CacheError):
        cache.encode(fam0, np.zeros((3, 2, 2), dtype=np.int64))
