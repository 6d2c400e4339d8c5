"""Binary cache of a family and its L-coefficients, one file per (q, g).

Layout (all integers little-endian)::

    header   magic "CUBM" | version u16 | flags u16 | q u32 | g u32 | count u32
             | table_degree u32 | n_fq_primes u32 | n_pis u32
    pis      n_pis records: degree u8, then degree+1 coefficient codes u32 (F_{q^2}, lowest first)
    members  count records: modulus (g/2+2 codes u32), factor count u8, factor indices u32 each
    table    count × n_fq_primes u8, entries 0,1,2 for ξ₃^e and 3 for χ = 0
    lcoef    present when flags & 1: "LCOF", then count × (g+2) × 2 i64, (a, b) meaning a + bξ₃

The F_q-primes indexing the table are all monic primes of degree ≤ table_degree
ordered by degree then code, so they are not stored.
"""
from __future__ import annotations

import io
import logging
import os
import struct
import warnings
from pathlib import Path

import numpy as np

from .family import FamilyCg, enumerate_family
from .fields import FieldCtx
from .lseries import family_l_coefficients
from .moments import FamilyData
from .poly import primes_upto

log = logging.getLogger(__name__)

MAGIC = b"CUBM"
VERSION = 1
ENV_VAR = "CUBICMOMENTS_CACHE"
_HEADER = struct.Struct("<4sHHIIIIII")
FLAG_LCOEF = 1


class CacheError(Exception):
    pass


class CacheVersionError(CacheError):
    pass


def cache_root(root: str | os.PathLike | None = None) -> Path:
    if root is not None:
        return Path(root)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "cubicmoments"


def cache_path(q: int, g: int, root=None) -> Path:
    return cache_root(root) / f"q{q}_g{g}.cmc"


def encode(fam: FamilyCg, coeffs: np.ndarray | None = None) -> bytes:
    buf = io.BytesIO()
    n = fam.g // 2 + 1
    flags = FLAG_LCOEF if coeffs is not None else 0
    buf.write(_HEADER.pack(MAGIC, VERSION, flags, fam.q, fam.g, len(fam), fam.table_degree,
                           len(fam.fq_primes), len(fam.pis)))
    for P in fam.pis:
        buf.write(struct.pack("<B", len(P) - 1))
        buf.write(np.asarray(P, dtype="<u4").tobytes())
    for F, idx in zip(fam.moduli, fam.prime_sets):
        if len(F) != n + 1:
            raise CacheError("modulus degree does not match the genus")
        buf.write(np.asarray(F, dtype="<u4").tobytes())
        buf.write(struct.pack("<B", len(idx)))
        buf.write(np.asarray(idx, dtype="<u4").tobytes())
    buf.write(np.ascontiguousarray(fam.table, dtype="u1").tobytes())
    if coeffs is not None:
        if coeffs.shape != (len(fam), fam.g + 2, 2):
            raise CacheError("coefficient array has the wrong shape")
        buf.write(b"LCOF")
        buf.write(np.ascontiguousarray(coeffs, dtype="<i8").tobytes())
    return buf.getvalue()


def decode(raw: bytes, ctx: FieldCtx | None = None) -> tuple[FamilyCg, np.ndarray | None]:
    if len(raw) < _HEADER.size:
        raise CacheError("file too short for a header")
    magic, version, flags, q, g, count, tdeg, n_fq, n_pis = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise CacheError("bad magic")
    if version != VERSION:
        raise CacheVersionError(f"cache version {version}, expected {VERSION}")
    ctx = FieldCtx(q) if ctx is None else ctx
    if ctx.q != q:
        raise CacheError("field does not match the cache")
    pos = _HEADER.size

    def take(nbytes):
        nonlocal pos
        if pos + nbytes > len(raw):
            raise CacheError("truncated cache file")
        out = raw[pos: pos + nbytes]
        pos += nbytes
        return out

    pis = []
    for _ in range(n_pis):
        (d,) = struct.unpack("<B", take(1))
        pis.append(tuple(int(c) for c in np.frombuffer(take(4 * (d + 1)), dtype="<u4")))
    n = g // 2 + 1
    moduli, sets = [], []
    for _ in range(count):
        moduli.append(tuple(int(c) for c in np.frombuffer(take(4 * (n + 1)), dtype="<u4")))
        (k,) = struct.unpack("<B", take(1))
        sets.append(tuple(int(i) for i in np.frombuffer(take(4 * k), dtype="<u4")))
    table = np.frombuffer(take(count * n_fq), dtype="u1").astype(np.int8).reshape(count, n_fq)
    coeffs = None
    if flags & FLAG_LCOEF:
        if take(4) != b"LCOF":
            raise CacheError("missing coefficient section tag")
        coeffs = np.frombuffer(take(8 * count * (g + 2) * 2), dtype="<i8").astype(np.int64).reshape(count, g + 2, 2)
    if pos != len(raw):
        raise CacheError("trailing bytes in cache file")
    fq_primes = primes_upto(ctx.Fq, tdeg)
    if len(fq_primes) != n_fq:
        raise CacheError("prime table size does not match")
    return FamilyCg(ctx, g, moduli, sets, pis, fq_primes, table), coeffs


def write_cache(path: Path, fam: FamilyCg, coeffs: np.ndarray | None = None) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(encode(fam, coeffs))
    tmp.replace(path)


def read_cache(path: Path, ctx: FieldCtx | None = None) -> tuple[FamilyCg, np.ndarray | None]:
    return decode(Path(path).read_bytes(), ctx)


def load(q: int, g: int, root=None, with_l: bool = True, ctx: FieldCtx | None = None) -> tuple[FamilyData, str]:
    """Read the cache or build and write it.

    Status is ``hit`` (file untouched), ``created``, ``extended`` (L section
    appended) or ``regenerated`` (unreadable or old-version file replaced).
    """
    ctx = FieldCtx(q) if ctx is None else ctx
    path = cache_path(q, g, root)
    fam = coeffs = None
    status = "created"
    if path.exists():
        try:
            fam, coeffs = read_cache(path, ctx)
            status = "hit"
        except CacheVersionError as exc:
            warnings.warn(f"{path}: {exc}; regenerating", stacklevel=2)
            status = "regenerated"
        except CacheError as exc:
            warnings.warn(f"{path}: unreadable cache ({exc}); regenerating", stacklevel=2)
            status = "regenerated"
    if fam is None:
        fam = enumerate_family(ctx, g)
        coeffs = family_l_coefficients(fam) if with_l else None
        write_cache(path, fam, coeffs)
    elif with_l and coeffs is None:
        coeffs = family_l_coefficients(fam)
        write_cache(path, fam, coeffs)
        status = "extended"
    log.info("cache %s: %s", path, status)
    return FamilyData.from_family(fam, coeffs), status
