"""Binary cache for the Davis symmetry group and neighbor centers.

Layout: a fixed magic line, a format version, the SHA-256 of the body, and
the body itself, a zlib-compressed pickle of plain integers only (numerator
and denominator pairs), so loading never needs to trust arbitrary objects
beyond the builtin types.
"""
from __future__ import annotations

import hashlib
import io
import os
import pickle
import struct
import zlib
from typing import Sequence

from gmpy2 import mpq

from .numfield import TowerElement, davis_tower

MAGIC = b"SPINIDX-CACHE\n"
VERSION = 1

__all__ = ["CorruptCache", "save", "load", "verify", "clear", "MAGIC", "VERSION"]


class CorruptCache(ValueError):
    pass


def _plain(x: TowerElement) -> tuple:
    return tuple((int(c.numerator), int(c.denominator)) for c in x.coeffs)


def _tower_key() -> tuple:
    return tuple(tuple((int(q.numerator), int(q.denominator)) for q in r) for r in davis_tower().key)


def _encode(symmetry: Sequence, neighbors: Sequence) -> bytes:
    spec = davis_tower()
    body = {
        "tower": _tower_key(),
        "symmetry": [tuple(_plain(spec(x)) for r in M for x in r) for M in symmetry],
        "neighbors": [tuple(_plain(spec(x)) for x in a) for a in neighbors],
    }
    return zlib.compress(pickle.dumps(body, protocol=4), 6)


def save(path: str, symmetry: Sequence, neighbors: Sequence) -> str:
    body = _encode(symmetry, neighbors)
    digest = hashlib.sha256(body).digest()
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack(">I", VERSION))
        fh.write(digest)
        fh.write(struct.pack(">Q", len(body)))
        fh.write(body)
    os.replace(tmp, path)
    return digest.hex()


class _Restricted(pickle.Unpickler):
    def find_class(self, module, name):
        raise CorruptCache(f"cache references {module}.{name}")


def _read(path: str) -> dict:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(MAGIC):
        raise CorruptCache("bad magic")
    off = len(MAGIC)
    if len(data) < off + 4 + 32 + 8:
        raise CorruptCache("truncated header")
    (version,) = struct.unpack(">I", data[off:off + 4])
    if version != VERSION:
        raise CorruptCache(f"cache version {version}, expected {VERSION}")
    digest = data[off + 4:off + 36]
    (length,) = struct.unpack(">Q", data[off + 36:off + 44])
    body = data[off + 44:]
    if len(body) != length:
        raise CorruptCache("truncated body")
    if hashlib.sha256(body).digest() != digest:
        raise CorruptCache("content hash mismatch")
    try:
        payload = _Restricted(io.BytesIO(zlib.decompress(body))).load()
    except (zlib.error, pickle.UnpicklingError, EOFError) as exc:
        raise CorruptCache(f"undecodable body: {exc}") from None
    if not isinstance(payload, dict) or payload.get("tower") != _tower_key():
        raise CorruptCache("cache was built over a different tower")
    return payload


def verify(path: str) -> dict:
    """Check header and hash; returns counts on success."""
    payload = _read(path)
    return {"symmetry": len(payload["symmetry"]), "neighbors": len(payload["neighbors"])}


def load(path: str) -> dict:
    payload = _read(path)
    spec = davis_tower()
    size = spec.size

    def elem(pairs):
        if len(pairs) != size:
            raise CorruptCache("coefficient vector of the wrong length")
        return TowerElement(spec, tuple(mpq(n, d) for n, d in pairs))

    try:
        sym = []
        for flat in payload["symmetry"]:
            vals = [elem(p) for p in flat]
            sym.append(tuple(tuple(vals[5 * i:5 * i + 5]) for i in range(5)))
        neigh = [tuple(elem(p) for p in a) for a in payload["neighbors"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise CorruptCache(f"malformed payload: {exc}") from None
    return {"symmetry": sym, "neighbors": neigh}


def clear(path: str) -> bool:
    try:
        os.remove(path)
        return True
    except FileNotFoundError:
        return False
