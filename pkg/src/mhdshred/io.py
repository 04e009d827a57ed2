"""Binary artifact formats, manifests, and content hashing.

Two on-disk containers are used throughout the toolkit:

* ``SHRD1``: a single float64 matrix with a short labelled header
  (field name, shape, parameter value, save cadence). Used for snapshot
  matrices, bases, spectra and latent coefficients.
* ``SHRDB1``: a named bundle of float64 arrays plus a JSON metadata
  block. Used for model checkpoints and dataset bundles.

Both formats are little-endian, carry a CRC32 header checksum, and are
byte-deterministic for identical inputs so that pipeline reruns can be
compared by content hash. All writes are atomic (temp file + rename).
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import zlib

import numpy as np

MATRIX_MAGIC = b"SHRD1"
BUNDLE_MAGIC = b"SHRDB1"
_LABEL_BYTES = 24
# magic(5) + endian(1) + label(24) + rows(8) + cols(8) + param(8) + dt(8)
_MATRIX_HEADER = struct.Struct("<5sc24sQQdd")


class IntegrityError(RuntimeError):
    """Raised when a file fails its magic/checksum/shape validation."""


def _atomic_write(path, data: bytes) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def write_matrix(path, matrix, label, param_value=0.0, save_dt=0.0) -> None:
    """Write a 2-D float64 matrix in the SHRD1 format."""
    m = np.ascontiguousarray(matrix, dtype="<f8")
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected a 1-D or 2-D array, got ndim={m.ndim}")
    raw_label = label.encode("utf-8")
    if len(raw_label) > _LABEL_BYTES:
        raise ValueError(f"label {label!r} longer than {_LABEL_BYTES} bytes")
    header = _MATRIX_HEADER.pack(
        MATRIX_MAGIC, b"<", raw_label.ljust(_LABEL_BYTES, b"\x00"),
        m.shape[0], m.shape[1], float(param_value), float(save_dt),
    )
    crc = struct.pack("<I", zlib.crc32(header))
    _atomic_write(path, header + crc + m.tobytes())


def read_matrix(path):
    """Read a SHRD1 file. Returns (matrix, label, param_value, save_dt)."""
    with open(path, "rb") as fh:
        header = fh.read(_MATRIX_HEADER.size)
        if len(header) != _MATRIX_HEADER.size:
            raise IntegrityError(f"{path}: truncated header")
        magic, endian, raw_label, rows, cols, param_value, save_dt = (
            _MATRIX_HEADER.unpack(header))
        if magic != MATRIX_MAGIC:
            raise IntegrityError(f"{path}: bad magic {magic!r}")
        if endian != b"<":
            raise IntegrityError(f"{path}: unsupported endianness tag {endian!r}")
        (crc,) = struct.unpack("<I", fh.read(4))
        if crc != zlib.crc32(header):
            raise IntegrityError(f"{path}: header checksum mismatch")
        payload = fh.read()
    expected = rows * cols * 8
    if len(payload) != expected:
        raise IntegrityError(
            f"{path}: payload has {len(payload)} bytes, expected {expected}")
    matrix = np.frombuffer(payload, dtype="<f8").reshape(rows, cols).copy()
    label = raw_label.rstrip(b"\x00").decode("utf-8")
    return matrix, label, param_value, save_dt


def write_bundle(path, arrays, meta=None) -> None:
    """Write a named dict of float64 arrays plus JSON metadata (SHRDB1)."""
    meta = dict(meta or {})
    blocks = []
    entries = []
    offset = 0
    for name in sorted(arrays):
        a = np.ascontiguousarray(arrays[name], dtype="<f8")
        blocks.append(a.tobytes())
        entries.append({"name": name, "shape": list(a.shape),
                        "offset": offset, "nbytes": a.nbytes})
        offset += a.nbytes
    header = json.dumps({"version": 1, "meta": meta, "arrays": entries},
                        sort_keys=True).encode("utf-8")
    head = BUNDLE_MAGIC + struct.pack("<Q", len(header)) + header
    crc = struct.pack("<I", zlib.crc32(head))
    _atomic_write(path, head + crc + b"".join(blocks))


def read_bundle(path):
    """Read a SHRDB1 file. Returns (arrays: dict, meta: dict)."""
    with open(path, "rb") as fh:
        magic = fh.read(len(BUNDLE_MAGIC))
        if magic != BUNDLE_MAGIC:
            raise IntegrityError(f"{path}: bad magic {magic!r}")
        (hlen,) = struct.unpack("<Q", fh.read(8))
        header = fh.read(hlen)
        (crc,) = struct.unpack("<I", fh.read(4))
        if crc != zlib.crc32(magic + struct.pack("<Q", hlen) + header):
            raise IntegrityError(f"{path}: header checksum mismatch")
        spec = json.loads(header.decode("utf-8"))
        payload = fh.read()
    arrays = {}
    for entry in spec["arrays"]:
        start, nbytes = entry["offset"], entry["nbytes"]
        if start + nbytes > len(payload):
            raise IntegrityError(f"{path}: truncated payload for {entry['name']}")
        buf = payload[start:start + nbytes]
        arrays[entry["name"]] = (
            np.frombuffer(buf, dtype="<f8").reshape(entry["shape"]).copy())
    return arrays, spec["meta"]


def write_json(path, obj) -> None:
    """Deterministic JSON (sorted keys, newline-terminated)."""
    _atomic_write(path, (json.dumps(obj, sort_keys=True, indent=2) + "\n")
                  .encode("utf-8"))


def read_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_csv(path, header, rows) -> None:
    """Plain CSV with repr-exact floats, for plotting and reports."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            format(v, ".17g") if isinstance(v, float) else str(v) for v in row))
    _atomic_write(path, ("\n".join(lines) + "\n").encode("utf-8"))


def read_csv_matrix(path):
    """Import path for externally generated snapshots.

    Plain text: one row per cell, one comma-separated column per saved
    instant. Lines starting with '#' are ignored. Returns float64
    (cells, instants).
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([float(tok) for tok in line.split(",")])
    if not rows:
        raise IntegrityError(f"{path}: no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise IntegrityError(f"{path}: ragged rows")
    return np.asarray(rows, dtype=np.float64)
