"""Cauchy dataset files for Rough Surface Imaging.

Layout: 8-byte magic, little-endian uint32 header length, UTF-8 JSON header,
then the us and dnus matrices as row-major little-endian complex128.
"""

import csv
import json
import logging
import struct
from pathlib import Path

import numpy as np

from src.forward.measurement import CauchyDataSet, MeasurementLine

logger = logging.getLogger(__name__)

MAGIC = b"RGHCAUCH"
FORMAT_NAME = "roughimg-cauchy"
FORMAT_VERSION = 1
DTYPE = "<c16"


class DatasetFormatError(ValueError):
    """A dataset file is malformed or from an unsupported version."""


def _header(data: CauchyDataSet) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "N": data.line.N,
        "H": data.line.H,
        "A": data.line.A,
        "k_plus": data.k_plus,
        "bc": data.bc_label,
        "surface": data.surface_label,
        "delta": data.noise_delta,
        "seed": data.seed,
        "shape": [data.line.count, data.line.count],
        "dtype": DTYPE,
        "metadata": data.metadata,
    }


def save_dataset(data: CauchyDataSet, path) -> Path:
    """Write ``data`` to ``path``, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = json.dumps(_header(data), sort_keys=True, default=float).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", len(header)))
        f.write(header)
        f.write(np.ascontiguousarray(data.us, dtype=DTYPE).tobytes())
        f.write(np.ascontiguousarray(data.dnus, dtype=DTYPE).tobytes())
    logger.info("Saved dataset %s (%d bytes)", path, path.stat().st_size)
    return path


def load_dataset(path) -> CauchyDataSet:
    """Read a dataset written by :func:`save_dataset`.

    Raises:
        FileNotFoundError: If the file does not exist.
        DatasetFormatError: On a bad magic, version, header or payload size.
    """
    path = Path(path)
    raw = path.read_bytes()
    if raw[:len(MAGIC)] != MAGIC:
        raise DatasetFormatError(f"{path} is not a Cauchy dataset file")
    offset = len(MAGIC)
    if len(raw) < offset + 4:
        raise DatasetFormatError(f"{path} is truncated")
    (header_len,) = struct.unpack("<I", raw[offset:offset + 4])
    offset += 4
    try:
        header = json.loads(raw[offset:offset + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DatasetFormatError(f"{path} has an unreadable header: {e}") from e
    offset += header_len

    if header.get("format") != FORMAT_NAME or header.get("version") != FORMAT_VERSION:
        raise DatasetFormatError(
            f"{path}: unsupported format {header.get('format')!r} version {header.get('version')!r}"
        )
    N = int(header["N"])
    count = 2 * N + 1
    if list(header.get("shape", [])) != [count, count]:
        raise DatasetFormatError(
            f"{path}: matrix shape {header.get('shape')} does not match N={N} ({count}x{count})"
        )
    item = np.dtype(DTYPE).itemsize
    expected = 2 * count * count * item
    payload = raw[offset:]
    if len(payload) != expected:
        raise DatasetFormatError(f"{path}: payload is {len(payload)} bytes, expected {expected}")

    half = expected // 2
    us = np.frombuffer(payload[:half], dtype=DTYPE).reshape(count, count).astype(complex)
    dnus = np.frombuffer(payload[half:], dtype=DTYPE).reshape(count, count).astype(complex)
    return CauchyDataSet(
        line=MeasurementLine(H=float(header["H"]), A=float(header["A"]), N=N),
        k_plus=float(header["k_plus"]),
        bc_label=header["bc"],
        us=us,
        dnus=dnus,
        noise_delta=float(header["delta"]),
        seed=header.get("seed"),
        surface_label=header.get("surface"),
        metadata=header.get("metadata", {}),
    )


def export_csv(data: CauchyDataSet, path) -> Path:
    """Write the dataset as rows (i, j, re_us, im_us, re_dnus, im_dnus)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["i", "j", "re_us", "im_us", "re_dnus", "im_dnus"])
        count = data.line.count
        for i in range(count):
            for j in range(count):
                u = data.us[i, j]
                du = data.dnus[i, j]
                writer.writerow([i, j, float(u.real), float(u.imag), float(du.real), float(du.imag)])
    return path
