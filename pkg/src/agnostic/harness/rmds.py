"""RMDS binary dataset files.

Layout (little-endian)::

    b"RMDS" | version u16 | n u32 | m u32 | flags u8
    rows: m * n float64, row-major
    labels (flags bit 0): ceil(m / 8) bytes, LSB-first bitmap, 1 = corrupted
    truth (flags bit 1): mean (n float64), covariance (n * n float64)
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..core import AgnosticError, Dataset, GroundTruth, LabeledDataset

MAGIC = b"RMDS"
VERSION = 1
_HEADER = struct.Struct("<4sHIIB")
FLAG_LABELS = 0b01
FLAG_TRUTH = 0b10


class FormatError(AgnosticError, IOError):
    pass


@dataclass(frozen=True)
class StoredDataset:
    data: Dataset
    labels: np.ndarray | None = None
    truth: GroundTruth | None = None

    def labeled(self) -> LabeledDataset | None:
        if self.labels is None or self.truth is None:
            return None
        return LabeledDataset(self.data, self.labels, self.truth)


def encode(obj: Dataset | LabeledDataset | StoredDataset) -> bytes:
    if isinstance(obj, LabeledDataset):
        data, labels, truth = obj.data, obj.labels, obj.truth
    elif isinstance(obj, StoredDataset):
        data, labels, truth = obj.data, obj.labels, obj.truth
    else:
        data, labels, truth = obj, None, None
    flags = (FLAG_LABELS if labels is not None else 0) | (FLAG_TRUTH if truth is not None else 0)
    parts = [_HEADER.pack(MAGIC, VERSION, data.n, data.m, flags),
             np.ascontiguousarray(data.rows, dtype="<f8").tobytes()]
    if labels is not None:
        parts.append(np.packbits(np.asarray(labels, dtype=bool), bitorder="little").tobytes())
    if truth is not None:
        parts.append(np.asarray(truth.mean, dtype="<f8").tobytes())
        parts.append(np.ascontiguousarray(truth.covariance, dtype="<f8").tobytes())
    return b"".join(parts)


def decode(buf: bytes) -> StoredDataset:
    if len(buf) < _HEADER.size:
        raise FormatError("truncated header")
    magic, version, n, m, flags = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if flags & ~(FLAG_LABELS | FLAG_TRUTH):
        raise FormatError(f"unknown flag bits {flags:#x}")
    nbytes_label = (m + 7) // 8
    expected = (_HEADER.size + 8 * m * n
                + (nbytes_label if flags & FLAG_LABELS else 0)
                + (8 * (n + n * n) if flags & FLAG_TRUTH else 0))
    if len(buf) != expected:
        raise FormatError(f"expected {expected} bytes, got {len(buf)}")
    off = _HEADER.size
    rows = np.frombuffer(buf, dtype="<f8", count=m * n, offset=off).reshape(m, n)
    off += 8 * m * n
    labels = truth = None
    if flags & FLAG_LABELS:
        bits = np.frombuffer(buf, dtype=np.uint8, count=nbytes_label, offset=off)
        labels = np.unpackbits(bits, count=m, bitorder="little").astype(bool)
        off += nbytes_label
    if flags & FLAG_TRUTH:
        mean = np.frombuffer(buf, dtype="<f8", count=n, offset=off)
        off += 8 * n
        cov = np.frombuffer(buf, dtype="<f8", count=n * n, offset=off).reshape(n, n)
        truth = GroundTruth(mean, cov)
    return StoredDataset(Dataset(rows), labels, truth)


def save(path, obj) -> Path:
    path = Path(path)
    path.write_bytes(encode(obj))
    return path


def load(path) -> StoredDataset:
    return decode(Path(path).read_bytes())
