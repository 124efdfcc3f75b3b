"""CSV datasets, binary model files and report export.

CSV layout: ``d`` feature columns followed by one label column, optional
header row. Labels are -1/+1, or 0/1 with ``remap01=True``.

Model file layout (all integers and floats little-endian)::

    b"FPC1"            magic
    u8                 format version
    u32 s, u32 d, u32 n, u8 scheme code
    f64[d]             scaling lower bounds
    f64[d]             scaling spans
    f64[n*d]           centers, row-major
    f64[n]             coefficients
    u32 len, bytes     JSON training metadata
    32 bytes           SHA-256 of everything above
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import struct
from pathlib import Path

import numpy as np

from .dataset import Dataset, MinMaxScaling
from .errors import (ChecksumError, CsvFormatError, EmptyDatasetError, InvalidLabelError,
                     ModelFormatError, UnsupportedVersionError)
from .features import CenterScheme
from .model import EvalReport, FpcModel

MAGIC = b"FPC1"
FORMAT_VERSION = 1
_SCHEMES = [CenterScheme.UNIFORM_RANDOM, CenterScheme.FIRST_N, CenterScheme.RANDOM_SUBSAMPLE]
_HEADER = struct.Struct("<IIIB")
_DIGEST = 32


# -- CSV --------------------------------------------------------------------

def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _parse_label(text: str, remap01: bool, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CsvFormatError(f"line {lineno}: label {text!r} is not a number") from None
    if remap01:
        if value == 0:
            return -1.0
        if value == 1:
            return 1.0
        raise InvalidLabelError(f"line {lineno}: label {text!r} is not 0 or 1")
    if value in (-1.0, 1.0):
        return value
    raise InvalidLabelError(f"line {lineno}: label {text!r} is not -1 or +1")


def iter_csv_blocks(path, block_rows: int = 65536, header: bool | None = None,
                    remap01: bool = False, delimiter: str = ",", labels: bool = True):
    """Yield ``(X_block, y_block)`` arrays of at most ``block_rows`` rows.

    Memory is bounded by one block. ``header=None`` skips a first row that
    does not parse as numbers. With ``labels=False`` every column is a
    feature and ``y_block`` is None.
    """
    width = None
    feats, labs = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        for lineno, row in enumerate(reader, 1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if lineno == 1 and (header or (header is None and not all(_is_number(c) for c in row))):
                continue
            if width is None:
                width = len(row)
                if width < (2 if labels else 1):
                    raise CsvFormatError(f"line {lineno}: need at least one feature column")
            elif len(row) != width:
                raise CsvFormatError(f"line {lineno}: expected {width} columns, found {len(row)}")
            cells = row[:-1] if labels else row
            try:
                x = [float(c) for c in cells]
            except ValueError:
                raise CsvFormatError(f"line {lineno}: non-numeric feature") from None
            if not all(math.isfinite(v) for v in x):
                raise CsvFormatError(f"line {lineno}: non-finite feature value")
            feats.append(x)
            if labels:
                labs.append(_parse_label(row[-1], remap01, lineno))
            if len(feats) == block_rows:
                yield np.array(feats), (np.array(labs) if labels else None)
                feats, labs = [], []
    if feats:
        yield np.array(feats), (np.array(labs) if labels else None)


def load_csv(path, header: bool | None = None, remap01: bool = False, delimiter: str = ",",
             labels: bool = True) -> Dataset:
    """Read a whole CSV file into a :class:`Dataset`, preserving row order."""
    blocks = list(iter_csv_blocks(path, header=header, remap01=remap01,
                                  delimiter=delimiter, labels=labels))
    if not blocks:
        raise EmptyDatasetError(f"{path}: no data rows")
    X = np.vstack([b[0] for b in blocks])
    y = np.concatenate([b[1] for b in blocks]) if labels else np.zeros(X.shape[0])
    return Dataset(X, y)


def write_csv(data: Dataset, path, header: bool = True) -> None:
    """Write features and labels with 17 significant digits (exact round trip)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            writer.writerow([f"x{k + 1}" for k in range(data.d)] + ["y"])
        for x, label in zip(data.X, data.y):
            writer.writerow([format(v, ".17g") for v in x] + [str(int(label))])


# -- models -----------------------------------------------------------------

def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def save_model(model: FpcModel) -> bytes:
    d, n = model.d, model.n
    meta = json.dumps(model.meta, sort_keys=True, default=_json_default).encode()
    body = b"".join([
        MAGIC,
        struct.pack("<B", FORMAT_VERSION),
        _HEADER.pack(model.s, d, n, _SCHEMES.index(model.scheme)),
        np.ascontiguousarray(model.scaling.lower, dtype="<f8").tobytes(),
        np.ascontiguousarray(model.scaling.span, dtype="<f8").tobytes(),
        np.ascontiguousarray(model.centers, dtype="<f8").tobytes(),
        np.ascontiguousarray(model.coefficients, dtype="<f8").tobytes(),
        struct.pack("<I", len(meta)),
        meta,
    ])
    return body + hashlib.sha256(body).digest()


def load_model(blob: bytes) -> FpcModel:
    blob = bytes(blob)
    if blob[:4] != MAGIC:
        raise ModelFormatError("not an FPC model file (bad magic bytes)")
    if len(blob) < 5:
        raise ChecksumError("model file is truncated")
    version = blob[4]
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(f"unsupported model format version {version} "
                                      f"(this build reads version {FORMAT_VERSION})")
    if len(blob) < 5 + _DIGEST:
        raise ChecksumError("model file is truncated")
    body, digest = blob[:-_DIGEST], blob[-_DIGEST:]
    if hashlib.sha256(body).digest() != digest:
        raise ChecksumError("model file checksum mismatch (corrupt or truncated)")
    try:
        pos = 5
        s, d, n, scheme_code = _HEADER.unpack_from(body, pos)
        pos += _HEADER.size

        def take(count):
            nonlocal pos
            arr = np.frombuffer(body, dtype="<f8", count=count, offset=pos).astype(np.float64)
            pos += 8 * count
            return arr

        lower, span = take(d), take(d)
        centers = take(n * d).reshape(n, d)
        coef = take(n)
        (meta_len,) = struct.unpack_from("<I", body, pos)
        pos += 4
        meta = json.loads(body[pos:pos + meta_len].decode())
        if pos + meta_len != len(body):
            raise ModelFormatError("trailing bytes after model metadata")
        scheme = _SCHEMES[scheme_code]
    except (struct.error, ValueError, IndexError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"malformed model file: {exc}") from exc
    return FpcModel(s, centers, coef, MinMaxScaling(lower, span), scheme, meta)


def write_model(model: FpcModel, path) -> None:
    Path(path).write_bytes(save_model(model))


def read_model(path) -> FpcModel:
    return load_model(Path(path).read_bytes())


# -- reports ----------------------------------------------------------------

REPORT_COLUMNS = ["s", "TestAcc", "TrainTime", "TestTime", "sparsity"]


def write_reports_csv(reports, fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        writer.writerow(rep.row() if isinstance(rep, EvalReport) else rep)


def reports_json(reports) -> str:
    return json.dumps([rep.to_dict() for rep in reports], sort_keys=True)
